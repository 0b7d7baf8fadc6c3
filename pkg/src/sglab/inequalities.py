"""Checkers for the maximal-inequality battery.

Every checker evaluates both sides of one inequality with the chosen
engine and emits an :class:`InequalityReport`.  Probabilities are carried
as (point, lower, upper) triples: degenerate for the exact engine,
Hoeffding confidence intervals for Monte Carlo, combined through monotone
interval arithmetic so the Monte Carlo verdict is conservative.

Sign conventions follow each statement verbatim (the Hoffmann-Jorgensen
family uses strict >, the Klass-Nowicki and Ottaviani-Skorohod bounds use
>=); no tolerance is injected into event predicates.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Any, Optional, Sequence

from .errors import HypothesisNotSatisfied, LambdaNotLessThanOne
from .probability import (
    Exact,
    MonteCarlo,
    RearrangementFunction,
    exact_event_probs,
    exact_statistic_laws,
    mc_event_probs,
    _common_instance,
)

INF = float("inf")

#: absolute tolerance for cross-checks between equivalent formulas
CROSS_CHECK_TOL = 1e-12


# ---------------------------------------------------------------------------
# probability triples (point estimate plus conservative bounds)


@dataclass(frozen=True)
class _IV:
    point: float
    lo: float
    hi: float

    @classmethod
    def const(cls, x: float) -> "_IV":
        return cls(x, x, x)

    @property
    def degenerate(self) -> bool:
        return self.lo == self.point == self.hi

    def __add__(self, other: "_IV") -> "_IV":
        return _IV(self.point + other.point, self.lo + other.lo, self.hi + other.hi)

    def __mul__(self, other: "_IV") -> "_IV":
        # nonnegative quantities only; 0 * inf resolves conservatively
        return _IV(
            _mul(self.point, other.point),
            _mul_lo(self.lo, other.lo),
            _mul_hi(self.hi, other.hi),
        )

    def powi(self, k: int) -> "_IV":
        return _IV(self.point**k, self.lo**k, self.hi**k)

    def complement(self) -> "_IV":
        return _IV(1.0 - self.point, max(0.0, 1.0 - self.hi), max(0.0, 1.0 - self.lo))

    def odds(self) -> "_IV":
        """p / (1 - p), monotone increasing in p, +inf at p = 1."""
        return _IV(_odds(self.point), _odds(self.lo), _odds(self.hi))


def _odds(p: float) -> float:
    q = 1.0 - p
    return INF if q <= 0.0 else p / q


def _mul(a, b):
    return a * b


def _mul_lo(a, b):
    if (a == 0.0 and b == INF) or (b == 0.0 and a == INF):
        return 0.0
    return a * b


def _mul_hi(a, b):
    if (a == 0.0 and b == INF) or (b == 0.0 and a == INF):
        return INF
    return a * b


def _iv_min(ivs) -> _IV:
    ivs = list(ivs)
    return _IV(
        min(iv.point for iv in ivs),
        min(iv.lo for iv in ivs),
        min(iv.hi for iv in ivs),
    )


def _iv_max(ivs) -> _IV:
    ivs = list(ivs)
    return _IV(
        max(iv.point for iv in ivs),
        max(iv.lo for iv in ivs),
        max(iv.hi for iv in ivs),
    )


def _event_ivs(dists, events, z0, z1, orientation, engine) -> dict:
    if isinstance(engine, Exact):
        probs = exact_event_probs(dists, events, z0, z1, orientation, engine)
        return {k: _IV.const(v) for k, v in probs.items()}
    if isinstance(engine, MonteCarlo):
        ests = mc_event_probs(dists, events, z0, z1, orientation, engine)
        return {k: _IV(e.p_hat, e.ci_low, e.ci_high) for k, e in ests.items()}
    raise ValueError(f"unknown engine {engine!r}")


def _engine_meta(engine) -> dict:
    if isinstance(engine, Exact):
        return {"type": "exact", "budget": engine.budget}
    if isinstance(engine, MonteCarlo):
        return {"type": "mc", "seed": engine.seed, "samples": engine.samples}
    raise ValueError(f"unknown engine {engine!r}")


# ---------------------------------------------------------------------------
# reports


@dataclass(frozen=True)
class Side:
    value: float
    ci: Optional[tuple] = None


@dataclass(frozen=True)
class InequalityReport:
    name: str
    instance: str
    params: dict
    lhs: Side
    rhs: Side
    slack: float
    verdict: str  # holds | violated | indeterminate
    engine: dict
    runtime_ms: float
    warnings: tuple = ()
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {
            "inequality": self.name,
            "instance": self.instance,
            "params": self.params,
            "engine": self.engine,
            "lhs": {"value": self.lhs.value},
            "rhs": {"value": self.rhs.value},
            "slack": self.slack,
            "verdict": self.verdict,
            "runtime_ms": self.runtime_ms,
        }
        if self.lhs.ci is not None:
            out["lhs"]["ci"] = list(self.lhs.ci)
        if self.rhs.ci is not None:
            out["rhs"]["ci"] = list(self.rhs.ci)
        if self.warnings:
            out["warnings"] = list(self.warnings)
        if self.extra:
            out["extra"] = _jsonable(self.extra)
        return out


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, float) and not math.isfinite(obj):
        return repr(obj)
    return obj


def _finish(name, inst, params, lhs_iv, rhs_iv, engine, t0, warnings=(), extra=None):
    exact = isinstance(engine, Exact)
    if exact:
        verdict = "holds" if lhs_iv.point <= rhs_iv.point else "violated"
        lhs = Side(lhs_iv.point)
        rhs = Side(rhs_iv.point)
    else:
        if lhs_iv.hi <= rhs_iv.lo:
            verdict = "holds"
        elif lhs_iv.lo > rhs_iv.hi:
            verdict = "violated"
        else:
            verdict = "indeterminate"
        lhs = Side(lhs_iv.point, (lhs_iv.lo, lhs_iv.hi))
        rhs = Side(rhs_iv.point, (rhs_iv.lo, rhs_iv.hi))
    slack = rhs_iv.point - lhs_iv.point if rhs_iv.point != INF else INF
    return InequalityReport(
        name=name,
        instance=inst.name,
        params=params,
        lhs=lhs,
        rhs=rhs,
        slack=slack,
        verdict=verdict,
        engine=_engine_meta(engine),
        runtime_ms=(time.perf_counter() - t0) * 1e3,
        warnings=tuple(warnings),
        extra=extra or {},
    )


def _prologue(dists, z0, z1):
    inst = _common_instance(dists)
    inst.validate_fn(z0)
    inst.validate_fn(z1)
    warnings = []
    if not inst.invariance.get("strong-left", False):
        warnings.append("instance is not annotated strongly left-invariant; bound not guaranteed")
    return inst, warnings


def _params(inst, z0, z1, **kw):
    out = {"z0": inst.encode(z0), "z1": inst.encode(z1)}
    out.update(kw)
    return out


# ---------------------------------------------------------------------------
# the Hoffmann-Jorgensen family


@dataclass(frozen=True)
class HJParams:
    """Block sizes n_i, thresholds t_i, increment threshold s, base points."""

    counts: tuple
    thresholds: tuple
    s: float
    z0: Any
    z1: Any
    orientation: str = "left"
    strengthened: bool = False

    def __post_init__(self):
        if len(self.counts) == 0 or len(self.counts) != len(self.thresholds):
            raise ValueError("counts and thresholds must be nonempty and of equal length")
        if any((not isinstance(c, int)) or c < 1 for c in self.counts):
            raise ValueError("counts must be positive integers")
        if any(t < 0 for t in self.thresholds) or self.s < 0:
            raise ValueError("thresholds and s must be nonnegative")

    @property
    def k(self) -> int:
        return len(self.counts)

    @property
    def K(self) -> int:
        return sum(self.counts)


def i0_set(pU: Sequence[float], counts: Sequence[int]) -> set:
    """Indices i (1-based) with P(U <= t_i)^(n_i - delta_i1) <= 1/n_i!.

    The convention 0^0 = 1 routes the P(U <= t_1) = 0, n_1 = 1 case into
    the product branch, so the odds-ratio branch never divides by zero.
    """
    if len(pU) != len(counts):
        raise ValueError("pU and counts lengths differ")
    out = set()
    for i, (p, ni) in enumerate(zip(pU, counts), start=1):
        expo = ni - (1 if i == 1 else 0)
        if p**expo <= 1.0 / math.factorial(ni):
            out.add(i)
    return out


def hj_general(dists, params: HJParams, engine=Exact()) -> InequalityReport:
    """The unified bound: P(U > (2 n_1 - 1) t_1 + 2 sum n_i t_i + (K-1) s)
    against the I0-split product plus an increment tail.

    The tail is P(M > s), or with ``strengthened`` the order-statistics
    tail P(Y_(n-K+2) + ... + Y_(n) > (K-1) s).
    """
    t0 = time.perf_counter()
    inst, warnings = _prologue(dists, params.z0, params.z1)
    n = len(dists)
    K = params.K
    if K > n + 1:
        raise ValueError(f"sum of counts {K} exceeds n+1 = {n + 1}")
    counts, ts = params.counts, params.thresholds
    threshold = (2 * counts[0] - 1) * ts[0]
    for ni, ti in zip(counts[1:], ts[1:]):
        threshold += 2 * ni * ti
    threshold += (K - 1) * params.s

    events = {"lhs": lambda st, thr=threshold: st.U > thr}
    for i, ti in enumerate(ts):
        events[f"ugt{i}"] = lambda st, t=ti: st.U > t
    s = params.s
    if params.strengthened:
        events["tail"] = lambda st: st.tail_sum(K) > (K - 1) * s
    else:
        events["tail"] = lambda st: st.M[-1] > s
    ivs = _event_ivs(dists, events, params.z0, params.z1, params.orientation, engine)

    ugt = [ivs[f"ugt{i}"] for i in range(len(ts))]
    ule = [iv.complement() for iv in ugt]
    i0 = i0_set([iv.point for iv in ule], counts)

    guard = any(ule[i - 1].point == 0.0 for i in range(1, params.k + 1) if i not in i0)
    if guard:
        rhs = _IV.const(INF)  # vacuous: unreachable when I0 uses 0^0 = 1
    else:
        acc = _IV.const(1.0)
        if 1 not in i0:
            acc = acc * ule[0]
        for i in range(1, params.k + 1):
            ni = counts[i - 1]
            if i in i0:
                acc = acc * ugt[i - 1].powi(ni)
            else:
                acc = acc * _IV.const(1.0 / math.factorial(ni)) * ugt[i - 1].odds().powi(ni)
        rhs = acc + ivs["tail"]

    extra = {
        "i0": sorted(i0),
        "threshold": threshold,
        "tail": "strengthened" if params.strengthened else "basic",
    }
    p = _params(
        inst,
        params.z0,
        params.z1,
        counts=list(counts),
        thresholds=list(ts),
        s=params.s,
        strengthened=params.strengthened,
        orientation=params.orientation,
    )
    return _finish("hj-general", inst, p, ivs["lhs"], rhs, engine, t0, warnings, extra)


def hj_lt(dists, t, s, z0, z1, engine=Exact(), orientation="left") -> InequalityReport:
    """P(U > 3t + s) <= P(U > t)^2 + P(M > s), plus an equality record
    against the general bound at k = 2, n = (1, 1), t = (t, t)."""
    t0 = time.perf_counter()
    if t <= 0 or s <= 0:
        raise ValueError("t and s must be > 0")
    inst, warnings = _prologue(dists, z0, z1)
    events = {
        "lhs": lambda st: st.U > 3 * t + s,
        "ugt": lambda st: st.U > t,
        "tail": lambda st: st.M[-1] > s,
    }
    ivs = _event_ivs(dists, events, z0, z1, orientation, engine)
    rhs = ivs["ugt"].powi(2) + ivs["tail"]

    general = hj_general(
        dists, HJParams((1, 1), (t, t), s, z0, z1, orientation), engine
    )
    extra = {
        "general_lhs": general.lhs.value,
        "general_rhs": general.rhs.value,
        "specialization_equal": (
            abs(general.lhs.value - ivs["lhs"].point) <= CROSS_CHECK_TOL
            and abs(general.rhs.value - rhs.point) <= CROSS_CHECK_TOL
        ),
    }
    p = _params(inst, z0, z1, t=t, s=s, orientation=orientation)
    return _finish("hj-lt", inst, p, ivs["lhs"], rhs, engine, t0, warnings, extra)


def hj_hm(dists, K, t, s, z0, z1, engine=Exact(), orientation="left") -> InequalityReport:
    """P(U > 2Kt + (K-1)s) <= (1/K!) (P(U > t)/P(U <= t))^K + P(M > s).

    The general bound at k = 1, n_1 = K is recorded alongside; it is
    strictly sharper (larger event on the left, smaller bound on the
    right), so the record asserts domination, not equality.
    """
    t0 = time.perf_counter()
    if not isinstance(K, int) or K < 1:
        raise ValueError("K must be a positive integer")
    inst, warnings = _prologue(dists, z0, z1)
    events = {
        "lhs": lambda st: st.U > 2 * K * t + (K - 1) * s,
        "ugt": lambda st: st.U > t,
        "tail": lambda st: st.M[-1] > s,
    }
    ivs = _event_ivs(dists, events, z0, z1, orientation, engine)
    if ivs["ugt"].complement().point == 0.0:
        rhs = _IV.const(INF)  # vacuous bound
    else:
        rhs = _IV.const(1.0 / math.factorial(K)) * ivs["ugt"].odds().powi(K) + ivs["tail"]

    general = hj_general(dists, HJParams((K,), (t,), s, z0, z1, orientation), engine)
    extra = {
        "general_lhs": general.lhs.value,
        "general_rhs": general.rhs.value,
        # the general form dominates: larger lhs, no larger rhs
        "specialization_dominates": (
            general.lhs.value >= ivs["lhs"].point - CROSS_CHECK_TOL
            and general.rhs.value <= rhs.point + CROSS_CHECK_TOL
        ),
    }
    p = _params(inst, z0, z1, K=K, t=t, s=s, orientation=orientation)
    return _finish("hj-hm", inst, p, ivs["lhs"], rhs, engine, t0, warnings, extra)


# ---------------------------------------------------------------------------
# Johnson-Schechtman and Klass-Nowicki (real-valued variables)


def _require_real_line(dists):
    inst = _common_instance(dists)
    if inst.name != "euclidean1":
        raise HypothesisNotSatisfied(f"{inst.name}: this bound is stated for real-valued variables")
    return inst


def js_bound(dists, k, t, engine=Exact()) -> InequalityReport:
    """For independent nonnegative reals (z0 = z1 = 0):
    P(U > (2k-1) t) <= P(M > t) + P(U > t)^k."""
    t0 = time.perf_counter()
    if not isinstance(k, int) or k < 1:
        raise ValueError("k must be a positive integer")
    if t <= 0:
        raise ValueError("t must be > 0")
    inst = _require_real_line(dists)
    for d in dists:
        if any(x < 0 for x in d.support):
            raise ValueError("support must be nonnegative")
    z = 0.0
    events = {
        "lhs": lambda st: st.U > (2 * k - 1) * t,
        "ugt": lambda st: st.U > t,
        "ugt_half": lambda st: st.U > t / 2,
        "tail": lambda st: st.M[-1] > t,
    }
    ivs = _event_ivs(dists, events, z, z, "left", engine)
    rhs = ivs["tail"] + ivs["ugt"].powi(k)
    weaker = ivs["tail"] + ivs["ugt_half"].powi(k)
    extra = {
        "weaker_rhs": weaker.point,  # the half-threshold form implied by the general bound
        "weaker_dominates": weaker.point >= rhs.point - CROSS_CHECK_TOL,
    }
    p = _params(inst, z, z, k=k, t=t)
    return _finish("js", inst, p, ivs["lhs"], rhs, engine, t0, (), extra)


def _symmetric(dist) -> bool:
    table = {}
    for v, w in zip(dist.support, dist.weights):
        table[float(v)] = table.get(float(v), 0.0) + w
    return all(table.get(-v, 0.0) == w for v, w in table.items())


def kn_bounds(dists, k, engine=Exact()) -> list:
    """Order-statistics-shifted tail bounds for real variables, z0 = z1 = 0.

    Emits the end-point bound when all support is nonnegative and the
    running-maximum bound when every law is symmetric about 0; raises if
    neither hypothesis applies or if lambda = P(U >= 1) is not < 1.
    """
    t0 = time.perf_counter()
    if not isinstance(k, int) or k < 1:
        raise ValueError("k must be a positive integer")
    inst = _require_real_line(dists)
    nonneg = all(all(x >= 0 for x in d.support) for d in dists)
    symmetric = all(_symmetric(d) for d in dists)
    if not (nonneg or symmetric):
        raise HypothesisNotSatisfied(
            "support is neither nonnegative nor symmetric about 0"
        )
    z = 0.0
    n = len(dists)
    events = {"lam": lambda st: st.U >= 1.0}
    if nonneg:
        events["kn1"] = lambda st: st.end_dist >= k + st.tail_sum(k)
    if symmetric:
        events["kn2"] = lambda st: st.U >= k + st.tail_sum(k)
    ivs = _event_ivs(dists, events, z, z, "left", engine)
    lam = ivs["lam"]
    if lam.point >= 1.0:
        raise LambdaNotLessThanOne(f"lambda = P(U_n >= 1) = {lam.point!r} is not < 1")

    def base(lam_val):
        return n * (1.0 - (1.0 - lam_val) ** (1.0 / n))

    core = _IV(base(lam.point), base(lam.lo), base(min(lam.hi, 1.0)))
    reports = []
    if nonneg:
        rhs = _IV.const(1.0 / math.factorial(k)) * core.powi(k)
        p = _params(inst, z, z, k=k, n=n, lam=lam.point, hypothesis="nonnegative")
        reports.append(_finish("kn-nonneg", inst, p, ivs["kn1"], rhs, engine, t0, (), {}))
    if symmetric:
        rhs = _IV.const(2.0 ** (k - 1) / math.factorial(k)) * core.powi(k)
        p = _params(inst, z, z, k=k, n=n, lam=lam.point, hypothesis="symmetric")
        reports.append(_finish("kn-symmetric", inst, p, ivs["kn2"], rhs, engine, t0, (), {}))
    return reports


@dataclass(frozen=True)
class KnScalarResult:
    bound_holds: bool  # (1/k!)[n(1-(1-lam)^(1/n))]^k <= (1/k!)(lam/(1-lam))^k
    doubled_exceeds: bool  # 2^(1-1/k) n (1-lam)(1-(1-lam)^(1/n)) > lam
    lhs: float
    rhs: float
    doubled_value: float


def kn_scalar_lemma(lam: float, n: int, k: int) -> KnScalarResult:
    """Scalar comparison of the Klass-Nowicki factor with the odds factor,
    and the doubled variant that exceeds it for small lambda."""
    if lam < 0:
        raise ValueError("lambda must be >= 0")
    if lam >= 1:
        raise LambdaNotLessThanOne(f"lambda = {lam!r} is not < 1")
    if n < 1 or k < 1:
        raise ValueError("n and k must be >= 1")
    root = (1.0 - lam) ** (1.0 / n)
    lhs = (n * (1.0 - root)) ** k / math.factorial(k)
    rhs = (lam / (1.0 - lam)) ** k / math.factorial(k)
    doubled = 2.0 ** (1.0 - 1.0 / k) * n * (1.0 - lam) * (1.0 - root)
    return KnScalarResult(lhs <= rhs, doubled > lam, lhs, rhs, doubled)


# ---------------------------------------------------------------------------
# Ottaviani-Skorohod, Mogul'skii, Levy-Ottaviani


def ottaviani_skorohod(
    dists, alpha, beta, z0, z1, orientation="left", engine=Exact()
) -> InequalityReport:
    """P(max_k d(z1, z0 S_k) >= a+b) * min_k P(d(S_k, S_n) <= b)
    <= P(d(z1, z0 S_n) >= a)."""
    t0 = time.perf_counter()
    if alpha <= 0 or beta <= 0:
        raise ValueError("alpha and beta must be > 0")
    inst, warnings = _prologue(dists, z0, z1)
    n = len(dists)
    events = {
        "max": lambda st: st.U >= alpha + beta,
        "end": lambda st: st.end_dist >= alpha,
    }
    for kk in range(n):
        events[f"close{kk}"] = lambda st, kk=kk: st.to_end[kk] <= beta
    ivs = _event_ivs(dists, events, z0, z1, orientation, engine)
    stick = _iv_min(ivs[f"close{kk}"] for kk in range(n))  # the k = n factor is 1
    lhs = ivs["max"] * stick
    p = _params(inst, z0, z1, alpha=alpha, beta=beta, orientation=orientation)
    extra = {"min_close": stick.point}
    return _finish("os", inst, p, lhs, ivs["end"], engine, t0, warnings, extra)


def mogulskii(
    dists, m, a, b, variant, z0, z1, orientation="left", engine=Exact()
) -> InequalityReport:
    """Windowed minimum/maximum inequalities over k in [m, n].

    min variant:  P(min_k d <= a) * min_k P(d(S_k,S_n) <= b) <= P(d_end <= a+b)
    max variant:  P(max_k d >= a) * min_k P(d(S_k,S_n) <= b) <= P(d_end >= a-b)
    with P(d_end >= a-b) = 1 when a < b.
    """
    t0 = time.perf_counter()
    n = len(dists)
    if not 1 <= m <= n:
        raise ValueError(f"m must lie in [1, {n}]")
    if a < 0 or b < 0:
        raise ValueError("a and b must be >= 0")
    if variant not in ("min", "max"):
        raise ValueError("variant must be 'min' or 'max'")
    inst, warnings = _prologue(dists, z0, z1)
    window = range(m - 1, n)
    if variant == "min":
        events = {
            "main": lambda st: min(st.path_dists[m - 1:]) <= a,
            "end": lambda st: st.end_dist <= a + b,
        }
    else:
        events = {
            "main": lambda st: max(st.path_dists[m - 1:]) >= a,
            "end": lambda st: st.end_dist >= a - b,
        }
    for kk in window:
        events[f"close{kk}"] = lambda st, kk=kk: st.to_end[kk] <= b
    ivs = _event_ivs(dists, events, z0, z1, orientation, engine)
    stick = _iv_min(ivs[f"close{kk}"] for kk in window)
    lhs = ivs["main"] * stick
    rhs = _IV.const(1.0) if (variant == "max" and a < b) else ivs["end"]
    p = _params(inst, z0, z1, m=m, a=a, b=b, variant=variant, orientation=orientation)
    extra = {"min_close": stick.point, "rhs_threshold": (a + b) if variant == "min" else (a - b)}
    return _finish(f"mogulskii-{variant}", inst, p, lhs, rhs, engine, t0, warnings, extra)


def levy_ottaviani(
    dists, a_list, z0, z1, orientation="left", engine=Exact()
) -> InequalityReport:
    """P(U > a_1 + ... + a_l) <= sum_{i>=2} p_{a_i} + p'_l, where
    p_a = max_k P(d(z1, z0 S_k) > a) and p'_l is p_{a_1} for odd l, else
    max_k P(d(S_k, S_n) > a_1).  Stated only for l >= 2."""
    t0 = time.perf_counter()
    a_list = list(a_list)
    l = len(a_list)
    if l < 2:
        raise ValueError("need at least two summands (the bound is false for l = 1)")
    if any(a < 0 for a in a_list):
        raise ValueError("thresholds must be >= 0")
    inst, warnings = _prologue(dists, z0, z1)
    n = len(dists)
    total = sum(sorted(a_list))
    events = {"lhs": lambda st: st.U > total}
    for i, ai in enumerate(a_list):
        for kk in range(n):
            events[f"p{i}_{kk}"] = lambda st, ai=ai, kk=kk: st.path_dists[kk] > ai
    if l % 2 == 0:
        for kk in range(n):
            events[f"q{kk}"] = lambda st, kk=kk: st.to_end[kk] > a_list[0]
    ivs = _event_ivs(dists, events, z0, z1, orientation, engine)

    def p_at(i):
        return _iv_max(ivs[f"p{i}_{kk}"] for kk in range(n))

    rhs = _IV.const(0.0)
    for i in range(1, l):
        rhs = rhs + p_at(i)
    if l % 2 == 1:
        p_prime = p_at(0)
    else:
        p_prime = _iv_max(ivs[f"q{kk}"] for kk in range(n))
    rhs = rhs + p_prime
    p = _params(inst, z0, z1, a=list(a_list), orientation=orientation)
    extra = {"p_prime": p_prime.point, "parity": "odd" if l % 2 else "even"}
    return _finish("levy-ottaviani", inst, p, ivs["lhs"], rhs, engine, t0, warnings, extra)


# ---------------------------------------------------------------------------
# moment bound and rearrangement report


def moment_bound(dists, p, z0, z1, orientation="left", engine=Exact()) -> InequalityReport:
    """E[U^p] <= 2^(1+2p) (E[M^p] + U*(2^(-1-2p))^p), exact engine only
    (the rearrangement needs the full law of U)."""
    t0 = time.perf_counter()
    if p <= 0:
        raise ValueError("p must be > 0")
    if not isinstance(engine, Exact):
        raise ValueError("moment_bound requires the exact engine")
    inst, warnings = _prologue(dists, z0, z1)
    laws = exact_statistic_laws(
        dists, {"U": lambda st: st.U, "M": lambda st: st.M[-1]}, z0, z1, orientation, engine
    )
    e_up = sum(sorted(w * v**p for v, w in laws["U"]))
    e_mp = sum(sorted(w * v**p for v, w in laws["M"]))
    u_star = RearrangementFunction.from_law(laws["U"])(2.0 ** (-1 - 2 * p))
    rhs = 2.0 ** (1 + 2 * p) * (e_mp + u_star**p)
    pp = _params(inst, z0, z1, p=p, orientation=orientation)
    extra = {"e_moment_increments": e_mp, "u_star": u_star}
    return _finish(
        "moment", inst, pp, _IV.const(e_up), _IV.const(rhs), engine, t0, warnings, extra
    )


@dataclass(frozen=True)
class RearrangementRatioReport:
    """Report-only quantities for the log-ratio rearrangement bound; the
    universal constant has no stated value, so nothing is asserted."""

    u_star_t: float
    u_star_s: float
    m_star_half_t: float
    c1_min: float
    params: dict


def rearrangement_ratio(dists, t, s, z0, z1, engine=Exact(), orientation="left"):
    """U*(t), U*(s), M*(t/2) and the minimal constant making
    U*(t) <= c * log(1/t) / max{log(1/s), log log(4/t)} * (U*(s) + M*(t/2))
    hold for this input."""
    if not 0 <= t <= s <= 0.5:
        raise ValueError("need 0 <= t <= s <= 1/2")
    if not isinstance(engine, Exact):
        raise ValueError("rearrangement_ratio requires the exact engine")
    inst, _ = _prologue(dists, z0, z1)
    laws = exact_statistic_laws(
        dists, {"U": lambda st: st.U, "M": lambda st: st.M[-1]}, z0, z1, orientation, engine
    )
    u_fn = RearrangementFunction.from_law(laws["U"])
    m_fn = RearrangementFunction.from_law(laws["M"])
    u_t, u_s, m_half = u_fn(t), u_fn(s), m_fn(t / 2.0)
    denom_sum = u_s + m_half
    if u_t == 0.0:
        c1 = 0.0
    elif denom_sum == 0.0:
        c1 = INF
    elif t == 0.0:
        c1 = 0.0  # log(1/t) dominates log log(4/t) in the limit
    else:
        factor = max(math.log(1.0 / s), math.log(math.log(4.0 / t)))
        c1 = u_t * factor / (math.log(1.0 / t) * denom_sum)
    params = _params(inst, z0, z1, t=t, s=s, orientation=orientation)
    return RearrangementRatioReport(u_t, u_s, m_half, c1, params)


# ---------------------------------------------------------------------------
# violation search


def stress_search(
    instance,
    inequality: str,
    seed: int = 0,
    trials: int = 200,
    config_generator=None,
    budget: int = Exact().budget,
) -> list:
    """Search seeded random configurations for exact-engine violations of
    one named inequality, shrinking any hit to minimal support sizes.

    On strongly left-invariant instances this must come back empty; on
    others (e.g. the counterexample semigroup) the output is exploratory.
    """
    from . import battery  # late import; battery builds on this module

    if config_generator is None:
        config_generator = battery.default_config_generator(inequality)
    violations = []
    for trial in range(trials):
        cfg = config_generator(instance, seed, trial)
        reports = battery.run_config(inequality, cfg, budget=budget)
        bad = [r for r in reports if r.verdict == "violated"]
        if bad:
            shrunk = battery.shrink_config(inequality, cfg, budget=budget)
            reports = battery.run_config(inequality, shrunk, budget=budget)
            violations.extend(r for r in reports if r.verdict == "violated")
    return violations
