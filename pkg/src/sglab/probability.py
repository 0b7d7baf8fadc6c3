"""Finitely supported laws, walk functionals, and the two engines.

The exact engine enumerates the product space and accumulates outcome
probabilities in sorted-magnitude order, so results are independent of
enumeration order and bit-reproducible.  The Monte Carlo engine draws
fixed-size chunks whose generators are derived from (master seed, chunk
index), so estimates are identical for any worker partitioning.
"""

from __future__ import annotations

import itertools
import math
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Iterable, Mapping, Optional, Sequence

import numpy as np

from .algebra import MetricMagmaInstance
from .errors import BudgetExceeded
from .seeding import spawn_rng

#: Monte Carlo chunk size (results do not depend on it for a fixed seed,
#: provided it stays fixed; changing it changes the stream layout)
MC_CHUNK = 8192
#: two-sided failure probability of the Hoeffding confidence interval
MC_DELTA = 0.01


# ---------------------------------------------------------------------------
# laws


@dataclass(frozen=True)
class FiniteDistribution:
    """A finitely supported law on one instance's elements."""

    instance: MetricMagmaInstance
    support: tuple
    weights: tuple

    def __post_init__(self):
        if len(self.support) == 0:
            raise ValueError("empty support")
        if len(self.support) != len(self.weights):
            raise ValueError("support and weights lengths differ")
        for el in self.support:
            self.instance.validate_fn(el)
        if any(w <= 0 for w in self.weights):
            raise ValueError("weights must be strictly positive")
        total = sum(sorted(self.weights))
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"weights sum to {total!r}, not 1")
        codes = [self.instance.encode(el) for el in self.support]
        if len(set(codes)) != len(codes):
            raise ValueError("support elements are not pairwise distinct")

    @classmethod
    def from_pairs(cls, instance, pairs):
        support, weights = zip(*pairs)
        return cls(instance, tuple(support), tuple(float(w) for w in weights))

    @classmethod
    def uniform(cls, instance, elements):
        elements = tuple(elements)
        w = 1.0 / len(elements)
        return cls(instance, elements, (w,) * len(elements))

    def cumulative(self) -> np.ndarray:
        return np.cumsum(self.weights)


# ---------------------------------------------------------------------------
# walk functionals


class PathStatistics:
    """Per-outcome functionals of one tuple of elements and base points.

    ``S`` are the partial products, ``path_dists[j] = d(z1, z0 S_j)``,
    ``U = max(path_dists)``, ``Y[j] = d(z0, z0 x_j)``, ``M`` the running
    maxima of ``Y``, ``Yord`` the order statistics, and ``to_end[k] =
    d(S_k, S_n)``.  Under ``orientation="right"`` products fold as
    ``x_j ... x_1`` and base points multiply from the right.
    """

    __slots__ = ("instance", "xs", "z0", "z1", "orientation", "S", "path_dists",
                 "U", "_y", "_m", "_yord", "_to_end")

    def __init__(self, instance, xs, z0, z1, orientation="left"):
        if not xs:
            raise ValueError("xs must be nonempty")
        mul = instance.compose_fn
        d = instance.dist_fn
        S = []
        acc = xs[0]
        if orientation == "left":
            S.append(acc)
            for x in xs[1:]:
                acc = mul(acc, x)
                S.append(acc)
            path_dists = [d(z1, mul(z0, s)) for s in S]
        elif orientation == "right":
            S.append(acc)
            for x in xs[1:]:
                acc = mul(x, acc)
                S.append(acc)
            path_dists = [d(z1, mul(s, z0)) for s in S]
        else:
            raise ValueError(f"unknown orientation {orientation!r}")
        self.instance = instance
        self.xs = xs
        self.z0 = z0
        self.z1 = z1
        self.orientation = orientation
        self.S = S
        self.path_dists = path_dists
        self.U = max(path_dists)
        self._y = None
        self._m = None
        self._yord = None
        self._to_end = None

    @property
    def Y(self):
        v = self._y
        if v is None:
            mul = self.instance.compose_fn
            d = self.instance.dist_fn
            z0 = self.z0
            if self.orientation == "left":
                v = [d(z0, mul(z0, x)) for x in self.xs]
            else:
                v = [d(z0, mul(x, z0)) for x in self.xs]
            self._y = v
        return v

    @property
    def M(self):
        v = self._m
        if v is None:
            v = []
            m = 0.0
            for y in self.Y:
                if y > m:
                    m = y
                v.append(m)
            self._m = v
        return v

    @property
    def Yord(self):
        v = self._yord
        if v is None:
            v = sorted(self.Y)
            self._yord = v
        return v

    @property
    def to_end(self):
        v = self._to_end
        if v is None:
            d = self.instance.dist_fn
            last = self.S[-1]
            v = [d(s, last) for s in self.S]
            self._to_end = v
        return v

    @property
    def end_dist(self):
        return self.path_dists[-1]

    def tail_sum(self, K: int) -> float:
        """Sum of the K-1 largest increment sizes Y_(n-K+2) + ... + Y_(n)."""
        if K <= 1:
            return 0.0
        return sum(self.Yord[len(self.Y) - K + 1:])


def partial_products(inst, xs, orientation="left") -> list:
    """Partial products S_1..S_n in one fold."""
    xs = list(xs)
    if not xs:
        raise ValueError("xs must be nonempty")
    for x in xs:
        inst.validate_fn(x)
    out = [xs[0]]
    acc = xs[0]
    mul = inst.compose_fn
    if orientation == "left":
        for x in xs[1:]:
            acc = mul(acc, x)
            out.append(acc)
    elif orientation == "right":
        for x in xs[1:]:
            acc = mul(x, acc)
            out.append(acc)
    else:
        raise ValueError(f"unknown orientation {orientation!r}")
    return out


def path_statistics(inst, xs, z0, z1, orientation="left") -> PathStatistics:
    """All walk functionals for one outcome."""
    xs = tuple(xs)
    for x in xs:
        inst.validate_fn(x)
    inst.validate_fn(z0)
    inst.validate_fn(z1)
    return PathStatistics(inst, xs, z0, z1, orientation)


# ---------------------------------------------------------------------------
# engines


@dataclass(frozen=True)
class Exact:
    budget: int = 1_000_000


@dataclass(frozen=True)
class MonteCarlo:
    seed: int = 0
    samples: int = 100_000


@dataclass(frozen=True)
class MCEstimate:
    p_hat: float
    ci_low: float
    ci_high: float
    samples: int
    seed: int
    delta: float = MC_DELTA


def hoeffding_halfwidth(samples: int, delta: float = MC_DELTA) -> float:
    """Distribution-free two-sided CI halfwidth sqrt(ln(2/delta) / (2 N))."""
    return math.sqrt(math.log(2.0 / delta) / (2.0 * samples))


def _common_instance(dists) -> MetricMagmaInstance:
    if not dists:
        raise ValueError("need at least one distribution")
    inst = dists[0].instance
    for d in dists:
        if d.instance is not inst and d.instance.name != inst.name:
            raise ValueError("all distributions must live on the same instance")
    return inst


def iter_exact_outcomes(dists, z0, z1, orientation="left", budget=Exact().budget):
    """Yield (probability, PathStatistics) over the full product space."""
    inst = _common_instance(dists)
    total = 1
    for d in dists:
        total *= len(d.support)
    if total > budget:
        raise BudgetExceeded(f"{total} outcomes exceed the engine budget {budget}")
    inst.validate_fn(z0)
    inst.validate_fn(z1)
    sups = [d.support for d in dists]
    wts = [d.weights for d in dists]
    for idx in itertools.product(*(range(len(s)) for s in sups)):
        p = 1.0
        for j, i in enumerate(idx):
            p *= wts[j][i]
        xs = tuple(sups[j][i] for j, i in enumerate(idx))
        yield p, PathStatistics(inst, xs, z0, z1, orientation)


def exact_event_probs(
    dists,
    events: Mapping[str, Callable[[PathStatistics], bool]],
    z0,
    z1,
    orientation="left",
    engine: Exact = Exact(),
) -> dict:
    """Exact probability of several path events in one enumeration pass."""
    buckets = {name: [] for name in events}
    preds = list(events.items())
    for p, st in iter_exact_outcomes(dists, z0, z1, orientation, engine.budget):
        for name, pred in preds:
            if pred(st):
                buckets[name].append(p)
    return {name: sum(sorted(parts)) for name, parts in buckets.items()}


def exact_event_prob(
    dists, predicate, z0, z1, orientation="left", engine: Exact = Exact(), rational=False
):
    """Exact probability of one path event (Fraction if ``rational``)."""
    if not rational:
        return exact_event_probs(dists, {"p": predicate}, z0, z1, orientation, engine)["p"]
    total = Fraction(0)
    fr_wts = [tuple(Fraction(w) for w in d.weights) for d in dists]
    inst = _common_instance(dists)
    sups = [d.support for d in dists]
    count = 1
    for s in sups:
        count *= len(s)
    if count > engine.budget:
        raise BudgetExceeded(f"{count} outcomes exceed the engine budget {engine.budget}")
    for idx in itertools.product(*(range(len(s)) for s in sups)):
        xs = tuple(sups[j][i] for j, i in enumerate(idx))
        st = PathStatistics(inst, xs, z0, z1, orientation)
        if predicate(st):
            p = Fraction(1)
            for j, i in enumerate(idx):
                p *= fr_wts[j][i]
            total += p
    return total


def exact_statistic_laws(
    dists,
    stats: Mapping[str, Callable[[PathStatistics], float]],
    z0,
    z1,
    orientation="left",
    engine: Exact = Exact(),
) -> dict:
    """Exact laws of several real functionals, as sorted (value, prob) lists."""
    acc = {name: {} for name in stats}
    fns = list(stats.items())
    for p, st in iter_exact_outcomes(dists, z0, z1, orientation, engine.budget):
        for name, fn in fns:
            acc[name].setdefault(fn(st), []).append(p)
    return {
        name: sorted((v, sum(sorted(parts))) for v, parts in buckets.items())
        for name, buckets in acc.items()
    }


def _mc_index_chunks(dists, engine: MonteCarlo):
    """Yield outcome-index arrays per chunk, derived from (seed, chunk)."""
    n = len(dists)
    cums = [d.cumulative() for d in dists]
    remaining = engine.samples
    chunk = 0
    while remaining > 0:
        rows = min(MC_CHUNK, remaining)
        rng = spawn_rng(engine.seed, chunk)
        u = rng.random((rows, n))
        idx = np.empty((rows, n), dtype=np.intp)
        for j in range(n):
            idx[:, j] = np.searchsorted(cums[j], u[:, j], side="right")
            np.clip(idx[:, j], 0, len(cums[j]) - 1, out=idx[:, j])
        yield idx
        remaining -= rows
        chunk += 1


def mc_event_probs(
    dists,
    events: Mapping[str, Callable[[PathStatistics], bool]],
    z0,
    z1,
    orientation="left",
    engine: MonteCarlo = MonteCarlo(),
) -> dict:
    """Hit-fraction estimates with Hoeffding CIs, one sampling pass."""
    if engine.samples < 1:
        raise ValueError("samples must be >= 1")
    inst = _common_instance(dists)
    inst.validate_fn(z0)
    inst.validate_fn(z1)
    sups = [d.support for d in dists]
    names = list(events)
    preds = [events[name] for name in names]
    hits = [0] * len(names)
    enum_preds = list(enumerate(preds))
    for idx in _mc_index_chunks(dists, engine):
        for row in idx.tolist():
            xs = tuple(sups[j][i] for j, i in enumerate(row))
            st = PathStatistics(inst, xs, z0, z1, orientation)
            for e, pred in enum_preds:
                if pred(st):
                    hits[e] += 1
    h = hoeffding_halfwidth(engine.samples)
    out = {}
    for name, count in zip(names, hits):
        p = count / engine.samples
        out[name] = MCEstimate(
            p_hat=p,
            ci_low=max(0.0, p - h),
            ci_high=min(1.0, p + h),
            samples=engine.samples,
            seed=engine.seed,
        )
    return out


def mc_event_prob(dists, predicate, z0, z1, orientation="left", engine=MonteCarlo()):
    return mc_event_probs(dists, {"p": predicate}, z0, z1, orientation, engine)["p"]


# ---------------------------------------------------------------------------
# decreasing rearrangements and the two analytic lemmas


def _merge_law(law):
    """Merge duplicate values of a (value, prob) list; drop nothing."""
    buckets = {}
    for v, p in law:
        buckets.setdefault(float(v), []).append(p)
    return sorted((v, sum(sorted(parts))) for v, parts in buckets.items())


@dataclass(frozen=True)
class RearrangementFunction:
    """Right-continuous decreasing rearrangement of a real functional,
    as a step function of t on [0, 1)."""

    breakpoints: tuple  # ascending, breakpoints[0] == 0.0
    values: tuple  # values[i] on [breakpoints[i], breakpoints[i+1])

    @classmethod
    def from_law(cls, law) -> "RearrangementFunction":
        merged = _merge_law(law)
        pos = [(v, p) for v, p in merged if v > 0.0]
        if not pos:
            return cls((0.0,), (0.0,))
        # tail_ge[i] = P(Z >= v_i) for ascending positive atoms v_i
        values_asc = [v for v, _ in pos]
        tail_ge = []
        running = 0.0
        for _, p in reversed(pos):
            running += p
            tail_ge.append(running)
        tail_ge.reverse()
        breakpoints = [0.0]
        values = [values_asc[-1]]
        for i in range(len(pos) - 1, -1, -1):
            t = tail_ge[i]
            if t >= 1.0:
                continue
            breakpoints.append(t)
            values.append(values_asc[i - 1] if i > 0 else 0.0)
        return cls(tuple(breakpoints), tuple(values))

    def __call__(self, t: float) -> float:
        if not 0.0 <= t < 1.0:
            raise ValueError(f"t must lie in [0, 1): {t!r}")
        return self.values[bisect_right(self.breakpoints, t) - 1]


def decreasing_rearrangement(law, t: float) -> float:
    """X*(t) = sup{y >= 0 : P(Z > y) > t}, with sup of the empty set = 0."""
    return RearrangementFunction.from_law(law)(t)


@dataclass(frozen=True)
class TailMomentResult:
    lhs: float  # E[Z^alpha]
    rhs: float  # alpha * integral of t^(alpha-1) P(Z > t) dt, in closed form
    diff: float


def tail_moment_identity(law, alpha: float) -> TailMomentResult:
    """E[Z^alpha] against the layered-tail integral, both in closed form."""
    if alpha <= 0:
        raise ValueError("alpha must be > 0")
    merged = _merge_law(law)
    if merged and merged[0][0] < 0:
        raise ValueError("law must be supported on [0, inf)")
    lhs = sum(sorted(p * v**alpha for v, p in merged))
    # P(Z > t) is constant between consecutive atoms, so the integral is a
    # finite sum of tail levels times increments of t^alpha
    rhs_terms = []
    values = [v for v, _ in merged]
    probs = [p for _, p in merged]
    tail = sum(sorted(probs))  # P(Z > t) on [0, v_0), up to rounding = 1
    prev = 0.0
    for v, p in zip(values, probs):
        if v > prev:
            rhs_terms.append(tail * (v**alpha - prev**alpha))
        prev = v
        tail -= p
    rhs = sum(sorted(rhs_terms))
    return TailMomentResult(lhs, rhs, lhs - rhs)


@dataclass(frozen=True)
class PigeonholeResult:
    holds: bool
    lhs: float  # a^p
    rhs: float  # (sum w_j)^p * sum a_j^p


def pigeonhole_power_check(a: float, terms, p: float) -> PigeonholeResult:
    """Check a^p <= (sum w_j)^p * sum a_j^p given 0 <= a <= sum w_j a_j."""
    if p <= 0:
        raise ValueError("p must be > 0")
    terms = list(terms)
    if a < 0 or any(w < 0 or aj < 0 for w, aj in terms):
        raise ValueError("a, weights and terms must be nonnegative")
    bound = sum(sorted(w * aj for w, aj in terms))
    if a > bound:
        raise ValueError(f"precondition fails: a = {a!r} > sum w_j a_j = {bound!r}")
    lhs = a**p
    rhs = sum(sorted(w for w, _ in terms)) ** p * sum(sorted(aj**p for _, aj in terms))
    return PigeonholeResult(lhs <= rhs, lhs, rhs)


# ---------------------------------------------------------------------------
# convergence diagnostic


@dataclass(frozen=True)
class LevyRow:
    n: int
    eps: float
    tail_end: float  # P(d(S_n, S_N) > eps)
    tail_window: float  # P(max_{n <= k <= N} d(S_k, S_N) > eps)


def levy_diagnostic(
    dists: Sequence[FiniteDistribution],
    horizon: int,
    eps_grid: Iterable[float],
    z0,
    z1,
    engine,
    orientation="left",
) -> list[LevyRow]:
    """Non-asserting convergence table for the partial-product sequence.

    For each n < horizon and eps, reports the probability that the walk at
    time n is (resp. stays, over the window [n, N]) farther than eps from
    its value at the horizon N.  Almost-sure convergence is not decidable
    from a finite horizon, so nothing is asserted.
    """
    if horizon < 2:
        raise ValueError("horizon must be >= 2")
    dists = list(dists)[:horizon]
    if len(dists) < horizon:
        raise ValueError(f"need {horizon} laws, got {len(dists)}")
    eps_grid = list(eps_grid)
    inst = _common_instance(dists)
    inst.validate_fn(z0)
    inst.validate_fn(z1)
    keys = [(n, e) for n in range(1, horizon) for e in range(len(eps_grid))]

    def window_maxima(te):
        # suffix maxima of d(S_k, S_N) over k in [n, N]
        wmax = [0.0] * horizon
        m = 0.0
        for k in range(horizon - 1, -1, -1):
            if te[k] > m:
                m = te[k]
            wmax[k] = m
        return wmax

    if isinstance(engine, Exact):
        end_mass = {k: [] for k in keys}
        win_mass = {k: [] for k in keys}
        for p, st in iter_exact_outcomes(dists, z0, z1, orientation, engine.budget):
            te = st.to_end
            wmax = window_maxima(te)
            for n in range(1, horizon):
                for e, eps in enumerate(eps_grid):
                    if te[n - 1] > eps:
                        end_mass[(n, e)].append(p)
                    if wmax[n - 1] > eps:
                        win_mass[(n, e)].append(p)
        return [
            LevyRow(n, eps_grid[e], sum(sorted(end_mass[(n, e)])), sum(sorted(win_mass[(n, e)])))
            for n, e in keys
        ]
    if isinstance(engine, MonteCarlo):
        sups = [d.support for d in dists]
        end_hits = {k: 0 for k in keys}
        win_hits = {k: 0 for k in keys}
        for idx in _mc_index_chunks(dists, engine):
            for row in idx:
                xs = tuple(sups[j][i] for j, i in enumerate(row))
                st = PathStatistics(inst, xs, z0, z1, orientation)
                te = st.to_end
                wmax = window_maxima(te)
                for n in range(1, horizon):
                    for e, eps in enumerate(eps_grid):
                        if te[n - 1] > eps:
                            end_hits[(n, e)] += 1
                        if wmax[n - 1] > eps:
                            win_hits[(n, e)] += 1
        N = engine.samples
        return [
            LevyRow(n, eps_grid[e], end_hits[(n, e)] / N, win_hits[(n, e)] / N)
            for n, e in keys
        ]
    raise ValueError(f"unknown engine {engine!r}")
