"""Concrete metric semigroups/monoids/groups and algebraic verification.

Each instance packages a carrier (plain tuples/scalars), an associative
product, a metric, a seeded sampler and a textual codec.  The checkers in
this module test invariance classes of the metric, scan for idempotents,
and perform the identity-adjoining embedding of an identity-free strongly
left-invariant semigroup into a metric monoid.

Continuous carriers are sampled on a dyadic grid (coordinates are multiples
of 1/8 in a small range), so the semigroup arithmetic itself is exact in
float64 and axiom checks are not polluted by rounding noise; only metric
values (arccosh, fourth roots) are inexact.
"""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass, field, replace
from typing import Any, Callable, Mapping, Optional

from .errors import (
    BudgetExceeded,
    ConstraintViolation,
    IdempotentPresent,
    NotStronglyLeftInvariant,
    UnknownInstance,
)
from .seeding import spawn_rng

Element = Any

INVARIANCE_KINDS = ("left", "right", "bi", "strong-left", "strong-right")

#: absolute tolerance for distance identities on continuous carriers
DEFAULT_CONTINUOUS_TOL = 1e-9
#: absolute tolerance for element-coordinate equality (axiom tests only)
ELEMENT_EQ_TOL = 1e-12
#: hard cap on tuples visited by an exhaustive scan
ENUMERATION_BUDGET = 2_000_000


class _AdjoinedIdentity:
    """Sentinel element: the identity adjoined by :func:`adjoin_identity`."""

    __slots__ = ()

    def __repr__(self):
        return "e"


ADJOINED_IDENTITY = _AdjoinedIdentity()


def _no_validate(el):
    return None


# ---------------------------------------------------------------------------
# scan modes


@dataclass(frozen=True)
class Exhaustive:
    """Scan every tuple from the bounded carrier slice."""

    bound: int = 8


@dataclass(frozen=True)
class Sampled:
    """Scan ``count`` seeded random tuples."""

    count: int = 10_000
    seed: int = 0


# ---------------------------------------------------------------------------
# the instance record


@dataclass(frozen=True)
class MetricMagmaInstance:
    """A named carrier with product, metric, sampler and codec.

    Instances are immutable and safe to share across workers; every field is
    a pure function of its inputs.  ``invariance`` holds the expected
    classification (verified by tests, displayed by the CLI).
    """

    name: str
    codec_prefix: str
    compose_fn: Callable[[Element, Element], Element]
    dist_fn: Callable[[Element, Element], float]
    sample_fn: Callable[[Any], Element]
    encode_coords: Callable[[Element], str]
    decode_coords: Callable[[str], Element]
    validate_fn: Callable[[Element], None] = _no_validate
    identity: Optional[Element] = None
    discrete: bool = False
    complete: bool = True
    invariance: Mapping[str, bool] = field(default_factory=dict)
    enumerate_fn: Optional[Callable[[int], list]] = None
    description: str = ""

    # -- products and distances (validating wrappers; hot loops use the fns)

    def compose(self, a: Element, b: Element) -> Element:
        self.validate_fn(a)
        self.validate_fn(b)
        return self.compose_fn(a, b)

    def dist(self, a: Element, b: Element) -> float:
        self.validate_fn(a)
        self.validate_fn(b)
        return self.dist_fn(a, b)

    # -- sampling and enumeration

    def sample(self, rng) -> Element:
        return self.sample_fn(rng)

    def sample_many(self, count: int, seed: int) -> list:
        rng = spawn_rng(seed)
        return [self.sample_fn(rng) for _ in range(count)]

    def enumerate_slice(self, bound: int) -> list:
        if self.enumerate_fn is None:
            raise ValueError(f"{self.name} has no exhaustive enumeration")
        return self.enumerate_fn(bound)

    # -- codec

    def encode(self, el: Element) -> str:
        self.validate_fn(el)
        return f"{self.codec_prefix}:{self.encode_coords(el)}"

    def decode(self, text: str) -> Element:
        head, sep, tail = text.partition(":")
        if sep and head == self.codec_prefix:
            text = tail
        try:
            el = self.decode_coords(text)
        except ConstraintViolation:
            raise
        except Exception as exc:
            raise ConstraintViolation(f"{self.name}: cannot decode {text!r}: {exc}") from exc
        self.validate_fn(el)
        return el

    # -- equality under the codec tolerance

    def equal(self, a: Element, b: Element) -> bool:
        if self.discrete:
            return a == b
        return _coords_close(a, b, ELEMENT_EQ_TOL)


def _coords_close(a, b, tol):
    if a is ADJOINED_IDENTITY or b is ADJOINED_IDENTITY:
        return a is b
    if isinstance(a, tuple):
        return len(a) == len(b) and all(abs(x - y) <= tol for x, y in zip(a, b))
    return abs(a - b) <= tol


def compose(inst: MetricMagmaInstance, a: Element, b: Element) -> Element:
    """The semigroup product a*b of ``inst``."""
    return inst.compose(a, b)


def distance(inst: MetricMagmaInstance, a: Element, b: Element) -> float:
    """The metric of ``inst`` evaluated at (a, b)."""
    return inst.dist(a, b)


# ---------------------------------------------------------------------------
# built-in instances


def _dyadic(rng, lo_eighths: int, hi_eighths: int) -> float:
    return float(rng.integers(lo_eighths, hi_eighths + 1)) / 8.0


def euclidean(dim: int) -> MetricMagmaInstance:
    """R^dim under addition with the Euclidean metric (scalars for dim=1)."""
    if dim < 1:
        raise ValueError("dim must be >= 1")
    if dim == 1:

        def comp(a, b):
            return a + b

        def dst(a, b):
            return abs(a - b)

        def validate(el):
            if not isinstance(el, (int, float)) or isinstance(el, bool) or not math.isfinite(el):
                raise ConstraintViolation(f"euclidean1: not a finite scalar: {el!r}")

        def samp(rng):
            return _dyadic(rng, -32, 32)

        def enc(el):
            return repr(float(el))

        def dec(text):
            return float(text)

        ident: Element = 0.0
    else:

        def comp(a, b):
            return tuple(x + y for x, y in zip(a, b))

        def dst(a, b):
            return math.dist(a, b)

        def validate(el):
            if (
                not isinstance(el, tuple)
                or len(el) != dim
                or not all(isinstance(x, (int, float)) and math.isfinite(x) for x in el)
            ):
                raise ConstraintViolation(f"euclidean{dim}: not a finite {dim}-vector: {el!r}")

        def samp(rng):
            return tuple(_dyadic(rng, -32, 32) for _ in range(dim))

        def enc(el):
            return ",".join(repr(float(x)) for x in el)

        def dec(text):
            return tuple(float(t) for t in text.split(","))

        ident = (0.0,) * dim

    return MetricMagmaInstance(
        name=f"euclidean{dim}",
        codec_prefix=f"r{dim}",
        compose_fn=comp,
        dist_fn=dst,
        sample_fn=samp,
        encode_coords=enc,
        decode_coords=dec,
        validate_fn=validate,
        identity=ident,
        discrete=False,
        complete=True,
        invariance={k: True for k in INVARIANCE_KINDS},
        description="abelian group, translation-invariant metric",
    )


def affine() -> MetricMagmaInstance:
    """Maps x -> ax+b with a > 0, metrized by pulling back the hyperbolic
    half-plane distance along (a, b) -> b + a*i."""

    def comp(g, h):
        return (g[0] * h[0], g[0] * h[1] + g[1])

    def dst(g, h):
        da = g[0] - h[0]
        db = g[1] - h[1]
        return math.acosh(1.0 + (da * da + db * db) / (2.0 * g[0] * h[0]))

    def _validate_affine(el):
        if (
            not isinstance(el, tuple)
            or len(el) != 2
            or not all(isinstance(x, (int, float)) and math.isfinite(x) for x in el)
            or el[0] <= 0
        ):
            raise ConstraintViolation(f"affine: need (a, b) with a > 0: {el!r}")

    def samp(rng):
        return (_dyadic(rng, 1, 32), _dyadic(rng, -24, 24))

    return MetricMagmaInstance(
        name="affine",
        codec_prefix="affine",
        compose_fn=comp,
        dist_fn=dst,
        sample_fn=samp,
        encode_coords=lambda el: f"{el[0]!r},{el[1]!r}",
        decode_coords=lambda t: tuple(float(x) for x in t.split(",")),
        validate_fn=_validate_affine,
        identity=(1.0, 0.0),
        discrete=False,
        complete=True,
        invariance={
            "left": True,
            "right": False,
            "bi": False,
            "strong-left": True,
            "strong-right": False,
        },
        description="ax+b group, hyperbolic left-invariant metric",
    )


def heisenberg() -> MetricMagmaInstance:
    """Heisenberg group with the homogeneous gauge ((x^2+y^2)^2 + 16 z^2)^(1/4)
    applied to a^-1 b; left-invariant by construction."""

    def comp(a, b):
        return (
            a[0] + b[0],
            a[1] + b[1],
            a[2] + b[2] + 0.5 * (a[0] * b[1] - a[1] * b[0]),
        )

    def gauge(x, y, z):
        q = x * x + y * y
        return (q * q + 16.0 * z * z) ** 0.25

    def dst(a, b):
        x = b[0] - a[0]
        y = b[1] - a[1]
        z = b[2] - a[2] - 0.5 * (a[0] * b[1] - a[1] * b[0])
        return gauge(x, y, z)

    def validate(el):
        if (
            not isinstance(el, tuple)
            or len(el) != 3
            or not all(isinstance(x, (int, float)) and math.isfinite(x) for x in el)
        ):
            raise ConstraintViolation(f"heisenberg: not a finite triple: {el!r}")

    def samp(rng):
        return tuple(_dyadic(rng, -16, 16) for _ in range(3))

    return MetricMagmaInstance(
        name="heisenberg",
        codec_prefix="heis",
        compose_fn=comp,
        dist_fn=dst,
        sample_fn=samp,
        encode_coords=lambda el: ",".join(repr(float(x)) for x in el),
        decode_coords=lambda t: tuple(float(x) for x in t.split(",")),
        validate_fn=validate,
        identity=(0.0, 0.0, 0.0),
        discrete=False,
        complete=True,
        invariance={
            "left": True,
            "right": False,
            "bi": False,
            "strong-left": True,
            "strong-right": False,
        },
        description="nilpotent group, homogeneous-gauge left-invariant metric",
    )


def cyclic(order: int) -> MetricMagmaInstance:
    """Z/orderZ with the discrete metric (bi-invariant)."""
    if order < 1:
        raise ValueError("order must be >= 1")

    def comp(a, b):
        return (a + b) % order

    def dst(a, b):
        return 0.0 if a == b else 1.0

    def validate(el):
        if not isinstance(el, int) or isinstance(el, bool) or not 0 <= el < order:
            raise ConstraintViolation(f"cyclic{order}: index out of range: {el!r}")

    return MetricMagmaInstance(
        name=f"cyclic{order}",
        codec_prefix=f"c{order}",
        compose_fn=comp,
        dist_fn=dst,
        sample_fn=lambda rng: int(rng.integers(0, order)),
        encode_coords=str,
        decode_coords=int,
        validate_fn=validate,
        identity=0,
        discrete=True,
        complete=True,
        invariance={k: True for k in INVARIANCE_KINDS},
        enumerate_fn=lambda bound: list(range(order)),
        description="finite cyclic group, discrete metric",
    )


def positive_reals() -> MetricMagmaInstance:
    """(0, inf) under addition with |x - y|: a bi-invariant semigroup with
    neither identity nor idempotents (the canonical adjunction target)."""

    def validate(el):
        if not isinstance(el, (int, float)) or isinstance(el, bool) or not (
            math.isfinite(el) and el > 0
        ):
            raise ConstraintViolation(f"positive-reals: need a finite x > 0: {el!r}")

    return MetricMagmaInstance(
        name="positive-reals",
        codec_prefix="pos",
        compose_fn=lambda a, b: a + b,
        dist_fn=lambda a, b: abs(a - b),
        sample_fn=lambda rng: _dyadic(rng, 1, 64),
        encode_coords=lambda el: repr(float(el)),
        decode_coords=float,
        validate_fn=validate,
        identity=None,
        discrete=False,
        complete=False,  # Cauchy sequences to 0 leave the carrier
        invariance={k: True for k in INVARIANCE_KINDS},
        description="additive semigroup without identity",
    )


def counterexample(n_max: int = 8) -> MetricMagmaInstance:
    """Two-generator discrete semigroup on pairs (n, eps), (n, eps) != (0, 0),
    with product (n, eps)*(n', eps') = (n + n', eps') and the Manhattan
    metric.  Left-invariant, contains the idempotent left-identity (0, 1),
    and is not strongly left-invariant."""

    def comp(a, b):
        return (a[0] + b[0], b[1])

    def dst(a, b):
        return float(abs(a[0] - b[0]) + abs(a[1] - b[1]))

    def validate(el):
        if (
            not isinstance(el, tuple)
            or len(el) != 2
            or not all(isinstance(x, int) and not isinstance(x, bool) for x in el)
            or el[0] < 0
            or el[1] not in (0, 1)
            or el == (0, 0)
        ):
            raise ConstraintViolation(
                f"counterexample: need integers (n, eps), n >= 0, eps in {{0,1}}, != (0,0): {el!r}"
            )

    def samp(rng):
        while True:
            el = (int(rng.integers(0, n_max + 1)), int(rng.integers(0, 2)))
            if el != (0, 0):
                return el

    def enum(bound):
        return [(n, e) for n in range(bound + 1) for e in (0, 1) if (n, e) != (0, 0)]

    return MetricMagmaInstance(
        name="counterexample",
        codec_prefix="cex",
        compose_fn=comp,
        dist_fn=dst,
        sample_fn=samp,
        encode_coords=lambda el: f"{el[0]},{el[1]}",
        decode_coords=lambda t: tuple(int(x) for x in t.split(",")),
        validate_fn=validate,
        identity=None,
        discrete=True,
        complete=True,
        invariance={
            "left": True,
            "right": False,
            "bi": False,
            "strong-left": False,
            "strong-right": False,
        },
        enumerate_fn=enum,
        description="left-invariant, idempotent present, not strongly left-invariant",
    )


@functools.lru_cache(maxsize=1)
def _catalog() -> dict:
    cat = {}
    for inst in (
        euclidean(1),
        euclidean(2),
        euclidean(3),
        affine(),
        heisenberg(),
        cyclic(5),
        positive_reals(),
        counterexample(),
    ):
        cat[inst.name] = inst
    adjoined = adjoin_identity(cat["positive-reals"])
    # the adjoined carrier is isometric to [0, inf): completeness is restored
    adjoined = replace(adjoined, complete=True)
    cat[adjoined.name] = adjoined
    return cat


def builtin_instances() -> dict:
    """Catalog of built-in instances, keyed by name (instances are shared,
    immutable objects; the dict is a fresh copy)."""
    return dict(_catalog())


def get_instance(name: str) -> MetricMagmaInstance:
    cat = builtin_instances()
    if name not in cat:
        raise UnknownInstance(f"unknown instance {name!r}; available: {', '.join(sorted(cat))}")
    return cat[name]


# ---------------------------------------------------------------------------
# invariance checking


@dataclass(frozen=True)
class InvarianceWitness:
    relation: str
    elements: tuple
    lhs: float
    rhs: float

    @property
    def discrepancy(self) -> float:
        return abs(self.lhs - self.rhs)


@dataclass(frozen=True)
class InvarianceReport:
    kind: str
    mode: Any
    holds: bool
    witness: Optional[InvarianceWitness]
    max_discrepancy: float
    checked: int
    tol: float


def _default_tol(inst, tol):
    if tol is not None:
        return tol
    return 0.0 if inst.discrete else DEFAULT_CONTINUOUS_TOL


def _scan_tuples(inst, mode, arity, budget=ENUMERATION_BUDGET):
    """Yield element tuples for one scan phase."""
    if isinstance(mode, Exhaustive):
        pool = inst.enumerate_slice(mode.bound)
        if len(pool) ** arity > budget:
            raise BudgetExceeded(
                f"{len(pool)}^{arity} tuples exceed the enumeration budget {budget}"
            )
        yield from itertools.product(pool, repeat=arity)
    elif isinstance(mode, Sampled):
        rng = spawn_rng(mode.seed, arity)
        for _ in range(mode.count):
            yield tuple(inst.sample_fn(rng) for _ in range(arity))
    else:
        raise ValueError(f"unknown scan mode: {mode!r}")


def _invariance_phases(kind):
    """(relation label, arity, evaluator) triples defining each kind.

    The strong kinds test their defining two-element identity first, then
    plain invariance on triples; plain kinds test triples only.
    """

    def left(inst, t):
        a, b, c = t
        mul, d = inst.compose_fn, inst.dist_fn
        return d(mul(c, a), mul(c, b)), d(a, b)

    def right(inst, t):
        a, b, c = t
        mul, d = inst.compose_fn, inst.dist_fn
        return d(mul(a, c), mul(b, c)), d(a, b)

    def strong_left_pair(inst, t):
        a, b = t
        mul, d = inst.compose_fn, inst.dist_fn
        return d(a, mul(a, b)), d(b, mul(b, b))

    def strong_right_pair(inst, t):
        a, b = t
        mul, d = inst.compose_fn, inst.dist_fn
        return d(a, mul(b, a)), d(b, mul(b, b))

    if kind == "left":
        return [("d(ca,cb) = d(a,b)", 3, left)]
    if kind == "right":
        return [("d(ac,bc) = d(a,b)", 3, right)]
    if kind == "bi":
        return [("d(ca,cb) = d(a,b)", 3, left), ("d(ac,bc) = d(a,b)", 3, right)]
    if kind == "strong-left":
        return [("d(a,ab) = d(b,b^2)", 2, strong_left_pair), ("d(ca,cb) = d(a,b)", 3, left)]
    if kind == "strong-right":
        return [("d(a,ba) = d(b,b^2)", 2, strong_right_pair), ("d(ac,bc) = d(a,b)", 3, right)]
    raise ValueError(f"unknown invariance kind {kind!r}; expected one of {INVARIANCE_KINDS}")


def check_invariance(inst, kind, mode=Sampled(), tol=None) -> InvarianceReport:
    """Test one invariance identity, stopping at the first failure."""
    phases = _invariance_phases(kind)
    tol = _default_tol(inst, tol)
    max_disc = 0.0
    checked = 0
    for relation, arity, ev in phases:
        for t in _scan_tuples(inst, mode, arity):
            lhs, rhs = ev(inst, t)
            disc = abs(lhs - rhs)
            checked += 1
            if disc > max_disc:
                max_disc = disc
            if disc > tol:
                witness = InvarianceWitness(relation, t, lhs, rhs)
                return InvarianceReport(kind, mode, False, witness, max_disc, checked, tol)
    return InvarianceReport(kind, mode, True, None, max_disc, checked, tol)


# ---------------------------------------------------------------------------
# axiom suites (used by tests and by adjoin_identity's self-check)


@dataclass(frozen=True)
class AxiomReport:
    holds: bool
    failure: Optional[str]
    max_discrepancy: float
    checked: int


def check_associativity(inst, mode=Sampled(), tol=None) -> AxiomReport:
    tol = _default_tol(inst, tol)
    mul, d = inst.compose_fn, inst.dist_fn
    max_disc = 0.0
    checked = 0
    for a, b, c in _scan_tuples(inst, mode, 3):
        disc = d(mul(mul(a, b), c), mul(a, mul(b, c)))
        checked += 1
        if disc > max_disc:
            max_disc = disc
        if disc > tol:
            return AxiomReport(False, f"(ab)c != a(bc) at {(a, b, c)!r}", max_disc, checked)
    if inst.identity is not None:
        e = inst.identity
        for (g,) in _scan_tuples(inst, mode, 1):
            if d(mul(e, g), g) > tol or d(mul(g, e), g) > tol:
                return AxiomReport(False, f"identity law fails at {g!r}", max_disc, checked)
            checked += 1
    return AxiomReport(True, None, max_disc, checked)


def check_metric_axioms(inst, mode=Sampled(), tol=None) -> AxiomReport:
    """Symmetry, d(a,b)=0 iff a=b, and the triangle inequality, on a scan."""
    tol = _default_tol(inst, tol)
    d = inst.dist_fn
    max_disc = 0.0
    checked = 0
    for a, b in _scan_tuples(inst, mode, 2):
        dab, dba = d(a, b), d(b, a)
        checked += 1
        if dab < 0 or dba < 0:
            return AxiomReport(False, f"negative distance at {(a, b)!r}", max_disc, checked)
        disc = abs(dab - dba)
        if disc > max_disc:
            max_disc = disc
        if disc > tol:
            return AxiomReport(False, f"asymmetric at {(a, b)!r}", max_disc, checked)
        if d(a, a) > tol:
            return AxiomReport(False, f"d(a,a) != 0 at {a!r}", max_disc, checked)
        equal = inst.equal(a, b)
        if equal and dab > tol:
            return AxiomReport(False, f"equal elements at distance {dab} ({(a, b)!r})", max_disc, checked)
        if not equal and dab <= tol:
            return AxiomReport(False, f"distinct elements at distance {dab} ({(a, b)!r})", max_disc, checked)
    for a, b, c in _scan_tuples(inst, mode, 3):
        excess = d(a, c) - d(a, b) - d(b, c)
        checked += 1
        if excess > max_disc:
            max_disc = excess
        if excess > tol:
            return AxiomReport(False, f"triangle fails at {(a, b, c)!r}", max_disc, checked)
    return AxiomReport(True, None, max_disc, checked)


# ---------------------------------------------------------------------------
# idempotents and the embedding


@dataclass(frozen=True)
class IdempotentFinding:
    element: Any
    left_identity: bool


def _scan_pool(inst, mode):
    if isinstance(mode, Exhaustive):
        return inst.enumerate_slice(mode.bound)
    if isinstance(mode, Sampled):
        rng = spawn_rng(mode.seed, 1)
        pool = [inst.sample_fn(rng) for _ in range(mode.count)]
        if inst.identity is not None:
            pool.append(inst.identity)
        return pool
    raise ValueError(f"unknown scan mode: {mode!r}")


def idempotent_scan(inst, mode=Sampled(), tol=None) -> list[IdempotentFinding]:
    """All g in the scanned slice with d(g, g^2) = 0, each annotated with
    whether g acts as a left identity on the slice."""
    tol = _default_tol(inst, tol)
    mul, d = inst.compose_fn, inst.dist_fn
    pool = _scan_pool(inst, mode)
    test_set = pool if len(pool) <= 2000 else pool[:2000]
    found = []
    seen = set()
    for g in pool:
        key = inst.encode(g)
        if key in seen:
            continue
        seen.add(key)
        if d(g, mul(g, g)) <= tol:
            is_left = all(d(mul(g, x), x) <= tol for x in test_set)
            found.append(IdempotentFinding(g, is_left))
    return found


@dataclass(frozen=True)
class TwoHomogeneityReport:
    holds: bool
    witness: Optional[InvarianceWitness]
    max_discrepancy: float
    checked: int


def two_homogeneity_check(inst, mode=Sampled(), tol=None) -> TwoHomogeneityReport:
    """Test d(e, g^2) = 2 d(e, g) over a scan (requires an identity)."""
    if inst.identity is None:
        raise ValueError(f"{inst.name} has no identity")
    tol = _default_tol(inst, tol)
    e = inst.identity
    mul, d = inst.compose_fn, inst.dist_fn
    max_disc = 0.0
    checked = 0
    for g in _scan_pool(inst, mode):
        lhs = d(e, mul(g, g))
        rhs = 2.0 * d(e, g)
        disc = abs(lhs - rhs)
        checked += 1
        if disc > max_disc:
            max_disc = disc
        if disc > tol:
            witness = InvarianceWitness("d(e,g^2) = 2 d(e,g)", (g,), lhs, rhs)
            return TwoHomogeneityReport(False, witness, max_disc, checked)
    return TwoHomogeneityReport(True, None, max_disc, checked)


def adjoin_identity(
    inst: MetricMagmaInstance,
    preflight: Sampled = Sampled(count=2000, seed=0),
    tol=None,
) -> MetricMagmaInstance:
    """Adjoin a two-sided identity e with d(e, g) := d(g, g^2).

    Refuses if the carrier already has an identity or any idempotent
    (IdempotentPresent) or is not strongly left-invariant on a preflight
    scan (NotStronglyLeftInvariant).  The returned monoid restricts to the
    original instance bit-for-bit on the old carrier.
    """
    tol = _default_tol(inst, tol)
    if inst.identity is not None:
        raise IdempotentPresent(inst.identity, f"{inst.name} already has an identity")
    scan_mode = Exhaustive(8) if inst.enumerate_fn is not None else preflight
    idems = idempotent_scan(inst, scan_mode, tol)
    if idems:
        raise IdempotentPresent(idems[0].element)
    sl = check_invariance(inst, "strong-left", preflight, tol)
    if not sl.holds:
        raise NotStronglyLeftInvariant(sl.witness)

    base_comp, base_dist = inst.compose_fn, inst.dist_fn
    base_sample, base_validate = inst.sample_fn, inst.validate_fn
    base_enc, base_dec = inst.encode_coords, inst.decode_coords

    def comp(a, b):
        if a is ADJOINED_IDENTITY:
            return b
        if b is ADJOINED_IDENTITY:
            return a
        return base_comp(a, b)

    def dst(a, b):
        a_e = a is ADJOINED_IDENTITY
        b_e = b is ADJOINED_IDENTITY
        if a_e and b_e:
            return 0.0
        if a_e:
            return base_dist(b, base_comp(b, b))
        if b_e:
            return base_dist(a, base_comp(a, a))
        return base_dist(a, b)

    def samp(rng):
        if rng.random() < 0.125:
            return ADJOINED_IDENTITY
        return base_sample(rng)

    def validate(el):
        if el is not ADJOINED_IDENTITY:
            base_validate(el)

    def enc(el):
        return "e" if el is ADJOINED_IDENTITY else base_enc(el)

    def dec(text):
        return ADJOINED_IDENTITY if text == "e" else base_dec(text)

    enum = None
    if inst.enumerate_fn is not None:
        base_enum = inst.enumerate_fn

        def enum(bound):
            return [ADJOINED_IDENTITY] + base_enum(bound)

    base_inv = dict(inst.invariance)
    # a right-invariant monoid needs d(c, gc) = d(g, g^2), i.e. the base
    # strong-right identity, in addition to base right-invariance
    right = bool(base_inv.get("right")) and bool(base_inv.get("strong-right"))
    adjoined = MetricMagmaInstance(
        name=f"{inst.name}-adjoined",
        codec_prefix=f"{inst.codec_prefix}+e",
        compose_fn=comp,
        dist_fn=dst,
        sample_fn=samp,
        encode_coords=enc,
        decode_coords=dec,
        validate_fn=validate,
        identity=ADJOINED_IDENTITY,
        discrete=inst.discrete,
        complete=inst.complete,
        invariance={
            "left": True,
            "right": right,
            "bi": right,
            "strong-left": True,
            "strong-right": right,
        },
        enumerate_fn=enum,
        description=f"{inst.name} with an adjoined identity",
    )

    self_check_mode = Sampled(count=500, seed=preflight.seed + 1)
    axioms = check_metric_axioms(adjoined, self_check_mode, tol)
    if not axioms.holds:
        raise NotStronglyLeftInvariant(axioms.failure, "adjoined metric fails axioms")
    left_inv = check_invariance(adjoined, "left", self_check_mode, tol)
    if not left_inv.holds:
        raise NotStronglyLeftInvariant(left_inv.witness, "adjoined metric not left-invariant")
    return adjoined
