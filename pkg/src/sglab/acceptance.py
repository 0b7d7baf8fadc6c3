"""The acceptance battery: nine oracle- and property-based criteria.

Each criterion function returns a :class:`CriterionResult`; ``run_all``
executes all nine.  The pytest module ``tests/test_acceptance.py`` asserts
each result, and the CLI ``suite`` command serializes them.
"""

from __future__ import annotations

import functools
import math
import time
from dataclasses import dataclass

from . import battery
from .algebra import (
    Exhaustive,
    Sampled,
    adjoin_identity,
    check_invariance,
    check_metric_axioms,
    get_instance,
)
from .errors import IdempotentPresent
from .inequalities import kn_scalar_lemma
from .probability import (
    Exact,
    FiniteDistribution,
    MonteCarlo,
    RearrangementFunction,
    exact_event_prob,
    exact_statistic_laws,
    levy_diagnostic,
    mc_event_prob,
    pigeonhole_power_check,
    tail_moment_identity,
)
from .seeding import spawn_rng

#: the doubled Klass-Nowicki variant at (lambda, n, k) = (0.01, 2, 2),
#: frozen from a 40-digit evaluation of 2^(1/2) * 2 * 0.99 * (1 - sqrt(0.99))
DOUBLED_WITNESS_VALUE = 0.01403589216361104


@dataclass(frozen=True)
class CriterionResult:
    number: int
    title: str
    passed: bool
    detail: str

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status}  criterion {self.number}: {self.title} -- {self.detail}"


@functools.lru_cache(maxsize=4)
def _battery_result(seed: int, trials: int, parallelism: int = 1):
    return battery.run_battery(seed=seed, trials=trials, parallelism=parallelism)


def criterion_1_battery(seed=1, trials=50, parallelism=1) -> CriterionResult:
    """Every checker on every applicable instance holds with slack >= 0."""
    t0 = time.perf_counter()
    result = _battery_result(seed, trials, parallelism)
    elapsed = time.perf_counter() - t0
    summary = result["summary"]
    bad = [r for r in result["reports"] if r["verdict"] != "holds" or not r["slack"] >= 0]
    detail = (
        f"{summary['total']} reports, holds={summary['holds']}, "
        f"violated={summary['violated']}, indeterminate={summary['indeterminate']}, "
        f"{elapsed:.1f}s"
    )
    if bad:
        detail += f"; first failure: {bad[0]}"
    return CriterionResult(1, "exact inequality battery", not bad, detail)


def criterion_2_specializations(seed=1, trials=50, parallelism=1) -> CriterionResult:
    """hj-general reproduces hj-lt (equal to 1e-12) and dominates hj-hm on
    every battery entry (the general form is strictly sharper than the
    K-block statement, so value equality is asserted only for hj-lt)."""
    result = _battery_result(seed, trials, parallelism)
    lt = [r for r in result["reports"] if r["inequality"] == "hj-lt"]
    hm = [r for r in result["reports"] if r["inequality"] == "hj-hm"]
    lt_ok = all(r["extra"]["specialization_equal"] for r in lt)
    hm_ok = all(r["extra"]["specialization_dominates"] for r in hm)
    detail = f"{len(lt)} hj-lt equalities, {len(hm)} hj-hm dominations"
    passed = lt_ok and hm_ok and bool(lt) and bool(hm)
    return CriterionResult(2, "specialization identities", passed, detail)


def criterion_3_invariance(seed=1) -> CriterionResult:
    """Invariance classification with stored witnesses."""
    failures = []
    mode = Sampled(count=10_000, seed=seed)
    for name in ("euclidean1", "euclidean2", "euclidean3"):
        rep = check_invariance(get_instance(name), "bi", mode)
        if not rep.holds:
            failures.append(f"{name} bi-invariance: {rep.witness}")
    for name in ("affine", "heisenberg"):
        inst = get_instance(name)
        for kind in ("left", "strong-left"):
            rep = check_invariance(inst, kind, mode)
            if not rep.holds:
                failures.append(f"{name} {kind}: {rep.witness}")
        rep = check_invariance(inst, "right", mode)
        if rep.holds or rep.witness is None:
            failures.append(f"{name} right-invariance unexpectedly held")
    cex = get_instance("counterexample")
    rep = check_invariance(cex, "left", Exhaustive(bound=8))
    if not rep.holds:
        failures.append(f"counterexample left: {rep.witness}")
    rep = check_invariance(cex, "strong-left", Exhaustive(bound=8))
    w = rep.witness
    if rep.holds or w is None or w.elements != ((0, 1), (1, 0)) or (w.lhs, w.rhs) != (2.0, 1.0):
        failures.append(f"counterexample strong-left witness wrong: {w}")
    detail = "euclidean bi / affine+heisenberg left+strong-left (right fails) / cex witness d(g,gh)=2!=1"
    if failures:
        detail = "; ".join(failures)
    return CriterionResult(3, "invariance classification", not failures, detail)


def criterion_4_embedding(seed=2) -> CriterionResult:
    """Adjoining an identity to (0,inf) works and is refused on the
    counterexample semigroup."""
    failures = []
    pos = get_instance("positive-reals")
    monoid = adjoin_identity(pos)
    mode = Sampled(count=10_000, seed=seed)
    axioms = check_metric_axioms(monoid, mode)
    if not axioms.holds or axioms.max_discrepancy > 1e-9:
        failures.append(f"adjoined metric axioms: {axioms.failure}")
    left = check_invariance(monoid, "left", mode)
    if not left.holds or left.max_discrepancy > 1e-9:
        failures.append(f"adjoined left-invariance: {left.witness}")
    e = monoid.identity
    rng = spawn_rng(seed, 7)
    for _ in range(10_000):
        x = pos.sample_fn(rng)
        if monoid.dist_fn(e, x) != x:
            failures.append(f"d(e, {x}) != {x}")
            break
    try:
        adjoin_identity(get_instance("counterexample"))
        failures.append("counterexample adjunction unexpectedly succeeded")
    except IdempotentPresent as exc:
        if exc.witness != (0, 1):
            failures.append(f"wrong idempotent witness: {exc.witness}")
    detail = "positive-reals adjoined (d(e,x)=x exact); counterexample refused with idempotent (0,1)"
    if failures:
        detail = "; ".join(failures)
    return CriterionResult(4, "identity adjunction", not failures, detail)


def _random_law(rng):
    size = int(rng.integers(1, 9))
    values = sorted({float(rng.integers(0, 81)) / 8.0 for _ in range(size)})
    if not values:
        values = [0.0]
    cs = [int(rng.integers(1, 9)) for _ in values]
    total = sum(cs)
    return [(v, c / total) for v, c in zip(values, cs)]


def criterion_5_analytic_lemmas(seed=3) -> CriterionResult:
    failures = []
    rng = spawn_rng(seed, 11)
    for i in range(100):
        law = _random_law(rng)
        for alpha in (0.5, 1.0, 2.0, 3.0):
            res = tail_moment_identity(law, alpha)
            if abs(res.diff) > 1e-12:
                failures.append(f"tail-moment diff {res.diff} at law {i}, alpha {alpha}")
    for i in range(10_000):
        k = int(rng.integers(1, 6))
        terms = [(float(rng.integers(0, 17)) / 8.0, float(rng.integers(0, 17)) / 8.0) for _ in range(k)]
        bound = sum(w * a for w, a in terms)
        a = float(rng.random()) * bound
        p = float(rng.choice([0.5, 1.0, 2.0, 3.5]))
        res = pigeonhole_power_check(a, terms, p)
        if not res.holds:
            failures.append(f"pigeonhole fails: a={a}, terms={terms}, p={p}")
            break
    for lam100 in range(1, 100):
        lam = lam100 / 100.0
        for n in range(1, 21):
            for k in range(1, 7):
                if not kn_scalar_lemma(lam, n, k).bound_holds:
                    failures.append(f"scalar bound fails at ({lam}, {n}, {k})")
    witness = kn_scalar_lemma(0.01, 2, 2)
    if abs(witness.doubled_value - DOUBLED_WITNESS_VALUE) > 1e-6:
        failures.append(f"doubled value {witness.doubled_value} off oracle")
    if not (witness.doubled_exceeds and witness.doubled_value > 0.01):
        failures.append("doubled variant does not exceed lambda at (0.01, 2, 2)")
    detail = (
        "tail-moment 100 laws x 4 alphas <= 1e-12; pigeonhole 10^4; "
        f"scalar grid 99x20x6; doubled witness {witness.doubled_value:.6f} > 0.01"
    )
    if failures:
        detail = "; ".join(failures[:3])
    return CriterionResult(5, "analytic lemmas", not failures, detail)


def criterion_6_engine_agreement(seed=4, pairs=100, samples=100_000) -> CriterionResult:
    """The 99% Hoeffding interval covers the exact value in >= 95% of
    (event, seed) pairs."""
    covered = 0
    names = list(battery.BATTERY_INSTANCES)
    for i in range(pairs):
        inst = get_instance(names[i % len(names)])
        rng = spawn_rng(seed, 13, i)
        dists = battery._draw_dists(inst, rng, n_max=3)
        z0, z1 = battery._draw_base_points(inst, rng)
        atoms = battery._y_atoms(inst, dists, z0)
        scale = max(atoms) if atoms and max(atoms) > 0 else 1.0
        t = battery._draw_threshold(rng, atoms, scale)
        pred = lambda st, t=t: st.U > t
        exact = exact_event_prob(dists, pred, z0, z1)
        est = mc_event_prob(dists, pred, z0, z1, engine=MonteCarlo(seed=seed * 1000 + i, samples=samples))
        if est.ci_low <= exact <= est.ci_high:
            covered += 1
    passed = covered >= math.ceil(0.95 * pairs)
    return CriterionResult(
        6, "engine agreement", passed, f"coverage {covered}/{pairs} (need >= {math.ceil(0.95 * pairs)})"
    )


def criterion_7_rearrangement() -> CriterionResult:
    from .inequalities import moment_bound

    inst = get_instance("euclidean1")
    law = FiniteDistribution.uniform(inst, (0.0, 1.0))
    dists = [law, law]
    u_law = exact_statistic_laws(dists, {"U": lambda st: st.U}, 0.0, 0.0)["U"]
    u_star = RearrangementFunction.from_law(u_law)
    checks = [(0.5, 1.0), (0.2, 2.0), (0.8, 0.0)]
    failures = [f"U*({t}) = {u_star(t)} != {v}" for t, v in checks if u_star(t) != v]
    rep = moment_bound(dists, 1.0, 0.0, 0.0)
    if rep.lhs.value != 1.0 or rep.rhs.value != 22.0:
        failures.append(f"moment bound lhs={rep.lhs.value}, rhs={rep.rhs.value}, want 1 and 22")
    detail = "U*(0.5)=1, U*(0.2)=2, U*(0.8)=0; moment p=1: lhs=1, rhs=22 (exact)"
    if failures:
        detail = "; ".join(failures)
    return CriterionResult(7, "decreasing rearrangement", not failures, detail)


def criterion_8_levy_diagnostic(seed=5, samples=10_000) -> CriterionResult:
    inst = get_instance("euclidean1")
    horizon = 20
    failures = []
    summable = [
        FiniteDistribution.uniform(inst, (-(2.0**-n), 2.0**-n)) for n in range(1, horizon + 1)
    ]
    rows = levy_diagnostic(
        summable, horizon, [0.01], 0.0, 0.0, MonteCarlo(seed=seed, samples=samples)
    )
    for row in rows:
        if row.n >= 10 and (row.tail_end > 0.01 or row.tail_window > 0.01):
            failures.append(f"summable scenario: tail at n={row.n} is {row.tail_end}")
    walk = [FiniteDistribution.uniform(inst, (-1.0, 1.0))] * horizon
    rows = levy_diagnostic(
        walk, horizon, [0.5], 0.0, 0.0, MonteCarlo(seed=seed + 1, samples=samples)
    )
    for row in rows:
        if row.n < horizon and row.tail_end < 0.4:
            failures.append(f"sign walk: tail at n={row.n} is {row.tail_end} < 0.4")
    detail = "summable steps vanish by n=10; +-1 walk stays >= 0.4"
    if failures:
        detail = "; ".join(failures[:3])
    return CriterionResult(8, "convergence diagnostic", not failures, detail)


def criterion_9_stress(seed=6, trials_per_inequality=200) -> CriterionResult:
    from .inequalities import stress_search

    instances = [get_instance(n) for n in battery.BATTERY_INSTANCES]
    failures = []
    counts = 0
    for iq in battery.INEQUALITY_IDS:
        usable = [i for i in instances if battery.applicable(iq, i.name)]
        per = trials_per_inequality // len(usable)
        extra = trials_per_inequality - per * len(usable)
        for j, inst in enumerate(usable):
            t = per + (1 if j < extra else 0)
            found = stress_search(inst, iq, seed=seed, trials=t)
            counts += t
            if found:
                failures.append(f"{iq} violated on {inst.name}: {found[0].params}")
    detail = f"{counts} trials per pass over {len(battery.INEQUALITY_IDS)} inequalities, 0 violations"
    if failures:
        detail = "; ".join(failures[:3])
    return CriterionResult(9, "violation search", not failures, detail)


def run_all(
    seed=1,
    trials=50,
    parallelism=1,
    engine_pairs=100,
    engine_samples=100_000,
    levy_samples=10_000,
    stress_trials=200,
) -> list:
    """All nine criteria; the keyword scales exist for smoke runs, the
    defaults are the stated acceptance scales."""
    return [
        criterion_1_battery(seed, trials, parallelism),
        criterion_2_specializations(seed, trials, parallelism),
        criterion_3_invariance(seed),
        criterion_4_embedding(seed + 1),
        criterion_5_analytic_lemmas(seed + 2),
        criterion_6_engine_agreement(seed + 3, pairs=engine_pairs, samples=engine_samples),
        criterion_7_rearrangement(),
        criterion_8_levy_diagnostic(seed + 4, samples=levy_samples),
        criterion_9_stress(seed + 5, trials_per_inequality=stress_trials),
    ]
