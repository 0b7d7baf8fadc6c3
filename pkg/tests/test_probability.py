import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sglab import (
    BudgetExceeded,
    Exact,
    FiniteDistribution,
    MonteCarlo,
    RearrangementFunction,
    decreasing_rearrangement,
    exact_event_prob,
    exact_event_probs,
    exact_statistic_laws,
    get_instance,
    levy_diagnostic,
    mc_event_prob,
    partial_products,
    path_statistics,
    pigeonhole_power_check,
    tail_moment_identity,
)
from sglab.probability import iter_exact_outcomes
from sglab.seeding import spawn_rng


def u2_law(dists):
    return exact_statistic_laws(dists, {"U": lambda st: st.U}, 0.0, 0.0)["U"]


# ---------------------------------------------------------------------------
# laws


def test_distribution_validation(real_line):
    with pytest.raises(ValueError):
        FiniteDistribution(real_line, (0.0, 1.0), (0.5, 0.6))
    with pytest.raises(ValueError):
        FiniteDistribution(real_line, (0.0, 1.0), (1.0, -0.0))
    with pytest.raises(ValueError):
        FiniteDistribution(real_line, (0.0, 0.0), (0.5, 0.5))
    with pytest.raises(ValueError):
        FiniteDistribution(real_line, (), ())


# ---------------------------------------------------------------------------
# partial products and path statistics


def test_partial_products_running_sums(real_line):
    assert partial_products(real_line, [1.0, 1.0]) == [1.0, 2.0]


def test_partial_products_counterexample(catalog):
    assert partial_products(catalog["counterexample"], [(1, 0), (0, 1)]) == [(1, 0), (1, 1)]


def test_partial_products_affine(catalog):
    assert partial_products(catalog["affine"], [(2.0, 0.0), (3.0, 1.0)]) == [(2.0, 0.0), (6.0, 2.0)]


def test_partial_products_right_orientation(catalog):
    aff = catalog["affine"]
    xs = [(2.0, 0.0), (3.0, 1.0)]
    assert partial_products(aff, xs, "right") == [(2.0, 0.0), aff.compose(xs[1], xs[0])]


def test_path_statistics_positive_steps(real_line):
    st_ = path_statistics(real_line, [1.0, 1.0], 0.0, 0.0)
    assert st_.U == 2.0
    assert st_.M == [1.0, 1.0]
    assert st_.Y == [1.0, 1.0]


def test_path_statistics_cancelling_steps(real_line):
    st_ = path_statistics(real_line, [1.0, -1.0], 0.0, 0.0)
    assert st_.S == [1.0, 0.0]
    assert st_.U == 1.0
    assert st_.Yord == [1.0, 1.0]
    assert st_.end_dist == 0.0


def test_path_statistics_base_point_free_increments(catalog):
    cex = catalog["counterexample"]
    assert path_statistics(cex, [(1, 0)], (1, 0), (1, 0)).Y == [1.0]
    assert path_statistics(cex, [(1, 0)], (2, 0), (2, 0)).Y == [1.0]


def test_path_statistics_field_invariants(catalog):
    for name in ("euclidean2", "affine", "heisenberg"):
        inst = catalog[name]
        rng = spawn_rng(3)
        for _ in range(50):
            xs = [inst.sample_fn(rng) for _ in range(4)]
            z0, z1 = inst.sample_fn(rng), inst.sample_fn(rng)
            st_ = path_statistics(inst, xs, z0, z1)
            assert st_.M == [max(st_.Y[: j + 1]) for j in range(4)]
            assert st_.M[-1] == max(st_.Y)
            assert sorted(st_.Y) == st_.Yord
            assert st_.U >= st_.end_dist
            assert st_.tail_sum(1) == 0.0
            assert st_.tail_sum(2) == st_.Yord[-1]


# ---------------------------------------------------------------------------
# exact engine


def test_exact_event_prob_bernoulli(bernoulli_pair):
    assert exact_event_prob(bernoulli_pair, lambda st: st.U > 0.3, 0.0, 0.0) == 0.75
    assert exact_event_prob(bernoulli_pair, lambda st: st.U > 1.2, 0.0, 0.0) == 0.25
    assert exact_event_prob(bernoulli_pair, lambda st: True, 0.0, 0.0) == 1.0


def test_exact_event_prob_rational(bernoulli_pair):
    p = exact_event_prob(bernoulli_pair, lambda st: st.U > 0.3, 0.0, 0.0, rational=True)
    assert p == Fraction(3, 4)


def test_exact_budget(real_line):
    law = FiniteDistribution.uniform(real_line, (0.0, 1.0))
    with pytest.raises(BudgetExceeded):
        exact_event_prob([law] * 4, lambda st: True, 0.0, 0.0, engine=Exact(budget=8))


def test_exact_multi_event_single_pass(bernoulli_pair):
    probs = exact_event_probs(
        bernoulli_pair,
        {"a": lambda st: st.U > 0.3, "b": lambda st: st.M[-1] > 0.3},
        0.0, 0.0,
    )
    assert probs == {"a": 0.75, "b": 0.75}


def test_diameter_bound_and_triangle_chain(catalog):
    # max_{j,k} d(S_k, S_j) <= 2 U_n, and
    # d(z1, z0 S_k) <= d(z1, z0) + sum_{j<=k} Y_j on the sampled instances
    for name in ("euclidean1", "affine", "heisenberg", "cyclic5"):
        inst = catalog[name]
        rng = spawn_rng(13)
        atoms = [inst.sample_fn(rng) for _ in range(2)]
        law = FiniteDistribution.uniform(inst, atoms) if atoms[0] != atoms[1] else \
            FiniteDistribution.uniform(inst, atoms[:1])
        z0, z1 = inst.sample_fn(rng), inst.sample_fn(rng)
        for _, st_ in iter_exact_outcomes([law] * 3, z0, z1):
            d = inst.dist_fn
            diam = max(d(a, b) for a in st_.S for b in st_.S)
            assert diam <= 2 * st_.U + 1e-9
            base = d(z1, z0)
            for k in range(3):
                assert st_.path_dists[k] <= base + sum(st_.Y[: k + 1]) + 1e-9


def test_increment_z0_independence(catalog):
    for name in ("euclidean2", "affine", "heisenberg", "positive-reals"):
        inst = catalog[name]
        rng = spawn_rng(17)
        for _ in range(300):
            x, z0, z0p = (inst.sample_fn(rng) for _ in range(3))
            y1 = inst.dist_fn(z0, inst.compose_fn(z0, x))
            y2 = inst.dist_fn(z0p, inst.compose_fn(z0p, x))
            assert abs(y1 - y2) <= 1e-9


# ---------------------------------------------------------------------------
# Monte Carlo engine


def test_mc_event_prob_matches_exact(bernoulli_pair):
    est = mc_event_prob(
        bernoulli_pair, lambda st: st.U > 0.3, 0.0, 0.0,
        engine=MonteCarlo(seed=42, samples=100_000),
    )
    assert 0.73 <= est.p_hat <= 0.77
    assert est.ci_low <= 0.75 <= est.ci_high


def test_mc_impossible_event(bernoulli_pair):
    est = mc_event_prob(
        bernoulli_pair, lambda st: st.U > 99, 0.0, 0.0,
        engine=MonteCarlo(seed=1, samples=5000),
    )
    assert est.p_hat == 0.0 and est.ci_low == 0.0


def test_mc_determinism(bernoulli_pair):
    eng = MonteCarlo(seed=7, samples=20_000)
    a = mc_event_prob(bernoulli_pair, lambda st: st.U > 0.3, 0.0, 0.0, engine=eng)
    b = mc_event_prob(bernoulli_pair, lambda st: st.U > 0.3, 0.0, 0.0, engine=eng)
    assert a == b


def test_mc_halfwidth_value(bernoulli_pair):
    est = mc_event_prob(
        bernoulli_pair, lambda st: True, 0.0, 0.0, engine=MonteCarlo(seed=3, samples=100_000)
    )
    assert est.p_hat == 1.0
    halfwidth = math.sqrt(math.log(2 / 0.01) / (2 * 100_000))
    assert est.ci_low == pytest.approx(1.0 - halfwidth, abs=1e-15)
    assert est.ci_high == 1.0


# ---------------------------------------------------------------------------
# rearrangement


def test_rearrangement_bernoulli_values(bernoulli_pair):
    law = u2_law(bernoulli_pair)
    assert decreasing_rearrangement(law, 0.5) == 1.0
    assert decreasing_rearrangement(law, 0.2) == 2.0
    assert decreasing_rearrangement(law, 0.8) == 0.0


def test_rearrangement_domain(bernoulli_pair):
    law = u2_law(bernoulli_pair)
    with pytest.raises(ValueError):
        decreasing_rearrangement(law, 1.0)
    with pytest.raises(ValueError):
        decreasing_rearrangement(law, -0.1)


def test_rearrangement_step_shape(bernoulli_pair):
    fn = RearrangementFunction.from_law(u2_law(bernoulli_pair))
    assert fn.breakpoints == (0.0, 0.25, 0.75)
    assert fn.values == (2.0, 1.0, 0.0)
    # non-increasing and right-continuous across a 10^3 grid
    grid = [i / 1000 for i in range(1000)]
    vals = [fn(t) for t in grid]
    assert all(a >= b for a, b in zip(vals, vals[1:]))
    for b in fn.breakpoints:
        if b + 1e-12 < 1.0:
            assert fn(b) == fn(b + 1e-12)


law_strategy = st.lists(
    st.tuples(st.integers(0, 40).map(lambda k: k / 8.0), st.integers(1, 8)),
    min_size=1, max_size=6,
).map(lambda pairs: [(v, c / sum(c for _, c in pairs)) for v, c in pairs])


@settings(max_examples=80, deadline=None)
@given(law_strategy, st.sampled_from([0.0, 0.1, 0.25, 0.5, 0.9]))
def test_rearrangement_monotone_property(law, t):
    fn = RearrangementFunction.from_law(law)
    assert fn(t) >= fn(min(t + 0.05, 0.999))
    # the value is always either 0 or an atom of the law
    assert fn(t) in {0.0} | {v for v, _ in law}


# ---------------------------------------------------------------------------
# tail-moment identity and the pigeonhole power bound


def test_tail_moment_bernoulli(bernoulli_pair):
    law = u2_law(bernoulli_pair)
    res = tail_moment_identity(law, 1.0)
    assert res.lhs == res.rhs == 1.0
    res = tail_moment_identity(law, 2.0)
    assert res.lhs == pytest.approx(1.5, abs=1e-15)
    assert abs(res.diff) <= 1e-12


def test_tail_moment_constant():
    for alpha in (0.5, 1.0, 3.0):
        res = tail_moment_identity([(2.5, 1.0)], alpha)
        assert res.lhs == pytest.approx(2.5**alpha, abs=1e-12)
        assert abs(res.diff) <= 1e-12


def test_tail_moment_rejects_bad_input():
    with pytest.raises(ValueError):
        tail_moment_identity([(1.0, 1.0)], 0.0)
    with pytest.raises(ValueError):
        tail_moment_identity([(-1.0, 1.0)], 1.0)


@settings(max_examples=80, deadline=None)
@given(law_strategy, st.sampled_from([0.5, 1.0, 2.0, 3.0]))
def test_tail_moment_property(law, alpha):
    # duplicate values in the generated law are merged by the identity
    assert abs(tail_moment_identity(law, alpha).diff) <= 1e-12


def test_pigeonhole_examples():
    assert pigeonhole_power_check(2.0, [(1.0, 1.0), (1.0, 1.0)], 2.0).holds
    assert pigeonhole_power_check(0.0, [(1.0, 0.5)], 1.0).holds
    assert pigeonhole_power_check(1.0, [(1.0, 1.0)], 0.5).holds  # equality case
    with pytest.raises(ValueError):
        pigeonhole_power_check(3.0, [(1.0, 1.0)], 2.0)


@settings(max_examples=100, deadline=None)
@given(
    st.lists(st.tuples(st.integers(0, 16), st.integers(0, 16)), min_size=1, max_size=5),
    st.floats(0.0, 1.0, exclude_max=True),
    st.sampled_from([0.5, 1.0, 2.0, 3.5]),
)
def test_pigeonhole_property(raw, frac, p):
    terms = [(w / 8.0, a / 8.0) for w, a in raw]
    a = frac * sum(w * x for w, x in terms)
    assert pigeonhole_power_check(a, terms, p).holds


# ---------------------------------------------------------------------------
# convergence diagnostic


def test_levy_diagnostic_summable_steps(real_line):
    horizon = 12
    laws = [FiniteDistribution.uniform(real_line, (-(2.0**-n), 2.0**-n))
            for n in range(1, horizon + 1)]
    rows = levy_diagnostic(laws, horizon, [0.01], 0.0, 0.0,
                           MonteCarlo(seed=5, samples=2000))
    for row in rows:
        # |S_N - S_n| < 2^-n deterministically
        if 2.0 ** -row.n <= 0.01:
            assert row.tail_end == 0.0 and row.tail_window == 0.0


def test_levy_diagnostic_sign_walk(real_line):
    horizon = 10
    laws = [FiniteDistribution.uniform(real_line, (-1.0, 1.0))] * horizon
    rows = levy_diagnostic(laws, horizon, [0.5], 0.0, 0.0,
                           MonteCarlo(seed=6, samples=4000))
    assert all(row.tail_end >= 0.4 for row in rows)


def test_levy_diagnostic_degenerate(real_line):
    laws = [FiniteDistribution.uniform(real_line, (0.0,))] * 5
    rows = levy_diagnostic(laws, 5, [0.01, 0.5], 0.0, 0.0, Exact())
    assert all(row.tail_end == 0.0 and row.tail_window == 0.0 for row in rows)


def test_levy_diagnostic_validation(real_line):
    laws = [FiniteDistribution.uniform(real_line, (0.0,))] * 5
    with pytest.raises(ValueError):
        levy_diagnostic(laws, 1, [0.1], 0.0, 0.0, Exact())
    with pytest.raises(ValueError):
        levy_diagnostic(laws[:2], 5, [0.1], 0.0, 0.0, Exact())
