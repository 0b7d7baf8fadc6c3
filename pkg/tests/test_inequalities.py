import math

import pytest

from sglab import (
    Exact,
    FiniteDistribution,
    HJParams,
    LambdaNotLessThanOne,
    MonteCarlo,
    exact_event_probs,
    get_instance,
    hj_general,
    hj_hm,
    hj_lt,
    i0_set,
    js_bound,
    kn_bounds,
    kn_scalar_lemma,
    levy_ottaviani,
    mogulskii,
    moment_bound,
    ottaviani_skorohod,
    rearrangement_ratio,
    stress_search,
)
from sglab.errors import HypothesisNotSatisfied


def affine_pair_walk(catalog):
    inst = catalog["affine"]
    law = FiniteDistribution.uniform(inst, ((2.0, 0.0), (0.5, 1.0)))
    return inst, [law] * 3


# ---------------------------------------------------------------------------
# the I0 rule


def test_i0_both_small():
    assert i0_set([0.25, 0.25], [1, 1]) == {1, 2}


def test_i0_empty_for_certain_small_u():
    for K in (2, 3, 5):
        assert i0_set([1.0], [K]) == set()


def test_i0_zero_power_convention():
    # 0^0 = 1 <= 1/1!
    assert i0_set([0.0], [1]) == {1}


# ---------------------------------------------------------------------------
# the Hoffmann-Jorgensen family


def test_hj_general_bernoulli(bernoulli_pair):
    params = HJParams((1, 1), (0.3, 0.3), 0.3, 0.0, 0.0)
    rep = hj_general(bernoulli_pair, params)
    assert rep.lhs.value == 0.25
    assert rep.rhs.value == 9 / 16 + 0.75
    assert rep.verdict == "holds"
    assert rep.extra["i0"] == [1, 2]
    assert rep.extra["threshold"] == 1.2


def test_hj_general_trivial_thresholds(bernoulli_pair):
    params = HJParams((1, 1), (10.0, 10.0), 10.0, 0.0, 0.0)
    rep = hj_general(bernoulli_pair, params)
    assert rep.lhs.value == 0.0 and rep.verdict == "holds"


def test_hj_general_affine_eight_outcomes(catalog):
    inst, dists = affine_pair_walk(catalog)
    e = inst.identity
    params = HJParams((2,), (0.4,), 0.4, e, e)
    rep = hj_general(dists, params)
    assert rep.verdict == "holds"
    assert rep.engine["type"] == "exact"


def test_hj_general_count_cap(bernoulli_pair):
    with pytest.raises(ValueError):
        hj_general(bernoulli_pair, HJParams((4,), (0.3,), 0.3, 0.0, 0.0))


def test_hj_general_strengthened_k2_tail_matches_basic(bernoulli_pair):
    # with K = 2 the order-statistics tail is Y_(n) = M_n, an identity
    basic = hj_general(bernoulli_pair, HJParams((1, 1), (0.3, 0.3), 0.3, 0.0, 0.0))
    strong = hj_general(
        bernoulli_pair, HJParams((1, 1), (0.3, 0.3), 0.3, 0.0, 0.0, strengthened=True)
    )
    assert strong.rhs.value == basic.rhs.value
    probs = exact_event_probs(
        bernoulli_pair,
        {"os_tail": lambda st: st.tail_sum(2) > 0.3, "max_tail": lambda st: st.M[-1] > 0.3},
        0.0, 0.0,
    )
    assert probs["os_tail"] == probs["max_tail"]


def test_hj_lt_bernoulli(bernoulli_pair):
    rep = hj_lt(bernoulli_pair, 0.3, 0.3, 0.0, 0.0)
    assert rep.lhs.value == 0.25
    assert rep.rhs.value == 21 / 16
    assert rep.verdict == "holds"
    assert rep.extra["specialization_equal"]


def test_hj_lt_huge_threshold(bernoulli_pair):
    rep = hj_lt(bernoulli_pair, 50.0, 50.0, 0.0, 0.0)
    assert rep.lhs.value == 0.0 and rep.verdict == "holds"


def test_hj_lt_heisenberg(catalog):
    inst = catalog["heisenberg"]
    law = FiniteDistribution.uniform(inst, ((1.0, 0.0, 0.0), (0.0, 1.0, 0.0)))
    e = inst.identity
    rep = hj_lt([law] * 3, 0.5, 0.5, e, e)
    assert rep.verdict == "holds"
    assert rep.extra["specialization_equal"]


def test_hj_lt_validates(bernoulli_pair):
    with pytest.raises(ValueError):
        hj_lt(bernoulli_pair, 0.0, 0.3, 0.0, 0.0)


def test_hj_lt_monotone_in_thresholds(bernoulli_pair):
    grid = [0.1, 0.3, 0.5, 0.9, 1.1, 2.0]
    lhs = [hj_lt(bernoulli_pair, t, 0.3, 0.0, 0.0).lhs.value for t in grid]
    assert all(a >= b for a, b in zip(lhs, lhs[1:]))
    lhs = [hj_lt(bernoulli_pair, 0.3, s, 0.0, 0.0).lhs.value for s in grid]
    assert all(a >= b for a, b in zip(lhs, lhs[1:]))


def test_hj_hm_bernoulli(bernoulli_pair):
    rep = hj_hm(bernoulli_pair, 2, 0.3, 0.3, 0.0, 0.0)
    assert rep.lhs.value == 0.25  # P(U > 1.5)
    assert rep.rhs.value == 0.5 * 9 + 0.75
    assert rep.verdict == "holds"
    assert rep.extra["specialization_dominates"]


def test_hj_hm_k1_reduction(bernoulli_pair):
    rep = hj_hm(bernoulli_pair, 1, 0.3, 0.3, 0.0, 0.0)
    # P(U > 2t) <= P(U > t)/P(U <= t) + P(M > s)
    assert rep.lhs.value == 0.75  # P(U > 0.6)
    assert rep.rhs.value == 3.0 + 0.75
    assert rep.verdict == "holds"


def test_hj_hm_vacuous_guard(real_line):
    law = FiniteDistribution.uniform(real_line, (1.0,))
    rep = hj_hm([law] * 2, 2, 0.0, 0.3, 0.0, 0.0)
    assert rep.rhs.value == math.inf and rep.verdict == "holds"


def test_hj_warns_off_hypothesis_instance(catalog):
    cex = catalog["counterexample"]
    law = FiniteDistribution.uniform(cex, ((1, 0), (0, 1)))
    rep = hj_lt([law] * 2, 0.5, 0.5, (1, 0), (1, 0))
    assert rep.warnings  # not strongly left-invariant


# ---------------------------------------------------------------------------
# Johnson-Schechtman and Klass-Nowicki


def test_js_bernoulli(bernoulli_pair):
    rep = js_bound(bernoulli_pair, 2, 0.3)
    assert rep.lhs.value == 0.75  # P(U > 0.9)
    assert rep.rhs.value == 0.75 + 9 / 16
    assert rep.verdict == "holds"
    assert rep.extra["weaker_dominates"]


def test_js_k1_trivial(bernoulli_pair):
    rep = js_bound(bernoulli_pair, 1, 0.3)
    assert rep.verdict == "holds"


def test_js_three_steps(real_line):
    law = FiniteDistribution.uniform(real_line, (0.0, 2.0))
    rep = js_bound([law] * 3, 2, 1.0)
    assert rep.verdict == "holds"


def test_js_rejects_negative_support(real_line):
    law = FiniteDistribution.uniform(real_line, (-1.0, 1.0))
    with pytest.raises(ValueError):
        js_bound([law] * 2, 2, 0.3)


def test_js_rejects_non_real_instances(catalog):
    law = FiniteDistribution.uniform(catalog["euclidean2"], ((0.0, 0.0), (1.0, 0.0)))
    with pytest.raises(HypothesisNotSatisfied):
        js_bound([law] * 2, 2, 0.3)


def test_kn_nonnegative_branch(bernoulli_pair):
    reports = kn_bounds(bernoulli_pair, 1)
    assert [r.name for r in reports] == ["kn-nonneg"]
    rep = reports[0]
    assert rep.lhs.value == 0.75  # P(S_2 >= 1)
    assert rep.params["lam"] == 0.75
    assert rep.rhs.value == pytest.approx(2 * (1 - 0.5), abs=1e-15)
    assert rep.verdict == "holds"


def test_kn_lambda_one_rejected(real_line):
    law = FiniteDistribution.uniform(real_line, (-1.0, 1.0))
    with pytest.raises(LambdaNotLessThanOne):
        kn_bounds([law] * 2, 1)


def test_kn_symmetric_degenerate(real_line):
    law = FiniteDistribution.uniform(real_line, (-0.4, 0.4))
    reports = kn_bounds([law] * 2, 1)
    assert [r.name for r in reports] == ["kn-symmetric"]
    rep = reports[0]
    assert rep.lhs.value == 0.0 and rep.rhs.value == 0.0
    assert rep.verdict == "holds" and rep.slack == 0.0


def test_kn_neither_hypothesis(real_line):
    law = FiniteDistribution.from_pairs(real_line, [(-1.0, 0.25), (2.0, 0.75)])
    with pytest.raises(HypothesisNotSatisfied):
        kn_bounds([law] * 2, 1)


def test_kn_scalar_lemma_values():
    res = kn_scalar_lemma(0.5, 3, 2)
    assert res.bound_holds
    assert res.lhs == pytest.approx((3 * (1 - 0.5 ** (1 / 3))) ** 2 / 2, abs=1e-15)
    res = kn_scalar_lemma(0.0, 4, 3)
    assert res.bound_holds and res.lhs == res.rhs == 0.0
    res = kn_scalar_lemma(0.01, 2, 2)
    assert res.doubled_exceeds
    assert res.doubled_value == pytest.approx(0.01403589216361104, abs=1e-12)
    with pytest.raises(LambdaNotLessThanOne):
        kn_scalar_lemma(1.0, 2, 2)


# ---------------------------------------------------------------------------
# Ottaviani-Skorohod, Mogul'skii, Levy-Ottaviani


def test_os_bernoulli(bernoulli_pair):
    rep = ottaviani_skorohod(bernoulli_pair, 0.5, 0.5, 0.0, 0.0)
    assert rep.lhs.value == 0.75 * 0.5
    assert rep.rhs.value == 0.75
    assert rep.verdict == "holds"


def test_os_trivial(bernoulli_pair):
    rep = ottaviani_skorohod(bernoulli_pair, 10.0, 10.0, 0.0, 0.0)
    assert rep.lhs.value == 0.0 and rep.verdict == "holds"


def test_os_is_mogulskii_specialization(bernoulli_pair):
    alpha, beta = 0.5, 0.5
    os_rep = ottaviani_skorohod(bernoulli_pair, alpha, beta, 0.0, 0.0)
    mog = mogulskii(bernoulli_pair, 1, alpha + beta, beta, "max", 0.0, 0.0)
    assert mog.extra["rhs_threshold"] == alpha
    assert mog.lhs.value == os_rep.lhs.value
    assert mog.rhs.value == os_rep.rhs.value


def test_mogulskii_min_bernoulli(bernoulli_pair):
    rep = mogulskii(bernoulli_pair, 1, 0.0, 1.0, "min", 0.0, 0.0)
    assert rep.lhs.value == 0.5
    assert rep.rhs.value == 0.75
    assert rep.verdict == "holds"


def test_mogulskii_max_negative_threshold(bernoulli_pair):
    rep = mogulskii(bernoulli_pair, 1, 0.25, 1.0, "max", 0.0, 0.0)
    assert rep.rhs.value == 1.0
    assert rep.verdict == "holds"


def test_mogulskii_heisenberg(catalog):
    inst = catalog["heisenberg"]
    law = FiniteDistribution.uniform(inst, ((1.0, 0.0, 0.0), (0.0, 1.0, 0.5)))
    e = inst.identity
    for variant in ("min", "max"):
        rep = mogulskii([law] * 3, 2, 0.5, 0.25, variant, e, e)
        assert rep.verdict == "holds"


def test_mogulskii_validates(bernoulli_pair):
    with pytest.raises(ValueError):
        mogulskii(bernoulli_pair, 3, 0.1, 0.1, "min", 0.0, 0.0)
    with pytest.raises(ValueError):
        mogulskii(bernoulli_pair, 1, 0.1, 0.1, "both", 0.0, 0.0)


def test_levy_ottaviani_bernoulli(bernoulli_pair):
    rep = levy_ottaviani(bernoulli_pair, (0.5, 0.5), 0.0, 0.0)
    assert rep.lhs.value == 0.25
    assert rep.rhs.value == 0.75 + 0.5
    assert rep.extra["p_prime"] == 0.5
    assert rep.verdict == "holds"


def test_levy_ottaviani_billingsley_shape(bernoulli_pair):
    rep = levy_ottaviani(bernoulli_pair, (0.5, 0.5, 0.5), 0.0, 0.0)
    assert rep.extra["parity"] == "odd"
    # for odd length p' is the first-threshold maximum over k
    assert rep.extra["p_prime"] == 0.75
    assert rep.verdict == "holds"


def test_levy_ottaviani_trivial_and_errors(bernoulli_pair):
    rep = levy_ottaviani(bernoulli_pair, (5.0, 5.0), 0.0, 0.0)
    assert rep.lhs.value == 0.0 and rep.verdict == "holds"
    with pytest.raises(ValueError):
        levy_ottaviani(bernoulli_pair, (0.5,), 0.0, 0.0)


# ---------------------------------------------------------------------------
# moments and the rearrangement report


def test_moment_bound_bernoulli(bernoulli_pair):
    rep = moment_bound(bernoulli_pair, 1.0, 0.0, 0.0)
    assert rep.lhs.value == 1.0
    assert rep.extra["u_star"] == 2.0  # U*(1/8)
    assert rep.rhs.value == 22.0
    assert rep.verdict == "holds"


def test_moment_bound_degenerate_identity(catalog):
    monoid = catalog["positive-reals-adjoined"]
    law = FiniteDistribution.uniform(monoid, (monoid.identity,))
    rep = moment_bound([law] * 3, 1.0, monoid.identity, monoid.identity)
    assert rep.lhs.value == 0.0 and rep.verdict == "holds"


def test_moment_bound_affine(catalog):
    inst, dists = affine_pair_walk(catalog)
    rep = moment_bound(dists, 2.0, inst.identity, inst.identity)
    assert rep.verdict == "holds"


def test_moment_bound_validates(bernoulli_pair):
    with pytest.raises(ValueError):
        moment_bound(bernoulli_pair, 0.0, 0.0, 0.0)
    with pytest.raises(ValueError):
        moment_bound(bernoulli_pair, 1.0, 0.0, 0.0, engine=MonteCarlo(seed=1, samples=10))


def test_rearrangement_ratio_bernoulli(bernoulli_pair):
    rep = rearrangement_ratio(bernoulli_pair, 0.2, 0.5, 0.0, 0.0)
    assert (rep.u_star_t, rep.u_star_s, rep.m_star_half_t) == (2.0, 1.0, 1.0)
    expected = 2 * max(math.log(2.0), math.log(math.log(20.0))) / (math.log(5.0) * 2.0)
    assert rep.c1_min == pytest.approx(expected, abs=1e-15)


def test_rearrangement_ratio_edges(bernoulli_pair, real_line):
    rep = rearrangement_ratio(bernoulli_pair, 0.5, 0.5, 0.0, 0.0)
    assert math.isfinite(rep.c1_min)
    # U*(t) = 0 when t exceeds all tail probabilities
    law = FiniteDistribution.uniform(real_line, (0.0,))
    rep = rearrangement_ratio([law] * 2, 0.4, 0.5, 0.0, 0.0)
    assert rep.u_star_t == 0.0 and rep.c1_min == 0.0
    with pytest.raises(ValueError):
        rearrangement_ratio(bernoulli_pair, 0.5, 0.2, 0.0, 0.0)


# ---------------------------------------------------------------------------
# Monte Carlo verdict logic


def test_mc_checker_reports_intervals(bernoulli_pair):
    rep = hj_lt(bernoulli_pair, 0.3, 0.3, 0.0, 0.0,
                engine=MonteCarlo(seed=9, samples=50_000))
    assert rep.engine == {"type": "mc", "seed": 9, "samples": 50_000}
    assert rep.lhs.ci is not None and rep.rhs.ci is not None
    assert rep.verdict in ("holds", "indeterminate")
    assert rep.lhs.ci[0] <= rep.lhs.value <= rep.lhs.ci[1]


def test_mc_checker_indeterminate_on_tight_margin(bernoulli_pair):
    # both sides are certain events: equality cannot be resolved by intervals
    rep = mogulskii(bernoulli_pair, 1, 5.0, 5.0, "min", 0.0, 0.0,
                    engine=MonteCarlo(seed=2, samples=1000))
    assert rep.lhs.value == rep.rhs.value == 1.0
    assert rep.verdict == "indeterminate"


# ---------------------------------------------------------------------------
# violation search


def test_stress_search_clean_on_affine(catalog):
    assert stress_search(catalog["affine"], "hj-lt", seed=3, trials=25) == []


def test_stress_search_clean_on_reals(catalog):
    for ineq in ("hj-general", "js", "kn", "os", "mogulskii-max", "levy-ottaviani", "moment"):
        assert stress_search(catalog["euclidean1"], ineq, seed=4, trials=10) == []


def test_stress_search_counterexample_is_exploratory(catalog):
    # no assertion on the verdicts: the hypothesis fails by design; the
    # contract is a well-formed (possibly nonempty) report list
    found = stress_search(catalog["counterexample"], "hj-lt", seed=5, trials=15)
    for rep in found:
        assert rep.verdict == "violated"
        assert rep.instance == "counterexample"
        assert rep.lhs.value > rep.rhs.value
