"""The acceptance suite: one test per criterion, at the stated scales and
tolerances.  Each test prints its PASS/FAIL line (visible with -s or in the
captured output) and asserts the criterion."""

from sglab import acceptance

SEED = 1
TRIALS = 50


def _check(result):
    print(result.line())
    assert result.passed, result.detail


def test_criterion_1_inequality_battery():
    _check(acceptance.criterion_1_battery(SEED, TRIALS))


def test_criterion_2_specialization_identities():
    _check(acceptance.criterion_2_specializations(SEED, TRIALS))


def test_criterion_3_invariance_classification():
    _check(acceptance.criterion_3_invariance(SEED))


def test_criterion_4_identity_adjunction():
    _check(acceptance.criterion_4_embedding(SEED + 1))


def test_criterion_5_analytic_lemmas():
    _check(acceptance.criterion_5_analytic_lemmas(SEED + 2))


def test_criterion_6_engine_agreement():
    _check(acceptance.criterion_6_engine_agreement(SEED + 3, pairs=100, samples=100_000))


def test_criterion_7_rearrangement_values():
    _check(acceptance.criterion_7_rearrangement())


def test_criterion_8_convergence_diagnostic():
    _check(acceptance.criterion_8_levy_diagnostic(SEED + 4, samples=10_000))


def test_criterion_9_violation_search():
    _check(acceptance.criterion_9_stress(SEED + 5, trials_per_inequality=200))
