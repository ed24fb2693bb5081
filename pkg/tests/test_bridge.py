import numpy as np
import pytest

from conftest import EX_23
from streamclaims import (
    CEA,
    PROPORTIONAL,
    ClaimsRule,
    ProbabilitySystem,
    StreamingProblem,
    WeightSystem,
    induced_claims_rules,
    multi_issue_weighted_proportional,
    pro_rata_rewards,
    probability_system_from_rules,
    prorata_weight_function,
    reallocation_proofness_probe,
    shapley_rewards,
    to_multi_issue,
    total_streams_weight_function,
    two_stage,
    user_centric_rewards,
    usercentric_weight_function,
    verify_equivalences,
    weight_system_from_first_stage,
    weighted_index_rewards,
    weighted_proportional_rule,
)
from streamclaims.bridge import random_total_streams_system, shapley_counterexample
from streamclaims.errors import (
    DomainError,
    InvalidReallocationError,
    PropertyViolationError,
    ValidationError,
)
from streamclaims.generate import random_reallocation

S = StreamingProblem.from_matrix


def test_to_multi_issue(ex23, ex32):
    mi = to_multi_issue(ex23)
    assert mi.shape == (3, 2) and mi.endowment == 2
    assert mi.claims.tolist() == EX_23
    assert mi.agents == ex23.artists and mi.issues == ex23.users
    assert to_multi_issue(ex32).shape == (2, 3) and to_multi_issue(ex32).endowment == 3
    one = to_multi_issue(S([[1]]))
    assert one.shape == (1, 1) and one.endowment == 1
    assert to_multi_issue(S([[1, 4]], 2.5)).endowment == 2


@pytest.mark.parametrize("totals, expected", [
    ((30, 70), (0.3, 0.7)),
    ((1, 1), (0.5, 0.5)),
    ((2, 2, 96), (0.02, 0.02, 0.96)),
])
def test_prorata_weight_function(totals, expected):
    np.testing.assert_allclose(prorata_weight_function()(totals, 2), expected, atol=1e-15)


def test_prorata_weight_function_rejects_zero_totals():
    with pytest.raises(ValidationError):
        prorata_weight_function()((0, 0), 1)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_usercentric_weight_function(k):
    np.testing.assert_allclose(usercentric_weight_function()(np.ones(k), k), np.full(k, 1 / k))


def test_induced_claims_rules():
    rules = induced_claims_rules(ProbabilitySystem.proportional(), 1)
    np.testing.assert_allclose(rules[0].evaluate([10, 20], 1), (1 / 3, 2 / 3))
    rules = induced_claims_rules(ProbabilitySystem.uniform_on_support(), 1)
    np.testing.assert_allclose(rules[0].evaluate([20, 0, 10], 1), (0.5, 0, 0.5))
    for rho in (ProbabilitySystem.max_concentrated(), ProbabilitySystem.random_affinity(3)):
        assert induced_claims_rules(rho, 2)[1].evaluate([3, 0, 1], 0).tolist() == [0, 0, 0]
    with pytest.raises(DomainError):
        rules[0].evaluate([1.5, 2], 1)


def test_probability_system_from_rules():
    rho = probability_system_from_rules(PROPORTIONAL)
    np.testing.assert_allclose(rho(0, np.array([2, 2])), (0.5, 0.5))
    np.testing.assert_allclose(rho(4, np.array([1, 3, 0])), (0.25, 0.75, 0))
    rho = probability_system_from_rules(CEA)
    np.testing.assert_allclose(rho(0, np.array([9, 0, 1, 40])), (1 / 3, 0, 1 / 3, 1 / 3))
    rho = probability_system_from_rules([CEA, PROPORTIONAL])
    np.testing.assert_allclose(rho(1, np.array([1, 3])), (0.25, 0.75))


def test_probability_system_from_rules_flags_bad_rules():
    # ignores claims entirely and splits equally, breaking dummy
    flat = ClaimsRule("flat", lambda c, e: np.full(len(c), e / len(c)))
    with pytest.raises(PropertyViolationError, match="dummy"):
        probability_system_from_rules(flat)(0, np.array([1, 0]))
    # awards a negative amount to the last agent
    skew = ClaimsRule("skew", lambda c, e: np.r_[2 * e, -e])
    with pytest.raises(PropertyViolationError, match="non-negativity"):
        probability_system_from_rules(skew)(0, np.array([1, 1]))


def test_weight_system_from_first_stage(ex23):
    w = weight_system_from_first_stage(CEA, ex23)
    assert w.user_weighted
    np.testing.assert_allclose(w.table, (1 / 30, 1 / 70), atol=1e-15)
    p = S([[3, 1], [1, 5]])
    w = weight_system_from_first_stage(PROPORTIONAL, p)
    np.testing.assert_allclose(w.table, (2 / 10, 2 / 10))
    w = weight_system_from_first_stage(PROPORTIONAL, S([[4], [5]]))
    np.testing.assert_allclose(w.table, (1 / 9,))


def test_weight_system_from_first_stage_needs_positivity():
    # a first stage that starves the last user
    starve = ClaimsRule("starve", lambda c, e: np.r_[e, np.zeros(len(c) - 1)])
    with pytest.raises(PropertyViolationError, match="u2"):
        weight_system_from_first_stage(starve, S([[5, 5]]))


def test_weight_system_from_first_stage_matches_two_stage(rng):
    for _ in range(50):
        t = rng.integers(0, 10, size=(4, 5))
        t[2, t.sum(axis=0) == 0] = 1
        price = float(rng.uniform(0.2, 3))
        p = S(t, price)
        psi = weighted_proportional_rule(rng.uniform(0.1, 5, size=5))
        for rule in (PROPORTIONAL, CEA, psi):
            np.testing.assert_allclose(
                weighted_index_rewards(p, weight_system_from_first_stage(rule, p)).amounts,
                price * two_stage(to_multi_issue(p), rule, PROPORTIONAL).total, atol=1e-9)


def test_total_streams_weight_function(ex23):
    bridged = to_multi_issue(ex23)
    wf = total_streams_weight_function(WeightSystem.constant(1), ex23.n)
    np.testing.assert_allclose(wf((30, 70), 2), (0.3, 0.7))
    np.testing.assert_allclose(multi_issue_weighted_proportional(bridged, wf), (0.2, 0.4, 1.4), atol=1e-12)
    wf = total_streams_weight_function(WeightSystem.inverse_total(), ex23.n)
    np.testing.assert_allclose(wf((30, 70), 2), (0.5, 0.5))
    np.testing.assert_allclose(multi_issue_weighted_proportional(bridged, wf), (1 / 3, 2 / 3, 1), atol=1e-12)
    np.testing.assert_allclose(total_streams_weight_function(random_total_streams_system(1))((17,), 1), (1,))


def test_total_streams_weight_function_requires_total_form():
    with pytest.raises(ValidationError):
        total_streams_weight_function(WeightSystem("any", lambda j, x: 1.0 + x[0]))


def test_total_streams_uses_degenerate_profile():
    seen = []

    def record(j, s):
        seen.append((j, s))
        return 1.0

    w = WeightSystem.from_total_streams(record)
    total_streams_weight_function(w, 3)((4, 6), 10)
    assert seen == [(0, 4), (1, 6)]


def test_shapley_counterexample():
    t, t_prime, s = shapley_counterexample()
    probe = reallocation_proofness_probe(shapley_rewards, t, t_prime, s)
    assert probe.before == pytest.approx(0.5, abs=1e-12)
    assert probe.after == pytest.approx(2 / 3, abs=1e-12)
    assert not probe.passed
    probe = reallocation_proofness_probe(pro_rata_rewards, t, t_prime, s)
    assert probe.passed and probe.before == pytest.approx(probe.after)


def test_probe_grand_coalition(rng):
    p = S(rng.integers(1, 5, size=(3, 4)))
    q = random_reallocation(p, (0, 1, 2), rng)
    for method in (pro_rata_rewards, user_centric_rewards, shapley_rewards):
        probe = reallocation_proofness_probe(method, p, q, (0, 1, 2))
        assert probe.passed and probe.before == pytest.approx(4)


def test_probe_rejects_invalid_pairs():
    t, t_prime, _ = shapley_counterexample()
    with pytest.raises(InvalidReallocationError):
        reallocation_proofness_probe(shapley_rewards, t, t_prime, (0,))
    with pytest.raises(InvalidReallocationError):
        reallocation_proofness_probe(shapley_rewards, t, S([[10], [10], [11]]), (0, 1))
    with pytest.raises(InvalidReallocationError):
        reallocation_proofness_probe(shapley_rewards, t, t.with_price(2), (0, 1))
    with pytest.raises(InvalidReallocationError):
        reallocation_proofness_probe(shapley_rewards, t, t_prime, ())


def test_probe_on_multi_issue_problems(rng):
    for _ in range(30):
        p = S(rng.integers(1, 6, size=(4, 3)))
        q = random_reallocation(p, (1, 3), rng)
        for wf in (prorata_weight_function(), usercentric_weight_function()):
            probe = reallocation_proofness_probe(lambda x: multi_issue_weighted_proportional(x, wf),
                                                 to_multi_issue(p), to_multi_issue(q), (1, 3))
            assert probe.passed


@pytest.mark.parametrize("matrix", [EX_23, [[1, 1, 1], [1, 1, 95]], [[1]]])
def test_verify_examples_pass(matrix):
    report = verify_equivalences(S(matrix))
    assert report.passed, [r for r in report.records if not r.passed]
    assert report.record("shapley=two_stage[cea,cea]").deviation == 0


def test_verify_records_failures_instead_of_raising(monkeypatch):
    import streamclaims.bridge as bridge
    monkeypatch.setattr(bridge, "shapley_rewards", lambda p: np.zeros(p.n))
    report = bridge.verify_equivalences(S(EX_23))
    assert not report.passed
    assert not report.record("shapley=two_stage[cea,cea]").passed
    monkeypatch.setattr(bridge, "pro_rata_rewards", lambda p: 1 / 0)
    report = bridge.verify_equivalences(S(EX_23))
    rec = report.record("prorata=two_stage[prop,prop]")
    assert not rec.passed and "ZeroDivisionError" in rec.error


def test_bridge_is_feasible_at_any_price():
    # one play, price 2: a money-valued endowment of 2 would exceed the single claim
    p = S([[1]], price_per_user=2.0)
    assert two_stage(to_multi_issue(p), CEA, CEA).total.tolist() == [1.0]
    p = S([[1, 0], [0, 3]], price_per_user=4.0)
    np.testing.assert_allclose(4.0 * two_stage(to_multi_issue(p), CEA, PROPORTIONAL).total,
                               user_centric_rewards(p).amounts)


def test_verify_normalises_price():
    assert verify_equivalences(S([[1, 2], [3, 0]], price_per_user=7.5)).passed


def test_verify_tolerance_zero_is_strict():
    report = verify_equivalences(S([[3, 7, 1], [5, 2, 9], [1, 1, 4]]), tolerance=0.0)
    assert all(r.passed == (r.deviation == 0) for r in report.records)


def test_verify_report_dict(ex23):
    d = verify_equivalences(ex23).as_dict()
    assert d["passed"] and d["summary"]["failed"] == 0
    assert d["summary"]["checks"] == len(d["checks"])
    assert "evidence" in d["note"]
