"""Streaming problems viewed as multi-issue claims problems.

Artists become agents, users become issues, plays become claims and the
pooled subscription revenue becomes the endowment.  Under that reading the
streaming indices coincide with familiar claims rules:

* pro-rata      = two-stage (prop, prop) = weighted proportional with issue shares
* user-centric  = two-stage (cea, prop)  = weighted proportional with uniform issue weights
* Shapley       = two-stage (cea, cea), and no weighted proportional rule
* probabilistic indices = two-stage (cea, phi) with phi non-negative and dummy
* user-weighted indices = two-stage (psi, prop) with psi positive
* total-streams-weighted indices = weighted proportional rules

This module builds both sides of each identity and :func:`verify_equivalences`
compares them numerically on a given instance.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .claims import CEA, PROPORTIONAL, ClaimsProblem, ClaimsRule, weighted_proportional_rule
from .errors import DomainError, InvalidReallocationError, PropertyViolationError, ValidationError
from .multi_issue import (
    IssueWeightFunction,
    MultiIssueClaimsProblem,
    multi_issue_weighted_proportional,
    two_stage,
)
from .streaming import (
    ProbabilitySystem,
    StreamingProblem,
    WeightSystem,
    pro_rata_rewards,
    probabilistic_index_rewards,
    shapley_rewards,
    user_centric_rewards,
    weighted_index_rewards,
)

PROPERTY_TOL = 1e-9


def to_multi_issue(problem: StreamingProblem) -> MultiIssueClaimsProblem:
    """Artists as agents, users as issues, plays as claims, ``m`` subscriptions as endowment.

    The endowment is counted in subscriptions, not money: ``price * m`` can
    exceed the total number of plays, which would make the claims problem
    infeasible.  Multiply awards by ``price_per_user`` to get money.
    """
    return MultiIssueClaimsProblem(problem.artists, problem.users, problem.streams, float(problem.m))


# -- issue weight functions ---------------------------------------------------------

def _issue_shares(totals, endowment):
    total = totals.sum()
    if total <= 0:
        raise ValidationError("issue totals must have a positive sum")
    return totals / total


def prorata_weight_function() -> IssueWeightFunction:
    """Issue weights proportional to issue totals."""
    return IssueWeightFunction("prorata", _issue_shares)


def usercentric_weight_function() -> IssueWeightFunction:
    """Uniform weights over issues."""
    return IssueWeightFunction("uniform", lambda totals, endowment: np.full(totals.size, 1.0 / totals.size))


def total_streams_weight_function(w: WeightSystem, n_artists: int = 1) -> IssueWeightFunction:
    """Issue weights ``w*(j, C_j) C_j / sum_k w*(k, C_k) C_k`` for a total-streams weight system.

    ``w*(j, s)`` evaluates ``w`` on the degenerate profile where the first of
    ``n_artists`` artists gets all ``s`` plays.
    """
    if not w.total_streams:
        raise ValidationError(f"weight system {w.name!r} is not of total-streams form")
    if n_artists < 1:
        raise ValidationError("n_artists must be at least 1")

    def w_star(j: int, s: int) -> float:
        degenerate = np.zeros(n_artists, dtype=np.int64)
        degenerate[0] = s
        return w(j, degenerate)

    def weights(totals, endowment):
        mass = np.array([w_star(j, _as_count(c)) * c for j, c in enumerate(totals)])
        return mass / mass.sum()

    return IssueWeightFunction(f"total-streams[{w.name}]", weights)


def _as_count(value: float) -> int:
    if value < 0 or value != math.floor(value):
        raise DomainError(f"{value} is not a nonnegative integer play count")
    return int(value)


# -- converse constructions ----------------------------------------------------------

def _as_profile(claims) -> np.ndarray:
    c = np.asarray(claims, dtype=float)
    if np.any(c < 0) or np.any(c != np.floor(c)):
        raise DomainError(f"claims {c.tolist()} are not a vector of play counts")
    return c.astype(np.int64)


def induced_claims_rules(rho: ProbabilitySystem, m: int) -> list[ClaimsRule]:
    """For each user position ``j``, the claims rule ``(c, E) -> rho(j, c) * E``."""
    def make(j: int) -> ClaimsRule:
        return ClaimsRule(f"{rho.name}@{j}", lambda claims, endowment: rho(j, _as_profile(claims)) * endowment)
    return [make(j) for j in range(m)]


def _check_unit_award(rule: ClaimsRule, user: int, profile: np.ndarray, award: np.ndarray) -> None:
    where = f"rule {rule.name!r} for user {user} at claims {profile.tolist()}"
    if np.any(award < -PROPERTY_TOL):
        raise PropertyViolationError(f"non-negativity fails: {where} -> {award.tolist()}")
    if np.any(np.abs(award[profile == 0]) > PROPERTY_TOL):
        raise PropertyViolationError(f"dummy fails: {where} -> {award.tolist()}")
    if abs(award.sum() - 1.0) > PROPERTY_TOL:
        raise PropertyViolationError(f"efficiency fails: {where} -> {award.tolist()}")


def probability_system_from_rules(phi: ClaimsRule | Sequence[ClaimsRule]) -> ProbabilitySystem:
    """``rho(j, y) = phi[j](y, 1)``; properties are checked each time it is evaluated."""
    rules = phi if not isinstance(phi, ClaimsRule) else None

    def rho(j, y):
        rule = phi if rules is None else rules[j]
        award = rule.evaluate(y, 1.0)
        _check_unit_award(rule, j, np.asarray(y), award)
        return award

    name = phi.name if rules is None else "+".join(sorted({r.name for r in rules}))
    return ProbabilitySystem(f"from-rules[{name}]", rho)


def weight_system_from_first_stage(psi: ClaimsRule, problem: StreamingProblem) -> WeightSystem:
    """Per-user constant weights ``psi_j(users, T, m) / T_j`` for this instance."""
    totals = problem.streams.sum(axis=0).astype(float)
    first = psi(ClaimsProblem(problem.users, totals, float(problem.m))).amounts
    zero = [problem.users[j] for j in np.flatnonzero(first <= 0)]
    if zero:
        raise PropertyViolationError(f"positivity fails: {psi.name!r} awards nothing to users {zero}")
    return WeightSystem.from_table(first / totals, f"first-stage[{psi.name}]")


# -- reallocation-proofness --------------------------------------------------------

@dataclass(frozen=True)
class ReallocationProbe:
    coalition: tuple
    before: float
    after: float
    passed: bool

    @property
    def deviation(self) -> float:
        return abs(self.before - self.after)


def _matrix_and_endowment(problem):
    if isinstance(problem, StreamingProblem):
        return problem.streams.astype(float), problem.revenue
    if isinstance(problem, MultiIssueClaimsProblem):
        return problem.claims, problem.endowment
    raise ValidationError(f"unsupported problem type {type(problem).__name__}")


def reallocation_proofness_probe(method: Callable, problem, reallocated, coalition: Iterable[int],
                                 tolerance: float = 1e-9) -> ReallocationProbe:
    """Compare the coalition's total award before and after reshuffling its claims.

    ``coalition`` holds agent positions.  ``method`` maps a problem to a reward
    vector (anything with ``amounts``, or an array).
    """
    s = tuple(sorted(set(coalition)))
    c0, e0 = _matrix_and_endowment(problem)
    c1, e1 = _matrix_and_endowment(reallocated)
    if type(problem) is not type(reallocated) or c0.shape != c1.shape:
        raise InvalidReallocationError("problems must have the same type and shape")
    if abs(e0 - e1) > 1e-12 * max(1.0, e0):
        raise InvalidReallocationError(f"endowments differ: {e0} vs {e1}")
    if not s or s[0] < 0 or s[-1] >= c0.shape[0]:
        raise InvalidReallocationError(f"coalition {s} is not a nonempty set of agent positions")
    outside = np.setdiff1d(np.arange(c0.shape[0]), s)
    if not np.array_equal(c0[outside], c1[outside]):
        raise InvalidReallocationError("claims of agents outside the coalition changed")
    if not np.allclose(c0[list(s)].sum(axis=0), c1[list(s)].sum(axis=0), rtol=0, atol=1e-12):
        raise InvalidReallocationError("coalition totals per issue changed")

    def coalition_sum(p) -> float:
        out = method(p)
        amounts = np.asarray(getattr(out, "amounts", out), dtype=float)
        return float(amounts[list(s)].sum())

    before, after = coalition_sum(problem), coalition_sum(reallocated)
    return ReallocationProbe(s, before, after, abs(before - after) <= tolerance)


def shapley_counterexample() -> tuple[StreamingProblem, StreamingProblem, tuple]:
    """One user, plays (20, 0, 10) reshuffled to (10, 10, 10) within artists {0, 1}."""
    t = StreamingProblem.from_matrix([[20], [0], [10]])
    t_prime = StreamingProblem.from_matrix([[10], [10], [10]])
    return t, t_prime, (0, 1)


# -- verification harness ------------------------------------------------------------

@dataclass(frozen=True)
class CheckRecord:
    name: str
    instance: str
    deviation: float
    passed: bool
    error: str | None = None

    def as_dict(self) -> dict:
        out = {"name": self.name, "instance": self.instance,
               "deviation": self.deviation if math.isfinite(self.deviation) else None,
               "passed": self.passed}
        if self.error is not None:
            out["error"] = self.error
        return out


@dataclass(frozen=True)
class EquivalenceReport:
    instance: str
    tolerance: float
    records: tuple = field(default_factory=tuple)
    note: str = "checks over sampled rule and index families are evidence, not proof"

    @property
    def n_passed(self) -> int:
        return sum(r.passed for r in self.records)

    @property
    def n_failed(self) -> int:
        return len(self.records) - self.n_passed

    @property
    def passed(self) -> bool:
        return self.n_failed == 0

    @property
    def max_deviation(self) -> float:
        return max((r.deviation for r in self.records), default=0.0)

    def record(self, name: str) -> CheckRecord:
        for r in self.records:
            if r.name == name:
                return r
        raise KeyError(name)

    def as_dict(self) -> dict:
        return {
            "instance": self.instance,
            "tolerance": self.tolerance,
            "passed": self.passed,
            "summary": {"checks": len(self.records), "passed": self.n_passed, "failed": self.n_failed},
            "note": self.note,
            "checks": [r.as_dict() for r in self.records],
        }


def _amounts(x) -> np.ndarray:
    if hasattr(x, "amounts"):
        return np.asarray(x.amounts, dtype=float)
    if hasattr(x, "total"):
        return np.asarray(x.total, dtype=float)
    return np.asarray(x, dtype=float)


def max_deviation(a, b) -> float:
    a, b = _amounts(a), _amounts(b)
    if a.shape != b.shape:
        return math.inf
    return float(np.max(np.abs(a - b))) if a.size else 0.0


def sample_probability_systems(seed: int = 0, random_systems: int = 3) -> list[ProbabilitySystem]:
    fixed = [ProbabilitySystem.proportional(), ProbabilitySystem.uniform_on_support(),
             ProbabilitySystem.max_concentrated()]
    return fixed + [ProbabilitySystem.random_affinity(seed * 1000 + k) for k in range(random_systems)]


def sample_first_stage_rules(m: int, seed: int = 0) -> list[ClaimsRule]:
    weights = np.random.default_rng([seed, m, 3]).uniform(0.1, 10.0, size=m)
    return [PROPORTIONAL, CEA, weighted_proportional_rule(weights, "random-weight-prop")]


def random_total_streams_system(seed: int) -> WeightSystem:
    """Seeded positive table over (user, total plays)."""
    def w(j: int, s: int) -> float:
        return float(np.random.default_rng([seed, j, s]).uniform(0.1, 10.0))
    return WeightSystem.from_total_streams(w, f"random-table({seed})")


def sample_total_streams_systems(seed: int = 0) -> list[WeightSystem]:
    return [WeightSystem.constant(1.0), WeightSystem.inverse_total(), random_total_streams_system(seed)]


def verify_equivalences(problem: StreamingProblem, tolerance: float = 1e-9, seed: int = 0,
                        random_systems: int = 3, instance: str | None = None) -> EquivalenceReport:
    """Check every streaming / claims identity on ``problem``.

    The identities are stated for unit subscriptions, so the check runs on the
    problem with ``price_per_user = 1``.  Failures, including exceptions, are
    recorded rather than raised.
    """
    unit = problem.with_price(1.0)
    bridged = to_multi_issue(unit)
    label = instance or f"{unit.n}x{unit.m}:{unit.streams.tolist()}"
    records: list[CheckRecord] = []

    def check(name: str, lhs: Callable, rhs: Callable) -> None:
        try:
            dev = max_deviation(lhs(), rhs())
            records.append(CheckRecord(name, label, dev, dev <= tolerance))
        except Exception as exc:  # recorded, never raised
            records.append(CheckRecord(name, label, math.inf, False, f"{type(exc).__name__}: {exc}"))

    check("prorata=weighted_prop[prorata]",
          lambda: pro_rata_rewards(unit),
          lambda: multi_issue_weighted_proportional(bridged, prorata_weight_function()))
    check("user_centric=weighted_prop[uniform]",
          lambda: user_centric_rewards(unit),
          lambda: multi_issue_weighted_proportional(bridged, usercentric_weight_function()))
    check("prorata=two_stage[prop,prop]",
          lambda: pro_rata_rewards(unit), lambda: two_stage(bridged, PROPORTIONAL, PROPORTIONAL))
    check("user_centric=two_stage[cea,prop]",
          lambda: user_centric_rewards(unit), lambda: two_stage(bridged, CEA, PROPORTIONAL))
    check("shapley=two_stage[cea,cea]",
          lambda: shapley_rewards(unit), lambda: two_stage(bridged, CEA, CEA))
    try:
        records.extend(_counterexample_records(tolerance))
    except Exception as exc:
        records.append(CheckRecord("shapley_not_reallocation_proof", "counterexample", math.inf, False,
                                   f"{type(exc).__name__}: {exc}"))

    for rho in sample_probability_systems(seed, random_systems):
        check(f"probabilistic[{rho.name}]=two_stage[cea,induced]",
              lambda rho=rho: probabilistic_index_rewards(unit, rho),
              lambda rho=rho: two_stage(bridged, CEA, induced_claims_rules(rho, unit.m)))
        check(f"round_trip[{rho.name}]",
              lambda rho=rho: _rho_table(unit, rho),
              lambda rho=rho: _rho_table(unit, probability_system_from_rules(induced_claims_rules(rho, unit.m))))
    for phi in (PROPORTIONAL, CEA):
        check(f"two_stage[cea,{phi.name}]=probabilistic[from_rules]",
              lambda phi=phi: two_stage(bridged, CEA, phi),
              lambda phi=phi: probabilistic_index_rewards(unit, probability_system_from_rules(phi)))

    for psi in sample_first_stage_rules(unit.m, seed):
        check(f"two_stage[{psi.name},prop]=user_weighted[first_stage]",
              lambda psi=psi: two_stage(bridged, psi, PROPORTIONAL),
              lambda psi=psi: weighted_index_rewards(unit, weight_system_from_first_stage(psi, unit)))
    table = np.random.default_rng([seed, unit.m, 4]).uniform(0.1, 10.0, size=unit.m)
    check("user_weighted[random-table]=two_stage[weighted-prop,prop]",
          lambda: weighted_index_rewards(unit, WeightSystem.from_table(table)),
          lambda: two_stage(bridged, weighted_proportional_rule(table), PROPORTIONAL))

    for w in sample_total_streams_systems(seed):
        check(f"weighted[{w.name}]=weighted_prop[total_streams]",
              lambda w=w: weighted_index_rewards(unit, w),
              lambda w=w: multi_issue_weighted_proportional(bridged, total_streams_weight_function(w, unit.n)))

    check("cea_first_stage_level=price",
          lambda: [two_stage(bridged, CEA, PROPORTIONAL).first_stage_level],
          lambda: [unit.price_per_user])
    return EquivalenceReport(label, tolerance, tuple(records))


def _rho_table(problem: StreamingProblem, rho: ProbabilitySystem) -> np.ndarray:
    return np.column_stack([rho(j, problem.streams[:, j]) for j in range(problem.m)])


def _counterexample_records(tolerance: float) -> list[CheckRecord]:
    t, t_prime, s = shapley_counterexample()
    label = "counterexample:(20,0,10)->(10,10,10),S={0,1}"
    out = []
    probe = reallocation_proofness_probe(shapley_rewards, t, t_prime, s, tolerance)
    dev = max(abs(probe.before - 0.5), abs(probe.after - 2.0 / 3.0))
    out.append(CheckRecord("shapley_not_reallocation_proof", label, dev,
                           (not probe.passed) and dev <= tolerance))
    probe = reallocation_proofness_probe(pro_rata_rewards, t, t_prime, s, tolerance)
    out.append(CheckRecord("prorata_reallocation_proof", label, probe.deviation, probe.passed))
    for wf in (prorata_weight_function(), usercentric_weight_function()):
        probe = reallocation_proofness_probe(
            lambda p, wf=wf: multi_issue_weighted_proportional(p, wf),
            to_multi_issue(t), to_multi_issue(t_prime), s, tolerance)
        out.append(CheckRecord(f"weighted_prop[{wf.name}]_reallocation_proof", label,
                               probe.deviation, probe.passed))
    return out
