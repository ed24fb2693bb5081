"""Multi-issue claims problems: weighted proportional rules and two-stage rules."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence, Union

import numpy as np

from .claims import (
    ClaimsProblem,
    ClaimsRule,
    _frozen,
    efficiency_tolerance,
)
from .errors import (
    InvalidWeightError,
    StageFeasibilityError,
    UndefinedDivisionError,
    ValidationError,
)

DISTRIBUTION_TOL = 1e-9


@dataclass(frozen=True)
class MultiIssueClaimsProblem:
    agents: tuple
    issues: tuple
    claims: np.ndarray  # shape (agents, issues)
    endowment: float

    def __post_init__(self):
        agents, issues = tuple(self.agents), tuple(self.issues)
        c = np.asarray(self.claims, dtype=float)
        if c.shape != (len(agents), len(issues)):
            raise ValidationError(
                f"claims matrix has shape {c.shape}, expected {(len(agents), len(issues))}")
        if not np.all(np.isfinite(c)) or np.any(c < 0):
            raise ValidationError("claims matrix entries must be finite and nonnegative")
        e = float(self.endowment)
        if not np.isfinite(e) or e < 0:
            raise ValidationError(f"endowment must be nonnegative, got {e}")
        if c.sum() < e - efficiency_tolerance(e):
            raise ValidationError(f"infeasible problem: total claims {c.sum()} < endowment {e}")
        for label, ids in (("agent", agents), ("issue", issues)):
            if len(set(ids)) != len(ids):
                raise ValidationError(f"{label} identifiers must be unique")
        object.__setattr__(self, "agents", agents)
        object.__setattr__(self, "issues", issues)
        object.__setattr__(self, "claims", _frozen(c))
        object.__setattr__(self, "endowment", e)

    @classmethod
    def from_matrix(cls, claims, endowment: float) -> "MultiIssueClaimsProblem":
        c = np.asarray(claims, dtype=float)
        return cls(tuple(range(c.shape[0])), tuple(range(c.shape[1])), c, endowment)

    @property
    def shape(self) -> tuple[int, int]:
        return self.claims.shape


def issue_totals(problem: MultiIssueClaimsProblem) -> np.ndarray:
    """Column sums of the claims matrix, one per issue."""
    return problem.claims.sum(axis=0)


@dataclass(frozen=True)
class IssueWeightFunction:
    """Maps ``(issue totals, endowment)`` to a probability distribution over issues."""

    name: str
    func: Callable[[np.ndarray, float], Sequence[float]] = field(repr=False)

    def __call__(self, totals, endowment: float) -> np.ndarray:
        totals = np.asarray(totals, dtype=float)
        w = np.asarray(self.func(totals, float(endowment)), dtype=float)
        if w.shape != totals.shape:
            raise InvalidWeightError(f"{self.name}: expected {totals.size} issue weights, got {w.shape}")
        if (not np.all(np.isfinite(w)) or np.any(w < -DISTRIBUTION_TOL)
                or np.any(w > 1 + DISTRIBUTION_TOL) or abs(w.sum() - 1) > DISTRIBUTION_TOL):
            raise InvalidWeightError(f"{self.name}: issue weights {w.tolist()} are not a distribution")
        return w


def multi_issue_weighted_proportional(problem: MultiIssueClaimsProblem,
                                      w: IssueWeightFunction) -> np.ndarray:
    """Award agent ``i`` the sum over issues of ``c_ij / C_j * w_j(C, E) * E``."""
    totals = issue_totals(problem)
    if np.any(totals == 0):
        bad = [problem.issues[j] for j in np.flatnonzero(totals == 0)]
        raise UndefinedDivisionError(f"issues with zero total claims: {bad}")
    weights = w(totals, problem.endowment)
    return (problem.claims / totals) @ (weights * problem.endowment)


RuleMap = Union[ClaimsRule, Sequence[ClaimsRule], Mapping[object, ClaimsRule]]


def per_issue(rule: ClaimsRule, issues: Sequence) -> dict:
    """The same second-stage rule for every issue."""
    return {j: rule for j in issues}


def _resolve(phi: RuleMap, issues: tuple) -> list[ClaimsRule]:
    if isinstance(phi, ClaimsRule):
        return [phi] * len(issues)
    if isinstance(phi, Mapping):
        missing = [j for j in issues if j not in phi]
        if missing:
            raise ValidationError(f"no second-stage rule for issues {missing}")
        return [phi[j] for j in issues]
    rules = list(phi)
    if len(rules) != len(issues):
        raise ValidationError(f"{len(rules)} second-stage rules for {len(issues)} issues")
    return rules


@dataclass(frozen=True)
class TwoStageBreakdown:
    agents: tuple
    issues: tuple
    first_stage: np.ndarray    # award to each issue
    second_stage: np.ndarray   # (agents, issues) awards
    total: np.ndarray          # per-agent totals
    first_stage_level: float | None = None
    second_stage_levels: tuple = ()  # per-issue rule level (None if the rule has none)

    def __post_init__(self):
        for name in ("first_stage", "second_stage", "total"):
            object.__setattr__(self, name, _frozen(getattr(self, name)))


def two_stage(problem: MultiIssueClaimsProblem, psi: ClaimsRule, phi: RuleMap) -> TwoStageBreakdown:
    """Split the endowment among issues with ``psi``, then each issue's share with ``phi[j]``."""
    rules = _resolve(phi, problem.issues)
    totals = issue_totals(problem)
    first = psi(ClaimsProblem(problem.issues, totals, problem.endowment))
    second = np.zeros(problem.shape)
    levels = []
    for j, rule in enumerate(rules):
        share = float(first.amounts[j])
        column = problem.claims[:, j]
        if share < 0 or share > totals[j] + efficiency_tolerance(share):
            raise StageFeasibilityError(
                f"issue {problem.issues[j]!r}: first-stage award {share} is outside [0, {totals[j]}]")
        share = min(share, totals[j])
        allocation = rule(ClaimsProblem(problem.agents, column, share))
        second[:, j] = allocation.amounts
        levels.append(allocation.level)
    return TwoStageBreakdown(problem.agents, problem.issues, first.amounts, second,
                             second.sum(axis=1), first.level, tuple(levels))
