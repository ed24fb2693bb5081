"""Unidimensional claims problems and the proportional / CEA family of rules.

A claims problem divides an endowment ``E`` among agents whose claims add up
to at least ``E``.  Rules are wrapped in :class:`ClaimsRule` so that two-stage
composition and property probes can treat them uniformly.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import UndefinedDivisionError, ValidationError

FEASIBILITY_RTOL = 1e-9


def _frozen(values, dtype=float) -> np.ndarray:
    arr = np.array(values, dtype=dtype)
    arr.setflags(write=False)
    return arr


def efficiency_tolerance(endowment: float) -> float:
    return FEASIBILITY_RTOL * max(1.0, float(endowment))


def check_claims(claims, endowment: float) -> tuple[np.ndarray, float]:
    """Validate a claims vector / endowment pair and return them as float array and float."""
    c = np.asarray(claims, dtype=float)
    if c.ndim != 1:
        raise ValidationError(f"claims must be a vector, got shape {c.shape}")
    if not np.all(np.isfinite(c)) or np.any(c < 0):
        raise ValidationError(f"claims must be finite and nonnegative: {c.tolist()}")
    e = float(endowment)
    if not np.isfinite(e) or e < 0:
        raise ValidationError(f"endowment must be finite and nonnegative, got {e}")
    if c.sum() < e - efficiency_tolerance(e):
        raise ValidationError(f"infeasible problem: sum of claims {c.sum()} < endowment {e}")
    return c, e


@dataclass(frozen=True)
class ClaimsProblem:
    agents: tuple
    claims: np.ndarray
    endowment: float

    def __post_init__(self):
        agents = tuple(self.agents)
        c, e = check_claims(self.claims, self.endowment)
        if len(agents) != len(c):
            raise ValidationError(f"{len(agents)} agents but {len(c)} claims")
        if len(set(agents)) != len(agents):
            raise ValidationError("agent identifiers must be unique")
        object.__setattr__(self, "agents", agents)
        object.__setattr__(self, "claims", _frozen(c))
        object.__setattr__(self, "endowment", e)

    @classmethod
    def from_claims(cls, claims: Sequence[float], endowment: float) -> "ClaimsProblem":
        """Build a problem whose agents are labelled ``0..n-1``."""
        return cls(tuple(range(len(claims))), claims, endowment)

    @property
    def n(self) -> int:
        return len(self.agents)


@dataclass(frozen=True)
class Allocation:
    agents: tuple
    amounts: np.ndarray
    level: Optional[float] = None  # CEA water level, when the rule has one

    def __post_init__(self):
        object.__setattr__(self, "agents", tuple(self.agents))
        object.__setattr__(self, "amounts", _frozen(self.amounts))

    @property
    def total(self) -> float:
        return float(self.amounts.sum())

    def as_dict(self) -> dict:
        return dict(zip(self.agents, self.amounts.tolist()))


@dataclass(frozen=True)
class ClaimsRule:
    """A named claims rule.

    ``award`` maps ``(claims array, endowment)`` to an award array; ``level``
    optionally returns an auxiliary scalar (the CEA water level).
    """

    name: str
    award: Callable[[np.ndarray, float], np.ndarray] = field(repr=False)
    level: Optional[Callable[[np.ndarray, float], float]] = field(default=None, repr=False)

    def __call__(self, problem: ClaimsProblem) -> Allocation:
        amounts = self.award(problem.claims, problem.endowment)
        lam = None if self.level is None else self.level(problem.claims, problem.endowment)
        return Allocation(problem.agents, amounts, lam)

    def evaluate(self, claims, endowment: float) -> np.ndarray:
        c, e = check_claims(claims, endowment)
        return np.asarray(self.award(c, e), dtype=float)


# -- proportional -------------------------------------------------------------

def _proportional_award(claims: np.ndarray, endowment: float) -> np.ndarray:
    total = claims.sum()
    if total == 0:
        return np.zeros_like(claims, dtype=float)
    return claims / total * endowment


def _weighted_award(claims: np.ndarray, endowment: float, weights: np.ndarray) -> np.ndarray:
    weighted = weights * claims
    total = weighted.sum()
    if total == 0:
        if endowment > 0:
            raise UndefinedDivisionError("weighted claims sum to zero but the endowment is positive")
        return np.zeros_like(claims, dtype=float)
    return weighted / total * endowment


def _check_weights(weights, n: int) -> np.ndarray:
    w = np.asarray(weights, dtype=float)
    if w.shape != (n,):
        raise ValidationError(f"expected {n} weights, got shape {w.shape}")
    if not np.all(np.isfinite(w)) or np.any(w <= 0):
        raise ValidationError(f"weights must be strictly positive: {w.tolist()}")
    return w


def proportional(problem: ClaimsProblem) -> Allocation:
    """Awards proportional to claims; the zero vector when all claims are zero."""
    return PROPORTIONAL(problem)


def weighted_proportional(problem: ClaimsProblem, weights: Sequence[float]) -> Allocation:
    """Awards proportional to ``weights * claims``."""
    return weighted_proportional_rule(weights)(problem)


def weighted_proportional_rule(weights: Sequence[float], name: str = "weighted-prop") -> ClaimsRule:
    w = _check_weights(weights, len(weights))
    w.setflags(write=False)

    def award(claims, endowment):
        return _weighted_award(claims, endowment, _check_weights(w, len(claims)))

    return ClaimsRule(name, award)


# -- constrained equal awards ---------------------------------------------------

def cea_lambda(claims, endowment: float) -> float:
    """Water level ``lam`` with ``sum(min(lam, c_i)) == endowment``.

    Sorted water-filling: walk the claims in ascending order, fully honouring
    each one while the residual endowment split over the remaining agents
    still exceeds it.
    """
    c, e = check_claims(claims, endowment)
    if c.size == 0:
        return 0.0
    ordered = np.sort(c)
    remaining = e
    n = ordered.size
    for k, claim in enumerate(ordered):
        share = remaining / (n - k)
        if share <= claim:
            return float(share)
        remaining -= claim
    # endowment equals total claims (up to rounding): everyone fully honoured
    return float(ordered[-1])


def _cea_award(claims: np.ndarray, endowment: float) -> np.ndarray:
    return np.minimum(cea_lambda(claims, endowment), claims)


def cea(problem: ClaimsProblem) -> Allocation:
    """Constrained equal awards."""
    return CEA(problem)


PROPORTIONAL = ClaimsRule("prop", _proportional_award)
CEA = ClaimsRule("cea", _cea_award, level=cea_lambda)


# -- property probe ----------------------------------------------------------------

@dataclass(frozen=True)
class PropertyWitness:
    problem: ClaimsProblem
    agent: int
    award: float


@dataclass(frozen=True)
class PropertyResult:
    name: str
    passed: bool
    checked: int
    witness: Optional[PropertyWitness] = None


@dataclass(frozen=True)
class RulePropertyReport:
    rule: str
    nonnegativity: PropertyResult
    dummy: PropertyResult
    positivity: PropertyResult
    claim_boundedness: PropertyResult

    @property
    def results(self) -> tuple:
        return (self.nonnegativity, self.dummy, self.positivity, self.claim_boundedness)


def probe_rule_properties(rule: ClaimsRule, instances: Sequence[ClaimsProblem],
                          atol: float = 0.0) -> RulePropertyReport:
    """Check non-negativity, dummy, positivity and claim-boundedness on ``instances``.

    A pass only means no counterexample was found among the supplied problems.
    Positivity is only asserted on problems with a positive endowment.
    """
    found = {"nonnegativity": None, "dummy": None, "positivity": None, "claim_boundedness": None}
    counts = dict.fromkeys(found, 0)
    for problem in instances:
        x = rule(problem).amounts
        for i, (c, a) in enumerate(zip(problem.claims, x)):
            checks = {
                "nonnegativity": a >= -atol,
                "dummy": c != 0 or abs(a) <= atol,
                "claim_boundedness": a <= c + atol,
            }
            if problem.endowment > 0 and c > 0:
                checks["positivity"] = a > 0
            for key, ok in checks.items():
                counts[key] += 1
                if not ok and found[key] is None:
                    found[key] = PropertyWitness(problem, i, float(a))
    return RulePropertyReport(
        rule.name,
        *(PropertyResult(key, found[key] is None, counts[key], found[key])
          for key in ("nonnegativity", "dummy", "positivity", "claim_boundedness")),
    )
