"""Streaming problems and the indices that turn play counts into artist rewards.

A streaming problem is an artists x users matrix of play counts.  Every user
pays ``price_per_user`` and the pooled revenue ``m * price`` is split among
artists according to an index.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .claims import _frozen
from .errors import (
    InvalidProbabilityError,
    InvalidWeightError,
    UndefinedDivisionError,
    ValidationError,
)

PROBABILITY_TOL = 1e-9


def as_stream_matrix(values) -> np.ndarray:
    """Coerce to a 2-D matrix of nonnegative integers, rejecting fractional entries."""
    raw = np.asarray(values)
    if raw.ndim != 2:
        raise ValidationError(f"streams must be a matrix, got {raw.ndim} dimension(s)")
    if raw.dtype.kind not in "iu":
        as_float = raw.astype(float)
        if not np.all(np.isfinite(as_float)) or np.any(as_float != np.round(as_float)):
            raise ValidationError("stream counts must be integers")
        raw = as_float
    t = raw.astype(np.int64)
    if np.any(t < 0):
        raise ValidationError("stream counts must be nonnegative")
    return t


@dataclass(frozen=True)
class StreamingProblem:
    artists: tuple
    users: tuple
    streams: np.ndarray   # (artists, users) play counts
    price_per_user: float = 1.0

    def __post_init__(self):
        artists, users = tuple(self.artists), tuple(self.users)
        t = as_stream_matrix(self.streams)
        if len(artists) < 1 or len(users) < 1:
            raise ValidationError("need at least one artist and one user")
        if t.shape != (len(artists), len(users)):
            raise ValidationError(f"streams matrix has shape {t.shape}, expected {(len(artists), len(users))}")
        for label, ids in (("artist", artists), ("user", users)):
            if len(set(ids)) != len(ids):
                dupes = sorted({str(x) for x in ids if ids.count(x) > 1})
                raise ValidationError(f"duplicate {label} identifiers: {dupes}")
        silent = [users[j] for j in np.flatnonzero(t.sum(axis=0) == 0)]
        if silent:
            raise ValidationError(f"users with no streams: {silent}")
        price = float(self.price_per_user)
        if not np.isfinite(price) or price <= 0:
            raise ValidationError(f"price_per_user must be positive, got {price}")
        t.setflags(write=False)
        object.__setattr__(self, "artists", artists)
        object.__setattr__(self, "users", users)
        object.__setattr__(self, "streams", t)
        object.__setattr__(self, "price_per_user", price)

    @classmethod
    def from_matrix(cls, streams, price_per_user: float = 1.0) -> "StreamingProblem":
        t = as_stream_matrix(streams)
        n, m = t.shape
        return cls(tuple(f"a{i + 1}" for i in range(n)), tuple(f"u{j + 1}" for j in range(m)),
                   t, price_per_user)

    @property
    def n(self) -> int:
        return len(self.artists)

    @property
    def m(self) -> int:
        return len(self.users)

    @property
    def revenue(self) -> float:
        return self.m * self.price_per_user

    def with_price(self, price_per_user: float) -> "StreamingProblem":
        return StreamingProblem(self.artists, self.users, self.streams, price_per_user)


@dataclass(frozen=True)
class StreamStats:
    artist_totals: np.ndarray
    user_totals: np.ndarray
    listings: tuple   # per user: frozenset of artist positions streamed
    fans: tuple       # per artist: frozenset of user positions


def stream_stats(problem: StreamingProblem) -> StreamStats:
    t = problem.streams
    played = t > 0
    return StreamStats(
        _frozen(t.sum(axis=1), np.int64),
        _frozen(t.sum(axis=0), np.int64),
        tuple(frozenset(np.flatnonzero(played[:, j]).tolist()) for j in range(problem.m)),
        tuple(frozenset(np.flatnonzero(played[i]).tolist()) for i in range(problem.n)),
    )


@dataclass(frozen=True)
class RewardVector:
    artists: tuple
    amounts: np.ndarray
    method: str = ""
    contributions: Optional[np.ndarray] = field(default=None, repr=False)  # (artists, users)

    def __post_init__(self):
        object.__setattr__(self, "amounts", _frozen(self.amounts))
        if self.contributions is not None:
            object.__setattr__(self, "contributions", _frozen(self.contributions))

    @property
    def total(self) -> float:
        return float(self.amounts.sum())

    def as_dict(self) -> dict:
        return dict(zip(self.artists, self.amounts.tolist()))


def rewards_from_index(problem: StreamingProblem, index, method: str = "index") -> RewardVector:
    """Normalise a nonnegative index so that it distributes the whole revenue."""
    idx = np.asarray(index, dtype=float)
    if idx.shape != (problem.n,):
        raise ValidationError(f"index has shape {idx.shape}, expected ({problem.n},)")
    if not np.all(np.isfinite(idx)) or np.any(idx < 0):
        raise ValidationError("index values must be finite and nonnegative")
    total = idx.sum()
    if total <= 0:
        raise UndefinedDivisionError("index sums to zero; rewards are undefined")
    return RewardVector(problem.artists, idx / total * problem.revenue, method)


def pro_rata_rewards(problem: StreamingProblem) -> RewardVector:
    return rewards_from_index(problem, problem.streams.sum(axis=1), "pro-rata")


def user_centric_rewards(problem: StreamingProblem) -> RewardVector:
    """Each user's payment split among their artists in proportion to plays."""
    t = problem.streams
    shares = t / t.sum(axis=0) * problem.price_per_user
    return RewardVector(problem.artists, shares.sum(axis=1), "user-centric", shares)


def shapley_rewards(problem: StreamingProblem) -> RewardVector:
    """Each user's payment split equally among the artists they played."""
    played = (problem.streams > 0).astype(float)
    shares = played / played.sum(axis=0) * problem.price_per_user
    return RewardVector(problem.artists, shares.sum(axis=1), "shapley", shares)


# -- weight systems ------------------------------------------------------------------

@dataclass(frozen=True)
class WeightSystem:
    """Strictly positive weight ``w(user, profile)`` for each user's stream vector.

    Users are identified by their column position.  ``table`` is set for
    user-weighted systems (one constant per user); ``per_total`` is set when
    the weight depends only on the user and the total number of plays.
    """

    name: str
    func: Callable[[int, np.ndarray], float] = field(repr=False)
    table: Optional[tuple] = None
    per_total: Optional[Callable[[int, int], float]] = field(default=None, repr=False)

    @property
    def user_weighted(self) -> bool:
        return self.table is not None

    @property
    def total_streams(self) -> bool:
        return self.per_total is not None

    def __call__(self, user: int, profile) -> float:
        value = float(self.func(user, np.asarray(profile)))
        if not np.isfinite(value) or value <= 0:
            raise InvalidWeightError(f"{self.name}: weight {value} for user {user} is not positive")
        return value

    @classmethod
    def from_table(cls, weights: Sequence[float], name: str = "table") -> "WeightSystem":
        table = tuple(float(w) for w in weights)
        bad = [j for j, w in enumerate(table) if not np.isfinite(w) or w <= 0]
        if bad:
            raise InvalidWeightError(f"{name}: non-positive weights for users {bad}")
        return cls(name, lambda j, x: table[j], table, lambda j, s: table[j])

    @classmethod
    def from_total_streams(cls, fn: Callable[[int, int], float], name: str = "total-streams") -> "WeightSystem":
        return cls(name, lambda j, x: fn(j, int(np.sum(x))), None, fn)

    @classmethod
    def constant(cls, value: float = 1.0) -> "WeightSystem":
        return cls.from_total_streams(lambda j, s: value, f"constant({value:g})")

    @classmethod
    def inverse_total(cls) -> "WeightSystem":
        """``1 / total plays`` of the user; reproduces the user-centric rewards."""
        return cls.from_total_streams(lambda j, s: 1.0 / s, "inverse-total")


def user_weights(problem: StreamingProblem, w: WeightSystem) -> np.ndarray:
    return np.array([w(j, problem.streams[:, j]) for j in range(problem.m)])


def weighted_index_rewards(problem: StreamingProblem, w: WeightSystem) -> RewardVector:
    index = problem.streams @ user_weights(problem, w)
    return rewards_from_index(problem, index, f"weighted[{w.name}]")


# -- probability systems -----------------------------------------------------------

@dataclass(frozen=True)
class ProbabilitySystem:
    """Distribution ``rho(user, profile)`` over artists, supported on the artists played."""

    name: str
    func: Callable[[int, np.ndarray], Sequence[float]] = field(repr=False)

    def __call__(self, user: int, profile) -> np.ndarray:
        x = np.asarray(profile)
        p = np.asarray(self.func(user, x), dtype=float)
        if p.shape != x.shape:
            raise InvalidProbabilityError(f"{self.name}: user {user}: expected {x.size} entries, got {p.shape}")
        if (not np.all(np.isfinite(p)) or np.any(p < -PROBABILITY_TOL) or np.any(p > 1 + PROBABILITY_TOL)
                or abs(p.sum() - 1) > PROBABILITY_TOL):
            raise InvalidProbabilityError(f"{self.name}: user {user}: {p.tolist()} is not a distribution")
        if np.any(p[x == 0] != 0):
            raise InvalidProbabilityError(f"{self.name}: user {user}: mass on artists with no streams")
        return p

    @classmethod
    def proportional(cls) -> "ProbabilitySystem":
        return cls("proportional", lambda j, x: x / x.sum())

    @classmethod
    def uniform_on_support(cls) -> "ProbabilitySystem":
        def uniform(j, x):
            support = (x > 0).astype(float)
            return support / support.sum()
        return cls("uniform-on-support", uniform)

    @classmethod
    def max_concentrated(cls) -> "ProbabilitySystem":
        """All mass on the most played artist, lowest position on ties."""
        def argmax(j, x):
            p = np.zeros(x.shape)
            p[int(np.argmax(x))] = 1.0
            return p
        return cls("max-concentrated", argmax)

    @classmethod
    def first_streamed(cls) -> "ProbabilitySystem":
        """All mass on the lowest-position artist the user played."""
        def first(j, x):
            p = np.zeros(x.shape)
            p[int(np.flatnonzero(x)[0])] = 1.0
            return p
        return cls("first-streamed", first)

    @classmethod
    def random_affinity(cls, seed: int) -> "ProbabilitySystem":
        """Seeded user-artist affinities, renormalised over the artists each user played.

        The affinity of ``(user, artist)`` is drawn from a generator keyed on
        ``(seed, user, n_artists)``, so the system is a fixed function of its inputs.
        """
        def affinity(j, x):
            a = np.random.default_rng([seed, j, x.size]).uniform(0.05, 1.0, size=x.size)
            a = np.where(x > 0, a, 0.0)
            return a / a.sum()
        return cls(f"random-affinity({seed})", affinity)


def probabilistic_index_rewards(problem: StreamingProblem, rho: ProbabilitySystem) -> RewardVector:
    shares = np.column_stack([rho(j, problem.streams[:, j]) for j in range(problem.m)])
    shares = shares * problem.price_per_user
    return RewardVector(problem.artists, shares.sum(axis=1), f"probabilistic[{rho.name}]", shares)
