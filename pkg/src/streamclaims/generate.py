"""Seeded random streaming problems."""
from __future__ import annotations

import numpy as np

from .errors import ValidationError
from .streaming import StreamingProblem


def generate_random_problem(seed, n: int, m: int, max_streams: int,
                            price_per_user: float = 1.0) -> StreamingProblem:
    """Uniform integer plays in ``[0, max_streams]``; all-zero user columns are redrawn.

    ``seed`` is anything :func:`numpy.random.default_rng` accepts, so
    ``(seed, trial)`` pairs give independent reproducible streams.
    """
    if n < 1 or m < 1 or max_streams < 1:
        raise ValidationError("artists, users and max_streams must all be at least 1")
    rng = np.random.default_rng(seed)
    t = rng.integers(0, max_streams + 1, size=(n, m))
    for j in range(m):
        while t[:, j].sum() == 0:
            t[:, j] = rng.integers(0, max_streams + 1, size=n)
    return StreamingProblem.from_matrix(t, price_per_user)


def random_reallocation(problem: StreamingProblem, coalition, rng: np.random.Generator) -> StreamingProblem:
    """Redistribute each user's plays among ``coalition`` at random, keeping per-user coalition totals."""
    s = sorted(set(coalition))
    t = problem.streams.copy()
    for j in range(problem.m):
        total = int(t[s, j].sum())
        t[s, j] = rng.multinomial(total, np.full(len(s), 1.0 / len(s)))
    return StreamingProblem(problem.artists, problem.users, t, problem.price_per_user)
