"""Slow, independent reference computations used as test oracles.

Everything here works on plain Python lists with ``fractions.Fraction`` (or a
bisection for the CEA level) and shares no code with the package.
"""
from fractions import Fraction


def bisect_cea_lambda(claims, endowment, tol=1e-12):
    lo, hi = 0.0, float(max(claims, default=0.0))
    f = lambda lam: sum(min(lam, c) for c in claims) - endowment
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if f(mid) < 0:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


def columns(t):
    return [[row[j] for row in t] for j in range(len(t[0]))]


def exact_prorata(t, price=1):
    m = len(t[0])
    totals = [sum(row) for row in t]
    grand = sum(totals)
    return [Fraction(x, grand) * m * price for x in totals]


def exact_user_centric(t, price=1):
    out = [Fraction(0)] * len(t)
    for col in columns(t):
        s = sum(col)
        for i, x in enumerate(col):
            out[i] += Fraction(x, s) * price
    return out


def exact_shapley(t, price=1):
    out = [Fraction(0)] * len(t)
    for col in columns(t):
        support = [i for i, x in enumerate(col) if x > 0]
        for i in support:
            out[i] += Fraction(price, len(support))
    return out


def exact_cea(claims, endowment):
    """Exact CEA by trying each candidate level between consecutive sorted claims."""
    claims = [Fraction(c) for c in claims]
    endowment = Fraction(endowment)
    if sum(claims) == endowment:
        return list(claims)
    for k, c in enumerate(sorted(claims)):
        rest = len(claims) - k
        honoured = sum(sorted(claims)[:k])
        lam = (endowment - honoured) / rest
        if lam <= c:
            return [min(lam, x) for x in claims]
    raise AssertionError("unreachable")


def exact_proportional(claims, endowment):
    s = sum(claims)
    if s == 0:
        return [Fraction(0)] * len(claims)
    return [Fraction(c) / s * Fraction(endowment) for c in claims]


def exact_two_stage(t, first, second, price=1):
    """Two-stage rule on the bridged problem with exact arithmetic."""
    cols = columns(t)
    totals = [sum(c) for c in cols]
    shares = first(totals, len(cols) * Fraction(price))
    out = [Fraction(0)] * len(t)
    for col, share in zip(cols, shares):
        for i, x in enumerate(second(col, share)):
            out[i] += x
    return out
