"""
Dividing a shortfall: proportional vs constrained equal awards
==============================================================

A claims problem splits an endowment among agents whose claims add up to
more than what is available.
"""

import numpy as np

from streamclaims import ClaimsProblem, cea, cea_lambda, proportional, weighted_proportional

# Three creditors claim 10, 20 and 70; only 2 is available.
problem = ClaimsProblem(("a", "b", "c"), [10, 20, 70], 2)

# The proportional rule scales every claim by the same factor.
print("proportional:", proportional(problem).amounts)

# Constrained equal awards gives everyone the same amount, capped at the claim.
print("cea:         ", cea(problem).amounts)

###############################################################################
# The CEA water level
# -------------------
# CEA pays min(level, claim).  The level is found by sorted water-filling:
# small claims are filled first, the rest share what remains.

claims, endowment = [1, 95], 2.88
level = cea_lambda(claims, endowment)
print("level:", level, "awards:", np.minimum(level, claims))

# Sweep the endowment and watch the small claim saturate.
for e in np.linspace(0, 96, 9):
    x = cea(ClaimsProblem.from_claims(claims, e)).amounts
    print(f"E={e:5.1f}  level={cea_lambda(claims, e):6.2f}  awards={x}")

###############################################################################
# Weighted proportional
# ---------------------
# Weights tilt the split; a common weight changes nothing.

print(weighted_proportional(problem, [1, 1, 1]).amounts)
print(weighted_proportional(problem, [5, 1, 1]).amounts)
