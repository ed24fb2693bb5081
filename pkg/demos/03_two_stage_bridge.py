"""
Streaming indices as two-stage claims rules
===========================================

Reading users as issues turns a streaming problem into a multi-issue claims
problem.  A two-stage rule first splits the subscriptions among users, then
each user's share among the artists they played.
"""

import numpy as np

from streamclaims import (
    CEA,
    PROPORTIONAL,
    StreamingProblem,
    pro_rata_rewards,
    shapley_rewards,
    to_multi_issue,
    two_stage,
    user_centric_rewards,
)

problem = StreamingProblem.from_matrix([[10, 0], [20, 0], [0, 70]])
bridged = to_multi_issue(problem)

pairs = {
    ("prop", "prop"): pro_rata_rewards,
    ("cea", "prop"): user_centric_rewards,
    ("cea", "cea"): shapley_rewards,
}
rules = {"prop": PROPORTIONAL, "cea": CEA}
for (first, second), index in pairs.items():
    result = two_stage(bridged, rules[first], rules[second])
    print(f"({first},{second})", result.total.round(4), "==", index.__name__, index(problem).amounts.round(4))

###############################################################################
# The fourth combination
# ----------------------
# Proportional first stage, CEA second stage.  Two light users and one heavy
# user who plays artist 2 almost exclusively.

problem = StreamingProblem.from_matrix([[1, 1, 1], [1, 1, 95]])
result = two_stage(to_multi_issue(problem), PROPORTIONAL, CEA)
print("first stage per user:", result.first_stage)
print("water level per user:", np.round(result.second_stage_levels, 4))
print("per user and artist:\n", result.second_stage)
print("totals:", result.total)
