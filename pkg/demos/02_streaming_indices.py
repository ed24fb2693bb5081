"""
Paying artists from subscriptions
=================================

Rows are artists, columns are users, entries are play counts.  Every user
pays one subscription and the pool is split among artists.
"""

from streamclaims import (
    ProbabilitySystem,
    StreamingProblem,
    WeightSystem,
    pro_rata_rewards,
    probabilistic_index_rewards,
    shapley_rewards,
    stream_stats,
    user_centric_rewards,
    weighted_index_rewards,
)

# User 1 plays artists 1 and 2 (10 and 20 times), user 2 plays artist 3 70 times.
problem = StreamingProblem.from_matrix([[10, 0], [20, 0], [0, 70]])
stats = stream_stats(problem)
print("plays per artist:", stats.artist_totals, "plays per user:", stats.user_totals)

# Pro-rata pools everything and pays by total plays, so the heavy listener
# (user 2) effectively decides 70% of user 1's subscription too.
for method in (pro_rata_rewards, user_centric_rewards, shapley_rewards):
    print(f"{method.__name__:22s}", method(problem).amounts.round(4))

###############################################################################
# Families of indices
# -------------------
# Weighted indices multiply each user's plays by a positive weight;
# probabilistic indices split each subscription with a distribution over the
# artists the user played.

print(weighted_index_rewards(problem, WeightSystem.constant(1)).amounts)       # pro-rata
print(weighted_index_rewards(problem, WeightSystem.inverse_total()).amounts)   # user-centric
print(probabilistic_index_rewards(problem, ProbabilitySystem.uniform_on_support()).amounts)  # Shapley
print(probabilistic_index_rewards(problem, ProbabilitySystem.max_concentrated()).amounts)

# A different subscription price rescales every reward.
print(user_centric_rewards(problem.with_price(9.99)).amounts)
