"""
Checking the equivalences on random platforms
=============================================

``verify_equivalences`` runs both sides of every identity on one instance
and reports the largest discrepancy.
"""


from streamclaims import reallocation_proofness_probe, shapley_rewards, pro_rata_rewards, verify_equivalences
from streamclaims.bridge import shapley_counterexample
from streamclaims.generate import generate_random_problem

reports = [verify_equivalences(generate_random_problem([7, k], 5, 6, 20)) for k in range(50)]
print("instances:", len(reports), "all passed:", all(r.passed for r in reports))
print("largest deviation:", max(r.max_deviation for r in reports))

for record in reports[0].records[:6]:
    print(f"  {record.name:45s} {record.deviation:.1e}")

###############################################################################
# Shapley is not reallocation-proof
# ---------------------------------
# One user plays (20, 0, 10).  Moving ten plays from artist 1 to artist 2
# keeps the pair's plays fixed but changes what the pair earns under Shapley.

t, t_prime, coalition = shapley_counterexample()
for method in (shapley_rewards, pro_rata_rewards):
    probe = reallocation_proofness_probe(method, t, t_prime, coalition)
    print(f"{method.__name__:16s} before={probe.before:.4f} after={probe.after:.4f} invariant={probe.passed}")
