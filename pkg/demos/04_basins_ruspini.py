# coding: utf-8

# # Basins on the Ruspini data
#
# Fifty starts inside the identity region, two local searches from each, then
# a hill-valley graph over the final points. Takes about half a minute.

# In[1]:

from clusterbench import build_suite
from clusterbench.landscape import basin_analysis

suite = build_suite(with_baselines=False)
for pid in ("F8_k2", "F8_k3"):
    report = basin_analysis(suite[pid], starts=50, seed=0)
    s = report.summary()
    print(pid, "retention", s["retention"], "by algorithm", s["retention_by_algorithm"])
    print("   cliques", s["cliques"], "distinct solutions", s["distinct_solutions"])
    print("   representative values", [round(v, 6) for v in s["representative_values"]])


# The probes walk downhill from the worse representative of each pair and
# report whether they reach the better one.

# In[2]:

for row in report.connectivity:
    print(" ".join(f"{c[:4]:>5s}" for c in row))
