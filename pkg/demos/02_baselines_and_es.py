# coding: utf-8

# # K-Means++ reference values and one evolution strategy run
#
# Reference values come from 100 K-Means++ restarts followed by Lloyd
# iterations. The same numbers ship with the package.

# In[1]:

from clusterbench import MeteredProblem, build_suite, run_baseline, run_es
from clusterbench.optimizers import DEFAULT_CONFIG

suite = build_suite()
problem = suite["F8_k3"]
shipped = suite.baselines[problem.problem_id]["best"]
fresh = run_baseline(problem, repetitions=100, seed=0)
print("shipped:", shipped, "recomputed:", fresh.best)


# The default strategy uses covariance adaptation, comma selection, no
# boundary handling, lambda 10 and mu 5. A metered handle enforces the budget.

# In[2]:

handle = MeteredProblem(problem, 5000)
log = run_es(handle, DEFAULT_CONFIG, 5000, seed=0)
print(DEFAULT_CONFIG.config_id, "final", log.final_value, "after", log.used, "evaluations")
for budget in (10, 100, 1000, 5000):
    print(f"  best after {budget:5d}: {log.best_at(budget):.6f}")


# How far is that from the reference?

# In[3]:

gap = (log.final_value - fresh.best) / fresh.best
print(f"relative gap to K-Means++: {gap:+.2e}")
