# coding: utf-8

# # Searching in one symmetry region
#
# The stick-breaking map sends the unit cube onto sorted vectors. Applied to
# the first coordinate of each center, it restricts the search to the region
# where centers are ordered.

# In[1]:

import numpy as np

from clusterbench import MeteredProblem, build_suite, run_es, stick_breaking_transform, transformed_problem
from clusterbench.optimizers import DEFAULT_CONFIG

print(stick_breaking_transform([0.75, 0.5]))
x = np.random.default_rng(1).uniform(size=(5, 4))
print(stick_breaking_transform(x).round(3))


# The wrapped problem has the same dimension; each of its points lands in the
# identity region of the original problem.

# In[2]:

problem = build_suite(with_baselines=False)["F1_k5"]
view = transformed_problem(problem)
z = np.random.default_rng(2).uniform(size=view.dimension)
print(problem.region_id(view.to_base(z)))


# Same strategy, same seeds, both spaces.

# In[3]:

for name, target in (("original", problem), ("transformed", view)):
    vals = [run_es(MeteredProblem(target, 2000), DEFAULT_CONFIG, 2000, seed=s).final_value for s in range(5)]
    print(f"{name:12s} mean final {np.mean(vals):.6f}")
