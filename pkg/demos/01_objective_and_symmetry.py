# coding: utf-8

# # The clustering objective as a black-box function
#
# A problem instance pairs a normalized dataset with a cluster count k. The
# search vector holds k centers back to back, so its length is k * d.

# In[1]:

import itertools

import numpy as np

from clusterbench import build_suite

suite = build_suite()
print(len(suite), "problems")
problem = suite["F8_k3"]
print(problem.problem_id, problem.data.name, "m =", problem.dimension)


# Any vector is a valid input. The value is the mean squared distance from
# each point to its nearest center.

# In[2]:

rng = np.random.default_rng(0)
y = rng.uniform(size=problem.dimension)
print("f(y) =", problem.evaluate(y))


# Reordering the center blocks never changes the value, so the space splits
# into k! equivalent regions. `region_id` says which one a vector is in.

# In[3]:

for perm in itertools.permutations(range(problem.k)):
    z = problem.permute(y, perm)
    print(perm, problem.region_id(z), problem.evaluate(z))


# A center that no point is nearest to can move freely without any effect on
# the value: the landscape is flat there.

# In[4]:

far = y.copy()
far[-2:] = [5.0, 5.0]
print("active centers:", problem.active_centers(far))
print([problem.evaluate(far + np.r_[np.zeros(4), rng.normal(size=2)]) for _ in range(3)])
