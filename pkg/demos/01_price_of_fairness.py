"""
Price of fairness on a synthetic graph
======================================

Maximum coverage on a Barabasi-Albert graph whose nodes are split into
Zipf-sized groups. We compare greedy with no group constraint against
greedy under proportional (PR) and equal (ER) representation.
"""

import numpy as np

from fairstream import CoverageOracle, allocate_equal, allocate_proportional, greedy, unconstrained_greedy
from fairstream.data_io import synthetic_instance

# %%
# A 20k-node graph with as many edges as nodes, and 10 groups whose sizes
# fall off as rank**-2, so the largest group holds most of the nodes.
inst = synthetic_instance(20_000, l=10, s=2.0, seed=0)
oracle = CoverageOracle(inst.ground)
sizes = inst.group_sizes()
print("group sizes:", sizes.tolist())

# %%
# Budgets for k = 50 under the two policies.
k = 50
pr = allocate_proportional(sizes, k)
er = allocate_equal(sizes, k)
print("PR budgets:", pr.budgets)
print("ER budgets:", er.budgets)

# %%
# Unconstrained greedy is the reference; the fair runs can only lose utility.
free = unconstrained_greedy(oracle, k).value
for name, spec in (("PR", pr), ("ER", er)):
    sol = greedy(oracle, inst.groups, spec)
    counts = np.bincount(inst.groups[sol.items], minlength=inst.l)
    print(f"{name}: utility {sol.value:.0f} vs {free:.0f} unconstrained "
          f"(price {free - sol.value:.0f}), picks per group {counts.tolist()}")
