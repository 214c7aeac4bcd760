"""Betweenness on tiny graphs, one round at a time."""
# %%
import numpy as np

from bcx import bc_exact, bc_oracle, brandes_round, cycle_graph, erdos_renyi, path_graph, star_graph
from bcx.serial import enumerate_active_edges, map_work_items

# %% [markdown]
# Scores count ordered pairs: the middle of P3 sits between 0->2 and 2->0.

# %%
print("P3:", bc_exact(path_graph(3)))
print("P5:", bc_exact(path_graph(5)))
print("C4:", bc_exact(cycle_graph(4)))
print("K1,3:", bc_exact(star_graph(3)))

# %% [markdown]
# A single round from vertex 0 of C4. Vertex 2 is reached two ways, so
# sigma[2] = 2 and each of 1 and 3 carries half of the 0->2 dependency.

# %%
state = brandes_round(cycle_graph(4), 0)
print("sigma", state.sigma)
print("depth", state.depth)
print("delta", state.delta)

# %% [markdown]
# Work items: each frontier edge gets a slot from an exclusive scan of the
# frontier degrees, and a binary search sends it back to its vertex.

# %%
degs = [2, 0, 3, 1]
prefix, total = enumerate_active_edges(degs)
slot, local = map_work_items(prefix, total)
print("prefix", prefix, "total", total)
for i, (k, e) in enumerate(zip(slot, local)):
    print(f"item {i}: frontier slot {k}, edge {e}")

# %% [markdown]
# The all-pairs oracle shares no code with the rounds above.

# %%
g = erdos_renyi(30, 0.15, seed=7)
print("max |brandes - oracle|:", np.abs(bc_exact(g) - bc_oracle(g)).max())
