"""Skipping rounds: 1-degree reduction and 2-degree frontier merging."""
# %%
import numpy as np

from bcx import Mode, RmatParams, Tally, bc_with_heuristics, build_undirected, generate_rmat, path_graph
from bcx.degree1 import preprocess_1degree
from bcx.degree2 import dmf_accumulate, neighbor_trees, schedule_2degree

# %% [markdown]
# Removing the two ends of P5 leaves the path 1-2-3 with omega = 1 on each end.

# %%
reduced = preprocess_1degree(path_graph(5))
print("removed", reduced.omega.removed_vertices, "omega", reduced.omega.omega)
print("residual edges", reduced.graph.edge_list().pairs.tolist())

# %% [markdown]
# The middle vertex of that residual path has two neighbors, so its
# dependencies come out of the sweeps rooted at 1 and 3. They are all zero
# here: the pair 2->0 crosses 1, but 0 is a removed child of 1, so that pair
# is booked by 1's own endpoint term instead.

# %%
res = reduced.graph
print(schedule_2degree(res))
trees = neighbor_trees(res, 2)
print("delta_c", dmf_accumulate(trees, reduced.omega.omega).delta_c)

# %%
for mode in Mode:
    t = Tally()
    print(mode.value, bc_with_heuristics(path_graph(5), mode, tally=t), t.breakdown)

# %% [markdown]
# On a skewed R-MAT graph a good share of the vertices never needs a round.

# %%
g = build_undirected(generate_rmat(RmatParams(9, 4, seed=5)))
base = None
for mode in Mode:
    t = Tally()
    scores = bc_with_heuristics(g, mode, tally=t)
    base = scores if base is None else base
    print(f"{mode.value}: {t.breakdown}  max diff vs h0 {np.abs(scores - base).max():.1e}")
