"""A simulated R x C mesh: who holds what, and who talks to whom."""
# %%
import numpy as np

from bcx import RmatParams, bc_exact, build_undirected, generate_rmat, path_graph
from bcx.dist import make_mesh, message_stats, partition_2d, run_distributed_bc

# %%
part = partition_2d(path_graph(8), (2, 2))
print("block size", part.block_size)
for v in range(8):
    print(f"vertex {v} owned by worker {part.owner(v)}")
for (i, j), blk in sorted(part.blocks.items()):
    print(f"worker ({i},{j}): sources [{blk.src_lo},{blk.src_hi}), {blk.num_entries} entries")

# %% [markdown]
# Sixteen workers as four 2x2 sub-clusters; sources are dealt round robin.

# %%
g = build_undirected(generate_rmat(RmatParams(7, 8, seed=3)))
mesh = make_mesh(16, 2, 2, fd=4)
run = run_distributed_bc(g, mesh)
print(mesh, "rounds", run.rounds)
print("max |dist - serial|", np.abs(run.scores - bc_exact(g)).max())

# %%
stats = message_stats(run)
print("traffic by category (envelopes, elements):", stats.totals())
print("peak peers per worker per step:", stats.max_step_peers)
print("messages between sub-clusters before the reduce:", stats.cross_cluster())
print(stats.to_csv())

# %% [markdown]
# Same worker count, different shape: a strip has every worker talking to
# all three others along the row, a square only to one per axis.

# %%
for R, C in [(1, 4), (2, 2), (4, 1)]:
    s = message_stats(run_distributed_bc(g, make_mesh(4, R, C)))
    print(f"{R}x{C}: peak peers {s.max_step_peers}, envelopes {sum(v[0] for v in s.totals().values())}")
