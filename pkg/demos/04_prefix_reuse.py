"""Keeping each level's degree scan for the backward sweep."""
# %%
import time

import numpy as np

from bcx import Tally, bc_exact, cycle_graph

# %% [markdown]
# A long cycle has about n/2 levels per round, so the backward sweep would
# rescan almost as often as the forward one.

# %%
ring = cycle_graph(3000)
sources = range(0, 3000, 150)

for recompute in (True, False):
    t = Tally()
    t0 = time.perf_counter()
    scores = bc_exact(ring, sources, tally=t, recompute_prefix=recompute)
    wall = time.perf_counter() - t0
    label = "recompute" if recompute else "reuse"
    print(f"{label:>9}: backward scans {t.prefix_scans_backward:>6}  scan time {t.scan_time_backward:.3f}s  "
          f"backward {t.backward_time:.3f}s  total {wall:.3f}s")

# %%
a = bc_exact(ring, sources)
b = bc_exact(ring, sources, recompute_prefix=True)
print("bitwise equal:", np.array_equal(a, b))
