# %% [markdown]
# Growth of the smoothed sum S_Q in N, modulus 5^6 so it runs in seconds.

# %%
import numpy as np

from padic_charsums import bounds
from padic_charsums.charsum_pipeline import QuadraticForm

p, n = 5, 6
grid = bounds.log_grid(20, 400, 8)
recs = bounds.sweep_main_bound(p, n, QuadraticForm(1, 1, 3), 1, grid, "one-shift")
for r in recs:
    print(f"N={r.N:4d}  |S|={r.abs_sum:10.3f}  trivial={bounds.trivial_bound(r.N):10.1f}")

# %%
print("fitted slope of log|S| vs log N:", round(bounds.fit_slope(recs), 3))
print("ratio to N^2:", np.round([r.abs_sum / r.N**2 for r in recs], 4))
