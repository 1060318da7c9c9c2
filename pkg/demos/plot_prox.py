"""
Shrinking singular values with the log composite penalty
========================================================

The scalar proximal map is solved exactly from the real roots of a cubic.
Here we trace it against a brute-force grid and look at how it treats
small and large inputs differently.
"""

import numpy as np

from tjlc import LCParams, scalar_prox
from tjlc.lcnorm import cubic_real_roots, prox_objective

p = LCParams(nu=1.0, vartheta=500.0)

# %%
# Small inputs are zeroed (or nearly so) and large ones pass almost
# untouched, unlike soft thresholding which shifts everything by the
# same amount.
for y in [0.2, 0.5, 1.0, 2.0, 5.0, 20.0]:
    l = scalar_prox(y, rho=1.0, omega=1.0, p=p)
    print(f"y = {y:5.1f}  ->  prox = {l:.4f}")

# %%
# Cross-check one value on a fine grid.
y, rho, omega = 3.0, 0.8, 1.2
grid = np.linspace(0, y, 100001)
best = grid[np.argmin(prox_objective(grid, y, rho, omega, p))]
print("closed form:", scalar_prox(y, rho, omega, p), " grid:", best)

# %%
# The stationary points come from ``-l^3 + b l^2 + c l + d = 0``.
print("roots of -(l+1) l (l-1):", cubic_real_roots(0.0, 1.0, 0.0))
