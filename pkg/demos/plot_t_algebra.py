"""
The t-product and the t-SVD
===========================

Third-order tensors multiply like matrices once you take a DFT along the
third mode. This walks through that on a small example.
"""

import numpy as np

from tjlc import bcirc, conj_transpose, dft_mode3, identity_tensor, t_product, t_svd, tubal_rank
from tjlc.talgebra import t_product_bcirc

rng = np.random.default_rng(0)
a = rng.standard_normal((3, 2, 4))
b = rng.standard_normal((2, 5, 4))

# %%
# The slow definition builds the block-circulant matrix of ``a``; the fast
# one multiplies the frontal slices of the DFT stacks pairwise.
slow = t_product_bcirc(a, b)
fast = t_product(a, b)
print("bcirc shape:", bcirc(a).shape)
print("max |slow - fast|:", np.abs(slow - fast).max())

# %%
# The identity tensor has the identity matrix as its first frontal slice
# and zeros elsewhere, so every DFT slice is the identity.
eye = identity_tensor(2, 4)
print("A * I == A:", np.allclose(t_product(a, eye), a))
print("DFT slices of I:", np.round(dft_mode3(eye)[:, :, 1].real, 12).tolist())

# %%
# A t-SVD factors ``x = U * S * V^H`` with f-diagonal ``S``. Its number of
# nonzero singular tubes is the tubal rank.
x = t_product(rng.standard_normal((6, 2, 4)), rng.standard_normal((2, 5, 4)))
U, S, V = t_svd(x)
recon = t_product(t_product(U, S), conj_transpose(V))
print("reconstruction error:", np.linalg.norm(recon - x))
print("tubal rank:", tubal_rank(x))
