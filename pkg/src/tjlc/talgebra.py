"""Third-order tensor algebra under the t-product.

Everything here works in the Fourier domain along the third mode: the
forward transform is the unnormalized DFT of every tube ``x[i, j, :]`` and
the inverse carries the ``1/I3`` factor (``numpy.fft`` conventions). Real
inputs give conjugate-symmetric slice stacks, so only slices
``0 .. I3 // 2`` are factorized and the rest are mirrored; this keeps every
inverse transform real.

The block-circulant helpers (:func:`bcirc`, :func:`bvec`, :func:`bvfold`,
:func:`bdiag`) are direct transcriptions of the matrix definitions. They are
slow and exist to check the FFT path, not to be used by the solver.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .tensor import mode_pairs, unfold_pair


class ConjugateSymmetryError(ValueError):
    """A slice stack does not transform back to a real tensor."""


class TSVD(NamedTuple):
    U: np.ndarray
    S: np.ndarray
    V: np.ndarray


def _require_order3(x: np.ndarray, name: str = "x") -> None:
    if x.ndim != 3:
        raise ValueError(f"{name} must be a third-order tensor, got order {x.ndim}")


def as_order3(x) -> np.ndarray:
    """View a matrix as an ``I1 x I2 x 1`` tensor; third-order input passes through."""
    x = np.asarray(x)
    if x.ndim == 2:
        return x[:, :, np.newaxis]
    _require_order3(x)
    return x


def dft_mode3(x) -> np.ndarray:
    """Unnormalized DFT along every tube; returns a complex ``I1 x I2 x I3`` stack."""
    x = np.asarray(x, dtype=np.float64)
    _require_order3(x)
    return np.fft.fft(x, axis=2)


def idft_mode3(xbar) -> np.ndarray:
    """Inverse of :func:`dft_mode3` for conjugate-symmetric stacks.

    Raises
    ------
    ConjugateSymmetryError
        If the imaginary residual exceeds ``1e-8 * ||xbar||_F``.
    """
    xbar = np.asarray(xbar)
    _require_order3(xbar, "xbar")
    x = np.fft.ifft(xbar, axis=2)
    residual = np.linalg.norm(x.imag)
    if residual > 1e-8 * np.linalg.norm(xbar):
        raise ConjugateSymmetryError(
            f"imaginary residual {residual:.3e} after inverse DFT; input is not conjugate symmetric"
        )
    return np.ascontiguousarray(x.real)


def _self_conjugate(i: int, n3: int) -> bool:
    return i == 0 or 2 * i == n3


def slice_svd(xbar: np.ndarray, full_matrices: bool = False):
    """SVD of every frontal slice of a conjugate-symmetric stack.

    Returns ``(U, s, Vh)`` with slice index last: ``U`` is ``I1 x k x I3``,
    ``s`` is ``min(I1, I2) x I3`` (descending per slice) and ``Vh`` is
    ``k' x I2 x I3``. Slices past ``I3 // 2`` are conjugate mirrors.
    Self-conjugate slices are factorized in real arithmetic so their factors
    are real.
    """
    n1, n2, n3 = xbar.shape
    half = n3 // 2 + 1
    k1 = n1 if full_matrices else min(n1, n2)
    k2 = n2 if full_matrices else min(n1, n2)
    U = np.empty((n1, k1, n3), dtype=np.complex128)
    s = np.empty((min(n1, n2), n3), dtype=np.float64)
    Vh = np.empty((k2, n2, n3), dtype=np.complex128)

    real_idx = [i for i in range(half) if _self_conjugate(i, n3)]
    cplx_idx = [i for i in range(half) if not _self_conjugate(i, n3)]
    if real_idx:
        stack = np.ascontiguousarray(np.moveaxis(xbar[:, :, real_idx].real, 2, 0))
        u, sv, vh = np.linalg.svd(stack, full_matrices=full_matrices)
        U[:, :, real_idx] = np.moveaxis(u, 0, 2)
        s[:, real_idx] = sv.T
        Vh[:, :, real_idx] = np.moveaxis(vh, 0, 2)
    if cplx_idx:
        stack = np.ascontiguousarray(np.moveaxis(xbar[:, :, cplx_idx], 2, 0))
        u, sv, vh = np.linalg.svd(stack, full_matrices=full_matrices)
        U[:, :, cplx_idx] = np.moveaxis(u, 0, 2)
        s[:, cplx_idx] = sv.T
        Vh[:, :, cplx_idx] = np.moveaxis(vh, 0, 2)
    for i in range(half, n3):
        U[:, :, i] = np.conj(U[:, :, n3 - i])
        s[:, i] = s[:, n3 - i]
        Vh[:, :, i] = np.conj(Vh[:, :, n3 - i])
    return U, s, Vh


def slice_singular_values(x) -> np.ndarray:
    """Singular values of every DFT slice of a real tensor, shape ``min(I1, I2) x I3``."""
    x = as_order3(np.asarray(x, dtype=np.float64))
    xbar = np.fft.fft(x, axis=2)
    n3 = x.shape[2]
    half = n3 // 2 + 1
    sv = np.linalg.svd(np.moveaxis(xbar[:, :, :half], 2, 0), compute_uv=False).T
    return np.concatenate([sv, sv[:, 1:n3 - half + 1][:, ::-1]], axis=1)


def bcirc(x) -> np.ndarray:
    """Block-circulant matrix ``(I1*I3) x (I2*I3)``; block (r, c) is slice ``(r - c) mod I3``."""
    x = np.asarray(x)
    _require_order3(x)
    n1, n2, n3 = x.shape
    out = np.zeros((n1 * n3, n2 * n3), dtype=x.dtype)
    for r in range(n3):
        for c in range(n3):
            out[r * n1:(r + 1) * n1, c * n2:(c + 1) * n2] = x[:, :, (r - c) % n3]
    return out


def bvec(x) -> np.ndarray:
    """Stack the frontal slices vertically."""
    x = np.asarray(x)
    _require_order3(x)
    return np.concatenate([x[:, :, i] for i in range(x.shape[2])], axis=0)


def bvfold(m, n3: int) -> np.ndarray:
    m = np.asarray(m)
    n1 = m.shape[0] // n3
    return np.stack([m[i * n1:(i + 1) * n1] for i in range(n3)], axis=2)


def bdiag(x) -> np.ndarray:
    x = np.asarray(x)
    _require_order3(x)
    n1, n2, n3 = x.shape
    out = np.zeros((n1 * n3, n2 * n3), dtype=x.dtype)
    for i in range(n3):
        out[i * n1:(i + 1) * n1, i * n2:(i + 1) * n2] = x[:, :, i]
    return out


def t_product_bcirc(a, b) -> np.ndarray:
    """Reference t-product ``bvfold(bcirc(a) @ bvec(b))``."""
    a, b = np.asarray(a), np.asarray(b)
    _check_product_shapes(a, b)
    return bvfold(bcirc(a) @ bvec(b), a.shape[2])


def _check_product_shapes(a: np.ndarray, b: np.ndarray) -> None:
    _require_order3(a, "a")
    _require_order3(b, "b")
    if a.shape[1] != b.shape[0] or a.shape[2] != b.shape[2]:
        raise ValueError(f"t-product shapes incompatible: {a.shape} * {b.shape}")


def t_product(a, b) -> np.ndarray:
    """t-product of ``I1 x I2 x I3`` and ``I2 x J x I3`` real tensors."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    _check_product_shapes(a, b)
    abar = np.moveaxis(np.fft.fft(a, axis=2), 2, 0)
    bbar = np.moveaxis(np.fft.fft(b, axis=2), 2, 0)
    return idft_mode3(np.moveaxis(abar @ bbar, 0, 2))


def conj_transpose(a) -> np.ndarray:
    """Transpose (and conjugate) every slice, then reverse slices 2..I3."""
    a = np.asarray(a)
    _require_order3(a)
    n3 = a.shape[2]
    order = [0] + list(range(n3 - 1, 0, -1))
    return np.conj(np.transpose(a, (1, 0, 2)))[:, :, order]


def identity_tensor(n: int, n3: int) -> np.ndarray:
    if n < 1 or n3 < 1:
        raise ValueError("identity tensor extents must be positive")
    out = np.zeros((n, n, n3))
    out[:, :, 0] = np.eye(n)
    return out


def t_svd(x) -> TSVD:
    """Full t-SVD ``x = U * S * V^H`` of a real third-order tensor.

    `U` (``I1 x I1 x I3``) and `V` (``I2 x I2 x I3``) are orthogonal under
    the t-product and `S` is f-diagonal; in the Fourier domain each slice of
    `S` carries that slice's singular values in descending order.
    """
    x = np.asarray(x, dtype=np.float64)
    _require_order3(x)
    n1, n2, n3 = x.shape
    U, s, Vh = slice_svd(np.fft.fft(x, axis=2), full_matrices=True)
    r = min(n1, n2)
    Sbar = np.zeros((n1, n2, n3))
    Sbar[np.arange(r), np.arange(r), :] = s
    Vbar = np.conj(np.transpose(Vh, (1, 0, 2)))
    return TSVD(
        U=idft_mode3(U),
        S=idft_mode3(Sbar.astype(np.complex128)),
        V=idft_mode3(Vbar),
    )


def default_rank_tol(sigma: np.ndarray, shape) -> float:
    """``max(I1, I2) * eps * sigma_max`` over all DFT slices."""
    smax = float(sigma.max()) if sigma.size else 0.0
    return max(shape[0], shape[1]) * np.finfo(np.float64).eps * smax


def tubal_rank(x, tol: float | None = None) -> int:
    """Number of singular tubes whose largest Fourier-domain entry exceeds `tol`.

    A matrix is treated as an ``I1 x I2 x 1`` tensor, which reduces this to
    the numerical matrix rank.
    """
    x = as_order3(np.asarray(x, dtype=np.float64))
    sigma = slice_singular_values(x)
    if tol is None:
        tol = default_rank_tol(sigma, x.shape)
    if sigma.size == 0:
        return 0
    return int(np.count_nonzero(sigma.max(axis=1) > tol))


def joint_rank(x, tol: float | None = None) -> list[int]:
    """Tubal ranks of all mode-(l1, l2) unfoldings, pairs in lexicographic order."""
    x = np.asarray(x, dtype=np.float64)
    if x.ndim < 2:
        raise ValueError("joint rank needs a tensor of order >= 2")
    return [tubal_rank(unfold_pair(x, l1, l2), tol) for l1, l2 in mode_pairs(x.ndim)]
