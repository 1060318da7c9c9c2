"""Dense tensor plumbing: unfoldings, folding, norms and the sampling projector.

Tensors are plain ``numpy.ndarray`` objects of dtype float64. The canonical
element order is first-index-fastest (Fortran order); every unfolding below
is a Fortran-order reshape after moving the selected modes to the front, so
the column index of element ``(i_1, ..., i_N)`` is

    j = 1 + sum_{k != n} (i_k - 1) J_k,   J_k = prod_{m < k, m != n} I_m

with 1-based indices. Observation sets are boolean arrays of the same shape.
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np


def as_tensor(x) -> np.ndarray:
    """Return `x` as a float64 array with at least one axis."""
    x = np.asarray(x, dtype=np.float64)
    if x.ndim == 0:
        x = x.reshape(1)
    return x


def as_mask(omega, shape: Sequence[int] | None = None) -> np.ndarray:
    omega = np.asarray(omega, dtype=bool)
    if shape is not None and omega.shape != tuple(shape):
        raise ValueError(f"mask shape {omega.shape} does not match tensor shape {tuple(shape)}")
    return omega


def frobenius_norm(x) -> float:
    """Frobenius norm; the sum of squares is exactly rounded, so any
    permutation of the elements gives the same value."""
    x = np.abs(np.asarray(x)).ravel()
    return math.sqrt(math.fsum((x * x).tolist()))


def _check_mode(n: int, ndim: int) -> None:
    if not 1 <= n <= ndim:
        raise ValueError(f"mode {n} out of range for an order-{ndim} tensor")


def unfold_mode_n(x, n: int) -> np.ndarray:
    """Mode-`n` unfolding (1-based `n`) into an ``I_n x prod_{k != n} I_k`` matrix."""
    x = np.asarray(x)
    _check_mode(n, x.ndim)
    moved = np.moveaxis(x, n - 1, 0)
    return np.reshape(moved, (x.shape[n - 1], -1), order="F")


def fold_mode_n(m, shape: Sequence[int], n: int) -> np.ndarray:
    """Inverse of :func:`unfold_mode_n`."""
    shape = tuple(int(s) for s in shape)
    _check_mode(n, len(shape))
    m = np.asarray(m)
    rest = tuple(s for k, s in enumerate(shape) if k != n - 1)
    expected = (shape[n - 1], int(np.prod(rest, dtype=np.int64)))
    if m.shape != expected:
        raise ValueError(f"matrix shape {m.shape} inconsistent with mode-{n} unfolding {expected} of {shape}")
    moved = np.reshape(m, (shape[n - 1],) + rest, order="F")
    return np.moveaxis(moved, 0, n - 1)


def _check_pair(l1: int, l2: int, ndim: int) -> None:
    _check_mode(l1, ndim)
    _check_mode(l2, ndim)
    if l1 > l2:
        raise ValueError(f"mode pair ({l1}, {l2}) must satisfy l1 <= l2")


def unfold_pair(x, l1: int, l2: int) -> np.ndarray:
    """Mode-(l1, l2) unfolding.

    For ``l1 == l2`` this is the ordinary mode-`l1` matrix unfolding. For
    ``l1 < l2`` the result is a third-order tensor of shape
    ``(I_l1, I_l2, prod_{s != l1, l2} I_s)`` whose third index enumerates the
    remaining modes first-index-fastest.
    """
    x = np.asarray(x)
    _check_pair(l1, l2, x.ndim)
    if l1 == l2:
        return unfold_mode_n(x, l1)
    moved = np.moveaxis(x, (l1 - 1, l2 - 1), (0, 1))
    return np.reshape(moved, (x.shape[l1 - 1], x.shape[l2 - 1], -1), order="F")


def fold_pair(y, shape: Sequence[int], l1: int, l2: int) -> np.ndarray:
    """Inverse of :func:`unfold_pair`."""
    shape = tuple(int(s) for s in shape)
    _check_pair(l1, l2, len(shape))
    if l1 == l2:
        return fold_mode_n(y, shape, l1)
    y = np.asarray(y)
    rest = tuple(s for k, s in enumerate(shape) if k not in (l1 - 1, l2 - 1))
    expected = (shape[l1 - 1], shape[l2 - 1], int(np.prod(rest, dtype=np.int64)))
    if y.shape != expected:
        raise ValueError(f"tensor shape {y.shape} inconsistent with mode-({l1},{l2}) unfolding {expected} of {shape}")
    moved = np.reshape(y, (shape[l1 - 1], shape[l2 - 1]) + rest, order="F")
    return np.moveaxis(moved, (0, 1), (l1 - 1, l2 - 1))


def mode_pairs(ndim: int) -> list[tuple[int, int]]:
    """All pairs ``l1 <= l2`` in lexicographic order: (1,1), (1,2), ..., (N,N)."""
    return [(a, b) for a in range(1, ndim + 1) for b in range(a, ndim + 1)]


def project(x, omega) -> np.ndarray:
    """Keep the entries of `x` on `omega` and zero the rest."""
    x = np.asarray(x)
    omega = as_mask(omega, x.shape)
    return np.where(omega, x, np.zeros((), dtype=x.dtype))


def missing_rate(omega) -> float:
    """Percentage of unobserved entries."""
    omega = np.asarray(omega, dtype=bool)
    return (1.0 - np.count_nonzero(omega) / omega.size) * 100.0
