"""Logarithmic composite norm and its proximal operator.

The penalty on one Fourier-domain singular value ``s`` is
``omega * log(g(s) + 1)`` where ``g`` is a concave quadratic capped at
``nu * vartheta``::

    g(s) = nu*s - s**2 / (2*vartheta)    if s <= nu*vartheta
         = nu**2 * vartheta / 2          otherwise

The scalar proximal problem ``min_l rho/2 (l - y)**2 + omega*log(g(l) + 1)``
is solved exactly: on the quadratic branch its stationary points are the
real roots of a cubic (solved in closed form by Shengjin's discriminant
cases), on the flat branch the minimizer is ``y`` itself. The answer is the
best of these candidates and the branch endpoints.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .talgebra import as_order3, idft_mode3, slice_singular_values, slice_svd


class WeightScheme(str, enum.Enum):
    NORMALIZED = "normalized"
    RAW = "raw"


@dataclass(frozen=True)
class LCParams:
    """Shape parameters of the norm.

    Attributes
    ----------
    nu, vartheta : float
        Slope at zero and curvature of ``g``; the cap sits at ``nu * vartheta``.
    c : float
        Offset in the weights ``1 / (c + exp(-w))``, so weights lie in ``(0, 1/c]``.
    scheme : WeightScheme
        ``normalized`` rescales singular values by ``R / max``; ``raw`` uses them as is.
    """

    nu: float = 1.0
    vartheta: float = 500.0
    c: float = 0.8
    scheme: WeightScheme = WeightScheme.NORMALIZED

    def __post_init__(self):
        for name in ("nu", "vartheta", "c"):
            value = getattr(self, name)
            if not (value > 0 and math.isfinite(value)):
                raise ValueError(f"{name} must be positive and finite, got {value!r}")
        object.__setattr__(self, "scheme", WeightScheme(self.scheme))

    @property
    def cap(self) -> float:
        return self.nu * self.vartheta


def g_cap(sigma, p: LCParams):
    """Capped quadratic ``g``; works elementwise on arrays."""
    s = np.asarray(sigma, dtype=np.float64)
    if np.any(s < 0):
        raise ValueError("g is defined for nonnegative arguments only")
    flat = p.nu * p.nu * p.vartheta / 2.0
    out = np.where(s <= p.cap, p.nu * s - s * s / (2.0 * p.vartheta), flat)
    return float(out) if out.ndim == 0 else out


def weights_from_sigma(sigma: np.ndarray, p: LCParams) -> np.ndarray:
    """Weights for an ``R x I3`` array of per-slice singular values."""
    sigma = np.asarray(sigma, dtype=np.float64)
    if p.scheme is WeightScheme.RAW:
        return 1.0 / (p.c + np.exp(-sigma))
    r = sigma.shape[0]
    m = sigma.max(axis=0) if r else np.zeros(sigma.shape[1])
    safe = np.where(m > 0, m, 1.0)
    w = 1.0 / (p.c + np.exp(-r * sigma / safe))
    return np.where(m > 0, w, 1.0 / (p.c + 1.0))


def weights(wbar, p: LCParams) -> np.ndarray:
    """Weight matrix ``R x I3`` from the Fourier-domain stack of the prox argument."""
    wbar = np.asarray(wbar)
    if wbar.ndim == 2:
        wbar = wbar[:, :, np.newaxis]
    sigma = np.linalg.svd(np.moveaxis(wbar, 2, 0), compute_uv=False).T
    return weights_from_sigma(sigma, p)


def lc_norm(x, p: LCParams, w) -> float:
    x = as_order3(np.asarray(x, dtype=np.float64))
    sigma = slice_singular_values(x)
    w = np.asarray(w, dtype=np.float64)
    if w.shape != sigma.shape:
        raise ValueError(f"weight matrix shape {w.shape} does not match {sigma.shape}")
    return float(np.sum(w * np.log1p(g_cap(sigma, p))) / x.shape[2])


def _cubic_roots(b, c, d) -> np.ndarray:
    """Real roots of ``-l**3 + b*l**2 + c*l + d`` for arrays of coefficients.

    Returns an ``(..., 3)`` array; slots without a real root hold NaN.
    Each closed-form root is refined by a few guarded Newton steps.
    """
    b, c, d = np.broadcast_arrays(*(np.asarray(v, dtype=np.float64) for v in (b, c, d)))
    a = -1.0
    A = b * b - 3.0 * a * c
    B = b * c - 9.0 * a * d
    C = c * c - 3.0 * b * d
    disc = B * B - 4.0 * A * C
    roots = np.full(b.shape + (3,), np.nan)

    with np.errstate(all="ignore"):
        case1 = (A == 0) & (B == 0)
        case2 = ~case1 & (disc > 0)
        case3 = ~case1 & (disc == 0)
        case4 = ~case1 & (disc < 0)

        # A = B = 0: triple root; -c/b, or -b/(3a) = 0 when b = 0
        triple = np.where(b != 0, -c / np.where(b != 0, b, 1.0), -b / (3.0 * a))
        roots[..., 0] = np.where(case1, triple, roots[..., 0])

        sq = np.sqrt(np.where(case2, disc, 0.0))
        k1 = A * b + 1.5 * a * (-B + sq)
        k2 = A * b + 1.5 * a * (-B - sq)
        one = (-b - (np.cbrt(k1) + np.cbrt(k2))) / (3.0 * a)
        roots[..., 0] = np.where(case2, one, roots[..., 0])

        safeA = np.where(A != 0, A, 1.0)
        roots[..., 0] = np.where(case3, B / safeA - b / a, roots[..., 0])
        roots[..., 1] = np.where(case3, -B / (2.0 * safeA), roots[..., 1])

        posA = np.where(case4, A, 1.0)
        rA = np.sqrt(posA)
        t = np.clip((2.0 * posA * b - 3.0 * a * B) / (2.0 * posA * rA), -1.0, 1.0)
        th = np.arccos(t) / 3.0
        cs, sn = np.cos(th), math.sqrt(3.0) * np.sin(th)
        roots[..., 0] = np.where(case4, (-b - 2.0 * rA * cs) / (3.0 * a), roots[..., 0])
        roots[..., 1] = np.where(case4, (-b + rA * (cs + sn)) / (3.0 * a), roots[..., 1])
        roots[..., 2] = np.where(case4, (-b + rA * (cs - sn)) / (3.0 * a), roots[..., 2])

        bb, cc, dd = b[..., None], c[..., None], d[..., None]
        for _ in range(3):
            p = ((-roots + bb) * roots + cc) * roots + dd
            dp = (-3.0 * roots + 2.0 * bb) * roots + cc
            step = np.where(dp != 0, p / np.where(dp != 0, dp, 1.0), 0.0)
            cand = roots - step
            pc = ((-cand + bb) * cand + cc) * cand + dd
            better = np.isfinite(cand) & (np.abs(pc) < np.abs(p))
            roots = np.where(better, cand, roots)
    return roots


def cubic_real_roots(b: float, c: float, d: float) -> list[float]:
    """Real roots of ``-l**3 + b*l**2 + c*l + d = 0``, ascending, repeated roots once."""
    r = _cubic_roots(b, c, d)
    vals = sorted(float(v) for v in r[np.isfinite(r)])
    out: list[float] = []
    for v in vals:
        if not out or v != out[-1]:
            out.append(v)
    return out


def prox_objective(l, y, rho, omega, p: LCParams):
    """``rho/2 (l - y)**2 + omega * log(g(l) + 1)``."""
    l = np.asarray(l, dtype=np.float64)
    return 0.5 * rho * (l - y) ** 2 + omega * np.log1p(g_cap(l, p))


def prox_values(y, rho: float, omega, p: LCParams) -> np.ndarray:
    """Vectorized scalar prox: one output per entry of `y` (with matching `omega`)."""
    y, omega = np.broadcast_arrays(np.asarray(y, dtype=np.float64), np.asarray(omega, dtype=np.float64))
    nu, vt, cap = p.nu, p.vartheta, p.cap
    b = 2.0 * cap + y
    c = -2.0 * omega / rho + 2.0 * vt - 2.0 * cap * y
    d = 2.0 * omega * cap / rho - 2.0 * vt * y
    stationary = np.clip(_cubic_roots(b, c, d), 0.0, cap)

    n = y.shape
    cands = np.concatenate(
        [
            stationary,
            np.zeros(n + (1,)),
            np.full(n + (1,), cap),
            np.where(y > cap, y, np.nan)[..., None],
        ],
        axis=-1,
    )
    cands = np.where(np.isfinite(cands), cands, np.inf)
    cands = np.sort(cands, axis=-1)

    yy, ww = y[..., None], omega[..., None]
    on_quad = np.minimum(cands, cap)
    with np.errstate(invalid="ignore"):
        h = 0.5 * rho * (on_quad - yy) ** 2 + ww * np.log1p(nu * on_quad - on_quad * on_quad / (2.0 * vt))
    flat = ww * math.log1p(nu * nu * vt / 2.0)
    h = np.where(cands > cap, np.broadcast_to(flat, h.shape), h)
    h = np.where(np.isfinite(cands), h, np.inf)
    idx = np.argmin(h, axis=-1)
    return np.take_along_axis(cands, idx[..., None], axis=-1)[..., 0]


def scalar_prox(y: float, rho: float, omega: float, p: LCParams) -> float:
    """Exact minimizer over ``l >= 0`` of ``rho/2 (l - y)**2 + omega*log(g(l) + 1)``.

    Ties between candidates resolve to the smallest ``l``.
    """
    if not rho > 0:
        raise ValueError(f"rho must be positive, got {rho!r}")
    if y < 0 or omega < 0:
        raise ValueError("y and omega must be nonnegative")
    return float(prox_values(y, rho, omega, p))


def tensor_prox(y, rho: float, p: LCParams, return_sigma: bool = False):
    """Proximal map of the norm at `y` with quadratic weight `rho`.

    Fourier-domain singular values are shrunk one by one with
    :func:`scalar_prox`, with weights recomputed from `y` itself. A matrix
    input is handled as a single-slice tensor and a matrix is returned.
    """
    if not rho > 0:
        raise ValueError(f"rho must be positive, got {rho!r}")
    y = np.asarray(y, dtype=np.float64)
    matrix = y.ndim == 2
    y3 = as_order3(y)
    U, s, Vh = slice_svd(np.fft.fft(y3, axis=2))
    w = weights_from_sigma(s, p)
    s1 = prox_values(s, rho, w, p)
    lbar = np.einsum("ikn,kn,kjn->ijn", U, s1, Vh)
    out = idft_mode3(lbar)
    if matrix:
        out = out[:, :, 0]
    if return_sigma:
        return out, s, s1, w
    return out
