"""Picture quality indices for completed images and tensors.

PSNR and SSIM are computed per frontal slice and averaged; ERGAS is
computed once over the whole tensor. SSIM here is the single-window global
formula (one mean, variance and covariance per slice), not the Gaussian
sliding-window variant, so values differ from ``skimage.metrics``.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

PSNR_CAP = 100.0


def _check_shapes(reference, candidate):
    r = np.asarray(reference, dtype=np.float64)
    c = np.asarray(candidate, dtype=np.float64)
    if r.shape != c.shape:
        raise ValueError(f"shape mismatch: {r.shape} vs {c.shape}")
    return r, c


def psnr(reference, candidate, peak: float = 255.0, cap: float | None = PSNR_CAP) -> float:
    """``10 log10(peak**2 * size / ||r - c||_F**2)`` in dB.

    Identical inputs give ``inf``, reported as `cap` unless ``cap=None``.
    """
    r, c = _check_shapes(reference, candidate)
    err = float(np.sum((r - c) ** 2))
    if err == 0:
        return math.inf if cap is None else cap
    value = 10.0 * math.log10(peak * peak * r.size / err)
    return value if cap is None else min(value, cap)


def ssim(reference, candidate, peak: float = 255.0) -> float:
    r, c = _check_shapes(reference, candidate)
    c1 = (0.01 * peak) ** 2
    c2 = (0.03 * peak) ** 2
    mr, mc = r.mean(), c.mean()
    dr, dc = r - mr, c - mc
    var_r = np.mean(dr * dr)
    var_c = np.mean(dc * dc)
    cov = np.mean(dc * dr)
    num = (2.0 * mc * mr + c1) * (2.0 * cov + c2)
    den = (mc * mc + mr * mr + c1) * (var_c + var_r + c2)
    return float(num / den)


def _slices(x: np.ndarray) -> np.ndarray:
    """View as ``I1 x I2 x (number of frontal slices)``."""
    if x.ndim == 2:
        return x[:, :, np.newaxis]
    return np.reshape(x, x.shape[:2] + (-1,), order="F")


def ergas(reference, candidate, denominator: str = "mean2") -> float:
    """Relative global error over frontal slices.

    ``denominator="mean2"`` divides each slice's MSE by its squared mean
    (the usual definition); ``"mean"`` divides by the plain mean.
    """
    r, c = _check_shapes(reference, candidate)
    if denominator not in ("mean", "mean2"):
        raise ValueError("denominator must be 'mean' or 'mean2'")
    r, c = _slices(r), _slices(c)
    mse = np.mean((r - c) ** 2, axis=(0, 1))
    means = np.mean(r, axis=(0, 1))
    if np.any(means == 0):
        raise ValueError("reference has a zero-mean slice; ERGAS is undefined")
    scale = means ** 2 if denominator == "mean2" else means
    return float(100.0 * math.sqrt(np.mean(mse / scale)))


@dataclass
class MetricReport:
    psnr: float
    ssim: float
    ergas: float
    per_slice: dict[str, list[float]] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)


def tensor_pqi(reference, candidate, peak: float = 255.0, ergas_denominator: str = "mean2") -> MetricReport:
    """Slice-averaged PSNR and SSIM plus tensor-level ERGAS."""
    r, c = _check_shapes(reference, candidate)
    rs, cs = _slices(r), _slices(c)
    p = [psnr(rs[:, :, i], cs[:, :, i], peak) for i in range(rs.shape[2])]
    s = [ssim(rs[:, :, i], cs[:, :, i], peak) for i in range(rs.shape[2])]
    return MetricReport(
        psnr=float(np.mean(p)),
        ssim=float(np.mean(s)),
        ergas=ergas(r, c, ergas_denominator),
        per_slice={"psnr": p, "ssim": s},
    )
