"""Files and reproducible inputs: the ``.tns`` container, netpbm slices,
seeded sampling masks, synthetic low-tubal-rank tensors and solver configs.

``.tns`` layout (all integers little-endian)::

    offset  size      field
    0       4         magic b"TNSR"
    4       4  u32    version (1)
    8       4  u32    dtype (1 = float64, 2 = bool as one byte 0/1)
    12      4  u32    ndim
    16      8*ndim    u64 extents
    ...               payload, first index fastest
"""

from __future__ import annotations

import json
import math
import os
import struct
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from .lcnorm import LCParams, WeightScheme
from .solver import SolverConfig
from .talgebra import t_product

MAGIC = b"TNSR"
VERSION = 1
DTYPE_F64 = 1
DTYPE_BOOL = 2
SCHEMA = 1


class TnsError(ValueError):
    """Malformed ``.tns`` data."""


class BadMagicError(TnsError):
    pass


class UnsupportedVersionError(TnsError):
    pass


class UnsupportedDtypeError(TnsError):
    pass


class TruncatedError(TnsError):
    pass


def dumps_tns(value) -> bytes:
    """Canonical bytes of a float64 tensor or a boolean mask."""
    value = np.asarray(value)
    if value.dtype == np.bool_:
        code, payload = DTYPE_BOOL, value.astype(np.uint8).tobytes(order="F")
    else:
        code, payload = DTYPE_F64, value.astype("<f8").tobytes(order="F")
    header = MAGIC + struct.pack("<III", VERSION, code, value.ndim)
    header += struct.pack(f"<{value.ndim}Q", *value.shape)
    return header + payload


def loads_tns(data: bytes) -> np.ndarray:
    if len(data) < 16:
        raise TruncatedError(f"header needs 16 bytes, got {len(data)}")
    if data[:4] != MAGIC:
        raise BadMagicError(f"bad magic {data[:4]!r}")
    version, code, ndim = struct.unpack_from("<III", data, 4)
    if version != VERSION:
        raise UnsupportedVersionError(f"unsupported version {version}")
    if code not in (DTYPE_F64, DTYPE_BOOL):
        raise UnsupportedDtypeError(f"unsupported dtype code {code}")
    if len(data) < 16 + 8 * ndim:
        raise TruncatedError("file ends inside the extents")
    dims = struct.unpack_from(f"<{ndim}Q", data, 16)
    count = math.prod(dims)
    itemsize = 8 if code == DTYPE_F64 else 1
    start = 16 + 8 * ndim
    expected = start + count * itemsize
    if len(data) < expected:
        raise TruncatedError(f"payload has {len(data) - start} bytes, expected {count * itemsize}")
    if len(data) > expected:
        raise TnsError(f"{len(data) - expected} trailing bytes after payload")
    if code == DTYPE_F64:
        flat = np.frombuffer(data, dtype="<f8", count=count, offset=start).astype(np.float64)
    else:
        raw = np.frombuffer(data, dtype=np.uint8, count=count, offset=start)
        if np.any(raw > 1):
            raise TnsError("boolean payload holds bytes other than 0 and 1")
        flat = raw.astype(bool)
    return flat.reshape(dims, order="F")


def read_tns(path) -> np.ndarray:
    return loads_tns(Path(path).read_bytes())


def write_tns(value, path) -> None:
    Path(path).write_bytes(dumps_tns(value))


def tns_header(path) -> dict[str, Any]:
    data = Path(path).read_bytes()
    arr = loads_tns(data)
    return {
        "magic": MAGIC.decode(),
        "version": VERSION,
        "dtype": "float64" if arr.dtype != np.bool_ else "bool",
        "ndim": arr.ndim,
        "dims": list(arr.shape),
        "bytes": len(data),
    }


# -- masks -----------------------------------------------------------------

_MASK64 = (1 << 64) - 1


class SplitMix64:
    """SplitMix64 generator (Steele, Lea and Flood); public constants only."""

    def __init__(self, seed: int):
        self.state = seed & _MASK64

    def next(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)


@dataclass(frozen=True)
class MaskSpec:
    seed: int
    missing_rate: float
    dims: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        if not 0 <= self.missing_rate < 100:
            raise ValueError("missing rate must lie in [0, 100)")
        if any(d < 1 for d in self.dims):
            raise ValueError("extents must be positive")

    @property
    def observed_count(self) -> int:
        total = math.prod(self.dims)
        return min(total, math.floor((1.0 - self.missing_rate / 100.0) * total + 0.5))


def generate_mask(spec: MaskSpec) -> np.ndarray:
    """Uniform sample of exactly ``spec.observed_count`` positions.

    Partial Fisher-Yates over flat (first-index-fastest) positions: for
    ``i = 0 .. k-1`` swap slot ``i`` with ``i + next() % (total - i)``.
    """
    total = math.prod(spec.dims)
    k = spec.observed_count
    rng = SplitMix64(spec.seed)
    perm = list(range(total))
    for i in range(k):
        j = i + rng.next() % (total - i)
        perm[i], perm[j] = perm[j], perm[i]
    flat = np.zeros(total, dtype=bool)
    flat[perm[:k]] = True
    return flat.reshape(spec.dims, order="F")


# -- synthetic data ----------------------------------------------------------

def synth_low_tubal(dims: Sequence[int], rank: int, seed: int) -> np.ndarray:
    """t-product of seeded standard-normal ``I1 x r x I3`` and ``r x I2 x I3`` factors."""
    n1, n2, n3 = (int(d) for d in dims)
    if not 0 <= rank <= min(n1, n2):
        raise ValueError(f"rank must lie in [0, {min(n1, n2)}], got {rank}")
    if rank == 0:
        return np.zeros((n1, n2, n3))
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((n1, rank, n3))
    b = rng.standard_normal((rank, n2, n3))
    return t_product(a, b)


# -- netpbm slices -----------------------------------------------------------

def _read_token(data: bytes, pos: int) -> tuple[bytes, int]:
    n = len(data)
    while pos < n:
        if data[pos:pos + 1] == b"#":
            while pos < n and data[pos:pos + 1] not in (b"\n", b"\r"):
                pos += 1
        elif data[pos:pos + 1].isspace():
            pos += 1
        else:
            break
    start = pos
    while pos < n and not data[pos:pos + 1].isspace() and data[pos:pos + 1] != b"#":
        pos += 1
    return data[start:pos], pos


def read_netpbm(path) -> np.ndarray:
    """Binary PGM (``H x W``) or PPM (``H x W x 3``) with maxval 255, as float64."""
    data = Path(path).read_bytes()
    magic, pos = _read_token(data, 0)
    if magic not in (b"P5", b"P6"):
        raise ValueError(f"{path}: unsupported netpbm format {magic!r}")
    fields = []
    for _ in range(3):
        tok, pos = _read_token(data, pos)
        if not tok.isdigit():
            raise ValueError(f"{path}: malformed header")
        fields.append(int(tok))
    width, height, maxval = fields
    if maxval != 255:
        raise ValueError(f"{path}: maxval {maxval} unsupported (only 255)")
    pos += 1  # single whitespace byte before the raster
    channels = 3 if magic == b"P6" else 1
    count = width * height * channels
    raster = data[pos:pos + count]
    if len(raster) != count:
        raise ValueError(f"{path}: raster truncated")
    img = np.frombuffer(raster, dtype=np.uint8).astype(np.float64)
    return img.reshape((height, width, 3) if channels == 3 else (height, width))


def to_bytes(x) -> np.ndarray:
    """Clamp to [0, 255] and round half up."""
    return np.floor(np.clip(np.asarray(x, dtype=np.float64), 0.0, 255.0) + 0.5).astype(np.uint8)


def write_netpbm(img, path) -> None:
    px = to_bytes(img)
    if px.ndim == 2:
        magic = b"P5"
    elif px.ndim == 3 and px.shape[2] == 3:
        magic = b"P6"
    else:
        raise ValueError(f"cannot write an image of shape {px.shape}")
    header = magic + f"\n{px.shape[1]} {px.shape[0]}\n255\n".encode()
    Path(path).write_bytes(header + np.ascontiguousarray(px).tobytes())


def import_slices(directory) -> np.ndarray:
    """Stack the ``.pgm``/``.ppm`` files of `directory` in name order.

    Grayscale slices give ``H x W x n``; colour frames give
    ``H x W x 3 x n`` (channel is mode 3, frame is mode 4).
    """
    directory = Path(directory)
    files = sorted(p for p in directory.iterdir() if p.suffix.lower() in (".pgm", ".ppm"))
    if not files:
        raise ValueError(f"no .pgm/.ppm files in {directory}")
    images = [read_netpbm(p) for p in files]
    shapes = {im.shape for im in images}
    if len(shapes) != 1:
        raise ValueError(f"slices have mixed shapes: {sorted(shapes)}")
    return np.stack(images, axis=-1)


def export_slices(x, directory, prefix: str = "slice") -> list[Path]:
    """Inverse of :func:`import_slices`; writes one file per trailing index."""
    x = np.asarray(x)
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    if x.ndim == 3:
        ext = "pgm"
    elif x.ndim == 4 and x.shape[2] == 3:
        ext = "ppm"
    else:
        raise ValueError(f"expected H x W x n or H x W x 3 x n, got {x.shape}")
    paths = []
    for i in range(x.shape[-1]):
        path = directory / f"{prefix}_{i:04d}.{ext}"
        write_netpbm(x[..., i], path)
        paths.append(path)
    return paths


# -- configuration -----------------------------------------------------------

_MSI = {"tau": 1e4, "eta": 1.1, "vartheta": 500.0, "scheme": "normalized"}

PRESETS: dict[str, dict[str, Any]] = {
    "mri": {"alpha": [1, 1, 1, 1, 1, 1], "tau": 1e4, "eta": 1.1, "nu": 1.0, "vartheta": 500.0, "scheme": "normalized"},
    "clay": {"alpha": [0.01, 0.001, 1, 0.1, 1, 0.001], "nu": 2.5, **_MSI},
    "chart_and_stuffed_toy": {"alpha": [0.1, 0.001, 1, 0.1, 1, 0.001], "nu": 1.0, **_MSI},
    "balloons": {"alpha": [0.1, 0.001, 1, 0.1, 1, 0.01], "nu": 2.5, **_MSI},
    "cd": {"alpha": [0.1, 0.01, 1, 0.1, 1, 0.01], "nu": 0.5, **_MSI},
    "cv": {
        "alpha": [0.1, 1, 1, 1, 0.1, 1, 1, 1, 1, 0.1],
        "tau": 1e5,
        "eta": 1.1,
        "nu": 0.1,
        "vartheta": 1000.0,
        "scheme": "raw",
    },
}

DEFAULTS: dict[str, Any] = {
    "schema": SCHEMA,
    "tau": 1e4,
    "eta": 1.1,
    "nu": 1.0,
    "vartheta": 500.0,
    "c": 0.8,
    "scheme": "normalized",
    "epsilon": 1e-4,
    "max_iters": 500,
    "peak": 255.0,
    "ergas_denominator": "mean2",
}

CONFIG_KEYS = frozenset(DEFAULTS) | {"alpha"}


def make_config(preset: str | None = None, overrides: dict[str, Any] | None = None) -> dict[str, Any]:
    """Merge defaults, a named preset and explicit overrides into one config dict."""
    cfg = dict(DEFAULTS)
    if preset is not None:
        if preset not in PRESETS:
            raise KeyError(f"unknown preset {preset!r}; choose from {sorted(PRESETS)}")
        cfg.update(PRESETS[preset])
    cfg.update(overrides or {})
    unknown = set(cfg) - CONFIG_KEYS
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    if cfg.get("schema", SCHEMA) != SCHEMA:
        raise ValueError(f"unsupported config schema {cfg['schema']!r}")
    if cfg["ergas_denominator"] not in ("mean", "mean2"):
        raise ValueError("ergas_denominator must be 'mean' or 'mean2'")
    WeightScheme(cfg["scheme"])
    return cfg


def load_config(path=None, preset: str | None = None) -> dict[str, Any]:
    overrides = json.loads(Path(path).read_text()) if path is not None else None
    return make_config(preset, overrides)


def solver_config(cfg: dict[str, Any], ndim: int, threads: int = 1) -> SolverConfig:
    """Build a :class:`SolverConfig`; equal alphas are assumed when none are given."""
    alpha = cfg.get("alpha")
    if alpha is None:
        alpha = [1.0] * (ndim * (ndim + 1) // 2)
    return SolverConfig(
        alpha=tuple(alpha),
        tau=float(cfg["tau"]),
        eta=float(cfg["eta"]),
        lc=LCParams(nu=float(cfg["nu"]), vartheta=float(cfg["vartheta"]), c=float(cfg["c"]), scheme=cfg["scheme"]),
        epsilon=float(cfg["epsilon"]),
        max_iters=int(cfg["max_iters"]),
        threads=threads,
    )


def write_json(obj, path) -> None:
    """Deterministic JSON: sorted keys, fixed indentation, trailing newline."""
    text = json.dumps(obj, indent=2, sort_keys=True, allow_nan=True) + "\n"
    tmp = f"{path}.tmp"
    Path(tmp).write_text(text)
    os.replace(tmp, path)
