"""
Quality indices and file formats
================================

Score a noisy image stack and round-trip it through the ``.tns`` format
and PGM slices.
"""

import tempfile
from pathlib import Path

import numpy as np

from tjlc import export_slices, import_slices, read_tns, tensor_pqi, write_tns

rng = np.random.default_rng(1)
ref = np.floor(rng.random((32, 32, 4)) * 200) + 20
noisy = np.clip(ref + rng.normal(0, 5, ref.shape), 0, 255)

rep = tensor_pqi(ref, noisy)
print(f"PSNR {rep.psnr:.2f} dB   SSIM {rep.ssim:.4f}   ERGAS {rep.ergas:.3f}")
print("per-slice PSNR:", np.round(rep.per_slice["psnr"], 2))

# %%
# A uniform error of one grey level gives the same PSNR on any image.
print("PSNR of +1:", tensor_pqi(ref, ref + 1).psnr)

# %%
# Files: ``.tns`` keeps doubles exactly, PGM rounds to bytes.
with tempfile.TemporaryDirectory() as d:
    write_tns(noisy, Path(d) / "noisy.tns")
    print("tns exact:", np.array_equal(read_tns(Path(d) / "noisy.tns"), noisy))
    export_slices(noisy, Path(d) / "frames")
    back = import_slices(Path(d) / "frames")
    print("pgm max error:", np.abs(back - noisy).max())
