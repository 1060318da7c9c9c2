"""Tensor completion with the tensor joint rank and a logarithmic composite norm."""

from .io import (
    MaskSpec,
    export_slices,
    generate_mask,
    import_slices,
    load_config,
    make_config,
    read_tns,
    solver_config,
    synth_low_tubal,
    write_tns,
)
from .lcnorm import LCParams, WeightScheme, lc_norm, scalar_prox, tensor_prox
from .metrics import MetricReport, ergas, psnr, ssim, tensor_pqi
from .solver import CompletionResult, SolverConfig, run
from .talgebra import bcirc, conj_transpose, dft_mode3, identity_tensor, joint_rank, t_product, t_svd, tubal_rank
from .tensor import fold_mode_n, fold_pair, missing_rate, project, unfold_mode_n, unfold_pair

__all__ = [
    "CompletionResult",
    "LCParams",
    "MaskSpec",
    "MetricReport",
    "SolverConfig",
    "WeightScheme",
    "bcirc",
    "conj_transpose",
    "dft_mode3",
    "ergas",
    "export_slices",
    "fold_mode_n",
    "fold_pair",
    "generate_mask",
    "identity_tensor",
    "import_slices",
    "joint_rank",
    "lc_norm",
    "load_config",
    "make_config",
    "missing_rate",
    "project",
    "psnr",
    "read_tns",
    "run",
    "scalar_prox",
    "solver_config",
    "ssim",
    "synth_low_tubal",
    "t_product",
    "t_svd",
    "tensor_pqi",
    "tensor_prox",
    "tubal_rank",
    "unfold_mode_n",
    "unfold_pair",
    "write_tns",
]
__version__ = "0.1.0"
