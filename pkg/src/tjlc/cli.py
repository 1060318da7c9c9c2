"""Command-line entry point.

Exit codes: 0 success, 1 usage error, 2 data error, 3 the solver hit
``max_iters`` without converging (its result is still written).
"""

from __future__ import annotations

import argparse
import hashlib
import logging
import sys
from pathlib import Path

import numpy as np

from . import io as tio
from .metrics import tensor_pqi
from .solver import run
from .tensor import missing_rate

log = logging.getLogger("tjlc")

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_NOT_CONVERGED = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _load_tensor(path: str) -> np.ndarray:
    p = Path(path)
    if p.is_dir():
        return tio.import_slices(p)
    return tio.read_tns(p)


def _cmd_mask(args) -> int:
    if args.like is not None:
        dims = tio.read_tns(args.like).shape
    elif args.dims:
        dims = tuple(args.dims)
    else:
        raise UsageError("mask: give --dims or --like")
    spec = tio.MaskSpec(seed=args.seed, missing_rate=args.mr, dims=dims)
    mask = tio.generate_mask(spec)
    tio.write_tns(mask, args.output)
    log.info("mask %s: %d observed of %d (MR %.4f%%)", args.output, mask.sum(), mask.size, missing_rate(mask))
    return EXIT_OK


def _cmd_synth(args) -> int:
    x = tio.synth_low_tubal(args.dims, args.rank, args.seed)
    tio.write_tns(x, args.output)
    log.info("synth %s: dims %s, tubal rank %d", args.output, list(x.shape), args.rank)
    return EXIT_OK


def _cmd_complete(args) -> int:
    t = _load_tensor(args.tensor)
    omega = tio.read_tns(args.mask)
    if omega.dtype != np.bool_:
        raise ValueError(f"{args.mask} is not a boolean mask")
    if omega.shape != t.shape:
        raise ValueError(f"mask shape {omega.shape} does not match tensor shape {t.shape}")
    cfg = tio.load_config(args.config, args.preset)
    scfg = tio.solver_config(cfg, t.ndim, threads=args.threads)
    log.info("completing %s at MR %.2f%% with %d pair(s)", list(t.shape), missing_rate(omega), len(scfg.alpha))
    result = run(t, omega, scfg)
    tio.write_tns(result.x, args.output)
    if args.export_dir:
        tio.export_slices(result.x, args.export_dir)

    report = {
        "schema": tio.SCHEMA,
        "dims": list(t.shape),
        "missing_rate": missing_rate(omega),
        "config": cfg,
        "iterations": result.iterations,
        "converged": result.converged,
        "re_history": [r if np.isfinite(r) else None for r in result.re_history],
        "joint_rank": result.joint_rank_final,
        "output_sha256": hashlib.sha256(tio.dumps_tns(result.x)).hexdigest(),
    }
    if args.reference:
        ref = _load_tensor(args.reference)
        report["metrics"] = tensor_pqi(ref, result.x, cfg["peak"], cfg["ergas_denominator"]).to_dict()
    report_path = args.report or str(Path(args.output).with_suffix(".json"))
    tio.write_json(report, report_path)
    log.info("wrote %s and %s after %d iterations", args.output, report_path, result.iterations)
    if not result.converged:
        return EXIT_NOT_CONVERGED
    return EXIT_OK


def format_table(rows: list[tuple[str, str]]) -> str:
    width = max(len(name) for name, _ in rows)
    return "\n".join(f"{name.ljust(width)}  {value}" for name, value in rows)


def _cmd_evaluate(args) -> int:
    cfg = tio.load_config(args.config)
    peak = args.peak if args.peak is not None else cfg["peak"]
    denom = args.ergas_denominator or cfg["ergas_denominator"]
    ref, cand = _load_tensor(args.reference), _load_tensor(args.candidate)
    rep = tensor_pqi(ref, cand, peak, denom)
    report = {"schema": tio.SCHEMA, "peak": peak, "ergas_denominator": denom, **rep.to_dict()}
    if args.output:
        tio.write_json(report, args.output)
    print(format_table([("PSNR", f"{rep.psnr:.4f}"), ("SSIM", f"{rep.ssim:.4f}"), ("ERGAS", f"{rep.ergas:.4f}")]))
    return EXIT_OK


def _cmd_info(args) -> int:
    h = tio.tns_header(args.path)
    print(format_table([(k, str(v)) for k, v in h.items()]))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="tjlc", description="Low-rank tensor completion with the tensor joint rank.")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("mask", help="write a seeded observation mask")
    p.add_argument("--dims", type=int, nargs="+")
    p.add_argument("--like", help="take dims from this .tns file")
    p.add_argument("--mr", type=float, required=True, help="missing rate in percent")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", required=True)
    p.set_defaults(func=_cmd_mask)

    p = sub.add_parser("synth", help="write a synthetic low-tubal-rank tensor")
    p.add_argument("--dims", type=int, nargs=3, required=True)
    p.add_argument("--rank", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", required=True)
    p.set_defaults(func=_cmd_synth)

    p = sub.add_parser("complete", help="complete a tensor from its observed entries")
    p.add_argument("tensor", help=".tns file or directory of PGM/PPM slices")
    p.add_argument("mask", help="boolean .tns mask")
    p.add_argument("--config", help="JSON config file")
    p.add_argument("--preset", choices=sorted(tio.PRESETS))
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--output", required=True)
    p.add_argument("--report", help="report path (default: output with .json suffix)")
    p.add_argument("--reference", help="ground truth for quality metrics")
    p.add_argument("--export-dir", help="also write the result as PGM/PPM slices")
    p.set_defaults(func=_cmd_complete)

    p = sub.add_parser("evaluate", help="quality metrics of a candidate against a reference")
    p.add_argument("reference")
    p.add_argument("candidate")
    p.add_argument("--config")
    p.add_argument("--peak", type=float)
    p.add_argument("--ergas-denominator", choices=["mean", "mean2"])
    p.add_argument("--output", help="write the JSON report here")
    p.set_defaults(func=_cmd_evaluate)

    p = sub.add_parser("info", help="dump a .tns header")
    p.add_argument("path")
    p.set_defaults(func=_cmd_info)
    return parser


def cli_main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    if args.command is None:
        build_parser().print_usage(sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(
        level=logging.DEBUG if args.verbose > 1 else logging.INFO if args.verbose else logging.WARNING,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    if getattr(args, "threads", 1) < 1:
        print("tjlc: --threads must be positive", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except (KeyError, ValueError, OSError) as exc:
        print(f"tjlc: {exc}", file=sys.stderr)
        return EXIT_DATA


def main() -> None:
    sys.exit(cli_main())
