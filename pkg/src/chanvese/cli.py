"""Command-line front end: load an image, evolve a contour, write results.

Outputs in the chosen directory: mask.pgm (inside = 255), overlay.png
(contour in red), energy.csv (one row per iteration), metrics.json when a
ground-truth mask or the Otsu baseline is requested, and optional
overlay_<iter>.png snapshots.

Exit codes: 0 success, 2 parameter or usage error, 3 I/O or format error,
4 numerical instability, 5 degenerate input.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import (
    DegenerateInputError,
    FormatError,
    NumericalInstabilityError,
    ParameterError,
)
from .grid import BoundaryMode
from .image_io import gaussian_smooth, load_image, load_mask, normalize, save_mask, save_overlay
from .levelset import extract_contour, sdf_circle, sdf_from_mask
from .metrics import evaluate, otsu_threshold
from .solver import SolverParams, cfl_check, run

EXIT_OK = 0
EXIT_PARAMETER = 2
EXIT_IO = 3
EXIT_NUMERICAL = 4
EXIT_DEGENERATE = 5


@dataclass
class CliConfig:
    input: Path
    out_dir: Path
    params: SolverParams
    init: str | None          # "circle:cx,cy,r" or "mask:path"; None = default circle
    smooth: float | None
    ground_truth: Path | None
    baseline: bool
    overlay_every: int | None
    otsu_bright: str


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="chanvese",
        description="Region-based active-contour segmentation of a grayscale image.",
    )
    p.add_argument("--input", required=True, help="input image (PGM P2/P5 or 8-bit PNG)")
    p.add_argument("--out-dir", required=True, help="directory for result files")
    p.add_argument("--lambda1", type=float, default=1.0, help="inside fit weight")
    p.add_argument("--lambda2", type=float, default=1.0, help="outside fit weight")
    p.add_argument("--mu", type=float, default=0.5, help="contour length weight")
    p.add_argument("--nu", type=float, default=0.015, help="inside area weight")
    p.add_argument("--tau", type=float, default=0.2, help="time step (<= 0.5 on unit grids)")
    p.add_argument("--max-iters", type=int, default=500)
    p.add_argument("--band", type=float, default=3.0, help="curvature narrow-band half width")
    p.add_argument("--reinit-every", type=int, default=10,
                   help="iterations between reinitializations (0 = never)")
    p.add_argument("--tol", type=float, default=0.00025,
                   help="mask-churn fraction counted as converged")
    p.add_argument("--window", type=int, default=3,
                   help="consecutive converged checks required to stop")
    p.add_argument("--boundary", choices=["replicate", "periodic"], default="replicate")
    p.add_argument("--init", action="append",
                   help="initial contour: circle:cx,cy,r or mask:path "
                        "(default: centered circle, r = 0.1 * min(width, height))")
    p.add_argument("--smooth", type=float, default=None, metavar="SIGMA",
                   help="Gaussian-smooth the input before normalizing")
    p.add_argument("--ground-truth", default=None, help="mask to score the result against")
    p.add_argument("--baseline", action="store_true",
                   help="also report an Otsu-threshold segmentation in metrics.json")
    p.add_argument("--overlay-every", type=int, default=None, metavar="N",
                   help="write overlay_<iter>.png every N iterations")
    p.add_argument("--otsu-bright", choices=["inside", "outside"], default="inside",
                   help="which side of the Otsu threshold counts as inside")
    return p


def parse_config(argv) -> CliConfig:
    args = build_parser().parse_args(argv)
    if args.init and len(args.init) > 1:
        raise ParameterError("--init given more than once; circle: and mask: are mutually exclusive")
    if args.smooth is not None and args.smooth <= 0:
        raise ParameterError(f"--smooth must be positive, got {args.smooth}")
    if args.overlay_every is not None and args.overlay_every < 1:
        raise ParameterError(f"--overlay-every must be >= 1, got {args.overlay_every}")
    params = SolverParams(
        lambda1=args.lambda1,
        lambda2=args.lambda2,
        mu=args.mu,
        nu=args.nu,
        tau=args.tau,
        max_iters=args.max_iters,
        band_width=args.band,
        reinit_every=args.reinit_every,
        convergence_tol=args.tol,
        convergence_window=args.window,
        boundary=BoundaryMode(args.boundary),
    )
    cfl_check(params)
    return CliConfig(
        input=Path(args.input),
        out_dir=Path(args.out_dir),
        params=params,
        init=args.init[0] if args.init else None,
        smooth=args.smooth,
        ground_truth=Path(args.ground_truth) if args.ground_truth else None,
        baseline=args.baseline,
        overlay_every=args.overlay_every,
        otsu_bright=args.otsu_bright,
    )


def _initial_field(spec: str | None, width: int, height: int) -> np.ndarray:
    if spec is None:
        return sdf_circle(width, height, width / 2.0, height / 2.0, 0.1 * min(width, height))
    kind, _, rest = spec.partition(":")
    if kind == "circle":
        try:
            cx, cy, r = (float(tok) for tok in rest.split(","))
        except ValueError:
            raise ParameterError(f"bad circle init {spec!r}, expected circle:cx,cy,r") from None
        return sdf_circle(width, height, cx, cy, r)
    if kind == "mask":
        if not rest:
            raise ParameterError("mask init needs a path: mask:path")
        mask = load_mask(rest)
        if mask.shape != (height, width):
            raise ParameterError(
                f"init mask {rest} is {mask.shape[1]}x{mask.shape[0]}, "
                f"image is {width}x{height}"
            )
        return sdf_from_mask(mask)
    raise ParameterError(f"unknown init spec {spec!r}, expected circle:... or mask:...")


def _write_energy_csv(trace, path: Path) -> None:
    lines = ["iter,fit_inside,fit_outside,length,area,total"]
    for i, rec in enumerate(trace, start=1):
        lines.append(
            f"{i},{rec.fit_inside:.6g},{rec.fit_outside:.6g},"
            f"{rec.length_term:.6g},{rec.area_term:.6g},{rec.total:.6g}"
        )
    path.write_text("\n".join(lines) + "\n", encoding="ascii")


def main(argv=None) -> int:
    try:
        config = parse_config(sys.argv[1:] if argv is None else argv)
    except ParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARAMETER

    try:
        return _run_pipeline(config)
    except ParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARAMETER
    except (FormatError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except NumericalInstabilityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except DegenerateInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE


def _run_pipeline(config: CliConfig) -> int:
    raw = load_image(config.input)
    if config.smooth is not None:
        raw = gaussian_smooth(raw, config.smooth)
    img = normalize(raw)
    height, width = img.shape
    phi0 = _initial_field(config.init, width, height)

    config.out_dir.mkdir(parents=True, exist_ok=True)

    snapshot = None
    if config.overlay_every:
        def snapshot(iteration, phi):
            if iteration % config.overlay_every == 0:
                save_overlay(img, extract_contour(phi), config.out_dir / f"overlay_{iteration}.png")

    result = run(img, phi0, config.params, on_iteration=snapshot)

    save_mask(result.mask, config.out_dir / "mask.pgm")
    save_overlay(img, result.contours, config.out_dir / "overlay.png")
    _write_energy_csv(result.trace, config.out_dir / "energy.csv")

    if config.ground_truth is not None or config.baseline:
        report = {}
        truth = None
        if config.ground_truth is not None:
            truth = load_mask(config.ground_truth)
            report["chan_vese"] = evaluate(result.mask, truth).to_dict()
        if config.baseline:
            try:
                otsu_mask = otsu_threshold(img, bright_inside=config.otsu_bright == "inside")
            except DegenerateInputError as exc:
                report["otsu"] = {"error": str(exc)}
            else:
                if truth is not None:
                    report["otsu"] = evaluate(otsu_mask, truth).to_dict()
                else:
                    inside = int(otsu_mask.sum())
                    report["otsu"] = {
                        "inside_count": inside,
                        "outside_count": otsu_mask.size - inside,
                    }
        with open(config.out_dir / "metrics.json", "w", encoding="ascii") as fh:
            json.dump(report, fh, indent=2, sort_keys=True)
            fh.write("\n")

    final = result.trace[-1].total if result.trace else float("nan")
    print(
        f"converged={result.iterations < config.params.max_iters} "
        f"iterations={result.iterations} energy={final:.6g} "
        f"u={result.u:.4f} v={result.v:.4f}"
    )
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
