"""Command-line front end.

Subcommands ``direct``, ``inverse``, ``evolve``, ``oracle``, ``roundtrip`` and
``check``.  Every command writing a CSV also writes ``<output>.json`` with the
grid, tolerances, solver statistics and wall time.

Exit codes: 0 success, 2 usage error, 3 inadmissible data, 4 numerical
failure (including a roundtrip outside tolerance).
"""
from __future__ import annotations

import argparse
import os
import sys
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .direct import MARGIN_FLOOR, ALPHA_FLOOR, scattering_coefficients, spectral_check
from .errors import ConvergenceError, DataError
from .evolution import evolve_rho, gauge_forward, gauge_inverse
from .grid import (Potential, ScatteringData, SpatialGrid, l2_norm,
                   make_dual_spatial_grid, make_dual_spectral_grid)
from .inverse import inverse_map
from .io import (grid_sidecar, read_potential, read_scattering, sidecar_path,
                 write_json, write_potential, write_scattering)
from .oracle import StepperConfig, step_dnls1, step_dnls2

REPORT_SCHEMA = "dnls-ist/report/1"
OUTPUT_DIR_ENV = "DNLS_IST_OUTPUT_DIR"
EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_CONVERGENCE = 0, 2, 3, 4

PRESETS = {
    "gaussian-small": {"amplitude": 0.3, "L": 16.0, "N": 1024},
    "gaussian-medium": {"amplitude": 0.6, "L": 16.0, "N": 1024},
    "zero": {"amplitude": 0.0, "L": 16.0, "N": 1024},
}


@dataclass
class Tolerances:
    ode: float = 1e-8
    krylov: float = 1e-10
    det: float = 1e-6
    roundtrip: float = 1e-3

    def __post_init__(self):
        for name, value in asdict(self).items():
            if not value > 0:
                raise ValueError(f"tolerance {name} must be positive, got {value}")


@dataclass
class RunConfig:
    L: float = 16.0
    N: int = 1024
    tolerances: Tolerances = field(default_factory=Tolerances)
    preset: str | None = None
    output_dir: Path = Path(".")
    threads: int = 1

    def __post_init__(self):
        SpatialGrid(self.L, self.N)

    def to_dict(self):
        return {"grid": {"L": self.L, "N": self.N}, "tolerances": asdict(self.tolerances),
                "preset": self.preset, "threads": self.threads}


def preset_potential(name: str) -> Potential:
    preset = PRESETS[name]
    grid = SpatialGrid(preset["L"], preset["N"])
    return Potential.from_function(grid, lambda x: preset["amplitude"] * np.exp(-x ** 2))


def parse_xs(text: str) -> np.ndarray:
    """``lo:hi:n`` -> ``n`` points ``lo + j (hi - lo)/n`` (right end excluded,
    so ``-16:16:1024`` reproduces the default grid)."""
    try:
        lo, hi, n = text.split(":")
        lo, hi, n = float(lo), float(hi), int(n)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected lo:hi:n, got {text!r}")
    if n < 1 or not hi > lo:
        raise argparse.ArgumentTypeError(f"need hi > lo and n >= 1, got {text!r}")
    return lo + (hi - lo) * np.arange(n) / n


def _positive(text):
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return value


def _nonnegative(text):
    value = float(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be nonnegative, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", type=Path, help="input CSV")
    common.add_argument("--output", type=Path,
                        help=f"output CSV (default: ${OUTPUT_DIR_ENV}/<command>.csv)")
    common.add_argument("--preset", choices=sorted(PRESETS),
                        help="built-in initial potential instead of --input")
    common.add_argument("--tol", type=_positive, default=1e-10,
                        help="linear-solve residual bound")
    common.add_argument("--ode-tol", type=_positive, default=1e-8,
                        help="refinement threshold for the Jost integration")
    common.add_argument("--threads", type=int, default=1, help="worker cap")

    p = argparse.ArgumentParser(prog="dnls-ist", description=__doc__.split("\n\n")[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    d = sub.add_parser("direct", parents=[common], help="potential -> scattering data")
    d.add_argument("--check", action="store_true", help="certify the spectral condition")

    i = sub.add_parser("inverse", parents=[common], help="scattering data -> potential")
    i.add_argument("--xs", type=parse_xs, help="output points lo:hi:n")
    i.add_argument("--oversample", type=int, default=1)

    e = sub.add_parser("evolve", parents=[common], help="solve the Cauchy problem")
    e.add_argument("--t", type=_nonnegative, required=True)
    e.add_argument("--via", choices=["ist", "pde", "both"], default="ist")
    e.add_argument("--eq", choices=["dnls2", "dnls1"], default="dnls2")
    e.add_argument("--dt", type=_positive, default=1e-4)

    o = sub.add_parser("oracle", parents=[common], help="pseudospectral time stepping")
    o.add_argument("--t", type=_nonnegative, required=True)
    o.add_argument("--dt", type=_positive, default=1e-4)
    o.add_argument("--eq", choices=["dnls2", "dnls1"], default="dnls2")

    r = sub.add_parser("roundtrip", parents=[common], help="direct then inverse map")
    r.add_argument("--roundtrip-tol", type=_positive, default=1e-3)

    c = sub.add_parser("check", parents=[common], help="certify scattering data")
    c.add_argument("--det-tol", type=_positive, default=1e-6)
    return p


def _output_path(args, suffix=".csv") -> Path:
    if args.output is not None:
        return args.output
    base = Path(os.environ.get(OUTPUT_DIR_ENV, "."))
    return base / f"{args.command}{suffix}"


def _load_potential(args, parser) -> Potential:
    if (args.input is None) == (args.preset is None):
        parser.error("give exactly one of --input or --preset")
    return preset_potential(args.preset) if args.preset else read_potential(args.input)


def _load_scattering(args, parser) -> ScatteringData:
    if args.preset:
        return scattering_coefficients(preset_potential(args.preset),
                                       tol=args.ode_tol, threads=args.threads).data
    if args.input is None:
        parser.error("give --input or --preset")
    return read_scattering(args.input)


def _config(args, grid: SpatialGrid) -> RunConfig:
    tol = Tolerances(ode=args.ode_tol, krylov=args.tol,
                     det=getattr(args, "det_tol", 1e-6),
                     roundtrip=getattr(args, "roundtrip_tol", 1e-3))
    out = args.output.parent if args.output else Path(os.environ.get(OUTPUT_DIR_ENV, "."))
    return RunConfig(grid.L, grid.N, tol, args.preset, out, args.threads)


def _report(cfg: RunConfig, command: str, started: float, **fields) -> dict:
    rep = {"schema": REPORT_SCHEMA, "command": command, "version": __version__}
    rep.update(cfg.to_dict())
    rep.update(fields)
    rep["wall_time_s"] = round(time.perf_counter() - started, 6)
    return rep


def _write_csv_and_report(path: Path, writer, obj, report: dict) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    writer(path, obj)
    write_json(sidecar_path(path), report)


def _direct(p: Potential, args):
    res = scattering_coefficients(p, tol=args.ode_tol, threads=args.threads)
    return res.data, res.substeps


def cmd_direct(args, parser) -> int:
    t0 = time.perf_counter()
    p = _load_potential(args, parser)
    cfg = _config(args, p.grid)
    d, substeps = _direct(p, args)
    cert = spectral_check(d, raise_on_failure=args.check)
    rep = _report(cfg, "direct", t0, substeps=substeps,
                  sidecar=grid_sidecar(p.grid, d.grid, asdict(cfg.tolerances)),
                  spectral_margin=cert.margin, min_abs_alpha=cert.min_abs_alpha,
                  determinant_defect=d.determinant_defect())
    _write_csv_and_report(_output_path(args), write_scattering, d, rep)
    return EXIT_OK


def cmd_inverse(args, parser) -> int:
    t0 = time.perf_counter()
    d = _load_scattering(args, parser)
    spatial = make_dual_spatial_grid(d.grid)
    cfg = _config(args, spatial)
    spectral_check(d)
    xs = spatial if args.xs is None else args.xs
    q, stats = inverse_map(d, xs=xs, tol=args.tol, threads=args.threads,
                           oversample_factor=args.oversample, return_report=True)
    rep = _report(cfg, "inverse", t0, sidecar=grid_sidecar(spatial, d.grid,
                                                          asdict(cfg.tolerances)),
                  solver=stats.to_dict())
    path = _output_path(args)
    if isinstance(q, Potential):
        _write_csv_and_report(path, write_potential, q, rep)
    else:
        _write_csv_and_report(path, _write_points, (args.xs, q), rep)
    return EXIT_OK


def _write_points(path, pair):
    x, q = pair
    np.savetxt(path, np.column_stack([x, q.real, q.imag]), fmt="%.17g",
               delimiter=",", header="x,re_q,im_q", comments="")


def _stepper(eq):
    return step_dnls2 if eq == "dnls2" else step_dnls1


def _ist_evolve(p: Potential, t: float, eq: str, args):
    src = gauge_forward(p) if eq == "dnls1" else p
    d, _ = _direct(src, args)
    spectral_check(d)
    q, stats = inverse_map(evolve_rho(d, t), xs=p.grid, tol=args.tol,
                           threads=args.threads, return_report=True)
    return (gauge_inverse(q) if eq == "dnls1" else q), stats


def cmd_evolve(args, parser) -> int:
    t0 = time.perf_counter()
    p = _load_potential(args, parser)
    cfg = _config(args, p.grid)
    path = _output_path(args)
    fields = {"t": args.t, "via": args.via, "equation": args.eq}
    if args.via in ("ist", "both"):
        q_ist, stats = _ist_evolve(p, args.t, args.eq, args)
        fields["solver"] = {"max_residual": float(stats.residuals.max()),
                            "max_iterations": int(stats.iterations.max())}
    if args.via in ("pde", "both"):
        q_pde = _stepper(args.eq)(p, StepperConfig(args.dt, args.t))
        fields["dt"] = args.dt
    if args.via == "both":
        fields["relative_l2_distance"] = (l2_norm(q_ist.values - q_pde.values, p.grid)
                                          / l2_norm(q_pde.values, p.grid))
        pde_path = path.with_name(path.stem + ".pde" + path.suffix)
        path.parent.mkdir(parents=True, exist_ok=True)
        write_potential(pde_path, q_pde)
        fields["pde_output"] = str(pde_path)
    result = q_ist if args.via in ("ist", "both") else q_pde
    _write_csv_and_report(path, write_potential, result, _report(cfg, "evolve", t0, **fields))
    return EXIT_OK


def cmd_oracle(args, parser) -> int:
    t0 = time.perf_counter()
    p = _load_potential(args, parser)
    cfg = _config(args, p.grid)
    stepper_cfg = StepperConfig(args.dt, args.t)
    q = _stepper(args.eq)(p, stepper_cfg)
    rep = _report(cfg, "oracle", t0, t=args.t, dt=args.dt, equation=args.eq,
                  steps=stepper_cfg.steps, scheme=stepper_cfg.scheme)
    _write_csv_and_report(_output_path(args), write_potential, q, rep)
    return EXIT_OK


def cmd_roundtrip(args, parser) -> int:
    t0 = time.perf_counter()
    p = _load_potential(args, parser)
    cfg = _config(args, p.grid)
    d, substeps = _direct(p, args)
    cert = spectral_check(d)
    q, stats = inverse_map(d, xs=p.grid, tol=args.tol, threads=args.threads,
                           return_report=True)
    err = q.values - p.values
    scale = np.max(np.abs(p.values))
    sup = float(np.max(np.abs(err)))
    rel = sup / scale if scale > 0 else sup
    passed = rel <= args.roundtrip_tol
    rep = _report(cfg, "roundtrip", t0, substeps=substeps, spectral_margin=cert.margin,
                  determinant_defect=d.determinant_defect(),
                  sup_error=sup, relative_sup_error=rel,
                  l2_error=l2_norm(err, p.grid), passed=passed,
                  solver={"max_residual": float(stats.residuals.max()),
                          "max_iterations": int(stats.iterations.max())})
    _write_csv_and_report(_output_path(args), write_potential, q, rep)
    if not passed:
        print(f"roundtrip error {rel:.3e} exceeds {args.roundtrip_tol:.1e}", file=sys.stderr)
        return EXIT_CONVERGENCE
    return EXIT_OK


def cmd_check(args, parser) -> int:
    t0 = time.perf_counter()
    d = _load_scattering(args, parser)
    cfg = _config(args, make_dual_spatial_grid(d.grid))
    cert = spectral_check(d, raise_on_failure=False)
    fields = {"spectral_margin": cert.margin, "min_abs_alpha": cert.min_abs_alpha,
              "worst_lambda": cert.worst_lambda,
              "floors": {"margin": MARGIN_FLOOR, "alpha": ALPHA_FLOOR}}
    ok = cert.ok
    if d.alpha is not None and d.beta is not None:
        defect = d.determinant_defect()
        fields["determinant_defect"] = defect
        ok = ok and defect <= args.det_tol
    fields["passed"] = ok
    path = args.output or _output_path(args, ".json")
    path.parent.mkdir(parents=True, exist_ok=True)
    write_json(path, _report(cfg, "check", t0, **fields))
    print(f"margin c = {cert.margin:.6g}, min|alpha| = {cert.min_abs_alpha:.6g}: "
          f"{'pass' if ok else 'FAIL'}")
    if not ok:
        print(f"spectral condition fails near lambda = {cert.worst_lambda:.6g}",
              file=sys.stderr)
    return EXIT_OK if ok else EXIT_DATA


COMMANDS = {"direct": cmd_direct, "inverse": cmd_inverse, "evolve": cmd_evolve,
            "oracle": cmd_oracle, "roundtrip": cmd_roundtrip, "check": cmd_check}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.threads < 1:
        parser.error("--threads must be at least 1")
    try:
        return COMMANDS[args.command](args, parser)
    except DataError as exc:
        lam = getattr(exc, "lam", None)
        where = f" (lambda = {lam:.6g})" if lam is not None else ""
        print(f"data error: {exc}{where}", file=sys.stderr)
        return EXIT_DATA
    except ConvergenceError as exc:
        print(f"convergence error: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
