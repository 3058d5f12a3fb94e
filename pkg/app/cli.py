"""Command-line entry point: ``python -m app <subcommand> [options]``.

Exit codes: 0 success, 2 configuration or argument error, 3 I/O error,
4 computation failure.
"""

import argparse
import math
import sys
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import orjson
import structlog

from app.core.config import settings
from app.core.exceptions import ConfigError, SingularityError, StepTooCoarseError, WeakValueError
from app.core.logging import bind_run_context, setup_logging
from app.data_io.csv_format import STDOUT
from app.data_io.curves import write_pointer_curve, write_singularities
from app.data_io.grid_file import write_phase_grid
from app.data_io.ingest import ingest_pointer_curve
from app.data_io.sweep import read_any_sweep, sweep_from_response, write_sweep_csv
from app.models.domain import Axis, DiffSettings, GridSpec, ParamPoint, PointerCurve, Scenario, Stencil
from app.singularities.grid import phase_grid
from app.singularities.scan import scan_singularities
from app.validation import run_validation
from app.waveplate.model import ghz_to_omega, half_waveplate_frequency
from app.waveplate.model_file import MODEL_KEYS, build_scenario
from app.waveplate.presets import PRESET_NAMES
from app.weak.analytic import group_delay_analytic, helicity_pointer_analytic
from app.weak.engine import (
    directional_pointer,
    pointer_from_response,
    waveplate_family,
    waveplate_response,
    weak_value_operator_form,
)

logger = structlog.get_logger()

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_IO = 3
EXIT_COMPUTE = 4

VERIFY_TOL = 1e-6
DEFAULT_OMEGA_RANGE = "0:63:600"
DEFAULT_BETA_RANGE = f"0:{math.pi!r}:300"


class CommandFailed(WeakValueError):
    """A command ran but its outcome is a computation failure."""


# Argument parsing helpers


def parse_range(text: str, name: str) -> Tuple[float, float, int]:
    """``lo:hi:n`` with hi > lo and n >= 2."""
    parts = text.split(":")
    if len(parts) != 3:
        raise ConfigError(f"--{name} expects lo:hi:n, got {text!r}")
    try:
        lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise ConfigError(f"--{name} expects lo:hi:n, got {text!r}") from None
    if not (math.isfinite(lo) and math.isfinite(hi)) or not hi > lo:
        raise ConfigError(f"--{name}: range {lo!r}:{hi!r} is empty or inverted")
    if n < 2:
        raise ConfigError(f"--{name}: need at least 2 samples, got {n}")
    return lo, hi, n


def _omega_range(args: argparse.Namespace, default: Optional[str] = None) -> Tuple[float, float, int]:
    """Frequency range from --f-ghz (converted once) or --omega."""
    if args.f_ghz and args.omega:
        raise ConfigError("give either --f-ghz or --omega, not both")
    if args.f_ghz:
        lo, hi, n = parse_range(args.f_ghz, "f-ghz")
        return ghz_to_omega(lo), ghz_to_omega(hi), n
    if args.omega:
        return parse_range(args.omega, "omega")
    if default is None:
        raise ConfigError("a frequency range is required (--f-ghz lo:hi:n or --omega lo:hi:n)")
    return parse_range(default, "omega")


def _fixed_omega(args: argparse.Namespace, scenario: Scenario) -> float:
    given = [v is not None for v in (args.at_f_ghz, args.at_omega, args.half_wave)]
    if sum(given) != 1:
        raise ConfigError("fix the frequency with exactly one of --at-f-ghz, --at-omega, --half-wave")
    if args.at_f_ghz is not None:
        return ghz_to_omega(args.at_f_ghz)
    if args.at_omega is not None:
        return args.at_omega
    return half_waveplate_frequency(scenario.model, args.half_wave)


def _diff_settings(args: argparse.Namespace) -> DiffSettings:
    step = settings.DIFF_STEP if args.step is None else args.step
    stencil = Stencil(settings.DIFF_STENCIL) if args.stencil is None else Stencil(f"central-{args.stencil}")
    return DiffSettings(step_rho=step, step_eta=step, stencil=stencil)


def _scenario(args: argparse.Namespace) -> Scenario:
    overrides = {key: getattr(args, key) for key in MODEL_KEYS}
    overrides["psi_in"] = args.psi_in
    overrides["psi_f"] = args.psi_f
    return build_scenario(preset=args.preset, config_path=args.config, overrides=overrides)


def _grid(args: argparse.Namespace) -> GridSpec:
    rho_lo, rho_hi, n_rho = _omega_range(args, DEFAULT_OMEGA_RANGE)
    eta_lo, eta_hi, n_eta = parse_range(args.beta_range or DEFAULT_BETA_RANGE, "beta-range")
    return GridSpec(rho_min=rho_lo, rho_max=rho_hi, eta_min=eta_lo, eta_max=eta_hi, n_rho=n_rho, n_eta=n_eta)


# Commands


def cmd_sweep(args: argparse.Namespace) -> int:
    scenario = _scenario(args)
    lo, hi, n = _omega_range(args)
    if n < 3:
        raise ConfigError("a sweep needs at least 3 samples")
    table = sweep_from_response(waveplate_response(scenario), args.beta, np.linspace(lo, hi, n))
    write_sweep_csv(table, args.out, include_ghz=True)
    return EXIT_OK


def _analytic_column(
    scenario: Scenario, swept: str, wrt: Axis, fixed: float, coords: np.ndarray
) -> Optional[np.ndarray]:
    """Closed-form overlay where one exists for this line, else None."""
    if not scenario.is_default() or scenario.model.is_degenerate():
        return None
    closed_form: Optional[Callable[[float], float]] = None
    if swept == "beta" and wrt == Axis.RHO:
        try:
            omega_s = half_waveplate_frequency(scenario.model, 0)
        except WeakValueError:
            return None
        if math.isclose(fixed, omega_s, rel_tol=1e-9):
            closed_form = lambda beta: group_delay_analytic(scenario, beta)  # noqa: E731
    elif swept == "omega" and wrt == Axis.ETA and math.isclose(fixed, math.pi / 4.0, rel_tol=1e-12):
        closed_form = lambda omega: helicity_pointer_analytic(scenario, omega)  # noqa: E731
    if closed_form is None:
        return None
    values = np.full(coords.shape, np.nan)
    for k, c in enumerate(coords):
        try:
            values[k] = closed_form(float(c))
        except SingularityError:
            pass
    return values


def cmd_pointer(args: argparse.Namespace) -> int:
    scenario = _scenario(args)
    diff = _diff_settings(args)
    T = waveplate_response(scenario)
    fam = waveplate_family(scenario.model)

    if args.axis == "beta":
        swept = "beta"
        fixed = _fixed_omega(args, scenario)
        lo, hi, n = parse_range(args.beta_range or f"0:{math.pi / 2.0!r}:181", "beta-range")
        coords = np.linspace(lo, hi, n)
        points = [ParamPoint(rho=fixed, eta=b) for b in coords]
    else:
        swept = "omega"
        if args.beta is None:
            raise ConfigError(f"--axis {args.axis} needs --beta")
        fixed = args.beta
        lo, hi, n = _omega_range(args)
        coords = np.linspace(lo, hi, n)
        points = [ParamPoint(rho=w, eta=fixed) for w in coords]

    direction: Optional[Tuple[float, float]] = None
    if args.axis == "direction":
        direction = _parse_direction(args.direction)
        wrt = None
    else:
        default_wrt = Axis.ETA if swept == "omega" else Axis.RHO
        wrt = Axis(args.wrt) if args.wrt else default_wrt

    re = np.full(coords.shape, np.nan)
    im = np.full(coords.shape, np.nan)
    gap = np.zeros(coords.shape, dtype=bool)
    worst = 0.0
    for k, p in enumerate(points):
        try:
            if direction is not None:
                value = directional_pointer(T, p, direction, diff).value
            else:
                value = pointer_from_response(T, p, wrt, diff).value
        except (SingularityError, StepTooCoarseError) as e:
            gap[k] = True
            logger.debug("Pointer gap", rho=p.rho, eta=p.eta, error=str(e))
            continue
        re[k], im[k] = value.real, value.imag
        if args.verify:
            worst = max(worst, abs(value - _operator_route(fam, scenario, p, wrt, direction, diff)))

    analytic = None
    if args.analytic:
        analytic = _analytic_column(scenario, swept, wrt, fixed, coords) if wrt is not None else None
        if analytic is None:
            logger.warning("No closed form applies to this line; analytic column omitted")
    curve = PointerCurve(axis=swept, fixed=fixed, coord=coords, re=re, im=im, gap=gap, analytic=analytic)
    write_pointer_curve(curve, args.out)

    if args.verify:
        logger.info("Operator-route cross-check", max_difference=worst)
        if worst > VERIFY_TOL:
            raise CommandFailed(f"operator and response routes differ by {worst:.3e}")
    return EXIT_OK


def _parse_direction(text: Optional[str]) -> Tuple[float, float]:
    if not text:
        raise ConfigError("--axis direction needs --direction d_omega,d_beta")
    try:
        d = [float(v) for v in text.split(",")]
    except ValueError:
        raise ConfigError(f"--direction expects two numbers, got {text!r}") from None
    norm = math.hypot(*d) if len(d) == 2 else 0.0
    if norm == 0.0 or not math.isfinite(norm):
        raise ConfigError(f"--direction {text!r} is not a usable direction")
    return d[0] / norm, d[1] / norm


def _operator_route(fam, scenario: Scenario, p: ParamPoint, wrt, direction, diff) -> complex:
    if direction is None:
        return weak_value_operator_form(fam, scenario.psi_in, scenario.psi_f, p, wrt, diff)
    return sum(
        c * weak_value_operator_form(fam, scenario.psi_in, scenario.psi_f, p, axis, diff)
        for c, axis in zip(direction, (Axis.RHO, Axis.ETA))
    )


def cmd_map(args: argparse.Namespace) -> int:
    scenario = _scenario(args)
    pg = phase_grid(waveplate_response(scenario), _grid(args))
    write_phase_grid(pg, args.out)
    return EXIT_OK


def cmd_singularities(args: argparse.Namespace) -> int:
    scenario = _scenario(args)
    result = scan_singularities(waveplate_response(scenario), _grid(args), subdivide=not args.no_subdivide)
    write_singularities(result.records, args.out)
    report = result.report
    summary = (
        f"# count={report.count} net_charge={report.net_charge} "
        f"alternation={'ok' if report.alternation_ok else 'violated'} "
        f"seeds={result.seeds} failed={len(result.failures)} coarse_cells={len(result.windings.coarse)}"
    )
    print(summary)
    if result.seeds and not result.records and len(result.failures) == result.seeds:
        raise CommandFailed(f"all {result.seeds} seeds failed to refine")
    return EXIT_OK


def cmd_ingest(args: argparse.Namespace) -> int:
    paths: List[str] = args.paths
    if len(paths) > 1 and args.out != STDOUT:
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        targets = [out_dir / f"{Path(p).stem}.pointer.csv" for p in paths]
    else:
        targets = [args.out] * len(paths)
    for source, target in zip(paths, targets):
        curve = ingest_pointer_curve(read_any_sweep(source))
        write_pointer_curve(curve, target)
    return EXIT_OK


def cmd_validate(args: argparse.Namespace) -> int:
    scenario = _scenario(args)
    report = run_validation(scenario)
    payload = orjson.dumps(
        {"passed": report.passed, "summary": report.summary(), **report.model_dump(mode="json")},
        option=orjson.OPT_INDENT_2 | orjson.OPT_SERIALIZE_NUMPY,
    )
    if args.out == STDOUT:
        sys.stdout.write(payload.decode() + "\n")
    else:
        try:
            Path(args.out).write_bytes(payload + b"\n")
        except OSError as e:
            raise OSError(f"cannot write {args.out}: {e.strerror or e}") from e
    return EXIT_OK if report.passed else EXIT_COMPUTE


COMMANDS: Dict[str, Callable[[argparse.Namespace], int]] = {
    "sweep": cmd_sweep,
    "pointer": cmd_pointer,
    "map": cmd_map,
    "singularities": cmd_singularities,
    "ingest": cmd_ingest,
    "validate": cmd_validate,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    model = common.add_argument_group("model")
    model.add_argument("--config", default=settings.MODEL_CONFIG_PATH, help="key=value model file")
    model.add_argument("--preset", choices=PRESET_NAMES, default=settings.MODEL_PRESET)
    for key in MODEL_KEYS:
        model.add_argument(f"--{key.replace('_', '-')}", dest=key, type=float, default=None)
    model.add_argument("--psi-in", default=None, help="state name (z, x, d, a, r, l) or 'c1,c2'")
    model.add_argument("--psi-f", default=None, help="state name (z, x, d, a, r, l) or 'c1,c2'")
    numerics = common.add_argument_group("numerics")
    numerics.add_argument("--step", type=float, default=None, help="relative finite-difference step")
    numerics.add_argument("--stencil", type=int, choices=[2, 4], default=None)
    common.add_argument("--out", default=STDOUT, help="output path ('-' for stdout)")
    common.add_argument("--log-level", default=None, choices=["DEBUG", "INFO", "WARNING", "ERROR"])

    line = argparse.ArgumentParser(add_help=False)
    line.add_argument("--f-ghz", default=None, help="frequency range lo:hi:n in GHz")
    line.add_argument("--omega", default=None, help="frequency range lo:hi:n in rad/ns")
    line.add_argument("--beta-range", default=None, help="plate-angle range lo:hi:n in rad")

    parser = argparse.ArgumentParser(prog="weakvalue", description="Weak-value waveplate toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep", parents=[common, line], help="complex transmission along omega")
    p.add_argument("--beta", type=float, required=True, help="plate angle in rad")

    p = sub.add_parser("pointer", parents=[common, line], help="pointer curve along a line")
    p.add_argument("--axis", choices=["omega", "beta", "direction"], required=True, help="swept coordinate")
    p.add_argument("--wrt", choices=[a.value for a in Axis], default=None, help="differentiation axis")
    p.add_argument("--direction", default=None, help="d_omega,d_beta for --axis direction")
    p.add_argument("--beta", type=float, default=None, help="fixed plate angle for omega lines")
    p.add_argument("--at-f-ghz", type=float, default=None, help="fixed frequency in GHz for beta lines")
    p.add_argument("--at-omega", type=float, default=None, help="fixed frequency in rad/ns for beta lines")
    p.add_argument("--half-wave", type=int, default=None, help="fix omega at the n-th half-wave frequency")
    p.add_argument("--analytic", action="store_true", help="add the closed-form column where one applies")
    p.add_argument("--verify", action="store_true", help="cross-check against the operator route")

    sub.add_parser("map", parents=[common, line], help="phase grid for contouring")

    p = sub.add_parser("singularities", parents=[common, line], help="locate and classify zeros of T")
    p.add_argument("--no-subdivide", action="store_true", help="do not resample coarse plaquettes")

    p = sub.add_parser("ingest", parents=[common], help="pointer curves from sweep files")
    p.add_argument("paths", nargs="+")

    sub.add_parser("validate", parents=[common], help="run the invariant suite")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    setup_logging(level=args.log_level)
    bind_run_context(args.command, preset=getattr(args, "preset", None))
    try:
        return COMMANDS[args.command](args)
    except (ConfigError, ValueError) as e:
        logger.error("Invalid configuration", command=args.command, error=str(e))
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as e:
        logger.error("I/O failure", command=args.command, error=str(e))
        print(f"error: {e}", file=sys.stderr)
        return EXIT_IO
    except WeakValueError as e:
        logger.error("Computation failed", command=args.command, error=str(e), kind=type(e).__name__)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_COMPUTE
