"""Phase-grid CSV: ``i,j,arg_t,abs_t`` rows under a grid-spec comment header."""

import numpy as np
import structlog
from pydantic import ValidationError

from app.core.exceptions import FormatError, ParseError
from app.data_io.csv_format import PathLike, fmt, parse_float, read_records, write_lines
from app.models.domain import GridSpec, PhaseGrid

logger = structlog.get_logger()

GRID_HEADER = ["i", "j", "arg_t", "abs_t"]
SPEC_KEYS = ("rho_min", "rho_max", "n_rho", "eta_min", "eta_max", "n_eta")


def write_phase_grid(pg: PhaseGrid, destination: PathLike) -> None:
    """Write the grid spec as comment lines, then one row per node."""
    g = pg.spec
    lines = [
        f"# rho_min={fmt(g.rho_min)} rho_max={fmt(g.rho_max)} n_rho={g.n_rho}",
        f"# eta_min={fmt(g.eta_min)} eta_max={fmt(g.eta_max)} n_eta={g.n_eta}",
        ",".join(GRID_HEADER),
    ]
    for i in range(g.n_rho):
        for j in range(g.n_eta):
            lines.append(f"{i},{j},{fmt(pg.phase[i, j])},{fmt(pg.magnitude[i, j])}")
    write_lines(destination, lines)
    logger.info("Phase grid written", path=str(destination), n_rho=g.n_rho, n_eta=g.n_eta)


def read_phase_grid(source: PathLike) -> PhaseGrid:
    """Inverse of write_phase_grid; every node must be present exactly once."""
    meta, rows = read_records(source)
    missing = [k for k in SPEC_KEYS if k not in meta]
    if missing:
        raise ParseError(f"{source}: missing header keys {', '.join(missing)}")
    try:
        spec = GridSpec(**{k: meta[k] for k in SPEC_KEYS})
    except ValidationError as e:
        raise FormatError(f"{source}: invalid grid header: {e.errors()[0]['msg']}") from e

    if not rows or rows[0][1] != GRID_HEADER:
        line = rows[0][0] if rows else None
        raise ParseError(f"expected header {','.join(GRID_HEADER)}", line=line)
    phase = np.full((spec.n_rho, spec.n_eta), np.nan)
    magnitude = np.full((spec.n_rho, spec.n_eta), np.nan)
    for number, fields in rows[1:]:
        if len(fields) != 4:
            raise ParseError(f"expected 4 fields, got {len(fields)}", line=number)
        try:
            i, j = int(fields[0]), int(fields[1])
        except ValueError:
            raise ParseError("grid indices must be integers", line=number) from None
        if not (0 <= i < spec.n_rho and 0 <= j < spec.n_eta):
            raise FormatError(f"{source}: node ({i}, {j}) outside the {spec.n_rho}x{spec.n_eta} grid")
        phase[i, j] = parse_float(fields[2], number)
        magnitude[i, j] = parse_float(fields[3], number)
    if np.isnan(phase).any():
        raise FormatError(f"{source}: {int(np.isnan(phase).sum())} grid nodes missing")
    return PhaseGrid(spec=spec, phase=phase, magnitude=magnitude)
