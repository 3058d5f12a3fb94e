"""Sweep tables: complex transmission along omega at fixed beta."""

from typing import List, Optional

import numpy as np
import structlog

from app.core.exceptions import FormatError, ParseError
from app.data_io.csv_format import PathLike, fmt, parse_float, read_records, write_lines
from app.models.domain import SweepTable
from app.waveplate.model import omega_to_ghz

logger = structlog.get_logger()

SWEEP_HEADER = ["omega", "re_t", "im_t"]
PHASE_MAG_HEADER = ["omega", "phase_rad", "magnitude"]
GHZ_COLUMN = "f_ghz"


def sweep_from_response(T, beta: float, omega: np.ndarray) -> SweepTable:
    """Tabulate T(omega, beta) at the given frequencies."""
    omega = np.asarray(omega, dtype=float)
    values = np.asarray(T(omega, np.full_like(omega, beta)), dtype=complex)
    return SweepTable(beta=beta, omega=omega, t=values)


def write_sweep_csv(table: SweepTable, destination: PathLike, include_ghz: bool = False) -> None:
    """``omega,re_t,im_t`` rows under a ``# beta_rad=`` comment; optionally an f_ghz column."""
    header = SWEEP_HEADER + ([GHZ_COLUMN] if include_ghz else [])
    lines = [f"# beta_rad={fmt(table.beta)}", ",".join(header)]
    for omega, t in zip(table.omega, table.t):
        row = [fmt(omega), fmt(t.real), fmt(t.imag)]
        if include_ghz:
            row.append(fmt(omega_to_ghz(omega)))
        lines.append(",".join(row))
    write_lines(destination, lines)
    logger.info("Sweep written", path=str(destination), rows=len(table.omega), beta=table.beta)


def _read_columns(source: PathLike, expected: List[str]):
    meta, rows = read_records(source)
    if not rows:
        raise ParseError(f"{source}: no header line")
    header_line, header = rows[0]
    if header[: len(expected)] != expected or header[len(expected):] not in ([], [GHZ_COLUMN]):
        raise ParseError(f"expected header {','.join(expected)}, got {','.join(header)}", line=header_line)
    width = len(header)
    data = []
    for number, fields in rows[1:]:
        if len(fields) != width:
            raise ParseError(f"expected {width} fields, got {len(fields)}", line=number)
        data.append([parse_float(f, number) for f in fields[:3]])
    if "beta_rad" not in meta:
        raise ParseError(f"{source}: missing '# beta_rad=<value>' comment")
    beta = parse_float(meta["beta_rad"], 1)
    columns = np.array(data, dtype=float).reshape(-1, 3)
    return beta, columns


def _build_table(source: PathLike, beta: float, omega: np.ndarray, t: np.ndarray) -> SweepTable:
    if omega.size < 3:
        raise FormatError(f"{source}: a sweep needs at least 3 rows, got {omega.size}")
    if not np.all(np.diff(omega) > 0):
        bad = int(np.flatnonzero(np.diff(omega) <= 0)[0]) + 1
        raise FormatError(f"{source}: omega is not strictly increasing at data row {bad + 1}")
    return SweepTable(beta=beta, omega=omega, t=t)


def read_sweep_csv(source: PathLike) -> SweepTable:
    """Read a complex ``omega,re_t,im_t`` sweep."""
    beta, columns = _read_columns(source, SWEEP_HEADER)
    return _build_table(source, beta, columns[:, 0], columns[:, 1] + 1j * columns[:, 2])


def read_phase_magnitude_csv(source: PathLike) -> SweepTable:
    """Read (omega, phase_rad, magnitude) columns into a complex sweep."""
    beta, columns = _read_columns(source, PHASE_MAG_HEADER)
    if np.any(columns[:, 2] < 0):
        raise FormatError(f"{source}: magnitudes must be non-negative")
    return _build_table(source, beta, columns[:, 0], columns[:, 2] * np.exp(1j * columns[:, 1]))


def read_any_sweep(source: PathLike) -> SweepTable:
    """Dispatch on the header: complex (re_t, im_t) or (phase_rad, magnitude)."""
    _, rows = read_records(source)
    if rows and rows[0][1][:3] == PHASE_MAG_HEADER:
        return read_phase_magnitude_csv(source)
    return read_sweep_csv(source)
