"""CSV exports for pointer curves and refined singularities."""

from typing import Sequence

import structlog

from app.data_io.csv_format import PathLike, fmt, write_lines
from app.models.domain import PointerCurve, SingularityRecord
from app.waveplate.model import omega_to_ghz

logger = structlog.get_logger()


def write_pointer_curve(curve: PointerCurve, destination: PathLike) -> None:
    """One row per sample; gap rows leave the pointer fields empty."""
    if curve.axis == "omega":
        fixed = f"beta_rad={fmt(curve.fixed)}"
    else:
        fixed = f"omega={fmt(curve.fixed)} f_ghz={fmt(omega_to_ghz(curve.fixed))}"
    header = [curve.axis]
    if curve.axis == "omega":
        header.append("f_ghz")
    header += ["re_pointer", "im_pointer"]
    if curve.analytic is not None:
        header.append("analytic")
    header.append("gap")

    lines = [f"# axis={curve.axis} {fixed}", ",".join(header)]
    for k, coord in enumerate(curve.coord):
        row = [fmt(coord)]
        if curve.axis == "omega":
            row.append(fmt(omega_to_ghz(coord)))
        if curve.gap[k]:
            row += ["", ""]
        else:
            row += [fmt(curve.re[k]), fmt(curve.im[k])]
        if curve.analytic is not None:
            row.append(fmt(curve.analytic[k]))
        row.append("1" if curve.gap[k] else "0")
        lines.append(",".join(row))
    write_lines(destination, lines)
    logger.info("Pointer curve written", path=str(destination), rows=len(curve.coord), gaps=int(curve.gap.sum()))


def write_singularities(records: Sequence[SingularityRecord], destination: PathLike) -> None:
    """Refined zeros with charge, Newton residual and frequency in GHz."""
    lines = ["rho,eta,charge,residual,iterations,f_ghz"]
    for r in records:
        lines.append(
            f"{fmt(r.rho)},{fmt(r.eta)},{r.charge},{fmt(r.residual)},{r.iterations},{fmt(omega_to_ghz(r.rho))}"
        )
    write_lines(destination, lines)
    logger.info("Singularities written", path=str(destination), count=len(records))
