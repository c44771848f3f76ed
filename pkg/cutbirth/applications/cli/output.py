"""
CSV tables and summary reports written by the command-line frontend.

Column order is fixed per mode:

    solve     T,cuts,x1,x2,x3,x4,ell,F,mass1,mass2
    critical  T_c,e,barrier,b,distance,nu,gap,Q
    sweep     T,phase,x1,x2,x3,x4,ell,F,new_cut_mass
    gas       index,position

Floats carry 17 significant digits and missing endpoints or masses are left
empty. Q is written as its coefficients, lowest degree first, joined by ';'.
Nothing time-dependent is written, so identical runs give identical bytes.
"""
import csv
import io

from pathlib import Path
from typing import Any, Iterable, List, Optional, Sequence, TextIO, Tuple, Union

from tabulate import tabulate

from cutbirth.core.criticality import CriticalData
from cutbirth.core.equilibrium import ResolventData, Thermo
from cutbirth.core.errors import IoError
from cutbirth.core.gas import GasResult
from cutbirth.core.transition import SweepRow, TransitionReport

SOLVE_HEADER = ["T", "cuts", "x1", "x2", "x3", "x4", "ell", "F", "mass1", "mass2"]
CRITICAL_HEADER = ["T_c", "e", "barrier", "b", "distance", "nu", "gap", "Q"]
SWEEP_HEADER = ["T", "phase", "x1", "x2", "x3", "x4", "ell", "F", "new_cut_mass"]
GAS_HEADER = ["index", "position"]

Table = Tuple[List[str], List[List[Any]]]


def format_value(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def _padded(values: Sequence[float], width: int) -> List[Optional[float]]:
    return list(values) + [None] * (width - len(values))


def solve_table(rd: ResolventData, thermo: Thermo) -> Table:
    row = [rd.T, rd.s, *_padded(rd.endpoints, 4), thermo.ell, thermo.F, *_padded(thermo.masses, 2)]
    return SOLVE_HEADER, [row]


def critical_table(crit: CriticalData) -> Table:
    q = ";".join(format_value(c) for c in crit.Q.coeffs)
    row = [crit.T_c, crit.e, crit.barrier, crit.b, crit.distance, crit.nu, crit.gap, q]
    return CRITICAL_HEADER, [row]


def sweep_table(rows: Iterable[SweepRow]) -> Table:
    return SWEEP_HEADER, [
        [r.T, r.phase, *_padded(r.endpoints, 4), r.ell, r.F, r.new_cut_mass] for r in rows
    ]


def gas_table(gr: GasResult) -> Table:
    return GAS_HEADER, [[i, x] for i, x in enumerate(gr.positions, start=1)]


def render_csv(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_value(v) for v in row])
    return buffer.getvalue()


def emit_csv(
    header: Sequence[str],
    rows: Iterable[Sequence[Any]],
    path: Optional[Union[str, Path]] = None,
    stream: Optional[TextIO] = None,
) -> None:
    """
    Write a table as UTF-8 CSV to `path`, or to `stream` when no path is given.

    Raises
    ------
    IoError
        If the file cannot be written.
    """
    text = render_csv(header, rows)
    if path is None:
        if stream is None:
            raise ValueError("either a path or a stream is required")
        stream.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8", newline="") as f:
            f.write(text)
    except OSError as error:
        raise IoError(f"cannot write {path}: {error}")


def render_table(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    """Human-readable rendering of a result table."""
    return tabulate(
        [["" if v is None else v for v in row] for row in rows],
        headers=list(header),
        floatfmt=".10g",
    )


def summary_lines(report: TransitionReport) -> List[str]:
    return [f"{key}={format_value(value)}" for key, value in report.to_dict().items()]


def summary_path(out: Union[str, Path]) -> Path:
    return Path(f"{out}.summary.txt")


def write_summary(report: TransitionReport, path: Union[str, Path]) -> None:
    try:
        with open(path, "w", encoding="utf-8", newline="") as f:
            f.write("\n".join(summary_lines(report)) + "\n")
    except OSError as error:
        raise IoError(f"cannot write {path}: {error}")
