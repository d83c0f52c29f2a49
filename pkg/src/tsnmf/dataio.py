"""CSV ingestion and emission for datasets, factors, and traces.

The dataset format is N rows of M comma-separated non-negative decimals
with an optional single header row of time labels ``t=<seconds>`` fixing
the sampling step. Numbers are written with Python's shortest round-trip
representation so exported files re-ingest bit-identically.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .initialization import TimeGrid, time_vector

logger = logging.getLogger(__name__)


@dataclass
class TimeSeriesSet:
    """A data matrix (recordings x time points) with its sampling grid."""

    values: np.ndarray
    grid: TimeGrid
    dt_source: str  # "header" | "flag" | "default"


def _parse_cell(raw: str, line_no: int, col_no: int) -> float:
    try:
        value = float(raw)
    except ValueError:
        raise ValidationError(
            f"non-numeric cell {raw!r} at line {line_no}, column {col_no}"
        ) from None
    if not np.isfinite(value):
        raise ValidationError(
            f"non-finite cell {raw!r} at line {line_no}, column {col_no}"
        )
    return value


def _parse_time_header(cells: list[str], line_no: int) -> list[float]:
    times = []
    for col_no, cell in enumerate(cells, start=1):
        body = cell.strip()[2:]
        times.append(_parse_cell(body, line_no, col_no))
    return times


def ingest_csv(path, dt: float | None = None) -> TimeSeriesSet:
    """Read a dataset CSV; rows keep file order (chronological recordings).

    The sampling step comes from the ``t=...`` header when present, else
    from the ``dt`` argument, else defaults to 1.0 with a warning. Ragged
    rows, non-numeric cells, and negative values are validation errors that
    name the offending line (and column).
    """
    with open(path, "r", encoding="utf-8") as fh:
        lines = [line.rstrip("\n") for line in fh]
    rows_raw = [(no, line) for no, line in enumerate(lines, start=1) if line.strip()]
    if not rows_raw:
        raise ValidationError(f"{path}: no data rows")

    header_times = None
    first_cells = [c.strip() for c in rows_raw[0][1].split(",")]
    if all(c.startswith("t=") for c in first_cells):
        header_times = _parse_time_header(first_cells, rows_raw[0][0])
        rows_raw = rows_raw[1:]
        if not rows_raw:
            raise ValidationError(f"{path}: header but no data rows")

    width = None
    data = []
    for line_no, line in rows_raw:
        cells = line.split(",")
        if width is None:
            width = len(cells)
        elif len(cells) != width:
            raise ValidationError(
                f"ragged row at line {line_no}: {len(cells)} cells, expected {width}"
            )
        row = []
        for col_no, cell in enumerate(cells, start=1):
            value = _parse_cell(cell.strip(), line_no, col_no)
            if value < 0.0:
                raise ValidationError(
                    f"negative value {value!r} at line {line_no}, column {col_no}; "
                    "the data contract is non-negative"
                )
            row.append(value)
        data.append(row)
    values = np.array(data, dtype=float)

    if header_times is not None:
        if len(header_times) != values.shape[1]:
            raise ValidationError(
                f"header has {len(header_times)} time labels but rows have "
                f"{values.shape[1]} cells"
            )
        inferred = _infer_dt(header_times)
    else:
        inferred = None

    if inferred is not None:
        step, source = inferred, "header"
    elif dt is not None:
        step, source = float(dt), "flag"
    else:
        step, source = 1.0, "default"
        logger.warning("%s: no time header and no --dt; assuming dt = 1.0", path)
    return TimeSeriesSet(values=values, grid=time_vector(values.shape[1], step), dt_source=source)


def _infer_dt(times: list[float]) -> float | None:
    if len(times) < 2:
        return None
    gaps = np.diff(np.asarray(times))
    step = float(gaps[0])
    if step <= 0.0 or np.any(np.abs(gaps - step) > 1e-9 * max(abs(step), 1.0)):
        raise ValidationError(
            "time header is not uniformly increasing; cannot infer dt"
        )
    return step


def format_number(value: float) -> str:
    """Shortest decimal that round-trips to the same float."""
    return repr(float(value))


def write_matrix_csv(path, matrix: np.ndarray, grid: TimeGrid | None = None) -> None:
    """Write a matrix as CSV, optionally with a ``t=...`` header row."""
    matrix = np.atleast_2d(np.asarray(matrix, dtype=float))
    with open(path, "w", encoding="utf-8") as fh:
        if grid is not None:
            fh.write(",".join(f"t={format_number(v)}" for v in grid.values) + "\n")
        for row in matrix:
            fh.write(",".join(format_number(v) for v in row) + "\n")


def read_matrix_csv(path) -> np.ndarray:
    """Read a plain numeric CSV (no header) into a 2-D array."""
    with open(path, "r", encoding="utf-8") as fh:
        lines = [line.rstrip("\n") for line in fh if line.strip()]
    if not lines:
        raise ValidationError(f"{path}: empty matrix file")
    width = None
    data = []
    for line_no, line in enumerate(lines, start=1):
        cells = line.split(",")
        if width is None:
            width = len(cells)
        elif len(cells) != width:
            raise ValidationError(
                f"{path}: ragged row at line {line_no}: "
                f"{len(cells)} cells, expected {width}"
            )
        data.append(
            [_parse_cell(c.strip(), line_no, i + 1) for i, c in enumerate(cells)]
        )
    return np.array(data, dtype=float)


def write_trace_csv(path, costs) -> None:
    """Write an ``iteration,cost`` trace file."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("iteration,cost\n")
        for i, value in enumerate(costs, start=1):
            fh.write(f"{i},{format_number(value)}\n")
