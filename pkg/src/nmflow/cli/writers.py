"""CSV and text-report writers.

Floats print with 17 significant digits so parsed values round-trip
exactly; identical configs and seeds therefore give byte-identical
bodies.
"""

from __future__ import annotations

import io
from pathlib import Path
from typing import Optional

import numpy as np

TRAJECTORY_HEADER = "t,D,sigma,G_abs,G_phase,volume"
MEASURE_COLUMNS = ("blp", "helstrom", "rhp", "rhp_infinite_flag",
                   "divisibility_class", "volume_monotone", "error")


def fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, str):
        return value
    if isinstance(value, (float, np.floating)):
        if np.isnan(value):
            return "nan"
        return "%.17g" % value
    return str(value)


def write_trajectory_csv(path: Path, times, distances, sigmas,
                         g_abs=None, g_phase=None, volumes=None) -> None:
    n = len(times)
    nan = np.full(n, np.nan)
    g_abs = nan if g_abs is None else g_abs
    g_phase = nan if g_phase is None else g_phase
    volumes = nan if volumes is None else volumes
    buf = io.StringIO()
    buf.write(TRAJECTORY_HEADER + "\n")
    for k in range(n):
        buf.write(",".join(fmt(x) for x in (times[k], distances[k], sigmas[k],
                                            g_abs[k], g_phase[k], volumes[k])))
        buf.write("\n")
    Path(path).write_text(buf.getvalue())


def measures_header(axis_names: tuple[str, ...]) -> str:
    return ",".join(axis_names + MEASURE_COLUMNS)


def measures_row(axis_values: tuple, cells: dict) -> str:
    fields = [fmt(v) for v in axis_values]
    fields.extend(fmt(cells.get(col)) for col in MEASURE_COLUMNS)
    return ",".join(fields)


class IncrementalCsvWriter:
    """Writes rows in index order, flushing as soon as a prefix is ready.

    Sweep points may finish out of order; partial results still land on
    disk promptly and the final file is order-deterministic.
    """

    def __init__(self, path: Path, header: str):
        self.path = Path(path)
        self.path.write_text(header + "\n")
        self._pending: dict[int, str] = {}
        self._next = 0

    def add(self, index: int, row: str) -> None:
        self._pending[index] = row
        ready = []
        while self._next in self._pending:
            ready.append(self._pending.pop(self._next))
            self._next += 1
        if ready:
            with self.path.open("a") as fh:
                fh.write("\n".join(ready) + "\n")

    def close(self) -> None:
        if self._pending:
            raise RuntimeError("rows missing from the sweep output")
