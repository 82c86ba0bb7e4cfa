"""Monthly target indices and their disaggregation to the weekly grid.

A monthly series is pinned to the window grid at one knot per month: the
first window whose start date falls inside that month (the survey runs in
the first half of the month, so the weekly series is consistent with the
monthly value there). A natural cubic spline through the knots supplies
the remaining weekly values; it passes through every knot exactly.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass
from datetime import date
from pathlib import Path

import numpy as np
from scipy.interpolate import CubicSpline

from .corpus import TimeWindow

__all__ = [
    "MonthlySeries",
    "WeeklySeries",
    "SeriesError",
    "load_monthly",
    "month_anchors",
    "disaggregate",
    "write_weekly_csv",
]


class SeriesError(ValueError):
    """Fatal target-series problem (format, coverage, degeneracy)."""


@dataclass(frozen=True)
class MonthlySeries:
    """Named monthly series; months are consecutive with no gaps."""

    name: str
    months: tuple[date, ...]  # first day of each month
    values: tuple[float, ...]

    def __len__(self) -> int:
        return len(self.months)


@dataclass(frozen=True)
class WeeklySeries:
    """Named series on consecutive window indices."""

    name: str
    indices: tuple[int, ...]
    values: tuple[float, ...]

    def __len__(self) -> int:
        return len(self.indices)

    def asarray(self) -> np.ndarray:
        return np.asarray(self.values, dtype=float)


def _next_month(d: date) -> date:
    return date(d.year + 1, 1, 1) if d.month == 12 else date(d.year, d.month + 1, 1)


def load_monthly(path: str | Path) -> list[MonthlySeries]:
    """Parse ``month,series1,series2,...`` CSV with YYYY-MM months.

    Month gaps, duplicate months and non-numeric cells are fatal, reported
    with their row and column.
    """
    path = Path(path)
    with path.open("r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SeriesError(f"{path}: empty file") from None
        if len(header) < 2 or header[0].strip().lower() != "month":
            raise SeriesError(f"{path}: header must be 'month,<series>...', got {header}")
        names = [h.strip() for h in header[1:]]
        months: list[date] = []
        columns: list[list[float]] = [[] for _ in names]
        for row_no, row in enumerate(reader, start=2):
            if not row or not any(cell.strip() for cell in row):
                continue
            if len(row) != len(header):
                raise SeriesError(f"{path}: row {row_no}: expected {len(header)} cells, got {len(row)}")
            try:
                year, month = row[0].strip().split("-")
                m = date(int(year), int(month), 1)
            except ValueError:
                raise SeriesError(f"{path}: row {row_no}: bad month {row[0]!r}") from None
            if months:
                expected = _next_month(months[-1])
                if m == months[-1]:
                    raise SeriesError(f"{path}: row {row_no}: duplicate month {row[0]}")
                if m != expected:
                    raise SeriesError(
                        f"{path}: row {row_no}: month gap, expected "
                        f"{expected:%Y-%m} after {months[-1]:%Y-%m}, got {row[0]}"
                    )
            months.append(m)
            for col, cell in enumerate(row[1:]):
                try:
                    v = float(cell)
                except ValueError:
                    raise SeriesError(
                        f"{path}: row {row_no}, column {names[col]!r}: non-numeric cell {cell!r}"
                    ) from None
                if not np.isfinite(v):
                    raise SeriesError(f"{path}: row {row_no}, column {names[col]!r}: non-finite value")
                columns[col].append(v)
    return [
        MonthlySeries(name=name, months=tuple(months), values=tuple(col))
        for name, col in zip(names, columns)
    ]


def month_anchors(monthly: MonthlySeries, windows: list[TimeWindow]) -> list[int]:
    """Knot index per month: the first window starting inside that month."""
    anchors = []
    for m in monthly.months:
        nxt = _next_month(m)
        knot = next(
            (w.index for w in windows if m <= w.start_date < nxt),
            None,
        )
        if knot is None:
            raise SeriesError(
                f"series {monthly.name!r}: no window starts inside month {m:%Y-%m}; "
                "the window grid does not cover the monthly span"
            )
        anchors.append(knot)
    return anchors


def disaggregate(
    monthly: MonthlySeries,
    windows: list[TimeWindow],
    boundary: str = "natural",
) -> WeeklySeries:
    """Cubic spline through the month anchors, sampled per window.

    The spline reproduces the monthly value exactly at each anchor; windows
    beyond the anchored span take the extension of the end segments.
    ``boundary`` is "natural" (zero end curvature, the default) or
    "not-a-knot".
    """
    if boundary not in ("natural", "not-a-knot"):
        raise SeriesError(f"unknown boundary condition {boundary!r}")
    if len(monthly) < 3:
        raise SeriesError(f"series {monthly.name!r}: need at least 3 monthly points, got {len(monthly)}")
    knots = np.asarray(month_anchors(monthly, windows), dtype=float)
    values = np.asarray(monthly.values, dtype=float)
    spline = CubicSpline(knots, values, bc_type=boundary)
    grid = np.arange(len(windows), dtype=float)
    weekly = spline(grid)
    return WeeklySeries(
        name=monthly.name,
        indices=tuple(range(len(windows))),
        values=tuple(float(v) for v in weekly),
    )


def write_weekly_csv(series: WeeklySeries, windows: list[TimeWindow], path: str | Path) -> None:
    """Dump one weekly series as ``window_index,week_start,value`` rows."""
    starts = {w.index: w.start_date for w in windows}
    with Path(path).open("w", encoding="utf-8", newline="") as fh:
        fh.write("window_index,week_start,value\n")
        for idx, value in zip(series.indices, series.values):
            fh.write(f"{idx},{starts[idx].isoformat()},{value!r}\n")
