"""Balance-sheet panel ingestion and emission.

Input CSVs carry one row per reporting date with current and long-term
assets and liabilities.  Semiannual statements are expanded to monthly
rows: balance-sheet items are stocks, so the default holds each value
constant over its semester; linear interpolation between consecutive
statements is available behind a flag.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

PANEL_HEADER = ("date", "a_c", "a_l", "b_c", "b_l")
SERIES = ("a_c", "a_l", "b_c", "b_l")


class Frequency(str, Enum):
    MONTHLY = "monthly"
    SEMIANNUAL = "semiannual"


class PanelFormatError(ValueError):
    """Malformed panel input; the message names the offending row/column."""


@dataclass(frozen=True)
class BalancePanel:
    firm_id: str
    dates: tuple[str, ...]  # ISO YYYY-MM, strictly increasing
    a_c: np.ndarray
    a_l: np.ndarray
    b_c: np.ndarray
    b_l: np.ndarray
    frequency: Frequency = Frequency.MONTHLY

    def __post_init__(self):
        n = len(self.dates)
        for name in SERIES:
            arr = getattr(self, name)
            if arr.shape != (n,):
                raise ValueError(f"series {name} length {arr.shape} != {n} dates")
            if not np.all(np.isfinite(arr)):
                raise ValueError(f"series {name} contains non-finite values")
        keys = [_month_key(d, i) for i, d in enumerate(self.dates)]
        if any(b <= a for a, b in zip(keys, keys[1:])):
            raise ValueError("dates must be strictly increasing")

    def __len__(self) -> int:
        return len(self.dates)

    def matrix(self) -> np.ndarray:
        """(n, 4) array with columns a_c, a_l, b_c, b_l."""
        return np.column_stack([getattr(self, name) for name in SERIES])


def _month_key(date: str, row: int) -> int:
    parts = date.split("-")
    if len(parts) != 2 or len(parts[0]) != 4 or len(parts[1]) != 2 \
            or not (parts[0].isdigit() and parts[1].isdigit()) \
            or not 1 <= int(parts[1]) <= 12:
        raise PanelFormatError(
            f"row {row + 1}, column date: {date!r} is not ISO YYYY-MM")
    return int(parts[0]) * 12 + int(parts[1]) - 1


def _key_to_month(key: int) -> str:
    return f"{key // 12:04d}-{key % 12 + 1:02d}"


def ingest_panel(path, frequency: Frequency | str = Frequency.MONTHLY,
                 firm_id: str = "", interpolate: bool = False) -> BalancePanel:
    """Read a panel CSV and return monthly observations.

    Semiannual input expands every statement into 6 monthly rows; by
    default the values repeat unchanged, with ``interpolate=True`` the
    months between two statements move linearly from the earlier value to
    the later one (the final semester still repeats).
    """
    frequency = Frequency(frequency)
    if hasattr(path, "read"):
        text = path.read()
    else:
        with open(path, newline="") as fh:
            text = fh.read()
    rows = list(csv.reader(io.StringIO(text)))
    rows = [r for r in rows if any(cell.strip() for cell in r)]
    if not rows:
        raise PanelFormatError("panel file is empty")
    header = tuple(h.strip().lower() for h in rows[0])
    if header != PANEL_HEADER:
        raise PanelFormatError(
            f"header must be {','.join(PANEL_HEADER)}, got {','.join(header)}")
    if len(rows) == 1:
        raise PanelFormatError("panel has a header but no data rows")

    dates, values = [], []
    seen = {}
    for i, row in enumerate(rows[1:]):
        if len(row) != 5:
            raise PanelFormatError(f"row {i + 1}: expected 5 cells, got {len(row)}")
        date = row[0].strip()
        key = _month_key(date, i)
        if date in seen:
            raise PanelFormatError(
                f"row {i + 1}: duplicate date {date!r} (first seen at row "
                f"{seen[date] + 1})")
        seen[date] = i
        vals = []
        for col, cell in zip(SERIES, row[1:]):
            try:
                v = float(cell)
            except ValueError:
                raise PanelFormatError(
                    f"row {i + 1}, column {col}: {cell!r} is not numeric") from None
            if not np.isfinite(v):
                raise PanelFormatError(
                    f"row {i + 1}, column {col}: non-finite value")
            vals.append(v)
        if dates and key <= _month_key(dates[-1], i - 1):
            raise PanelFormatError(
                f"row {i + 1}: date {date!r} does not increase past {dates[-1]!r}")
        dates.append(date)
        values.append(vals)
    data = np.asarray(values, dtype=float)

    if frequency is Frequency.SEMIANNUAL:
        keys = [_month_key(d, i) for i, d in enumerate(dates)]
        out_dates, out_vals = [], []
        for i, k in enumerate(keys):
            for m in range(6):
                out_dates.append(_key_to_month(k + m))
                if interpolate and i + 1 < len(keys):
                    frac = m / 6.0
                    out_vals.append((1 - frac) * data[i] + frac * data[i + 1])
                else:
                    out_vals.append(data[i])
        dates, data = out_dates, np.asarray(out_vals)

    return BalancePanel(
        firm_id=firm_id, dates=tuple(dates),
        a_c=data[:, 0], a_l=data[:, 1], b_c=data[:, 2], b_l=data[:, 3],
        frequency=Frequency.MONTHLY)


def emit_panel(panel: BalancePanel, path=None) -> str | None:
    """Write a panel back to its CSV form; round trips through ingest."""
    buf = io.StringIO()
    buf.write(",".join(PANEL_HEADER) + "\n")
    for i, d in enumerate(panel.dates):
        cells = [repr(float(getattr(panel, name)[i])) for name in SERIES]
        buf.write(d + "," + ",".join(cells) + "\n")
    text = buf.getvalue()
    if path is None:
        return text
    with open(path, "w") as fh:
        fh.write(text)
    return None
