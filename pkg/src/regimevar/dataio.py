"""File ingestion and the structured-text report format.

Input: one observation per line or a delimited column.  The delimiter
(comma, tab or whitespace) and a single header line are auto-detected; any
unparseable or non-finite cell is a hard error naming line and column.

Reports are plain text: a ``# regimevar <kind> report`` banner, scalar lines
of exactly two tokens (``key value``), and row records of three or more
tokens (``tag field...``).  Floats are written with 17 significant digits so
a parsed report reproduces the in-memory values bit for bit.
"""

from __future__ import annotations

from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "load_series",
    "format_number",
    "write_delimited",
    "write_report",
    "read_report",
    "Report",
]


def format_number(x) -> str:
    """Render a number losslessly: ints verbatim, floats at 17 significant digits."""
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".17g")


def _split_line(line: str, delimiter: str | None) -> list[str]:
    return line.split(delimiter) if delimiter else line.split()


def _detect_delimiter(line: str) -> str | None:
    if "," in line:
        return ","
    if "\t" in line:
        return "\t"
    return None  # whitespace


def load_series(path, column: int = 0) -> np.ndarray:
    """Read one column of a delimited text file as a float series.

    The first non-blank line fixes the delimiter; if its target cell does
    not parse as a number the line is treated as a header and skipped.
    Parse failures and non-finite values abort with the offending line and
    column in the message.
    """
    path = Path(path)
    if column < 0:
        raise ValueError(f"column index {column} must be >= 0")
    values: list[float] = []
    delimiter: str | None = None
    first_data_line = True
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if first_data_line:
                delimiter = _detect_delimiter(line)
            cells = _split_line(line, delimiter)
            if column >= len(cells):
                raise ValueError(
                    f"{path}:{lineno}: column {column} missing (row has {len(cells)} cells)"
                )
            cell = cells[column].strip()
            try:
                v = float(cell)
            except ValueError:
                if first_data_line:
                    first_data_line = False
                    continue  # header row
                raise ValueError(
                    f"{path}:{lineno}: column {column}: could not parse {cell!r}"
                ) from None
            if not np.isfinite(v):
                raise ValueError(
                    f"{path}:{lineno}: column {column}: non-finite value {cell!r}"
                )
            first_data_line = False
            values.append(v)
    if not values:
        raise ValueError(f"{path}: no numeric data found in column {column}")
    return np.asarray(values, dtype=np.float64)


def write_delimited(path, columns: Sequence[np.ndarray], delimiter: str = ",") -> None:
    """Write equal-length columns as delimited text with lossless numbers."""
    arrays = [np.asarray(col) for col in columns]
    n = arrays[0].shape[0]
    if any(a.shape[0] != n for a in arrays):
        raise ValueError("all columns must have the same length")
    with open(path, "w", encoding="utf-8") as fh:
        for i in range(n):
            fh.write(delimiter.join(format_number(a[i]) for a in arrays) + "\n")


class Report:
    """Parsed structured report: scalars plus row records grouped by tag."""

    def __init__(self, kind: str, scalars: dict, rows: dict):
        self.kind = kind
        self.scalars = scalars
        self.rows = rows

    def __getitem__(self, key):
        return self.scalars[key]


def _render_report(kind: str, scalars: Iterable[tuple], rows: Iterable[tuple]) -> str:
    lines = [f"# regimevar {kind} report"]
    for key, value in scalars:
        lines.append(f"{key} {value if isinstance(value, str) else format_number(value)}")
    for row in rows:
        lines.append(
            " ".join(
                cell if isinstance(cell, str) else format_number(cell) for cell in row
            )
        )
    return "\n".join(lines) + "\n"


def write_report(out, kind: str, scalars: Iterable[tuple], rows: Iterable[tuple] = ()) -> str:
    """Write (or return, when ``out`` is None) a structured report.

    ``scalars`` are (key, value) pairs and must render to two tokens each;
    ``rows`` are records of >= 3 tokens starting with a tag.
    """
    text = _render_report(kind, scalars, rows)
    if out is not None:
        Path(out).write_text(text, encoding="utf-8")
    return text


def read_report(source) -> Report:
    """Parse a report written by :func:`write_report` (path or text)."""
    if isinstance(source, Path) or (isinstance(source, str) and "\n" not in source):
        text = Path(source).read_text(encoding="utf-8")
    else:
        text = source

    def convert(tok: str):
        try:
            return int(tok)
        except ValueError:
            pass
        try:
            return float(tok)
        except ValueError:
            return tok

    kind = ""
    scalars: dict = {}
    rows: dict = {}
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            parts = line.split()
            if len(parts) >= 3 and parts[1] == "regimevar":
                kind = parts[2]
            continue
        tokens = line.split()
        if len(tokens) == 2:
            scalars[tokens[0]] = convert(tokens[1])
        else:
            rows.setdefault(tokens[0], []).append(tuple(convert(t) for t in tokens[1:]))
    return Report(kind, scalars, rows)
