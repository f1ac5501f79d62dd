"""Tab-separated numeric tables with bitwise float round trip.

Layout: one `# col1<TAB>col2...` header line, then one row per line, every
value printed with 17 significant digits so parsing reproduces each double
exactly.  Row order is whatever the writer supplies (deterministic callers
give deterministic files).
"""

from __future__ import annotations

import numpy as np

__all__ = ["write_table", "read_table"]


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def write_table(path: str, header: list[str], rows) -> None:
    """Write a header-plus-rows table; empty rows give a header-only file."""
    tmp = []
    for row in rows:
        tmp.append("\t".join(_fmt(v) for v in row))
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("# " + "\t".join(header) + "\n")
            for line in tmp:
                fh.write(line + "\n")
    except OSError as err:
        raise OSError(f"cannot write table {path!r}: {err}") from err


def read_table(path: str) -> tuple[list[str], np.ndarray]:
    """Read a table back as (column names, float64 array of shape (rows, cols))."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as err:
        raise OSError(f"cannot read table {path!r}: {err}") from err
    if not lines or not lines[0].startswith("#"):
        raise ValueError(f"{path}: missing '# ...' header line")
    header = lines[0][1:].strip().split("\t")
    rows = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != len(header):
            raise ValueError(
                f"{path}:{lineno}: expected {len(header)} columns, got {len(parts)}"
            )
        try:
            rows.append([float(p) for p in parts])
        except ValueError as err:
            raise ValueError(f"{path}:{lineno}: {err}") from None
    data = np.array(rows, dtype=np.float64) if rows else np.empty((0, len(header)))
    return header, data
