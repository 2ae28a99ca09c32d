"""CSV reading/writing and atomic file output."""

from __future__ import annotations

import csv
import io as _io
import math
import os
import tempfile
from pathlib import Path

import numpy as np

from .errors import DataError


def fmt(value) -> str:
    """Shortest round-trip text for a number (at least as precise as 17 digits)."""
    if isinstance(value, str):
        return value
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    v = float(value)
    if math.isnan(v):
        return "nan"
    return repr(v)


def format_csv(header, rows) -> str:
    buf = _io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) for v in row])
    return buf.getvalue()


def atomic_write(path, text: str) -> None:
    """Write ``text`` to ``path`` via a temporary file and rename."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def read_series_csv(source) -> tuple[np.ndarray, np.ndarray]:
    """Read a ``value`` column (and optional integer ``t`` column).

    Returns ``(t, values)``. When ``t`` is present it must be consecutive
    integers, since the filters assume unit spacing.
    """
    if isinstance(source, (str, os.PathLike)):
        try:
            with open(source, newline="") as fh:
                text = fh.read()
        except OSError as exc:
            raise DataError(f"cannot read {source}: {exc.strerror}") from exc
    else:
        text = source.read()
    reader = csv.DictReader(_io.StringIO(text))
    if reader.fieldnames is None:
        raise DataError("input CSV is empty")
    fields = [f.strip() for f in reader.fieldnames]
    if "value" not in fields:
        raise DataError("input CSV needs a 'value' column")
    reader.fieldnames = fields
    ts, values = [], []
    for lineno, row in enumerate(reader, start=2):
        try:
            values.append(float(row["value"]))
            if "t" in fields:
                ts.append(int(row["t"]))
        except (TypeError, ValueError) as exc:
            raise DataError(f"malformed row at line {lineno}") from exc
    if not values:
        raise DataError("input CSV has no data rows")
    x = np.array(values)
    if not np.all(np.isfinite(x)):
        raise DataError("input CSV contains missing or non-finite values")
    if ts:
        t = np.array(ts)
        if np.any(np.diff(t) != 1):
            raise DataError("column 't' must hold consecutive integers")
    else:
        t = np.arange(len(x))
    return t, x
