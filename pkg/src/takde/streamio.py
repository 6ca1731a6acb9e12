"""CSV stream format (``batch,value`` rows) and atomic file output."""

from __future__ import annotations

import csv
import io
import os
import tempfile
from pathlib import Path
from typing import Iterable

import numpy as np

from .batch import Batch
from .errors import StreamFormatError

HEADER = ("batch", "value")


def parse_stream(lines: Iterable[str]) -> list[Batch]:
    """Parse ``batch,value`` CSV text into batches.

    Batch indices must start at 0 and only ever stay the same or grow by one.
    """
    reader = csv.reader(lines)
    try:
        header = next(reader)
    except StopIteration:
        raise StreamFormatError("empty input, expected header 'batch,value'", line=1) from None
    if tuple(h.strip() for h in header) != HEADER:
        raise StreamFormatError(f"expected header 'batch,value', got {','.join(header)!r}", line=1)
    groups: list[list[float]] = []
    for row in reader:
        line = reader.line_num
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != 2:
            raise StreamFormatError(f"expected 2 fields, got {len(row)}", line=line)
        try:
            idx = int(row[0])
        except ValueError:
            raise StreamFormatError(f"batch index {row[0]!r} is not an integer", line=line) from None
        try:
            value = float(row[1])
        except ValueError:
            raise StreamFormatError(f"value {row[1]!r} is not a number", line=line) from None
        if not np.isfinite(value):
            raise StreamFormatError(f"value {row[1]!r} is not finite", line=line)
        if idx == len(groups):
            groups.append([])
        elif idx != len(groups) - 1:
            expected = f"{len(groups) - 1} or {len(groups)}" if groups else "0"
            raise StreamFormatError(f"batch index {idx} out of order (expected {expected})", line=line)
        groups[idx].append(value)
    if not groups:
        raise StreamFormatError("stream contains no data rows")
    return [Batch(t, pts) for t, pts in enumerate(groups)]


def read_stream(path) -> list[Batch]:
    with open(path, newline="", encoding="utf-8") as fh:
        return parse_stream(fh)


def format_stream(batches: Iterable[Batch]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(HEADER)
    for b in batches:
        for v in b.points:
            writer.writerow((b.t, repr(float(v))))
    return buf.getvalue()


def atomic_write(path, text: str):
    """Write ``text`` to a temp file next to ``path`` and rename it into place."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
