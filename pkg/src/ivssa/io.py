"""CSV and JSON input/output.

CSV layouts: narrow ``label,lo,hi`` for one series, wide
``label,lo_1,hi_1,...,lo_D,hi_D`` for several series sharing labels.  All
file writes go through a temp file and os.replace, and the JSON emitter is
deterministic (fixed float formatting, insertion-ordered keys) so repeated
runs produce identical bytes.
"""

from __future__ import annotations

import csv
import json
import math
import os
import tempfile
from io import StringIO
from typing import Sequence

import numpy as np

from .core import (
    CsvError,
    IntervalSeries,
    InvalidValueError,
    ParameterError,
    ShapeError,
)

#: Significant digits for CSV floats.
CSV_DIGITS = 12

#: Significant digits for JSON floats; 17 round-trips float64 exactly.
JSON_DIGITS = 17


def read_csv(path: str) -> list[IntervalSeries]:
    """Read interval series from a narrow or wide CSV file.

    Structural problems raise CsvError with a 1-based line number; interval
    violations (lo > hi, non-finite endpoints) raise InvalidValueError
    naming the line.
    """
    try:
        fh = open(path, newline="", encoding="utf-8")
    except OSError as exc:
        raise CsvError(f"cannot open {path}: {exc.strerror}", line=0) from None
    with fh:
        numbered = [
            (lineno, row)
            for lineno, row in enumerate(csv.reader(fh), start=1)
            if row and any(cell.strip() for cell in row)
        ]
    if not numbered:
        raise CsvError("file has no header row", line=1)
    header_line, header = numbered[0]
    cols = [c.strip() for c in header]
    if cols == ["label", "lo", "hi"]:
        n_series = 1
    else:
        if cols[:1] != ["label"] or len(cols) < 3 or (len(cols) - 1) % 2 != 0:
            raise CsvError(
                f"unrecognized header {','.join(cols)!r}; expected "
                "'label,lo,hi' or 'label,lo_1,hi_1,...'",
                line=header_line,
            )
        n_series = (len(cols) - 1) // 2
        for s in range(n_series):
            want = (f"lo_{s + 1}", f"hi_{s + 1}")
            got = (cols[1 + 2 * s], cols[2 + 2 * s])
            if got != want:
                raise CsvError(
                    f"unrecognized header columns {got[0]!r},{got[1]!r}; "
                    f"expected {want[0]!r},{want[1]!r}",
                    line=header_line,
                )
    data = numbered[1:]
    if not data:
        raise CsvError("file has no data rows", line=header_line)
    labels: list[str] = []
    lo = np.empty((n_series, len(data)))
    hi = np.empty((n_series, len(data)))
    for t, (lineno, row) in enumerate(data):
        if len(row) != len(cols):
            raise CsvError(
                f"expected {len(cols)} fields, got {len(row)}", line=lineno
            )
        labels.append(row[0].strip())
        for s in range(n_series):
            raw_lo, raw_hi = row[1 + 2 * s].strip(), row[2 + 2 * s].strip()
            try:
                a = float(raw_lo)
                b = float(raw_hi)
            except ValueError:
                bad = raw_lo if _is_bad_float(raw_lo) else raw_hi
                raise CsvError(
                    f"non-numeric value {bad!r}", line=lineno
                ) from None
            if not (math.isfinite(a) and math.isfinite(b)):
                raise InvalidValueError(
                    f"non-finite endpoint at line {lineno}: [{raw_lo}, {raw_hi}]"
                )
            if a > b:
                raise InvalidValueError(
                    f"lower endpoint exceeds upper at line {lineno}: "
                    f"{a!r} > {b!r}"
                )
            lo[s, t] = a
            hi[s, t] = b
    tags = tuple(labels)
    return [
        IntervalSeries(lo[s], hi[s], labels=tags) for s in range(n_series)
    ]


def _is_bad_float(text: str) -> bool:
    try:
        float(text)
    except ValueError:
        return True
    return False


def _format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        v = float(value)
        if not math.isfinite(v):
            return ""
        return format(v, f".{CSV_DIGITS}g")
    return str(value)


def atomic_write_text(path: str, text: str) -> None:
    """Write text to path via a sibling temp file and os.replace."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".ivssa-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        # mkstemp creates 0600 files; restore the umask-governed default
        umask = os.umask(0)
        os.umask(umask)
        os.chmod(tmp, 0o666 & ~umask)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def write_table_csv(path: str, header: Sequence[str], rows: Sequence[Sequence]) -> None:
    """Write a generic table with fixed float formatting, atomically."""
    buf = StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(list(header))
    for row in rows:
        writer.writerow([_format_cell(v) for v in row])
    atomic_write_text(path, buf.getvalue())


def write_series_csv(
    path: str,
    series: IntervalSeries | Sequence[IntervalSeries],
    labels: Sequence[str] | None = None,
) -> None:
    """Write one series (narrow layout) or several (wide layout)."""
    if isinstance(series, IntervalSeries):
        group = [series]
    else:
        group = list(series)
    if not group:
        raise ParameterError("no series to write")
    n = len(group[0])
    for s in group[1:]:
        if len(s) != n:
            raise ShapeError("all series must share one length")
    if labels is None:
        labels = group[0].labels
    if labels is None:
        labels = tuple(str(t + 1) for t in range(n))
    if len(labels) != n:
        raise ShapeError(
            f"got {len(labels)} labels for {n} rows"
        )
    if len(group) == 1:
        header = ["label", "lo", "hi"]
    else:
        header = ["label"]
        for s in range(len(group)):
            header += [f"lo_{s + 1}", f"hi_{s + 1}"]
    rows = []
    for t in range(n):
        row: list = [labels[t]]
        for s in group:
            row += [s.lo[t], s.hi[t]]
        rows.append(row)
    write_table_csv(path, header, rows)


def _emit_json(obj, out: list[str], indent: int, level: int) -> None:
    pad = " " * (indent * level)
    pad_in = " " * (indent * (level + 1))
    if obj is None:
        out.append("null")
    elif isinstance(obj, bool) or isinstance(obj, np.bool_):
        out.append("true" if obj else "false")
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        v = float(obj)
        out.append(format(v, f".{JSON_DIGITS}g") if math.isfinite(v) else "null")
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif isinstance(obj, np.ndarray):
        _emit_json(obj.tolist(), out, indent, level)
    elif isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{\n")
        for i, (key, value) in enumerate(obj.items()):
            if not isinstance(key, str):
                key = str(key)
            out.append(pad_in + json.dumps(key) + ": ")
            _emit_json(value, out, indent, level + 1)
            out.append(",\n" if i + 1 < len(obj) else "\n")
        out.append(pad + "}")
    elif isinstance(obj, (list, tuple)):
        if not obj:
            out.append("[]")
            return
        out.append("[\n")
        for i, value in enumerate(obj):
            out.append(pad_in)
            _emit_json(value, out, indent, level + 1)
            out.append(",\n" if i + 1 < len(obj) else "\n")
        out.append(pad + "]")
    else:
        raise ParameterError(f"cannot serialize {type(obj).__name__} to JSON")


def json_dumps(obj, indent: int = 2) -> str:
    """Deterministic JSON text: .17g floats, NaN/inf as null, insertion
    order preserved."""
    out: list[str] = []
    _emit_json(obj, out, indent, 0)
    return "".join(out)


def write_json(path: str, obj) -> None:
    atomic_write_text(path, json_dumps(obj) + "\n")
