"""File formats: CSV schemas for traces and series, JSON result documents.

CSV files are UTF-8 with LF line endings and ``.`` decimals; floats are
written with ``repr`` so a write/read round trip is exact.  Row numbers in
error messages count data rows from 1 (the header is not a row).
"""

from __future__ import annotations

import csv
import json
import math
from collections import OrderedDict
from pathlib import Path
from typing import Any, Iterable, Sequence

import numpy as np

from . import __version__
from .traces import TraceRecord

TRACE_HEADER = ("trace_id", "time_s", "p_excited", "n_shots")
FREQ_HEADER = ("index", "omega01_hz")
T1T_HEADER = ("temperature_k", "t1_s", "t1_err_s")


class CsvFormatError(ValueError):
    def __init__(self, path, message: str, row: int | None = None):
        where = f"{path}: row {row}: " if row is not None else f"{path}: "
        super().__init__(where + message)
        self.row = row


def _fmt(x: float) -> str:
    return repr(float(x))


def _write_rows(path, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def _read_rows(path, header: Sequence[str]) -> list[list[str]]:
    try:
        with open(path, encoding="utf-8", newline="") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise CsvFormatError(path, f"cannot read file ({exc.strerror})") from exc
    if not rows:
        raise CsvFormatError(path, "empty file: expected header " + ",".join(header))
    if tuple(c.strip() for c in rows[0]) != tuple(header):
        raise CsvFormatError(path, f"header {','.join(rows[0])!r} does not match expected {','.join(header)!r}")
    data = rows[1:]
    if not data:
        raise CsvFormatError(path, "file has a header but no data rows")
    for i, r in enumerate(data, start=1):
        if len(r) != len(header):
            raise CsvFormatError(path, f"expected {len(header)} fields, got {len(r)}", i)
    return data


def _float(path, text: str, row: int, name: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise CsvFormatError(path, f"{name}={text!r} is not a number", row) from None
    if not math.isfinite(v):
        raise CsvFormatError(path, f"{name}={text!r} is not finite", row)
    return v


def write_traces_csv(path, records: Iterable[TraceRecord]) -> None:
    rows = []
    for rec in records:
        for t, p in zip(rec.times, rec.p_excited):
            rows.append((rec.trace_id, _fmt(t), _fmt(p), int(rec.n_shots)))
    _write_rows(path, TRACE_HEADER, rows)


def load_traces_csv(path) -> list[TraceRecord]:
    """Read and validate a trace file; records come back in order of first appearance."""
    groups: "OrderedDict[str, dict]" = OrderedDict()
    for i, (tid, ts, ps, ns) in enumerate(_read_rows(path, TRACE_HEADER), start=1):
        t = _float(path, ts, i, "time_s")
        p = _float(path, ps, i, "p_excited")
        if not 0.0 <= p <= 1.0:
            raise CsvFormatError(path, f"p_excited={ps} outside [0, 1]", i)
        try:
            n = int(ns)
        except ValueError:
            raise CsvFormatError(path, f"n_shots={ns!r} is not an integer", i) from None
        if n < 1:
            raise CsvFormatError(path, f"n_shots={n} must be >= 1", i)
        g = groups.setdefault(tid, {"t": [], "p": [], "n": n})
        if g["n"] != n:
            raise CsvFormatError(path, f"n_shots changes within trace {tid!r}", i)
        if g["t"] and t <= g["t"][-1]:
            raise CsvFormatError(path, f"time_s={ts} does not increase within trace {tid!r}", i)
        g["t"].append(t)
        g["p"].append(p)
    return [TraceRecord(tid, np.array(g["t"]), np.array(g["p"]), g["n"]) for tid, g in groups.items()]


def write_frequency_csv(path, freqs: Sequence[float]) -> None:
    _write_rows(path, FREQ_HEADER, ((i, _fmt(f)) for i, f in enumerate(freqs)))


def load_frequency_csv(path) -> np.ndarray:
    data = _read_rows(path, FREQ_HEADER)
    out = np.empty(len(data))
    for i, (idx, f) in enumerate(data, start=1):
        out[i - 1] = _float(path, f, i, "omega01_hz")
    return out


def write_t1_vs_temperature_csv(path, rows) -> None:
    _write_rows(path, T1T_HEADER, ((_fmt(a), _fmt(b), _fmt(c)) for a, b, c in rows))


def load_t1_vs_temperature_csv(path) -> np.ndarray:
    data = _read_rows(path, T1T_HEADER)
    out = np.empty((len(data), 3))
    for i, row in enumerate(data, start=1):
        for j, name in enumerate(T1T_HEADER):
            out[i - 1, j] = _float(path, row[j], i, name)
        if out[i - 1, 0] <= 0 or out[i - 1, 1] <= 0:
            raise CsvFormatError(path, "temperature and T1 must be positive", i)
    return out


def write_table_csv(path, header: Sequence[str], rows: Iterable[Sequence[float]]) -> None:
    """Flat numeric table (for sweeps)."""
    _write_rows(path, header, ([_fmt(v) if isinstance(v, float) else v for v in r] for r in rows))


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if math.isfinite(v) else str(v)
    if isinstance(obj, Path):
        return str(obj)
    return obj


def emit_report(command: str, config: dict, result: dict) -> str:
    """Render a result document (JSON, sorted keys, full float precision)."""
    doc = {
        "tool": {"name": "cqedkit", "version": __version__},
        "command": command,
        "config": _plain(config),
        "result": _plain(result),
    }
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False, allow_nan=False) + "\n"
