"""Tick-file ingestion, report writers and key=value config files."""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path

from .errors import ConfigError, EmptySeries, NonMonotoneTimes, ParseError
from .sync import TickSeries

__all__ = [
    "ingest_ticks",
    "write_ticks",
    "write_rows",
    "format_rows",
    "sibling_path",
    "load_config",
]

TICK_HEADER = ("time", "logprice")


def _parse_float(text: str) -> float:
    v = float(text)
    if not math.isfinite(v):
        raise ValueError(f"non-finite value {text!r}")
    return v


def ingest_ticks(
    path,
    *,
    time_col: int = 0,
    value_col: int = 1,
    delimiter: str = ",",
    header: bool | str = "auto",
    dedup: bool = False,
    horizon: float | None = None,
) -> TickSeries:
    """Read a two-column ``time,logprice`` file into a :class:`TickSeries`.

    Parameters
    ----------
    path : path-like
    time_col, value_col : int
        Zero-based column positions.
    delimiter : str
    header : bool or "auto"
        With ``"auto"`` the first row is treated as a header when its time
        field is not numeric.
    dedup : bool
        Collapse runs of equal timestamps, keeping the last value.
    horizon : float, optional
        Passed through to :class:`TickSeries`.

    Raises
    ------
    ParseError
        Malformed row; the message and ``.line`` give the 1-based line.
    NonMonotoneTimes
        Times decrease, or repeat without ``dedup``.
    """
    times, values = [], []
    last_line = None
    with open(path, newline="") as fh:
        reader = csv.reader(fh, delimiter=delimiter)
        first = True
        for row in reader:
            lineno = reader.line_num
            if not row or not "".join(row).strip() or row[0].lstrip().startswith("#"):
                continue
            if first:
                first = False
                if header is True:
                    continue
                if header == "auto":
                    try:
                        float(row[time_col])
                    except (ValueError, IndexError):
                        continue
            try:
                t = _parse_float(row[time_col])
                v = _parse_float(row[value_col])
            except IndexError:
                raise ParseError(f"expected at least {max(time_col, value_col) + 1} columns, "
                                 f"got {len(row)}", lineno) from None
            except ValueError as exc:
                raise ParseError(str(exc), lineno) from None
            if times and t <= times[-1]:
                if t == times[-1] and dedup:
                    values[-1] = v
                    continue
                raise NonMonotoneTimes(
                    f"line {lineno}: time {t!r} does not exceed previous {times[-1]!r} "
                    f"(line {last_line})"
                )
            times.append(t)
            values.append(v)
            last_line = lineno
    if len(times) < 2:
        raise EmptySeries(f"{path}: need at least 2 observations, found {len(times)}")
    return TickSeries(times, values, horizon)


def write_ticks(path, series: TickSeries, *, delimiter: str = ",", header: bool = True) -> None:
    """Write a series with shortest round-trip float formatting (bit-exact on re-read)."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, delimiter=delimiter, lineterminator="\n")
        if header:
            w.writerow(TICK_HEADER)
        for t, v in zip(series.times.tolist(), series.values.tolist()):
            w.writerow((repr(t), repr(v)))


def _cell(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return v


def format_rows(rows, fmt: str = "csv") -> str:
    """Render a list of flat dicts as CSV or JSON text (same keys, same order)."""
    rows = list(rows)
    if fmt == "json":
        return json.dumps(rows, indent=2) + "\n"
    if fmt != "csv":
        raise ConfigError(f"unknown output format {fmt!r}")
    if not rows:
        return ""
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: _cell(v) for k, v in r.items()})
    return buf.getvalue()


def write_rows(path, rows, fmt: str = "csv") -> Path:
    path = Path(path)
    path.write_text(format_rows(rows, fmt))
    return path


def sibling_path(path, suffix: str, ext: str | None = None) -> Path:
    """``out.csv`` -> ``out<suffix>.<ext>`` in the same directory."""
    path = Path(path)
    ext = path.suffix if ext is None else ext
    return path.with_name(path.stem + suffix + ext)


def load_config(path) -> dict[str, str]:
    """Parse ``key = value`` lines; ``#`` starts a comment, dashes in keys become underscores."""
    out = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            if not sep or not key.strip():
                raise ParseError(f"expected key=value, got {raw.strip()!r}", lineno)
            out[key.strip().replace("-", "_")] = value.strip()
    return out
