"""Fault-log parsing, line partitioning, pre-filtering and sequence building."""

from __future__ import annotations

import calendar
import csv
import logging
import time
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Mapping, NamedTuple, TextIO

from faultminer.events import EventSequence, make_sequence

log = logging.getLogger(__name__)

LABEL_SEP = "_"

GRANULARITIES = {
    "station": ("station",),
    "station+subsystem": ("station", "subsystem"),
    "station+subsystem+fault": ("station", "subsystem", "fault"),
    "station+fault": ("station", "fault"),
}


@dataclass(frozen=True)
class FaultRecord:
    line: str
    station: str
    subsystem: str
    fault: str
    occurred: int
    resolved: int

    @property
    def duration(self) -> int:
        return self.resolved - self.occurred

    def label(self, granularity: str = "station+subsystem+fault") -> str:
        parts = [getattr(self, f) for f in GRANULARITIES[granularity]]
        return LABEL_SEP.join(p for p in parts if p)


@dataclass
class LogFormat:
    """Column layout of a delimited fault log.

    The default matches the plant snapshot: station, error code, start time,
    duration.  ``columns`` maps field name to 0-based column index; missing
    ``line`` and ``subsystem`` columns read as empty strings.
    """

    columns: dict = field(default_factory=lambda: {"station": 0, "fault": 1, "occurred": 2, "duration": 3})
    delimiter: str = ","
    time_format: str = "%Y-%m-%d %H:%M:%S"
    has_header: bool = False

    def __post_init__(self):
        cols = self.columns
        if "station" not in cols or "occurred" not in cols:
            raise ValueError("log format needs at least 'station' and 'occurred' columns")
        if ("duration" in cols) == ("resolved" in cols):
            raise ValueError("log format needs exactly one of 'duration' or 'resolved'")
        unknown = set(cols) - {"line", "station", "subsystem", "fault", "occurred", "duration", "resolved"}
        if unknown:
            raise ValueError(f"unknown log columns {sorted(unknown)}")
        if any(not isinstance(i, int) or i < 0 for i in cols.values()):
            raise ValueError("column indices must be non-negative integers")

    @classmethod
    def from_dict(cls, d: Mapping) -> LogFormat:
        d = dict(d)
        if d.get("delimiter") == "tab":
            d["delimiter"] = "\t"
        return cls(**d)


class ParsedLog(NamedTuple):
    records: list[FaultRecord]
    errors: list[tuple[int, str]]


def parse_time(text: str, fmt: str) -> int:
    text = text.strip()
    if text.lstrip("-").isdigit():
        return int(text)
    return calendar.timegm(time.strptime(text, fmt))


def parse_log(source: TextIO | Iterable[str], fmt: LogFormat | None = None) -> ParsedLog:
    """Read fault records; malformed rows are skipped and reported by row number."""
    fmt = fmt or LogFormat()
    cols = fmt.columns
    records: list[FaultRecord] = []
    errors: list[tuple[int, str]] = []
    reader = csv.reader(source, delimiter=fmt.delimiter, skipinitialspace=True)
    for rowno, row in enumerate(reader, start=1):
        if fmt.has_header and rowno == 1:
            continue
        if not row or all(not c.strip() for c in row):
            continue
        try:
            get = lambda name: row[cols[name]].strip() if name in cols else ""
            occurred = parse_time(get("occurred"), fmt.time_format)
            if "duration" in cols:
                resolved = occurred + int(get("duration"))
            else:
                resolved = parse_time(get("resolved"), fmt.time_format)
            if resolved < occurred:
                raise ValueError("resolved before occurred")
            records.append(FaultRecord(get("line"), get("station"), get("subsystem"), get("fault"), occurred, resolved))
        except (IndexError, ValueError) as exc:
            errors.append((rowno, str(exc)))
            log.warning("skipping row %d: %s", rowno, exc)
    return ParsedLog(records, errors)


def partition_by_line(records: Iterable[FaultRecord]) -> dict[str, list[FaultRecord]]:
    parts: dict[str, list[FaultRecord]] = defaultdict(list)
    for r in records:
        parts[r.line].append(r)
    return {line: sorted(rs, key=lambda r: r.occurred) for line, rs in parts.items()}


@dataclass
class PreFilterConfig:
    duration_bounds: tuple[int, int] | None = None
    drop_zero_duration: bool = False
    excluded_codes: frozenset = frozenset()
    granularity: str = "station+subsystem+fault"
    group_include: frozenset | None = None
    # station -> zone, so that ``group_include`` may name zones
    station_zones: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        if self.duration_bounds is not None:
            lo, hi = self.duration_bounds
            if not 0 <= lo <= hi:
                raise ValueError(f"bad duration bounds {self.duration_bounds}")
            self.duration_bounds = (int(lo), int(hi))
        if self.granularity not in GRANULARITIES:
            raise ValueError(f"unknown granularity {self.granularity!r}")
        self.excluded_codes = frozenset(self.excluded_codes)
        if self.group_include is not None:
            self.group_include = frozenset(self.group_include)


def code_matches(code: str, pattern: str) -> bool:
    """Exact match, or prefix match when the pattern ends in ``*``."""
    if pattern.endswith("*"):
        return code.startswith(pattern[:-1])
    return code == pattern


def _excluded(r: FaultRecord, patterns: frozenset) -> bool:
    codes = (r.fault, r.station, r.label("station+subsystem+fault"))
    return any(code_matches(c, p) for p in patterns for c in codes if c)


def prefilter(records: Iterable[FaultRecord], cfg: PreFilterConfig) -> list[FaultRecord]:
    """Drop excluded codes, then zero/out-of-bounds durations, then out-of-group records."""
    out = []
    for r in records:
        if cfg.excluded_codes and _excluded(r, cfg.excluded_codes):
            continue
        if cfg.drop_zero_duration and r.duration == 0:
            continue
        if cfg.duration_bounds is not None and not cfg.duration_bounds[0] <= r.duration <= cfg.duration_bounds[1]:
            continue
        if cfg.group_include is not None:
            groups = {r.station, r.line, cfg.station_zones.get(r.station)}
            if not groups & cfg.group_include:
                continue
        out.append(r)
    return out


def to_sequence(records: Iterable[FaultRecord], granularity: str = "station+subsystem+fault") -> EventSequence:
    if granularity not in GRANULARITIES:
        raise ValueError(f"unknown granularity {granularity!r}")
    return make_sequence((r.label(granularity), r.occurred, r.resolved) for r in records)
