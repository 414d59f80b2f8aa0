"""Synthetic fault logs: a four-week campaign with an emerging B -> A correlation.

Background: eight noise stations ``S1``..``S8`` fault once an hour on the
hour (60 s each), cycling through the stations, so no two background faults
fall within the campaign's 120 s expiry.  Injection: on day ``d`` the first
``pairs[d]`` hours carry a fault at station ``B`` (hh:20:00) followed 30 s
later by one at station ``A``.
"""

from __future__ import annotations

import datetime as dt
import io
import math

from faultminer.alerts import day_start
from faultminer.counting import ExpiryPolicy
from faultminer.ingest import FaultRecord, PreFilterConfig
from faultminer.mining import MiningConfig
from faultminer.pipeline import AnalysisConfig

CAMPAIGN_START = dt.date(2004, 3, 1)
NOISE_STATIONS = tuple(f"S{i}" for i in range(1, 9))
EXPIRY_SECONDS = 120


def rising_pairs(days: int = 28, quiet_days: int = 14) -> list[int]:
    """Pairs injected per day: none for ``quiet_days``, then 1, 1, 2, 2, 3, 3, ..."""
    return [0 if d <= quiet_days else math.ceil((d - quiet_days) / 2) for d in range(1, days + 1)]


def campaign_records(
    days: int = 28, start: dt.date = CAMPAIGN_START, pairs: list[int] | None = None, inject: bool = True
) -> list[FaultRecord]:
    pairs = pairs if pairs is not None else rising_pairs(days)
    out = []
    for d in range(days):
        t0 = day_start(start + dt.timedelta(days=d))
        for h in range(24):
            st = NOISE_STATIONS[(h + d) % len(NOISE_STATIONS)]
            out.append(FaultRecord("assembly", st, "", f"F{h % 3 + 1}", t0 + 3600 * h, t0 + 3600 * h + 60))
            if inject and h < pairs[d]:
                tb = t0 + 3600 * h + 1200
                out.append(FaultRecord("assembly", "B", "", "F7", tb, tb + 45))
                out.append(FaultRecord("assembly", "A", "", "F2", tb + 30, tb + 75))
    return sorted(out, key=lambda r: r.occurred)


def campaign_csv(records: list[FaultRecord]) -> str:
    """The records in the default log layout: station, code, start time, duration."""
    buf = io.StringIO()
    for r in records:
        ts = dt.datetime.fromtimestamp(r.occurred, tz=dt.timezone.utc).strftime("%Y-%m-%d %H:%M:%S")
        buf.write(f"{r.station},{r.fault},{ts},{r.duration}\n")
    return buf.getvalue()


def campaign_prefilter() -> PreFilterConfig:
    return PreFilterConfig(duration_bounds=(1, 1800), granularity="station")


def campaign_analysis() -> AnalysisConfig:
    return AnalysisConfig(
        mining=MiningConfig(expiry=ExpiryPolicy(EXPIRY_SECONDS, "start_to_start"), max_size=3),
        min_best=75.0,
        min_worst=25.0,
    )
