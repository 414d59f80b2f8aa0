"""Daily sliding-window runs and trend-based alerts."""

from __future__ import annotations

import datetime as dt
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from faultminer.episodes import FrequentEpisode, parse_episode
from faultminer.events import EventSequence
from faultminer.pipeline import AnalysisConfig, analyze
from faultminer.rules import ScoredEpisode

DAY = 86400


class RunError(RuntimeError):
    def __init__(self, date: dt.date, cause: Exception):
        super().__init__(f"daily run for {date.isoformat()} failed: {cause}")
        self.date = date


class DateGapError(ValueError):
    pass


def day_start(d: dt.date) -> int:
    return int(dt.datetime(d.year, d.month, d.day, tzinfo=dt.timezone.utc).timestamp())


def day_of(t: int) -> dt.date:
    return dt.datetime.fromtimestamp(t, tz=dt.timezone.utc).date()


def _scored_to_dict(s: ScoredEpisode) -> dict:
    return {
        "episode": str(s.episode),
        "size": s.size,
        "frequency": s.frequency,
        "best_confidence": s.best_confidence,
        "worst_confidence": s.worst_confidence,
        "category": s.category,
        "tag": s.tag,
    }


def _scored_from_dict(d: dict) -> ScoredEpisode:
    base = FrequentEpisode(parse_episode(d["episode"]), int(d["frequency"]))
    return ScoredEpisode(base, d["best_confidence"], d["worst_confidence"], d.get("category"), d.get("tag"))


@dataclass
class DailyRun:
    date: dt.date
    window: tuple[dt.date, dt.date]
    results: list[ScoredEpisode] = field(default_factory=list)
    thresholds: dict[int, int] = field(default_factory=dict)
    events: int = 0

    def to_dict(self) -> dict:
        return {
            "date": self.date.isoformat(),
            "window": [self.window[0].isoformat(), self.window[1].isoformat()],
            "events": self.events,
            "thresholds": {str(k): v for k, v in sorted(self.thresholds.items())},
            "results": [_scored_to_dict(s) for s in self.results],
        }

    @classmethod
    def from_dict(cls, d: dict) -> DailyRun:
        return cls(
            dt.date.fromisoformat(d["date"]),
            (dt.date.fromisoformat(d["window"][0]), dt.date.fromisoformat(d["window"][1])),
            [_scored_from_dict(r) for r in d["results"]],
            {int(k): v for k, v in d.get("thresholds", {}).items()},
            d.get("events", 0),
        )

    def save(self, run_dir: str | Path) -> Path:
        path = Path(run_dir) / f"{self.date.isoformat()}.json"
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n")
        return path


def run_daily(
    history: EventSequence, date: dt.date, cfg: AnalysisConfig | None = None, window_days: int = 7
) -> DailyRun:
    """Analyse the ``window_days`` days ending with ``date`` (inclusive)."""
    first = date - dt.timedelta(days=window_days - 1)
    seq = history.between(day_start(first), day_start(date) + DAY)
    try:
        res = analyze(seq, cfg)
    except Exception as exc:
        raise RunError(date, exc) from exc
    return DailyRun(date, (first, date), res.results, res.thresholds, len(seq))


def load_runs(run_dir: str | Path, start: dt.date, end: dt.date) -> list[DailyRun]:
    runs = []
    d = start
    while d <= end:
        path = Path(run_dir) / f"{d.isoformat()}.json"
        if not path.exists():
            raise DateGapError(f"missing run file for {d.isoformat()} ({path})")
        runs.append(DailyRun.from_dict(json.loads(path.read_text())))
        d += dt.timedelta(days=1)
    return runs


@dataclass(frozen=True)
class Alert:
    episode: str
    trend: tuple[tuple[dt.date, int], ...]
    triggering_day: dt.date
    best_confidence: float
    worst_confidence: float

    def to_dict(self) -> dict:
        return {
            "episode": self.episode,
            "triggering_day": self.triggering_day.isoformat(),
            "trend": [[d.isoformat(), f] for d, f in self.trend],
            "best_confidence": self.best_confidence,
            "worst_confidence": self.worst_confidence,
        }


def _check_consecutive(runs: Sequence[DailyRun]) -> None:
    for a, b in zip(runs, runs[1:]):
        if b.date - a.date != dt.timedelta(days=1):
            missing = a.date + dt.timedelta(days=1)
            raise DateGapError(f"runs are not consecutive: no run for {missing.isoformat()}")


def _qualifying(
    window: Sequence[DailyRun], min_freq: int, min_best: float, min_worst: float
) -> dict[str, ScoredEpisode]:
    days = [{str(s.episode): s for s in run.results} for run in window]
    out = {}
    for text, last in days[-1].items():
        if not all(text in d for d in days):
            continue
        freqs = [d[text].frequency for d in days]
        if any(x > y for x, y in zip(freqs, freqs[1:])):
            continue
        if last.frequency >= min_freq and last.best_confidence >= min_best and last.worst_confidence >= min_worst:
            out[text] = last
    return out


def detect_alerts(
    runs: Sequence[DailyRun],
    trend_days: int = 4,
    min_freq: int = 1,
    min_best: float = 0.0,
    min_worst: float = 0.0,
) -> list[Alert]:
    """Alerts for episodes with a non-decreasing frequency over ``trend_days`` runs.

    An episode must appear in every run of the trend, and its frequency and
    scores on the last day must meet the thresholds.  An episode alerts again
    only after a day on which it did not qualify.
    """
    if trend_days < 1:
        raise ValueError("trend_days must be >= 1")
    runs = list(runs)
    _check_consecutive(runs)
    alerts = []
    previous: set[str] = set()
    for i in range(trend_days - 1, len(runs)):
        window = runs[i - trend_days + 1 : i + 1]
        now = _qualifying(window, min_freq, min_best, min_worst)
        for text in sorted(set(now) - previous):
            s = now[text]
            trend = tuple((r.date, {str(x.episode): x for x in r.results}[text].frequency) for r in window)
            alerts.append(Alert(text, trend, runs[i].date, s.best_confidence, s.worst_confidence))
        previous = set(now)
    return alerts


def alerts_on(alerts: Iterable[Alert], day: dt.date) -> list[Alert]:
    return [a for a in alerts if a.triggering_day == day]


def format_alert_table(alerts: Iterable[Alert]) -> str:
    rows = [("day", "episode", "trend", "best", "worst")]
    for a in alerts:
        trend = ",".join(str(f) for _, f in a.trend)
        rows.append(
            (a.triggering_day.isoformat(), a.episode, trend, f"{a.best_confidence:.1f}", f"{a.worst_confidence:.1f}")
        )
    widths = [max(len(r[i]) for r in rows) for i in range(5)]
    return "\n".join("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in rows) + "\n"
