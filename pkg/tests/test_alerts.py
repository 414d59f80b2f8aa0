import datetime as dt
import random

import pytest

from faultminer.alerts import (
    DailyRun,
    DateGapError,
    day_start,
    detect_alerts,
    format_alert_table,
    load_runs,
    run_daily,
)
from faultminer.counting import oracle_max_non_overlapped
from faultminer.episodes import FrequentEpisode, parse_episode
from faultminer.events import make_sequence
from faultminer.ingest import prefilter, to_sequence
from faultminer.rules import ScoredEpisode
from faultminer.synthetic import CAMPAIGN_START, campaign_analysis, campaign_prefilter, campaign_records

D0 = dt.date(2004, 3, 1)


def runs_from(series: dict[str, list], best=100.0, worst=100.0, start=D0):
    n = max(len(v) for v in series.values())
    runs = []
    for i in range(n):
        res = [
            ScoredEpisode(FrequentEpisode(parse_episode(t), fs[i]), best, worst)
            for t, fs in series.items()
            if fs[i] is not None
        ]
        d = start + dt.timedelta(days=i)
        runs.append(DailyRun(d, (d - dt.timedelta(days=6), d), res))
    return runs


class TestDetect:
    def test_non_decreasing(self):
        (a,) = detect_alerts(runs_from({"B -> A": [3, 3, 4, 6]}), min_freq=1)
        assert a.episode == "B -> A" and a.triggering_day == D0 + dt.timedelta(days=3)
        assert [f for _, f in a.trend] == [3, 3, 4, 6]

    def test_dip(self):
        assert detect_alerts(runs_from({"B -> A": [3, 5, 4, 6]})) == []

    def test_absent_day(self):
        assert detect_alerts(runs_from({"B -> A": [3, None, 4, 6]})) == []

    def test_thresholds(self):
        runs = runs_from({"B -> A": [3, 3, 4, 6]}, best=80.0, worst=30.0)
        assert detect_alerts(runs, min_freq=7) == []
        assert detect_alerts(runs, min_best=90) == []
        assert detect_alerts(runs, min_worst=40) == []
        assert len(detect_alerts(runs, min_freq=6, min_best=80, min_worst=30)) == 1

    def test_suppressed_until_trend_breaks(self):
        runs = runs_from({"B -> A": [1, 2, 3, 4, 5, 4, 5, 6, 7]})
        days = [(a.triggering_day - D0).days for a in detect_alerts(runs)]
        # qualifies on days 3 and 4, breaks on 5..7, qualifies again on day 8
        assert days == [3, 8]

    def test_gap(self):
        runs = runs_from({"B -> A": [1, 2, 3, 4]})
        del runs[2]
        with pytest.raises(DateGapError, match="2004-03-03"):
            detect_alerts(runs)

    def test_properties(self):
        rng = random.Random(5)
        for _ in range(200):
            series = {
                f"S{k} -> A": [rng.choice([None, 1, 2, 3, 4, 5]) for _ in range(10)] for k in range(4)
            }
            runs = runs_from(series, best=rng.choice([50.0, 100.0]), worst=rng.choice([20.0, 60.0]))
            base = detect_alerts(runs, 4, 2, 40, 30)
            assert detect_alerts(runs, 4, 2, 40, 30) == base
            # with duplicate suppression a stricter alert may fall inside a streak the looser
            # thresholds already alerted on; it is never an episode/streak the looser run misses
            looser = {(a.episode, a.triggering_day) for a in base}
            for a in detect_alerts(runs, 4, 3, 60, 50):
                assert any(e == a.episode and d <= a.triggering_day for e, d in looser)
            # a D-day trend implies every shorter trend ending on the same day
            longer = detect_alerts(runs, 4, 1)
            for short in (1, 2, 3):
                qual = {(a.episode, a.triggering_day) for a in detect_alerts(runs, short, 1)}
                for a in longer:
                    # the shorter trend started at or before; it either alerts that day or is already alerting
                    day = a.triggering_day
                    assert any(e == a.episode and d <= day for e, d in qual)

    def test_table(self):
        alerts = detect_alerts(runs_from({"B -> A": [3, 3, 4, 6]}))
        table = format_alert_table(alerts)
        assert "B -> A" in table and "3,3,4,6" in table


class TestRunDaily:
    def test_empty_window(self):
        run = run_daily(make_sequence([]), D0, campaign_analysis())
        assert run.results == [] and run.window == (D0 - dt.timedelta(days=6), D0)

    def campaign_seq(self, **kw):
        return to_sequence(prefilter(campaign_records(**kw), campaign_prefilter()), "station")

    def test_deterministic(self):
        seq = self.campaign_seq()
        day = CAMPAIGN_START + dt.timedelta(days=25)
        assert run_daily(seq, day, campaign_analysis()).to_dict() == run_daily(seq, day, campaign_analysis()).to_dict()

    def test_planted_pairs_found(self):
        seq = self.campaign_seq()
        day = CAMPAIGN_START + dt.timedelta(days=27)
        run = run_daily(seq, day, campaign_analysis())
        (s,) = [s for s in run.results if str(s.episode) == "B -> A"]
        window = seq.between(day_start(run.window[0]), day_start(day) + 86400)
        # pairs injected over days 22..28: 4 + 5 + 5 + 6 + 6 + 7 + 7
        assert s.frequency == 40 == oracle_max_non_overlapped(window, parse_episode("B -> A"), campaign_analysis().mining.expiry, budget=10**4)

    def test_persistence_round_trip(self, tmp_path):
        seq = self.campaign_seq()
        days = [CAMPAIGN_START + dt.timedelta(days=i) for i in range(22, 26)]
        for d in days:
            run_daily(seq, d, campaign_analysis()).save(tmp_path)
        loaded = load_runs(tmp_path, days[0], days[-1])
        assert [r.date for r in loaded] == days
        assert [str(s.episode) for s in loaded[-1].results] == ["B -> A"]
        (tmp_path / f"{days[2].isoformat()}.json").unlink()
        with pytest.raises(DateGapError, match=days[2].isoformat()):
            load_runs(tmp_path, days[0], days[-1])


def test_campaign_alert_day():
    seq = to_sequence(prefilter(campaign_records(), campaign_prefilter()), "station")
    runs = [run_daily(seq, CAMPAIGN_START + dt.timedelta(days=i), campaign_analysis()) for i in range(28)]
    (a,) = detect_alerts(runs, 4, 1, 75, 25)
    assert a.episode == "B -> A" and a.triggering_day == dt.date(2004, 3, 26)
    assert [f for _, f in a.trend] == [23, 26, 30, 33]
