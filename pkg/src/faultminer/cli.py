"""Command-line interface: ``mine``, ``alerts`` and ``explain``.

Exit codes: 0 success, 1 usage or configuration error, 2 data error.
"""

from __future__ import annotations

import argparse
import csv
import datetime as dt
import io
import json
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path

from faultminer.alerts import DateGapError, DailyRun, detect_alerts, format_alert_table, load_runs, run_daily
from faultminer.counting import ExpiryPolicy, count, explain_jsonl
from faultminer.episodes import DEFAULT_BUCKETS, IntervalSet, parse_episode
from faultminer.ingest import LogFormat, PreFilterConfig, parse_log, partition_by_line, prefilter, to_sequence
from faultminer.mining import MiningConfig
from faultminer.pipeline import AnalysisConfig, analyze
from faultminer.postfilter import CATEGORIES, KnownEpisodeList, Topology, category_policy

log = logging.getLogger("faultminer")

EXIT_OK, EXIT_CONFIG, EXIT_DATA = 0, 1, 2

CSV_HEADER = [
    "frequency",
    "event_a_code",
    "event_a_description",
    "confidence_a_implies_b",
    "event_b_code",
    "event_b_description",
    "confidence_b_implies_a",
]


class ConfigError(Exception):
    pass


class DataError(Exception):
    pass


@dataclass
class RunConfig:
    log_format: LogFormat = field(default_factory=LogFormat)
    prefilter: PreFilterConfig = field(default_factory=lambda: PreFilterConfig(duration_bounds=(1, 1800)))
    analysis: AnalysisConfig = field(default_factory=AnalysisConfig)
    line: str | None = None
    descriptions: dict[str, str] = field(default_factory=dict)
    window_days: int = 7
    trend_days: int = 4
    alert_min_freq: int = 1
    alert_min_best: float = 75.0
    alert_min_worst: float = 25.0


def _resolve(base: Path, p: str) -> Path:
    path = Path(p)
    if not path.is_absolute():
        path = base / path
    if not path.exists():
        raise ConfigError(f"referenced file does not exist: {path}")
    return path


def _load_descriptions(path: Path) -> dict[str, str]:
    with open(path, newline="") as fh:
        return {row[0].strip(): row[1].strip() for row in csv.reader(fh) if len(row) >= 2}


def load_config(path: str | None, overrides: argparse.Namespace | None = None) -> RunConfig:
    """Build a :class:`RunConfig` from a JSON file; command-line flags win."""
    raw: dict = {}
    base = Path.cwd()
    if path:
        p = Path(path)
        try:
            raw = json.loads(p.read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        base = p.resolve().parent
    ov = vars(overrides) if overrides is not None else {}
    try:
        fmt = LogFormat.from_dict(raw.get("log_format", {}))
        pf = dict(raw.get("prefilter", {}))
        pf.setdefault("duration_bounds", [1, 1800])
        if ov.get("granularity"):
            pf["granularity"] = ov["granularity"]
        pcfg = PreFilterConfig(
            duration_bounds=tuple(pf["duration_bounds"]) if pf["duration_bounds"] is not None else None,
            drop_zero_duration=bool(pf.get("drop_zero_duration", False)),
            excluded_codes=frozenset(pf.get("excluded_codes", ())),
            granularity=pf.get("granularity", "station+subsystem+fault"),
            group_include=frozenset(pf["group_include"]) if pf.get("group_include") else None,
        )

        m = dict(raw.get("mining", {}))
        exp = dict(m.get("expiry", {}))
        if ov.get("expiry") is not None:
            exp["limit"] = ov["expiry"]
        buckets = m.get("buckets")
        mcfg = MiningConfig(
            mode=m.get("mode", "plain"),
            buckets=tuple(IntervalSet.parse(b) for b in buckets) if buckets else DEFAULT_BUCKETS,
            expiry=ExpiryPolicy(exp.get("limit"), exp.get("span_mode", "start_to_start")),
            threshold=ov.get("threshold") or m.get("threshold"),
            max_size=ov.get("max_size") or m.get("max_size", 3),
            error_prob=m.get("error_prob", 0.5),
            workers=m.get("workers"),
        )

        scores = raw.get("scores", {})
        category = raw.get("category")
        if category is not None and category not in CATEGORIES:
            raise ConfigError(f"unknown category {category!r}")
        topology = Topology.load(_resolve(base, raw["topology"])) if raw.get("topology") else None
        known = None
        if raw.get("known_episodes"):
            known, _ = KnownEpisodeList.load(_resolve(base, raw["known_episodes"]))
        if topology is not None:
            pcfg.station_zones = topology.stations
        acfg = AnalysisConfig(
            mining=mcfg,
            min_best=_pick(ov.get("min_best"), scores.get("min_best"), 75.0),
            min_worst=_pick(ov.get("min_worst"), scores.get("min_worst"), 25.0),
            category=category,
            category_expiry=bool(raw.get("category_expiry", False)),
            category_limits=dict(raw.get("category_limits", {})),
            topology=topology,
            known=known,
        )
        al = raw.get("alerts", {})
        cfg = RunConfig(
            log_format=fmt,
            prefilter=pcfg,
            analysis=acfg,
            line=raw.get("line"),
            descriptions=_load_descriptions(_resolve(base, raw["descriptions"])) if raw.get("descriptions") else {},
            window_days=int(al.get("window_days", 7)),
            trend_days=int(al.get("trend_days", 4)),
            alert_min_freq=int(al.get("min_freq", 1)),
            alert_min_best=float(al.get("min_best", acfg.min_best)),
            alert_min_worst=float(al.get("min_worst", acfg.min_worst)),
        )
    except (TypeError, ValueError, KeyError) as exc:
        raise ConfigError(f"invalid configuration: {exc}") from exc
    if cfg.window_days < 1 or cfg.trend_days < 1:
        raise ConfigError("window_days and trend_days must be >= 1")
    return cfg


def _pick(*values):
    return next(v for v in values if v is not None)


def read_records(cfg: RunConfig, input_path: str):
    try:
        with open(input_path, newline="") as fh:
            parsed = parse_log(fh, cfg.log_format)
    except OSError as exc:
        raise DataError(f"cannot read input {input_path}: {exc}") from exc
    for rowno, msg in parsed.errors:
        log.warning("%s:%d: %s", input_path, rowno, msg)
    if parsed.errors and not parsed.records:
        raise DataError(f"no row of {input_path} could be parsed (check the column mapping)")
    records = prefilter(parsed.records, cfg.prefilter)
    parts = partition_by_line(records)
    if cfg.line is not None:
        parts = {cfg.line: parts.get(cfg.line, [])}
    return parts


def _fig4_rows(results, descriptions) -> list[list[str]]:
    rows = []
    for s in results:
        if s.size != 2:
            continue
        a, b = (str(type(s.episode)((n,))) for n in s.episode.nodes)
        # dropping node 2 leaves A: "A implies A -> B"; dropping node 1 leaves B
        conf_a, conf_b = s.confidences[1], s.confidences[0]
        rows.append(
            [
                str(s.frequency),
                a,
                descriptions.get(a, ""),
                f"{conf_a:.2f}",
                b,
                descriptions.get(b, ""),
                f"{conf_b:.2f}",
            ]
        )
    return rows


def _scored_json(s) -> dict:
    return {
        "episode": str(s.episode),
        "size": s.size,
        "frequency": s.frequency,
        "best_confidence": round(s.best_confidence, 6),
        "worst_confidence": round(s.worst_confidence, 6),
        "category": s.category,
        "tag": s.tag,
    }


def build_reports(cfg: RunConfig, seq, line: str) -> tuple[str, str]:
    acfg = cfg.analysis
    res = analyze(seq, acfg)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    w.writerows(_fig4_rows(res.results, cfg.descriptions))
    m = acfg.mining
    header = {
        "line": line,
        "events": len(seq),
        "alphabet_size": len(seq.alphabet),
        "threshold_symbols": m.symbol_count(seq),
        "mode": m.mode,
        "buckets": [str(b) for b in m.buckets] if m.generalized else None,
        "expiry": {"limit": m.expiry.limit, "span_mode": m.expiry.span_mode},
        "category": acfg.category,
        "category_expiry": acfg.category_expiry,
        "thresholds": {str(k): v for k, v in sorted(res.thresholds.items())},
        "threshold_source": "explicit" if m.threshold is not None else "auto T/(M*N)",
        "error_prob": m.error_prob,
        "min_best": acfg.min_best,
        "min_worst": acfg.min_worst,
    }
    doc = {
        "header": header,
        "frequent": [
            {"episode": str(f.episode), "size": f.size, "frequency": f.frequency} for f in res.frequent
        ],
        "episodes": [_scored_json(s) for s in res.results],
        "flagged": [_scored_json(s) for s in res.flagged],
        "below_score_thresholds": res.below_score,
    }
    return buf.getvalue(), json.dumps(doc, indent=2, sort_keys=True) + "\n"


def cmd_mine(args) -> int:
    cfg = load_config(args.config, args)
    parts = read_records(cfg, args.input)
    if not parts:
        parts = {cfg.line or "": []}
    outputs = {}
    for line in sorted(parts):
        seq = to_sequence(parts[line], cfg.prefilter.granularity)
        stem = "report" if len(parts) == 1 else f"report-{line or 'unassigned'}"
        outputs[stem + ".csv"], outputs[stem + ".json"] = build_reports(cfg, seq, line)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for name, text in outputs.items():
        (out / name).write_text(text)
        print(out / name)
    return EXIT_OK


def _date(s: str) -> dt.date:
    try:
        return dt.date.fromisoformat(s)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a YYYY-MM-DD date: {s}") from exc


def cmd_alerts(args) -> int:
    cfg = load_config(args.config, args)
    if args.to < args.from_:
        raise ConfigError("--to is before --from")
    run_dir = Path(args.runs)
    first = args.from_ - dt.timedelta(days=cfg.trend_days - 1)
    if args.input:
        parts = read_records(cfg, args.input)
        records = [r for rs in parts.values() for r in rs] if cfg.line is None else parts.get(cfg.line, [])
        seq = to_sequence(sorted(records, key=lambda r: r.occurred), cfg.prefilter.granularity)
        d = first
        while d <= args.to:
            run_daily(seq, d, cfg.analysis, cfg.window_days).save(run_dir)
            d += dt.timedelta(days=1)
    try:
        runs = load_runs(run_dir, first, args.to)
    except DateGapError as exc:
        raise DataError(str(exc)) from exc
    alerts = detect_alerts(runs, cfg.trend_days, cfg.alert_min_freq, cfg.alert_min_best, cfg.alert_min_worst)
    out = Path(args.out) if args.out else run_dir / "alerts"
    out.mkdir(parents=True, exist_ok=True)
    d = args.from_
    while d <= args.to:
        todays = [a for a in alerts if a.triggering_day == d]
        (out / f"{d.isoformat()}.jsonl").write_text("".join(json.dumps(a.to_dict(), sort_keys=True) + "\n" for a in todays))
        d += dt.timedelta(days=1)
    shown = [a for a in alerts if args.from_ <= a.triggering_day <= args.to]
    sys.stdout.write(format_alert_table(shown))
    return EXIT_OK


def cmd_explain(args) -> int:
    cfg = load_config(args.config, args)
    try:
        alpha = parse_episode(args.episode)
    except ValueError as exc:
        raise ConfigError(f"cannot parse episode {args.episode!r}: {exc}") from exc
    parts = read_records(cfg, args.input)
    records = sorted((r for rs in parts.values() for r in rs), key=lambda r: r.occurred)
    seq = to_sequence(records, cfg.prefilter.granularity)
    acfg = cfg.analysis
    exp = acfg.mining.expiry
    if acfg.category is not None or acfg.category_expiry:
        exp = category_policy(acfg.topology, exp.limit, acfg.category_limits)(alpha)
    res = count(seq, alpha, exp, explain=True)
    if args.jsonl:
        for line in explain_jsonl(seq, alpha, res):
            print(line)
        return EXIT_OK
    print(f"{alpha}: {res.frequency} non-overlapped occurrence(s); expiry {exp.limit} ({exp.span_mode})")
    for n, occ in enumerate(res.occurrences, start=1):
        evs = [seq[i] for i in occ]
        print(f"#{n} span={exp.span(evs[0], evs[-1])}s")
        for i, e in zip(occ, evs):
            ts = dt.datetime.fromtimestamp(e.start, tz=dt.timezone.utc).isoformat()
            print(f"  [{i}] {e.label} start={e.start} ({ts}) end={e.end} dwell={e.end - e.start}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="faultminer", description="Frequent episode mining for machine fault logs.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", help="JSON configuration file")
        sp.add_argument("--granularity", help="station, station+subsystem, station+subsystem+fault")
        sp.add_argument("--threshold", type=int, help="explicit frequency threshold (default: automatic)")
        sp.add_argument("--max-size", type=int, dest="max_size")
        sp.add_argument("--expiry", type=int, help="expiry limit in seconds")
        sp.add_argument("--min-best", type=float, dest="min_best")
        sp.add_argument("--min-worst", type=float, dest="min_worst")

    sp = sub.add_parser("mine", help="mine frequent episodes and write reports")
    common(sp)
    sp.add_argument("--input", required=True)
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_mine)

    sp = sub.add_parser("alerts", help="daily runs and trend alerts")
    common(sp)
    sp.add_argument("--runs", required=True, help="directory of YYYY-MM-DD.json run files")
    sp.add_argument("--from", dest="from_", type=_date, required=True)
    sp.add_argument("--to", type=_date, required=True)
    sp.add_argument("--input", help="raw log; computes (and overwrites) the daily runs first")
    sp.add_argument("--out", help="alert directory (default: RUNS/alerts)")
    sp.set_defaults(func=cmd_alerts)

    sp = sub.add_parser("explain", help="list the counted occurrences of one episode")
    common(sp)
    sp.add_argument("--episode", required=True)
    sp.add_argument("--input", required=True)
    sp.add_argument("--jsonl", action="store_true")
    sp.set_defaults(func=cmd_explain)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
