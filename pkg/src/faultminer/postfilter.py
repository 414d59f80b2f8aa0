"""Structural categories of fault correlations and well-known episode flagging."""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Mapping

from faultminer.counting import ExpiryPolicy
from faultminer.episodes import AnyEpisode, parse_episode
from faultminer.ingest import LABEL_SEP

log = logging.getLogger(__name__)

INDIVIDUAL = "individual_machine"
MULTIPLE = "multiple_machine"
MULTIPLE_ZC = "multiple_machine_with_zone_controller"
OTHER = "other"
CATEGORIES = (INDIVIDUAL, MULTIPLE, MULTIPLE_ZC, OTHER)

SPAN_MODE_BY_CATEGORY = {
    INDIVIDUAL: "end_to_start",
    MULTIPLE: "start_to_start",
    MULTIPLE_ZC: "start_to_start",
    OTHER: "full_span",
}


@dataclass
class Topology:
    """Plant layout: station -> zone and zone -> controlling station."""

    stations: dict[str, str] = field(default_factory=dict)
    controllers: dict[str, str] = field(default_factory=dict)

    @classmethod
    def load(cls, path: str | Path) -> Topology:
        data = json.loads(Path(path).read_text())
        return cls(dict(data.get("stations", {})), dict(data.get("controllers", {})))

    def controls(self, ctrl: str, station: str) -> bool:
        zone = self.stations.get(station)
        return zone is not None and self.controllers.get(zone) == ctrl and ctrl != station


def station_of(label: str) -> str:
    return label.split(LABEL_SEP, 1)[0]


def categorize(alpha: AnyEpisode, topology: Topology | None = None) -> str:
    stations = [station_of(lab) for lab in alpha.labels]
    if any(not s for s in stations):
        log.warning("cannot extract a station from every node of %s", alpha)
        return OTHER
    distinct = set(stations)
    if len(distinct) == 1:
        return INDIVIDUAL
    if topology is not None and any(topology.controls(s, t) for s in distinct for t in distinct):
        return MULTIPLE_ZC
    return MULTIPLE


def category_span_mode(category: str) -> str:
    return SPAN_MODE_BY_CATEGORY.get(category, "full_span")


def apply_category_policy(alpha: AnyEpisode, category: str, limit: int | None = None) -> ExpiryPolicy:
    return ExpiryPolicy(limit, category_span_mode(category))


def category_policy(
    topology: Topology | None, default_limit: int | None, limits: Mapping[str, int] | None = None
) -> Callable[[AnyEpisode], ExpiryPolicy]:
    """Per-episode expiry: span arithmetic and limit chosen by structural category."""
    limits = dict(limits or {})
    cache: dict[str, ExpiryPolicy] = {}

    def policy(alpha: AnyEpisode) -> ExpiryPolicy:
        cat = categorize(alpha, topology)
        if cat not in cache:
            cache[cat] = apply_category_policy(alpha, cat, limits.get(cat, default_limit))
        return cache[cat]

    return policy


def restriction(category: str, topology: Topology | None = None) -> tuple[Callable | None, Callable]:
    """(candidate-generation prune, output filter) for restricting mining to one category.

    Only the single-machine restriction is closed under subepisodes, so only it
    prunes candidates; the multiple-machine ones filter the output.
    """
    if category not in CATEGORIES:
        raise ValueError(f"unknown category {category!r}")
    keep = lambda a: a.size < 2 or categorize(a, topology) == category
    if category == INDIVIDUAL:
        return (lambda a: len({station_of(lab) for lab in a.labels}) == 1), keep
    return None, keep


WELL_KNOWN = "well_known"
EXPECTED = "expected"


@dataclass
class KnownEpisodeList:
    entries: dict[str, str] = field(default_factory=dict)

    @classmethod
    def parse(cls, lines: Iterable[str]) -> tuple[KnownEpisodeList, list[tuple[int, str]]]:
        """Read ``well_known: A -> B`` / ``expected: A -> B`` lines; blank and ``#`` lines skipped."""
        entries: dict[str, str] = {}
        errors: list[tuple[int, str]] = []
        for n, raw in enumerate(lines, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            tag, sep, text = line.partition(":")
            tag = tag.strip()
            if not sep or tag not in (WELL_KNOWN, EXPECTED):
                errors.append((n, f"expected 'well_known:' or 'expected:' prefix in {line!r}"))
                continue
            try:
                entries[str(parse_episode(text))] = tag
            except ValueError as exc:
                errors.append((n, str(exc)))
        for n, msg in errors:
            log.warning("known-episode list line %d: %s", n, msg)
        return cls(entries), errors

    @classmethod
    def load(cls, path: str | Path) -> tuple[KnownEpisodeList, list[tuple[int, str]]]:
        with open(path) as fh:
            return cls.parse(fh)

    def tag_of(self, alpha: AnyEpisode) -> str | None:
        return self.entries.get(str(alpha))


def flag_known(episodes: Iterable, known: KnownEpisodeList) -> tuple[list, list]:
    """Split off well-known episodes; expected ones stay, tagged ``expected``."""
    kept, flagged = [], []
    for s in episodes:
        tag = known.tag_of(s.episode)
        if tag == WELL_KNOWN:
            flagged.append(s if s.tag == WELL_KNOWN else s.with_(tag=WELL_KNOWN))
        elif tag == EXPECTED:
            kept.append(s if s.tag == EXPECTED else s.with_(tag=EXPECTED))
        else:
            kept.append(s)
    return kept, flagged
