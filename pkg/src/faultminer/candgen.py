"""Level-wise (Apriori) candidate generation for serial episodes."""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Callable, Sequence

from faultminer.episodes import (
    AnyEpisode,
    Episode,
    FrequentEpisode,
    GeneralizedEpisode,
    IntervalSet,
    drop_node,
    sort_key,
    with_last,
)
from faultminer.events import EventSequence


@dataclass
class Level:
    n: int
    frequent: list[FrequentEpisode] = field(default_factory=list)

    def __post_init__(self):
        self.frequent = sorted(self.frequent, key=lambda f: sort_key(f.episode))

    def __len__(self) -> int:
        return len(self.frequent)

    @property
    def episodes(self) -> list[AnyEpisode]:
        return [f.episode for f in self.frequent]


def generate_candidates(
    level: Level, admissible: Callable[[AnyEpisode], bool] | None = None
) -> list[AnyEpisode]:
    """(n+1)-node candidates from the frequent n-node episodes of ``level``.

    Joins every ordered pair (a, b) where a's last n-1 nodes equal b's first
    n-1 nodes, then drops candidates with an infrequent n-node subepisode.
    ``admissible`` can reject candidates outright (structural restrictions);
    it must be closed under taking subepisodes for the search to stay complete.
    """
    eps = level.episodes
    known = set(eps)
    by_prefix: dict[tuple, list[AnyEpisode]] = defaultdict(list)
    for b in eps:
        by_prefix[b.nodes[:-1]].append(b)
    out = set()
    for a in eps:
        for b in by_prefix.get(a.nodes[1:], ()):
            cand = with_last(a, b.nodes[-1])
            if cand in out:
                continue
            if admissible is not None and not admissible(cand):
                continue
            if all(drop_node(cand, i) in known for i in range(1, cand.size + 1)):
                out.add(cand)
    return sorted(out, key=sort_key)


def seed_level_one(
    seq: EventSequence, threshold: int, buckets: Sequence[IntervalSet] | None = None
) -> Level:
    """Histogram of event types (or of type x duration bucket), kept if >= threshold."""
    if buckets is None:
        hist = Counter(e.label for e in seq)
        found = [FrequentEpisode(Episode((lab,)), c) for lab, c in hist.items() if c >= threshold]
    else:
        hist = Counter()
        for e in seq:
            d = e.end - e.start
            for b in buckets:
                if d in b:
                    hist[(e.label, b)] += 1
        found = [
            FrequentEpisode(GeneralizedEpisode(((lab, b),)), c) for (lab, b), c in hist.items() if c >= threshold
        ]
    return Level(1, found)
