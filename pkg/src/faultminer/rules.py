"""Rule confidences and best/worst confidence scores of frequent episodes."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping

from faultminer.counting import count_many
from faultminer.episodes import AnyEpisode, FrequentEpisode, drop_node
from faultminer.events import EventSequence
from faultminer.mining import MiningConfig

log = logging.getLogger(__name__)


def rule_confidence(freq_alpha: int, freq_beta: int) -> float:
    """Confidence (percent) of "beta implies alpha": ``100 * f(alpha) / f(beta)``."""
    if freq_beta == 0:
        return 0.0
    return 100.0 * freq_alpha / freq_beta


@dataclass(frozen=True)
class ScoredEpisode:
    base: FrequentEpisode
    best_confidence: float
    worst_confidence: float
    category: str | None = None
    tag: str | None = None
    # confidence of "alpha with node i dropped implies alpha", i = 1..N
    confidences: tuple[float, ...] = field(default=(), compare=False)

    @property
    def episode(self) -> AnyEpisode:
        return self.base.episode

    @property
    def frequency(self) -> int:
        return self.base.frequency

    @property
    def size(self) -> int:
        return self.base.size

    def with_(self, **kw) -> ScoredEpisode:
        return replace(self, **kw)


def score_episode(
    alpha: FrequentEpisode,
    lookup: Mapping[AnyEpisode, int],
    seq: EventSequence | None = None,
    cfg: MiningConfig | None = None,
) -> ScoredEpisode:
    """Best and worst confidence over the rules "alpha minus node i implies alpha".

    Subepisode frequencies missing from ``lookup`` are counted on ``seq`` with
    the expiry policy of ``cfg``.
    """
    if alpha.size < 2:
        raise ValueError("confidence scores need an episode with at least 2 nodes")
    subs = [drop_node(alpha.episode, i) for i in range(1, alpha.size + 1)]
    missing = [b for b in dict.fromkeys(subs) if b not in lookup]
    extra: dict[AnyEpisode, int] = {}
    if missing:
        if seq is None:
            raise KeyError(f"no frequency for {missing[0]} and no sequence to count it on")
        cfg = cfg or MiningConfig()
        extra = count_many(seq, missing, cfg.policy())
    confs = []
    for b in subs:
        fb = lookup[b] if b in lookup else extra[b]
        c = rule_confidence(alpha.frequency, fb)
        if c > 100.0:
            log.warning("subepisode %s is less frequent than %s; confidence capped at 100", b, alpha.episode)
            c = 100.0
        confs.append(c)
    return ScoredEpisode(alpha, max(confs), min(confs), confidences=tuple(confs))


def score_all(
    found: Iterable[FrequentEpisode], seq: EventSequence | None = None, cfg: MiningConfig | None = None
) -> list[ScoredEpisode]:
    """Score every episode of 2+ nodes against the frequencies of ``found``."""
    found = list(found)
    lookup = {f.episode: f.frequency for f in found}
    return [score_episode(f, lookup, seq, cfg) for f in found if f.size >= 2]


def filter_by_scores(episodes: Iterable[ScoredEpisode], min_best: float = 0.0, min_worst: float = 0.0) -> list[ScoredEpisode]:
    return [s for s in episodes if s.best_confidence >= min_best and s.worst_confidence >= min_worst]


def report_order(episodes: Iterable[ScoredEpisode]) -> list[ScoredEpisode]:
    """Frequency, then best confidence, descending; canonical text breaks ties."""
    return sorted(episodes, key=lambda s: (-s.frequency, -s.best_confidence, str(s.episode)))
