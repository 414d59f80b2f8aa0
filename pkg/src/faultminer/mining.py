"""Level-wise frequent episode discovery."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Sequence

from faultminer.candgen import Level, generate_candidates, seed_level_one
from faultminer.counting import NO_EXPIRY, ExpiryPolicy, PolicyFor, count_many
from faultminer.episodes import DEFAULT_BUCKETS, AnyEpisode, FrequentEpisode, IntervalSet, sort_key
from faultminer.events import EventSequence

log = logging.getLogger(__name__)

__all__ = ["FrequentEpisode", "MiningConfig", "auto_threshold", "level_thresholds", "mine"]


def auto_threshold(T: int, M: int, N: int) -> int:
    """Minimum significant frequency, ``ceil(T / (M * N))`` floored at 1.

    T is the number of events, M the alphabet size and N the episode size.
    """
    if T < 0 or M < 1 or N < 1:
        raise ValueError(f"need T >= 0, M >= 1, N >= 1 (got {T}, {M}, {N})")
    return max(1, -(-T // (M * N)))


@dataclass
class MiningConfig:
    mode: str = "plain"
    buckets: Sequence[IntervalSet] = DEFAULT_BUCKETS
    expiry: ExpiryPolicy = NO_EXPIRY
    threshold: int | None = None
    max_size: int = 3
    # recorded in reports only; the threshold barely moves for error probability < 0.5
    error_prob: float = 0.5
    # per-candidate expiry (e.g. by structural category); overrides ``expiry``
    policy_for: Callable[[AnyEpisode], ExpiryPolicy] | None = field(default=None, repr=False)
    # structural restriction applied during candidate generation; must be subepisode-closed
    admissible: Callable[[AnyEpisode], bool] | None = field(default=None, repr=False)
    workers: int | None = None

    def __post_init__(self):
        if self.mode not in ("plain", "generalized"):
            raise ValueError(f"unknown mining mode {self.mode!r}")
        if self.max_size < 1:
            raise ValueError("max_size must be >= 1")
        if self.threshold is not None and self.threshold < 1:
            raise ValueError("explicit threshold must be >= 1")
        self.buckets = tuple(self.buckets)

    @property
    def generalized(self) -> bool:
        return self.mode == "generalized"

    def policy(self) -> PolicyFor:
        return self.policy_for if self.policy_for is not None else self.expiry

    def symbol_count(self, seq: EventSequence) -> int:
        """Alphabet size used by the threshold; type x bucket in generalized mode."""
        return len(seq.alphabet) * (len(self.buckets) if self.generalized else 1)


def level_thresholds(seq: EventSequence, cfg: MiningConfig) -> dict[int, int]:
    if cfg.threshold is not None:
        return {n: cfg.threshold for n in range(1, cfg.max_size + 1)}
    M = cfg.symbol_count(seq)
    if M == 0:
        return {n: 1 for n in range(1, cfg.max_size + 1)}
    return {n: auto_threshold(len(seq), M, n) for n in range(1, cfg.max_size + 1)}


def mine(seq: EventSequence, cfg: MiningConfig | None = None) -> list[FrequentEpisode]:
    """All frequent episodes up to ``cfg.max_size`` nodes, sorted by size then canonically."""
    cfg = cfg or MiningConfig()
    if not seq.events:
        return []
    thresholds = level_thresholds(seq, cfg)
    level = seed_level_one(seq, thresholds[1], cfg.buckets if cfg.generalized else None)
    found = list(level.frequent)
    log.debug("level 1: %d frequent (threshold %d)", len(level), thresholds[1])
    for n in range(2, cfg.max_size + 1):
        if not level.frequent:
            break
        cands = generate_candidates(level, cfg.admissible)
        counts = count_many(seq, cands, cfg.policy(), cfg.workers)
        level = Level(n, [FrequentEpisode(a, f) for a, f in counts.items() if f >= thresholds[n]])
        log.debug("level %d: %d candidates, %d frequent (threshold %d)", n, len(cands), len(level), thresholds[n])
        found.extend(level.frequent)
    return sorted(found, key=lambda f: (f.size, sort_key(f.episode)))
