"""Mine, score and post-filter one event sequence."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field

from faultminer.events import EventSequence
from faultminer.mining import FrequentEpisode, MiningConfig, level_thresholds, mine
from faultminer.postfilter import (
    KnownEpisodeList,
    Topology,
    categorize,
    category_policy,
    flag_known,
    restriction,
)
from faultminer.rules import ScoredEpisode, filter_by_scores, report_order, score_all


@dataclass
class AnalysisConfig:
    mining: MiningConfig = field(default_factory=MiningConfig)
    min_best: float = 75.0
    min_worst: float = 25.0
    # restrict output (and, for single-machine, the search) to one structural category
    category: str | None = None
    # pick span arithmetic per episode from its structural category
    category_expiry: bool = False
    category_limits: dict = field(default_factory=dict)
    topology: Topology | None = None
    known: KnownEpisodeList | None = None

    def effective_mining(self) -> MiningConfig:
        cfg = self.mining
        changes = {}
        if self.category is not None or self.category_expiry:
            changes["policy_for"] = category_policy(self.topology, cfg.expiry.limit, self.category_limits)
        if self.category is not None:
            prune, _ = restriction(self.category, self.topology)
            changes["admissible"] = prune
        return dataclasses.replace(cfg, **changes) if changes else cfg


@dataclass
class Analysis:
    thresholds: dict[int, int]
    frequent: list[FrequentEpisode]
    results: list[ScoredEpisode]
    flagged: list[ScoredEpisode]
    below_score: int = 0


def analyze(seq: EventSequence, acfg: AnalysisConfig | None = None) -> Analysis:
    acfg = acfg or AnalysisConfig()
    mcfg = acfg.effective_mining()
    found = mine(seq, mcfg)
    scored = [s.with_(category=categorize(s.episode, acfg.topology)) for s in score_all(found, seq, mcfg)]
    if acfg.category is not None:
        _, keep = restriction(acfg.category, acfg.topology)
        scored = [s for s in scored if keep(s.episode)]
    passed = filter_by_scores(scored, acfg.min_best, acfg.min_worst)
    kept, flagged = flag_known(passed, acfg.known) if acfg.known else (passed, [])
    return Analysis(
        level_thresholds(seq, mcfg) if seq.events else {},
        found,
        report_order(kept),
        report_order(flagged),
        len(scored) - len(passed),
    )
