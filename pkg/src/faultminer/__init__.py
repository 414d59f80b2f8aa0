"""Frequent episode discovery over time-stamped machine fault logs."""

from faultminer.events import Event, EventSequence, EventType, dwelling_time, make_sequence
from faultminer.episodes import (
    Episode,
    GeneralizedEpisode,
    IntervalSet,
    drop_node,
    interval_contains,
    parse_episode,
    subepisode,
)
from faultminer.counting import (
    CountResult,
    ExpiryPolicy,
    count_generalized,
    count_non_overlapped,
    count_windows,
    oracle_max_non_overlapped,
)
from faultminer.mining import FrequentEpisode, MiningConfig, auto_threshold, mine
from faultminer.rules import ScoredEpisode, filter_by_scores, rule_confidence, score_episode

__version__ = "0.1.0"

__all__ = [
    "CountResult",
    "Episode",
    "Event",
    "EventSequence",
    "EventType",
    "ExpiryPolicy",
    "FrequentEpisode",
    "GeneralizedEpisode",
    "IntervalSet",
    "MiningConfig",
    "ScoredEpisode",
    "auto_threshold",
    "count_generalized",
    "count_non_overlapped",
    "count_windows",
    "drop_node",
    "dwelling_time",
    "filter_by_scores",
    "interval_contains",
    "make_sequence",
    "mine",
    "oracle_max_non_overlapped",
    "parse_episode",
    "rule_confidence",
    "score_episode",
    "subepisode",
]
