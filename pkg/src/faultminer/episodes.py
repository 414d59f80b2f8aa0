"""Serial episodes, generalized (duration-aware) episodes and interval sets.

Episodes refer to event types by label so that one episode can be counted
against any sequence, e.g. the daily windows of an alert campaign.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Iterable, Union

INF = math.inf

ARROW = " -> "
_ARROW_RE = re.compile(r"\s*->\s*")
_NODE_RE = re.compile(r"^(?P<label>[^\[\]]+?)\s*(?:\[(?P<ivs>[^\[\]]*)\])?$")


@dataclass(frozen=True, order=True)
class IntervalSet:
    """Disjoint closed integer intervals; ``hi`` may be ``math.inf``."""

    intervals: tuple[tuple[int, float], ...]

    def __post_init__(self):
        ivs = tuple(sorted((int(lo), hi if hi == INF else int(hi)) for lo, hi in self.intervals))
        if not ivs:
            raise ValueError("interval set must not be empty")
        for lo, hi in ivs:
            if lo > hi:
                raise ValueError(f"interval [{lo}, {hi}] is reversed")
        for (_, hi), (lo, _) in zip(ivs, ivs[1:]):
            if lo <= hi:
                raise ValueError(f"intervals overlap in {ivs}")
        object.__setattr__(self, "intervals", ivs)

    @classmethod
    def of(cls, *intervals: tuple[int, float]) -> IntervalSet:
        return cls(tuple(intervals))

    def __contains__(self, d: int) -> bool:
        return any(lo <= d <= hi for lo, hi in self.intervals)

    def union(self, other: IntervalSet) -> IntervalSet:
        merged: list[list] = []
        for lo, hi in sorted(self.intervals + other.intervals):
            if merged and lo <= merged[-1][1] + 1:
                merged[-1][1] = max(merged[-1][1], hi)
            else:
                merged.append([lo, hi])
        return IntervalSet(tuple((lo, hi) for lo, hi in merged))

    def __str__(self) -> str:
        parts = []
        for lo, hi in self.intervals:
            if hi == INF:
                parts.append(f">{lo - 1}" if lo > 0 else f"{lo}-inf")
            else:
                parts.append(f"{lo}-{hi}")
        return ",".join(parts)

    @classmethod
    def parse(cls, text: str) -> IntervalSet:
        """Parse ``"1-120"``, ``">1800"``, ``"0-inf"`` or a comma-joined union."""
        out = []
        for part in text.split(","):
            part = part.strip()
            m = re.fullmatch(r">\s*(-?\d+)", part)
            if m:
                out.append((int(m.group(1)) + 1, INF))
                continue
            m = re.fullmatch(r"(\d+)\s*-\s*(\d+|inf)", part)
            if m:
                hi = INF if m.group(2) == "inf" else int(m.group(2))
                out.append((int(m.group(1)), hi))
                continue
            if part.isdigit():
                out.append((int(part), int(part)))
                continue
            raise ValueError(f"bad interval {part!r}")
        return cls(tuple(out))


def interval_contains(s: IntervalSet, d: int) -> bool:
    return d in s


ANY_DURATION = IntervalSet.of((0, INF))

# Fault-recovery duration buckets used on the engine assembly lines.
DEFAULT_BUCKETS: tuple[IntervalSet, ...] = (
    IntervalSet.of((1, 120)),
    IntervalSet.of((121, 600)),
    IntervalSet.of((601, 1800)),
    IntervalSet.of((1801, INF)),
)


@dataclass(frozen=True)
class Episode:
    """Serial episode ``A1 -> A2 -> ... -> AN``; node types may repeat."""

    nodes: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        if not self.nodes:
            raise ValueError("an episode needs at least one node")

    @property
    def size(self) -> int:
        return len(self.nodes)

    @property
    def labels(self) -> tuple[str, ...]:
        return self.nodes

    def key(self) -> tuple:
        return self.nodes

    def __lt__(self, other):
        return sort_key(self) < sort_key(other)

    def __str__(self) -> str:
        return ARROW.join(self.nodes)


@dataclass(frozen=True)
class GeneralizedEpisode:
    """Serial episode whose nodes also constrain the event's dwelling time."""

    nodes: tuple[tuple[str, IntervalSet], ...]

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple((str(a), s) for a, s in self.nodes))
        if not self.nodes:
            raise ValueError("an episode needs at least one node")

    @property
    def size(self) -> int:
        return len(self.nodes)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(a for a, _ in self.nodes)

    def key(self) -> tuple:
        return tuple((a, s.intervals) for a, s in self.nodes)

    def plain(self) -> Episode:
        return Episode(self.labels)

    def __lt__(self, other):
        return sort_key(self) < sort_key(other)

    def __str__(self) -> str:
        return ARROW.join(f"{a}[{s}]" for a, s in self.nodes)


AnyEpisode = Union[Episode, GeneralizedEpisode]


def sort_key(alpha: AnyEpisode) -> tuple:
    """Canonical order: by node labels, then by interval sets."""
    if isinstance(alpha, GeneralizedEpisode):
        return (alpha.labels, alpha.key())
    return (alpha.labels, ())


def _rebuild(alpha: AnyEpisode, nodes: Iterable) -> AnyEpisode:
    return type(alpha)(tuple(nodes))


def subepisode(beta: AnyEpisode, alpha: AnyEpisode) -> bool:
    """True iff beta's nodes form a (not necessarily contiguous) subsequence of alpha's.

    Generalized nodes compare by (type, interval set) equality.
    """
    it = iter(alpha.nodes)
    return all(any(node == other for other in it) for node in beta.nodes)


def drop_node(alpha: AnyEpisode, i: int) -> AnyEpisode:
    """The episode with its ``i``-th node (1-based) removed."""
    if alpha.size < 2:
        raise ValueError("cannot drop a node from a 1-node episode")
    if not 1 <= i <= alpha.size:
        raise IndexError(f"node index {i} out of range 1..{alpha.size}")
    return _rebuild(alpha, alpha.nodes[: i - 1] + alpha.nodes[i:])


def with_last(alpha: AnyEpisode, node) -> AnyEpisode:
    return _rebuild(alpha, alpha.nodes + (node,))


def parse_episode(text: str) -> AnyEpisode:
    """Parse ``"A -> B"`` or ``"A[1-120] -> B[>1800]"``.

    If any node carries a duration constraint the result is generalized and
    unconstrained nodes accept any dwelling time.
    """
    if not text or not text.strip():
        raise ValueError("empty episode text")
    parts = _ARROW_RE.split(text.strip())
    nodes = []
    generalized = False
    for part in parts:
        m = _NODE_RE.match(part)
        if not part or m is None:
            raise ValueError(f"malformed episode {text!r}")
        ivs = m.group("ivs")
        if ivs is not None:
            generalized = True
            nodes.append((m.group("label").strip(), IntervalSet.parse(ivs)))
        else:
            nodes.append((m.group("label").strip(), None))
    if generalized:
        return GeneralizedEpisode(tuple((a, s if s is not None else ANY_DURATION) for a, s in nodes))
    return Episode(tuple(a for a, _ in nodes))


@dataclass(frozen=True)
class FrequentEpisode:
    episode: AnyEpisode
    frequency: int

    @property
    def size(self) -> int:
        return self.episode.size
