"""Frequency counting for serial and generalized episodes.

The production counter makes one left-to-right pass and, for each prefix
length of each candidate, keeps only the partial occurrence whose span
anchor is latest.  A completed occurrence that passes the expiry check is
counted and every partial occurrence of that candidate is discarded, which
yields the maximum number of non-overlapped occurrences (earliest-end
greedy on occurrence index intervals).

``oracle_max_non_overlapped`` and ``enumerate_occurrences`` are slow,
independent references used by the test suite.
"""

from __future__ import annotations

import json
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterator, Sequence, Union

from faultminer.episodes import AnyEpisode, Episode, GeneralizedEpisode
from faultminer.events import Event, EventSequence

SPAN_MODES = ("start_to_start", "end_to_start", "full_span")


@dataclass(frozen=True)
class ExpiryPolicy:
    """Upper bound (inclusive, seconds) on an occurrence's span.

    ``start_to_start``: start of last event minus start of first (multiple
    machines, events may overlap).  ``end_to_start``: start of last minus end
    of first (one machine, which cannot be in two states at once).
    ``full_span``: the instantaneous-event span, first start to last start.
    """

    limit: int | None = None
    span_mode: str = "start_to_start"

    def __post_init__(self):
        if self.span_mode not in SPAN_MODES:
            raise ValueError(f"unknown span mode {self.span_mode!r}")
        if self.limit is not None and self.limit <= 0:
            raise ValueError("expiry limit must be positive")

    def anchor(self, first: Event) -> int:
        return first.end if self.span_mode == "end_to_start" else first.start

    def span(self, first: Event, last: Event) -> int:
        return last.start - self.anchor(first)

    def admits(self, anchor: int, last: Event) -> bool:
        return self.limit is None or last.start - anchor <= self.limit


NO_EXPIRY = ExpiryPolicy()


@dataclass
class CountResult:
    frequency: int
    occurrences: list[tuple[int, ...]] | None = None


def _matcher(alpha: AnyEpisode) -> Callable[[Event, int], bool]:
    if isinstance(alpha, GeneralizedEpisode):
        nodes = alpha.nodes
        return lambda e, k: e.etype.label == nodes[k][0] and (e.end - e.start) in nodes[k][1]
    labels = alpha.nodes
    return lambda e, k: e.etype.label == labels[k]


def _scan(seq: EventSequence, alpha: AnyEpisode, exp: ExpiryPolicy, explain: bool) -> CountResult:
    n = alpha.size
    matches = _matcher(alpha)
    # anchor[k]: best span anchor among partial occurrences of the first k nodes
    anchor: list[int | None] = [None] * (n + 1)
    trail: list[tuple[int, ...]] = [()] * (n + 1)
    count = 0
    found: list[tuple[int, ...]] = []
    for j, e in enumerate(seq.events):
        for k in range(n - 1, -1, -1):
            if not matches(e, k):
                continue
            if k == 0:
                a, tr = exp.anchor(e), (j,)
            elif anchor[k] is None:
                continue
            else:
                a, tr = anchor[k], trail[k] + (j,)
            if k == n - 1:
                if exp.admits(a, e):
                    count += 1
                    if explain:
                        found.append(tr)
                    anchor = [None] * (n + 1)
                    break
                continue
            if anchor[k + 1] is None or a >= anchor[k + 1]:
                anchor[k + 1] = a
                trail[k + 1] = tr
    return CountResult(count, found if explain else None)


def count_non_overlapped(
    seq: EventSequence, alpha: Episode, exp: ExpiryPolicy = NO_EXPIRY, explain: bool = False
) -> CountResult:
    """Maximum number of non-overlapped occurrences of ``alpha`` obeying ``exp``."""
    return _scan(seq, alpha, exp, explain)


def count_generalized(
    seq: EventSequence, g: GeneralizedEpisode, exp: ExpiryPolicy = NO_EXPIRY, explain: bool = False
) -> CountResult:
    """As :func:`count_non_overlapped`; a node also requires the event's dwelling time."""
    return _scan(seq, g, exp, explain)


def count(seq: EventSequence, alpha: AnyEpisode, exp: ExpiryPolicy = NO_EXPIRY, explain: bool = False) -> CountResult:
    return _scan(seq, alpha, exp, explain)


PolicyFor = Union[ExpiryPolicy, Callable[[AnyEpisode], ExpiryPolicy]]


def _count_batch(events: Sequence[Event], episodes: Sequence[AnyEpisode], policies: Sequence[ExpiryPolicy]) -> list[int]:
    # waiting[label] -> [(candidate, node)] with nodes descending per candidate
    waiting: dict[str, list[tuple[int, int]]] = defaultdict(list)
    for c, alpha in enumerate(episodes):
        for k in range(alpha.size - 1, -1, -1):
            waiting[alpha.labels[k]].append((c, k))
    for lst in waiting.values():
        lst.sort(key=lambda ck: (ck[0], -ck[1]))
    ivsets = [
        [s for _, s in alpha.nodes] if isinstance(alpha, GeneralizedEpisode) else None for alpha in episodes
    ]
    sizes = [alpha.size for alpha in episodes]
    anchors: list[list[int | None]] = [[None] * (n + 1) for n in sizes]
    freq = [0] * len(episodes)
    for e in events:
        lst = waiting.get(e.etype.label)
        if not lst:
            continue
        d = e.end - e.start
        done = -1
        for c, k in lst:
            if c == done:
                continue
            iv = ivsets[c]
            if iv is not None and d not in iv[k]:
                continue
            st = anchors[c]
            pol = policies[c]
            if k == 0:
                a = pol.anchor(e)
            else:
                a = st[k]
                if a is None:
                    continue
            if k == sizes[c] - 1:
                if pol.admits(a, e):
                    freq[c] += 1
                    anchors[c] = [None] * (sizes[c] + 1)
                    done = c
                continue
            if st[k + 1] is None or a >= st[k + 1]:
                st[k + 1] = a
    return freq


def count_many(
    seq: EventSequence,
    episodes: Sequence[AnyEpisode],
    exp: PolicyFor = NO_EXPIRY,
    workers: int | None = None,
) -> dict[AnyEpisode, int]:
    """Count many candidates in one pass over ``seq``.

    ``exp`` is either one policy for all candidates or a function choosing a
    policy per candidate.  With ``workers > 1`` candidates are split into
    chunks and each chunk makes its own pass in a separate process.
    """
    episodes = list(episodes)
    policies = [exp(a) if callable(exp) else exp for a in episodes]
    if not episodes:
        return {}
    if workers and workers > 1 and len(episodes) > workers:
        chunks = [range(i, len(episodes), workers) for i in range(workers)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futs = [
                pool.submit(_count_batch, seq.events, [episodes[i] for i in ch], [policies[i] for i in ch])
                for ch in chunks
            ]
            out: dict[AnyEpisode, int] = {}
            for ch, fut in zip(chunks, futs):
                out.update(zip((episodes[i] for i in ch), fut.result()))
        return {a: out[a] for a in episodes}
    return dict(zip(episodes, _count_batch(seq.events, episodes, policies)))


def count_windows(seq: EventSequence, alpha: AnyEpisode, width: int) -> int:
    """Number of windows ``[ts, ts + width - 1]`` holding at least one occurrence.

    ``ts`` ranges over ``t_first - width + 1 .. t_last``; membership is by
    event start time.
    """
    if width < 1:
        raise ValueError("window width must be >= 1")
    if not seq.events:
        return 0
    matches = _matcher(alpha)
    evs = seq.events
    n = alpha.size
    first_t, last_t = seq.span
    ranges = []
    for i, e in enumerate(evs):
        if not matches(e, 0):
            continue
        # earliest completion of an occurrence whose first event is i
        k, j = 1, i + 1
        while k < n and j < len(evs):
            if matches(evs[j], k):
                k += 1
            j += 1
        if k < n:
            break
        end_t = evs[j - 1].start if n > 1 else e.start
        lo = max(end_t - width + 1, first_t - width + 1)
        hi = min(e.start, last_t)
        if lo <= hi:
            ranges.append((lo, hi))
    total, reach = 0, None
    for lo, hi in sorted(ranges):
        if reach is not None and lo <= reach:
            lo = reach + 1
        if lo <= hi:
            total += hi - lo + 1
            reach = hi
    return total


def enumerate_occurrences(
    seq: EventSequence, alpha: AnyEpisode, exp: ExpiryPolicy = NO_EXPIRY, budget: int = 200
) -> Iterator[tuple[int, ...]]:
    """Every occurrence of ``alpha`` as an increasing index tuple (exponential)."""
    if len(seq) > budget:
        raise ValueError(f"sequence of {len(seq)} events exceeds enumeration budget {budget}")
    matches = _matcher(alpha)
    evs = seq.events
    n = alpha.size

    def extend(prefix: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
        k = len(prefix)
        if k == n:
            if exp.limit is None or exp.span(evs[prefix[0]], evs[prefix[-1]]) <= exp.limit:
                yield prefix
            return
        for j in range(prefix[-1] + 1 if prefix else 0, len(evs)):
            if matches(evs[j], k):
                yield from extend(prefix + (j,))

    yield from extend(())


def occurrence_intervals(
    seq: EventSequence, alpha: AnyEpisode, exp: ExpiryPolicy = NO_EXPIRY, budget: int = 200
) -> set[tuple[int, int]]:
    """Distinct ``(first index, last index)`` pairs over all occurrences.

    Exhaustive search from every possible first event; partial states
    ``(node, index)`` already explored from the same first event are skipped,
    which keeps the search polynomial without changing the result.
    """
    if len(seq) > budget:
        raise ValueError(f"sequence of {len(seq)} events exceeds enumeration budget {budget}")
    matches = _matcher(alpha)
    evs = seq.events
    n = alpha.size
    out: set[tuple[int, int]] = set()
    for i, first in enumerate(evs):
        if not matches(first, 0):
            continue
        seen: set[tuple[int, int]] = set()
        stack = [(1, i)]
        while stack:
            k, j = stack.pop()
            if k == n:
                if exp.limit is None or exp.span(first, evs[j]) <= exp.limit:
                    out.add((i, j))
                continue
            for jj in range(j + 1, len(evs)):
                if (k, jj) not in seen and matches(evs[jj], k):
                    seen.add((k, jj))
                    stack.append((k + 1, jj))
    return out


def max_disjoint(intervals) -> int:
    """Maximum number of pairwise disjoint closed index intervals."""
    chosen, last_end = 0, -1
    for lo, hi in sorted(intervals, key=lambda iv: (iv[1], iv[0])):
        if lo > last_end:
            chosen += 1
            last_end = hi
    return chosen


def oracle_max_non_overlapped(
    seq: EventSequence, alpha: AnyEpisode, exp: ExpiryPolicy = NO_EXPIRY, budget: int = 200
) -> int:
    """Brute-force reference for the non-overlapped frequency (desk scale only)."""
    return max_disjoint(occurrence_intervals(seq, alpha, exp, budget))


def explain_jsonl(seq: EventSequence, alpha: AnyEpisode, result: CountResult) -> Iterator[str]:
    """One JSON line per counted occurrence."""
    for occ in result.occurrences or ():
        yield json.dumps(
            {
                "episode": str(alpha),
                "events": [[i, seq[i].label, seq[i].start, seq[i].end] for i in occ],
            }
        )
