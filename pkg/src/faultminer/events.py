"""Events, event sequences and the event-type alphabet."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence


@dataclass(frozen=True, order=True)
class EventType:
    id: int
    label: str

    def __str__(self) -> str:
        return self.label


@dataclass(frozen=True)
class Event:
    etype: EventType
    start: int
    end: int

    def __post_init__(self):
        if self.end < self.start:
            raise ValueError(f"event ends before it starts: {self}")

    @property
    def label(self) -> str:
        return self.etype.label


def dwelling_time(e: Event) -> int:
    """Seconds the event persisted (0 for instantaneous events)."""
    return e.end - e.start


@dataclass(frozen=True)
class EventSequence:
    """Time-ordered events over a finite alphabet.

    ``len(seq)`` is the stream length used by the significance threshold.
    """

    events: tuple[Event, ...] = ()
    alphabet: tuple[EventType, ...] = ()
    _by_label: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        if not self._by_label:
            object.__setattr__(self, "_by_label", {t.label: t for t in self.alphabet})

    def __len__(self) -> int:
        return len(self.events)

    def __iter__(self):
        return iter(self.events)

    def __getitem__(self, i):
        return self.events[i]

    @property
    def span(self) -> tuple[int, int] | None:
        if not self.events:
            return None
        return (self.events[0].start, self.events[-1].start)

    @property
    def labels(self) -> list[str]:
        return [t.label for t in self.alphabet]

    def etype(self, label: str) -> EventType | None:
        return self._by_label.get(label)

    def as_triples(self) -> list[tuple[str, int, int]]:
        return [(e.label, e.start, e.end) for e in self.events]

    def between(self, lo: int, hi: int) -> EventSequence:
        """Events with ``lo <= start < hi``, re-indexed over their own alphabet."""
        return make_sequence([t for t in self.as_triples() if lo <= t[1] < hi])


def make_sequence(events: Iterable[Sequence]) -> EventSequence:
    """Build an :class:`EventSequence` from ``(label, start, end)`` triples.

    The alphabet follows first appearance in the input; events are stably
    sorted by start time so simultaneous events keep their input order.
    """
    rows = [tuple(e) for e in events]
    for i, (label, start, end) in enumerate(rows):
        if end < start:
            raise ValueError(f"event {i} ({label!r}) has end {end} < start {start}")
    alphabet: dict[str, EventType] = {}
    for label, _, _ in rows:
        if label not in alphabet:
            alphabet[label] = EventType(len(alphabet), label)
    ordered = sorted(rows, key=lambda r: r[1])
    evs = tuple(Event(alphabet[label], int(start), int(end)) for label, start, end in ordered)
    return EventSequence(evs, tuple(alphabet.values()))
