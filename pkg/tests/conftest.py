import random

import pytest

from faultminer.events import make_sequence

# Ten instantaneous events from the textbook example.
EXAMPLE = [("A", 3), ("D", 4), ("B", 5), ("C", 9), ("E", 12), ("A", 14), ("F", 15), ("B", 18), ("D", 19), ("C", 27)]

LABELS = "ABCDEF"

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def example_seq():
    return make_sequence([(lab, t, t) for lab, t in EXAMPLE])


def random_sequence(rng: random.Random, max_events=40, max_alphabet=6, durations="instant", max_gap=5):
    """Random sequence with ties allowed.

    ``durations``: "instant" (end == start), "random" (may overlap), or
    "serial" (each event ends no later than the next one starts).
    """
    n = rng.randint(0, max_events)
    k = rng.randint(1, max_alphabet)
    t = rng.randint(0, 10)
    starts = []
    for _ in range(n):
        t += rng.randint(0, max_gap)
        starts.append(t)
    triples = []
    for i, s in enumerate(starts):
        lab = LABELS[rng.randrange(k)]
        if durations == "instant":
            e = s
        elif durations == "serial":
            nxt = starts[i + 1] if i + 1 < n else s + max_gap
            e = rng.randint(s, nxt)
        else:
            e = s + rng.randint(0, 3 * max_gap)
        triples.append((lab, s, e))
    return make_sequence(triples), LABELS[:k]


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def brute_frequent(seq, labels, max_size, thresholds, exp, buckets=None, levelwise=False):
    """Every episode up to ``max_size`` nodes whose oracle frequency meets its level threshold.

    With ``levelwise`` an episode also needs all its one-node-shorter
    subepisodes in the set (what a level-wise search can reach when the
    threshold changes with size).
    """
    import itertools

    from faultminer.counting import oracle_max_non_overlapped
    from faultminer.episodes import Episode, GeneralizedEpisode, drop_node

    symbols = [(a, b) for a in labels for b in buckets] if buckets is not None else list(labels)
    out = {}
    for n in range(1, max_size + 1):
        for combo in itertools.product(symbols, repeat=n):
            alpha = GeneralizedEpisode(combo) if buckets is not None else Episode(combo)
            if levelwise and n > 1 and not all(drop_node(alpha, i) in out for i in range(1, n + 1)):
                continue
            f = oracle_max_non_overlapped(seq, alpha, exp)
            if f >= thresholds[n]:
                out[alpha] = f
    return out
