import random

import pytest

from unitri.diagram import RawDiagram


def shuffled_raw(d, seed):
    """Same diagram with new vertex ids, rotated slot triples and edges reordered."""
    rng = random.Random(seed)
    raw = d.raw()
    ids = [v for v, _ in raw.uni] + list(raw.tri)
    fresh = rng.sample(range(100, 100 + 10 * len(ids)), len(ids))
    rename = dict(zip(ids, fresh))
    shift = {v: rng.randrange(3) for v in raw.tri}

    def end(e):
        v, s = e
        if v in shift:
            s = (s - shift[v]) % 3
        return rename[v], s

    edges = [(end(a), end(b)) if rng.random() < 0.5 else (end(b), end(a)) for a, b in raw.edges]
    rng.shuffle(edges)
    uni = [(rename[v], c) for v, c in raw.uni]
    tri = [rename[v] for v in raw.tri]
    rng.shuffle(uni)
    rng.shuffle(tri)
    return RawDiagram(uni, tri, edges)


@pytest.fixture
def reshuffle():
    return shuffled_raw


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    if not mod or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria (exact, tolerance 0)")
    for line in sorted(mod.RESULTS, key=lambda s: int(s.split()[1])):
        terminalreporter.write_line(line)
