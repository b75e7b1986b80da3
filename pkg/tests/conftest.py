import itertools

import numpy as np
import pytest

from fastmobius.setfun import Frame, Kind, SetFunction


def subsets(n):
    """All subsets of range(n) as frozensets, in bitmask order."""
    return [frozenset(i for i in range(n) if m >> i & 1) for m in range(1 << n)]


def mask(s):
    return sum(1 << i for i in s)


# Pure-Python defining sums over frozensets; independent of the package's kernels.


def brute_bel(values, n, nonempty=True):
    S = subsets(n)
    return [sum(values[mask(x)] for x in S if x <= a and (x or not nonempty)) for a in S]


def brute_q(values, n):
    S = subsets(n)
    return [sum(values[mask(x)] for x in S if x >= a) for a in S]


def brute_bel_to_mass(values, n):
    S = subsets(n)
    return [sum((-1) ** len(a - x) * values[mask(x)] for x in S if x <= a) for a in S]


def brute_q_to_mass(values, n):
    S = subsets(n)
    return [sum((-1) ** len(x - a) * values[mask(x)] for x in S if x >= a) for a in S]


def brute_pl(values, n):
    S = subsets(n)
    return [sum(values[mask(x)] for x in S if x & a) for a in S]


def brute_dempster(v1, v2, n):
    S = subsets(n)
    out = [0.0] * (1 << n)
    for x, y in itertools.product(S, S):
        out[mask(x & y)] += v1[mask(x)] * v2[mask(y)]
    return out


def random_mass(frame, rng, exclude_empty=False):
    w = rng.random(frame.size)
    if exclude_empty:
        w[0] = 0.0
    return SetFunction(frame, w / w.sum(), Kind.MASS)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def abc():
    return Frame(["a", "b", "c"])


def natural_posets(k):
    """Every partial order on range(k) extending 0 < 1 < ... < k-1, as <= matrices.

    Each poset is isomorphic to at least one of these.
    """
    pairs = [(i, j) for i in range(k) for j in range(i + 1, k)]
    seen = set()
    for bits in range(1 << len(pairs)):
        r = np.eye(k, dtype=bool)
        for b, (i, j) in enumerate(pairs):
            if bits >> b & 1:
                r[i, j] = True
        while True:
            nxt = r | ((r.astype(int) @ r.astype(int)) > 0)
            if (nxt == r).all():
                break
            r = nxt
        key = r.tobytes()
        if key not in seen:
            seen.add(key)
            yield r


def pytest_terminal_summary(terminalreporter):
    import sys

    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
