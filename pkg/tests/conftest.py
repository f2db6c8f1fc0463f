from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest

from sobtrace.instances import random_samples


def dd_exact(points, values):
    """Divided difference via the symmetric sum f(x_i)/w'(x_i), in exact rationals."""
    pts = [Fraction(p) for p in points]
    vals = [Fraction(v) for v in values]
    total = Fraction(0)
    for i, xi in enumerate(pts):
        w = Fraction(1)
        for j, xj in enumerate(pts):
            if j != i:
                w *= xi - xj
        total += vals[i] / w
    return total


def dd_float(points, values):
    return float(dd_exact([float(p) for p in points], [float(v) for v in values]))


def subsequences(n, min_len):
    for r in range(min_len, n + 1):
        yield from combinations(range(n), r)


def brute_n(xs, ys, m, p):
    best = 0.0
    for sub in subsequences(len(xs), m + 1):
        t = [xs[i] for i in sub]
        g = [ys[i] for i in sub]
        s = sum((t[i + m] - t[i]) * abs(dd_float(t[i:i + m + 1], g[i:i + m + 1])) ** p
                for i in range(len(t) - m))
        best = max(best, s)
    return best ** (1 / p)


def nw_sum(t, g, m, p):
    n = len(t) - 1
    s = 0.0
    for k in range(min(m, n) + 1):
        for i in range(n - k + 1):
            w = min(1.0, t[i + m] - t[i]) if i + m <= n else 1.0
            s += w * abs(dd_float(t[i:i + k + 1], g[i:i + k + 1])) ** p
    return s


def brute_nw(xs, ys, m, p):
    best = 0.0
    for sub in subsequences(len(xs), m + 1):
        best = max(best, nw_sum([xs[i] for i in sub], [ys[i] for i in sub], m, p))
    return best ** (1 / p)


@pytest.fixture
def rng():
    return np.random.default_rng(20261016)


@pytest.fixture
def make_samples(rng):
    def make(n, **kw):
        return random_samples(rng, n, **kw)
    return make


_CRITERIA = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        status = "PASS" if rep.passed and not hasattr(rep, "wasxfail") else "FAIL"
        note = " (expected failure, see README)" if hasattr(rep, "wasxfail") else ""
        _CRITERIA.append(f"[{status}] {mark.args[0]}{note}")


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.section("acceptance criteria")
        for line in _CRITERIA:
            terminalreporter.write_line(line)
