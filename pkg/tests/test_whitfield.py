from itertools import combinations
from math import e as EULER

import numpy as np
import pytest

from sobtrace.errors import InstanceTooLarge, TooFewPoints
from sobtrace.extend_lmp import assemble_extension, lmp_seminorm
from sobtrace.polycore import Poly, SampleSet
from sobtrace.whitfield import (build_field, jet_sequence_functional,
                                jet_variational_exact)


def jet_functional_brute(field, p):
    """Enumerate every increasing subsequence of knots."""
    n = len(field)
    m = field.m
    best = 0.0
    for r in range(2, n + 1):
        for sub in combinations(range(n), r):
            s = 0.0
            for j, k in zip(sub[:-1], sub[1:]):
                xj, xk = field.knots[j], field.knots[k]
                for i in range(m):
                    diff = field.jets[j].eval(xj, i) - field.jets[k].eval(xj, i)
                    s += abs(diff) ** p / (xk - xj) ** ((m - i) * p - 1)
            best = max(best, s)
    return best ** (1 / p)


def test_build_field_examples():
    E = SampleSet([0, 1, 2], [0, 1, 4])
    f = build_field(E, 2)
    t = np.linspace(-1, 3, 5)
    assert f.jets[0](t) == pytest.approx(t)
    for x, P in zip(E.xs, f.jets):
        assert P.center == x and P.degree <= 1
    f1 = build_field(E, 1)
    assert [P.coeffs.tolist() for P in f1.jets] == [[0.0], [1.0], [4.0]]
    q = Poly(0.5, [1.0, -2.0, 0.25])
    xs = np.array([-2, -0.5, 0.3, 1.0, 2.2, 4.0])
    f3 = build_field(SampleSet(xs, q(xs)), 3)
    for P in f3.jets:
        assert P(t) == pytest.approx(q(t), rel=1e-12, abs=1e-12)
    with pytest.raises(TooFewPoints):
        build_field(SampleSet([0.0], [1.0]), 2)


def test_field_consistency(make_samples, rng):
    for _ in range(50):
        m = int(rng.integers(1, 6))
        E = make_samples(int(rng.integers(m, 20)))
        f = build_field(E, m)
        for x, y, P in zip(E.xs, E.ys, f.jets):
            assert P(x) == y


def test_jet_sequence_examples():
    f = build_field(SampleSet([0, 1], [0, 1]), 1)
    assert jet_sequence_functional(f, 2) == pytest.approx(1.0)
    E = SampleSet([0, 1, 2, 3], [1, 2, 3, 4])
    assert jet_sequence_functional(build_field(E, 2), 2) == pytest.approx(0, abs=1e-12)
    E2 = SampleSet([0, 1.5, 2, 4], [1, -2, 0.5, 3])
    E3 = E2.with_values(-3.5 * E2.ys)
    a = jet_sequence_functional(build_field(E2, 2), 2.5)
    b = jet_sequence_functional(build_field(E3, 2), 2.5)
    assert b == pytest.approx(3.5 * a)
    assert jet_sequence_functional(build_field(SampleSet([0.0], [1.0]), 1), 2) == 0.0


def test_jet_exact_against_enumeration(make_samples, rng):
    for _ in range(25):
        m = int(rng.integers(1, 4))
        E = make_samples(int(rng.integers(max(m, 2), 8)))
        f = build_field(E, m)
        p = float(rng.choice([1.5, 2.0, 4.0]))
        exact = jet_variational_exact(f, p)
        assert exact == pytest.approx(jet_functional_brute(f, p), rel=1e-12)
        assert exact >= jet_sequence_functional(f, p) * (1 - 1e-12)


def test_jet_exact_two_knots_and_guard(make_samples):
    E = make_samples(2)
    f = build_field(E, 2)
    assert jet_variational_exact(f, 2) == pytest.approx(jet_sequence_functional(f, 2))
    with pytest.raises(InstanceTooLarge):
        jet_variational_exact(build_field(make_samples(19), 2), 2)


def test_jet_necessity_constant_e(make_samples, rng):
    for _ in range(40):
        m = int(rng.integers(1, 5))
        p = float(rng.choice([1.5, 2.0, 4.0]))
        E = make_samples(int(rng.integers(max(m, 2), 11)))
        f = build_field(E, m)
        F = assemble_extension(f)
        assert jet_variational_exact(f, p) <= EULER * lmp_seminorm(F, p) * (1 + 1e-9)


def test_translation_covariance(make_samples):
    E = make_samples(9)
    Es = SampleSet(E.xs + 123.25, E.ys)
    for m in (1, 2, 3):
        a, b = build_field(E, m), build_field(Es, m)
        assert jet_sequence_functional(a, 2) == pytest.approx(jet_sequence_functional(b, 2), rel=1e-8)
        assert jet_variational_exact(a, 3) == pytest.approx(jet_variational_exact(b, 3), rel=1e-8)
