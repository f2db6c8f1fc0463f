from fractions import Fraction
from math import pi

import mpmath
import numpy as np
import pytest

from sobtrace.errors import BadSimplex, WindowTooSmall
from sobtrace.finiteness import (deboor_Cm, euler_raw_series, euler_spline, favard_cm,
                                 km_lower_experiment, trace_norm_simplex)
from sobtrace.polycore import lagrange_poly


def favard_mpmath(m):
    s = mpmath.nsum(lambda j: ((-1) ** j / (2 * j + 1)) ** (m + 1), [-mpmath.inf, mpmath.inf])
    return float((mpmath.pi / 2) ** (m + 1) / s)


def test_favard_examples():
    assert favard_cm(1) == pytest.approx(1.0, abs=1e-12)
    assert favard_cm(2) <= 2 + 1e-12
    assert favard_cm(3) == pytest.approx(3.0, rel=1e-12)
    with pytest.raises(ValueError):
        favard_cm(0)


@pytest.mark.parametrize("m", range(1, 9))
def test_favard_against_mpmath(m):
    assert favard_cm(m) == pytest.approx(favard_mpmath(m), rel=1e-12)


def test_deboor_examples():
    assert deboor_Cm(1) == 1.5
    assert deboor_Cm(1, exact=True) == Fraction(3, 2)
    assert deboor_Cm(2, exact=True) == Fraction(19, 2)
    assert isinstance(deboor_Cm(4, exact=True), Fraction)


@pytest.mark.parametrize("m", range(3, 7))
def test_constant_chain(m):
    c, C = favard_cm(m), deboor_Cm(m)
    assert (pi / 2) ** (m - 1) < c <= C < (m - 1) * 9 ** m


def test_simplex_norm():
    assert trace_norm_simplex([0, 1, 2], [0, 1, 4]) == pytest.approx(2.0)
    L = lagrange_poly([0, 1, 2], [0, 1, 4])
    assert abs(L.eval(0.7, 2)) == pytest.approx(trace_norm_simplex([0, 1, 2], [0, 1, 4]))
    assert trace_norm_simplex([0, 3], [1, 7]) == pytest.approx(2.0)
    with pytest.raises(BadSimplex):
        trace_norm_simplex([0, 1, 2], [0, 1, 4], m=1)


def test_simplex_norm_translation_and_scale(rng):
    for m in range(1, 6):
        xs = np.sort(rng.uniform(-2, 2, size=m + 1))
        ys = rng.normal(size=m + 1)
        a = trace_norm_simplex(xs, ys)
        assert trace_norm_simplex(xs + 7.5, ys) == pytest.approx(a, rel=1e-9)
        assert trace_norm_simplex(2 * xs, ys) == pytest.approx(a / 2 ** m, rel=1e-9)


@pytest.mark.parametrize("m", range(1, 6))
def test_euler_identities(m):
    E = euler_spline(m)
    i = np.arange(-10, 11, dtype=float)
    assert E(i) == pytest.approx((-1.0) ** np.abs(i), abs=1e-9)
    assert E(i + 0.5) == pytest.approx(0, abs=1e-9)
    t = np.linspace(-9.5, 9.5, 97)
    assert E(t + 1) == pytest.approx(-E(t), abs=1e-9)
    assert E(-t) == pytest.approx(E(t), abs=1e-9)
    assert E.top_derivative_sup(-10, 10) == pytest.approx(favard_cm(m) * 2 ** m, abs=1e-6)
    # pieces reproduce the raw series
    assert E(t) == pytest.approx(euler_raw_series(m, E.window, t), abs=1e-12)
    lo, hi = E.interior
    assert lo <= -10 and hi >= 10


def test_euler_smooth_across_breaks():
    m = 3
    E = euler_spline(m)
    b = E.breaks[5:-5]
    for k in range(m):
        assert E(b - 1e-12, k) == pytest.approx(E(b, k), abs=1e-8)
    with pytest.raises(WindowTooSmall):
        euler_spline(3, W=4)


def test_km_experiment():
    for n in (3, 6, 10):
        assert km_lower_experiment(1, n) == pytest.approx(1.0)
    for m in range(2, 5):
        assert km_lower_experiment(m, m + 4) >= 1.0
    with pytest.raises(ValueError):
        km_lower_experiment(3, 4)
