"""Constants and extremal objects for the finiteness problem."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial, pi

import numpy as np
from scipy.special import zeta

from .errors import BadSimplex, WindowTooSmall
from .extend_lmp import assemble_extension, lmp_seminorm
from .functionals import n_infty
from .polycore import SampleSet, bspline_eval, divided_difference, lagrange_poly
from .whitfield import build_field


def trace_norm_simplex(points, values, m: int | None = None) -> float:
    """m! |Delta^m f[S]| for an (m+1)-point set S."""
    pts = np.asarray(points, dtype=float)
    if m is None:
        m = pts.size - 1
    if m < 1 or pts.size != m + 1:
        raise BadSimplex(f"need exactly m+1 = {m + 1} points, got {pts.size}")
    return factorial(m) * abs(divided_difference(pts, values))


def _odd_series(s: int) -> float:
    """sum_{j in Z} ((-1)^j / (2j+1))^s."""
    if s % 2 == 0:
        return 2.0 * (1.0 - 2.0 ** (-s)) * float(zeta(s))
    beta = 4.0 ** (-s) * (float(zeta(s, 0.25)) - float(zeta(s, 0.75)))
    return 2.0 * beta


def favard_cm(m: int) -> float:
    if m < 1:
        raise ValueError("m must be >= 1")
    return (pi / 2) ** (m + 1) / _odd_series(m + 1)


def deboor_Cm(m: int, exact: bool = False):
    if m < 1:
        raise ValueError("m must be >= 1")
    val = Fraction(2) ** (m - 2) / m
    val += sum(comb(m, i) * comb(m - 1, i - 1) * 4 ** (m - i) for i in range(1, m + 1))
    return val if exact else float(val)


@dataclass(frozen=True, eq=False)
class EulerSpline:
    m: int
    c_m: float
    window: int
    breaks: np.ndarray
    pieces: tuple

    @property
    def interior(self):
        return (-self.window + self.m + 1, self.window - self.m - 1)

    def __call__(self, t, order: int = 0):
        t = np.asarray(t, dtype=float)
        j = np.searchsorted(self.breaks, t, side="right") - 1
        out = np.full(t.shape, np.nan)
        flat_t, flat_j, flat_o = t.ravel(), j.ravel(), out.ravel()
        for n, (tt, jj) in enumerate(zip(flat_t, flat_j)):
            if 0 <= jj < len(self.pieces):
                flat_o[n] = self.pieces[jj].eval(tt, order)
        return flat_o.reshape(t.shape) if t.ndim else float(flat_o[0])

    def top_derivative_sup(self, lo=None, hi=None) -> float:
        lo, hi = self.interior if lo is None else (lo, hi)
        vals = [abs(q.deriv(self.m).coeffs[0])
                for a, b, q in zip(self.breaks[:-1], self.breaks[1:], self.pieces)
                if a >= lo - 1 and b <= hi + 1]
        return max(vals)


def euler_raw_series(m: int, W: int, t):
    """c_m * sum_{|i| <= W} (-1)^i M_{m+1}[i..i+m+1](t + (m+1)/2)."""
    t = np.asarray(t, dtype=float) + (m + 1) / 2
    total = np.zeros_like(t)
    for i in range(-W, W + 1):
        total = total + (-1) ** (i % 2) * bspline_eval(np.arange(i, i + m + 2, dtype=float), t)
    return favard_cm(m) * total


def euler_spline(m: int, W: int | None = None) -> EulerSpline:
    """Truncated B-spline series for the Euler spline, stored piecewise."""
    if W is None:
        W = 20 + m
    if W < m + 2:
        raise WindowTooSmall(f"window {W} < m+2 = {m + 2}")
    shift = (m + 1) / 2
    js = np.arange(int(np.ceil(-W + shift)), int(np.floor(W + shift)) + 1)
    breaks = js - shift
    k = np.arange(m + 1)
    nodes = np.cos((2 * k + 1) * pi / (2 * m + 2))
    pieces = []
    for a, b in zip(breaks[:-1], breaks[1:]):
        c, h = 0.5 * (a + b), 0.5 * (b - a)
        tt = c + h * nodes
        pieces.append(lagrange_poly(tt, euler_raw_series(m, W, tt), center=c))
    return EulerSpline(m, favard_cm(m), W, breaks.astype(float), tuple(pieces))


def km_lower_experiment(m: int, n: int) -> float:
    """||F||_{L^m_inf} / (m! N_inf) for f(i) = (-1)^i on {0..n}, F the Whitney extension."""
    if n < m + 2:
        raise ValueError(f"need n >= m+2 = {m + 2}")
    xs = np.arange(n + 1, dtype=float)
    E = SampleSet(xs, (-1.0) ** xs)
    F = assemble_extension(build_field(E, m))
    return lmp_seminorm(F, np.inf) / (factorial(m) * n_infty(E, m=m))
