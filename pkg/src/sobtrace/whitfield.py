"""Whitney (m-1)-fields P_x = L_{S_x}[f] and the jet functionals."""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial

import numpy as np

from .errors import InstanceTooLarge, TooFewPoints
from .knotsel import knot_table
from .polycore import Poly, SampleSet, lagrange_poly

JET_ENUM_GUARD = 18


@dataclass(frozen=True, eq=False)
class WhitneyField:
    knots: np.ndarray
    jets: tuple          # Poly per knot, centered at the knot
    m: int
    windows: tuple = ()  # window start index of S_x per knot

    def __len__(self):
        return len(self.jets)


def build_field(E: SampleSet, m: int) -> WhitneyField:
    if m < 1:
        raise ValueError("m must be >= 1")
    if len(E) < m:
        raise TooFewPoints(f"need #E >= m = {m}, got {len(E)}")
    table = knot_table(E, m)
    jets = []
    for e in table.entries:
        sl = slice(e.start, e.start + m)
        P = lagrange_poly(E.xs[sl], E.ys[sl], center=e.x)
        c = P.coeffs.copy()
        c[0] = E.ys[e.index]  # exact interpolation at the own knot
        jets.append(Poly(e.x, c))
    return WhitneyField(E.xs.copy(), tuple(jets), m, tuple(table.windows))


def _jet_derivs(field: WhitneyField) -> np.ndarray:
    """D[j, i] = P_{x_j}^{(i)}(x_j)."""
    m = field.m
    out = np.zeros((len(field), m))
    for j, P in enumerate(field.jets):
        c = P.coeffs[:m]
        out[j, : c.size] = c * np.array([factorial(i) for i in range(c.size)])
    return out


def _pair_term(field, D, j, k, p) -> float:
    """sum_i |P_j^{(i)}(x_j) - P_k^{(i)}(x_j)|^p / (x_k - x_j)^{(m-i)p-1}."""
    m = field.m
    xj, xk = field.knots[j], field.knots[k]
    Pk = field.jets[k]
    tot = 0.0
    for i in range(m):
        diff = D[j, i] - Pk.eval(xj, i)
        tot += abs(diff) ** p / (xk - xj) ** ((m - i) * p - 1)
    return tot


def jet_sequence_functional(field: WhitneyField, p: float) -> float:
    n = len(field)
    if n < 2:
        return 0.0
    D = _jet_derivs(field)
    return sum(_pair_term(field, D, j, j + 1, p) for j in range(n - 1)) ** (1.0 / p)


def jet_variational_exact(field: WhitneyField, p: float,
                          max_points: int = JET_ENUM_GUARD) -> float:
    """Exact sup over increasing subsequences of the consecutive-pair sum.

    The objective is additive over consecutive pairs, so the sup is a
    longest path in the DAG on knots (equal to brute-force enumeration)."""
    n = len(field)
    if n > max_points:
        raise InstanceTooLarge(f"{n} knots exceeds guard {max_points}")
    if n < 2:
        return 0.0
    D = _jet_derivs(field)
    best = np.zeros(n)
    for k in range(1, n):
        best[k] = max(best[j] + _pair_term(field, D, j, k, p) for j in range(k))
    return float(best.max()) ** (1.0 / p)
