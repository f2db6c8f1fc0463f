"""Whitney extension for L^m_p: Hermite gap polynomials with jet tails."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from .errors import BadOrder, TooFewPoints
from .polycore import Poly, hermite_gap, poly_p_integral
from .whitfield import WhitneyField


@dataclass(frozen=True, eq=False)
class PiecewiseExtension:
    breaks: np.ndarray
    gap_polys: tuple
    left_tail: Poly
    right_tail: Poly
    m: int
    jets: tuple = ()
    meta: dict = dc_field(default_factory=dict)

    def __call__(self, x, order: int = 0):
        return extension_eval(self, x, order)

    def pieces(self):
        """(lo, hi, poly) for every piece, tails included with infinite ends."""
        b = self.breaks
        out = [(-np.inf, b[0], self.left_tail)]
        out += [(b[j], b[j + 1], q) for j, q in enumerate(self.gap_polys)]
        out.append((b[-1], np.inf, self.right_tail))
        return out


def assemble_extension(field: WhitneyField) -> PiecewiseExtension:
    if len(field) < 2:
        raise TooFewPoints("extension needs at least two knots")
    x = field.knots
    m = field.m
    gaps = tuple(
        hermite_gap(field.jets[j], field.jets[j + 1], x[j], x[j + 1], m)
        for j in range(len(x) - 1)
    )
    return PiecewiseExtension(
        breaks=np.asarray(x, dtype=float).copy(),
        gap_polys=gaps,
        left_tail=field.jets[0],
        right_tail=field.jets[-1],
        m=m,
        jets=field.jets,
    )


def _piece_at(F: PiecewiseExtension, x: float) -> Poly:
    j = int(np.searchsorted(F.breaks, x, side="right")) - 1
    if j < 0:
        return F.left_tail
    if j >= len(F.gap_polys):
        return F.right_tail
    return F.gap_polys[j]


def extension_eval(F: PiecewiseExtension, x, order: int = 0):
    """F^{(order)}(x). At a knot, orders below m read the jet there; order m
    takes the right-hand piece."""
    if order < 0:
        raise BadOrder("order must be nonnegative")
    if order > 2 * F.m - 1:
        return np.zeros_like(np.asarray(x, dtype=float)) if np.ndim(x) else 0.0
    if np.ndim(x):
        return np.array([extension_eval(F, float(t), order) for t in np.ravel(x)]).reshape(np.shape(x))
    x = float(x)
    if order < F.m and F.jets:
        k = np.searchsorted(F.breaks, x)
        if k < F.breaks.size and F.breaks[k] == x:
            return float(F.jets[k].eval(x, order))
    return float(_piece_at(F, x).eval(x, order))


def lmp_seminorm(F: PiecewiseExtension, p) -> float:
    """||F^{(m)}||_{L_p(R)}; the tails have degree < m and contribute nothing."""
    b = F.breaks
    parts = [poly_p_integral(q.deriv(F.m), b[j], b[j + 1], p)
             for j, q in enumerate(F.gap_polys)]
    if p == np.inf:
        return max(parts, default=0.0)
    return float(sum(parts) ** (1.0 / p))


def smoothness_report(F: PiecewiseExtension) -> float:
    """Largest relative jump of F^{(i)}, i < m, across the breakpoints."""
    worst = 0.0
    pieces = F.pieces()
    for j, x in enumerate(F.breaks):
        left, right = pieces[j][2], pieces[j + 1][2]
        for i in range(F.m):
            lv, rv = left.eval(x, i), right.eval(x, i)
            worst = max(worst, abs(lv - rv) / (1.0 + abs(rv)))
    return worst
