"""W^m_p extension: zero-valued grid in long gaps, then the L^m_p operator."""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import NonCompactSupport, NotApplicable, ZeroTailViolation
from .extend_lmp import PiecewiseExtension, assemble_extension
from .polycore import SampleSet, poly_p_integral
from .whitfield import build_field

GAP_THRESHOLD = 4.0
SIDE_SPACING = 2.0


def side_count(m: int) -> int:
    """Grid points kept on each unbounded side (see README, 'grid truncation')."""
    return max(m + 2, 2 * m - 1)


@dataclass(frozen=True, eq=False)
class AugmentedSet:
    base: SampleSet
    grid: np.ndarray
    truncation: int

    def samples(self) -> SampleSet:
        xs = np.concatenate([self.base.xs, self.grid])
        ys = np.concatenate([self.base.ys, np.zeros(self.grid.size)])
        order = np.argsort(xs, kind="stable")
        return SampleSet(xs[order], ys[order])


def build_grid(E: SampleSet, m: int) -> AugmentedSet:
    xs = E.xs
    pts = []
    for a, b in zip(xs[:-1], xs[1:]):
        length = b - a
        if length > GAP_THRESHOLD:
            n_j = int(np.floor(length / 2.0))
            ell = length / n_j
            pts.extend(a + ell * k for k in range(1, n_j))
    K = side_count(m)
    steps = SIDE_SPACING * np.arange(1, K + 1)
    pts.extend(xs[-1] + steps)
    pts.extend(xs[0] - steps)
    return AugmentedSet(E, np.sort(np.array(pts, dtype=float)), K)


def augment_small_set(E: SampleSet, m: int) -> SampleSet:
    """Pad #E = n+1 <= m points with zeros at x_n + 2, x_n + 4, ... to m+1 points."""
    n = len(E) - 1
    if n + 1 > m:
        raise NotApplicable(f"#E = {n + 1} > m = {m}")
    extra = E.xs[-1] + 2.0 * np.arange(1, m - n + 1)
    return SampleSet(np.concatenate([E.xs, extra]),
                     np.concatenate([E.ys, np.zeros(extra.size)]))


def wmp_extend(E: SampleSet, m: int, p=2.0) -> PiecewiseExtension:
    """EXT_E(f : W^m_p). The operator does not depend on p."""
    if not (p == np.inf or p > 1):
        raise ValueError("p must be > 1")
    base = augment_small_set(E, m) if len(E) <= m else E
    aug = build_grid(base, m)
    field = build_field(aug.samples(), m)
    for P in field.jets[:m] + field.jets[-m:]:
        if not P.is_zero():
            raise ZeroTailViolation("outermost grid jets are not zero")
    F = assemble_extension(field)
    return replace(F, meta={"zero_tails_verified": True, "grid": aug.grid,
                            "base_size": len(base)})


def _check_compact(F: PiecewiseExtension):
    if not (F.left_tail.is_zero() and F.right_tail.is_zero()):
        raise NonCompactSupport("extension tails are not identically zero")


def wmp_norm(F: PiecewiseExtension, p) -> float:
    """sum_{k=0}^m ||F^{(k)}||_{L_p(R)}."""
    _check_compact(F)
    b = F.breaks
    total = 0.0
    for k in range(F.m + 1):
        parts = [poly_p_integral(q.deriv(k), b[j], b[j + 1], p)
                 for j, q in enumerate(F.gap_polys)]
        if p == np.inf:
            total += max(parts, default=0.0)
        else:
            total += sum(parts) ** (1.0 / p)
    return float(total)


def support_radius(F: PiecewiseExtension, E) -> float:
    """max dist(x, E) over the support of F (0 if F vanishes)."""
    _check_compact(F)
    xs = np.asarray(getattr(E, "xs", E), dtype=float)
    mids = 0.5 * (xs[:-1] + xs[1:])
    b = F.breaks
    worst = 0.0
    for j, q in enumerate(F.gap_polys):
        if q.is_zero():
            continue
        u, v = b[j], b[j + 1]
        cand = np.concatenate([[u, v], mids[(mids > u) & (mids < v)]])
        d = np.min(np.abs(cand[:, None] - xs[None, :]), axis=1)
        worst = max(worst, float(d.max()))
    return worst
