"""Nearest-neighbour interpolation knots S_x for finite sets."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import Exhausted

TIE_RTOL = 1e-12


def _left_wins(dl: float, dr: float) -> bool:
    # equal distances go to the smaller abscissa
    return dl <= dr + TIE_RTOL * max(dl, dr)


def nearest_outside(E, A) -> float:
    """Point of E outside A closest to A; ties go to the smaller abscissa."""
    xs = np.asarray(getattr(E, "xs", E), dtype=float)
    a = np.unique(np.asarray(A, dtype=float))
    if a.size == 0:
        raise ValueError("A must be nonempty")
    if not np.all(np.isin(a, xs)):
        raise ValueError("A must be a subset of E")
    rest = xs[~np.isin(xs, a)]
    if rest.size == 0:
        raise Exhausted("A exhausts E")
    dist = np.min(np.abs(rest[:, None] - a[None, :]), axis=1)
    best = dist.min()
    close = rest[dist <= best * (1 + TIE_RTOL)]
    return float(close.min())


@dataclass(frozen=True)
class KnotEntry:
    x: float
    index: int
    start: int          # window start index into E
    s_set: tuple        # abscissae of S_x, increasing
    base: float         # s_x, the last chain point
    chain: tuple        # y_0, y_1, ... in construction order


@dataclass(frozen=True)
class KnotSelection:
    m: int
    entries: tuple

    @property
    def windows(self):
        return [e.start for e in self.entries]

    def __getitem__(self, i):
        return self.entries[i]

    def __len__(self):
        return len(self.entries)


def _knot_entry(xs: np.ndarray, i: int, m: int) -> KnotEntry:
    n = xs.size
    lo = hi = i
    chain = [xs[i]]
    while len(chain) < m and hi - lo + 1 < n:
        if lo == 0:
            hi += 1
            chain.append(xs[hi])
        elif hi == n - 1:
            lo -= 1
            chain.append(xs[lo])
        elif _left_wins(xs[lo] - xs[lo - 1], xs[hi + 1] - xs[hi]):
            lo -= 1
            chain.append(xs[lo])
        else:
            hi += 1
            chain.append(xs[hi])
    return KnotEntry(
        x=float(xs[i]),
        index=i,
        start=lo,
        s_set=tuple(float(v) for v in xs[lo:hi + 1]),
        base=float(chain[-1]),
        chain=tuple(float(v) for v in chain),
    )


def knot_set(E, x: float, m: int) -> KnotEntry:
    """Run the chain y_0 = x, y_{j+1} = a_E(Y_j) until m points or E is used up."""
    xs = np.asarray(getattr(E, "xs", E), dtype=float)
    hits = np.flatnonzero(xs == x)
    if hits.size != 1:
        raise ValueError(f"{x} is not a point of E")
    return _knot_entry(xs, int(hits[0]), m)


def knot_table(E, m: int) -> KnotSelection:
    xs = np.asarray(getattr(E, "xs", E), dtype=float)
    return KnotSelection(m, tuple(_knot_entry(xs, i, m) for i in range(xs.size)))
