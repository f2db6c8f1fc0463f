"""Trace functionals on finite data: N, NW (exact and sequence forms),
sharp maximal functions and their L_p norms, N_infinity."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from itertools import combinations

import numpy as np

from .errors import BadSubsequence, InstanceTooLarge, TooFewPoints
from .polycore import (consecutive_divided_differences,
                       divided_differences_batch)

N_ENUM_GUARD = 16
NW_ENUM_GUARD = 14
SUBSET_GUARD = 500_000


def _xy(E, f):
    xs = np.asarray(getattr(E, "xs", E), dtype=float)
    ys = np.asarray(getattr(E, "ys", None) if f is None else f, dtype=float)
    if xs.shape != ys.shape:
        raise ValueError("E and f differ in length")
    return xs, ys


def _check_p(p):
    if not (1 < p < np.inf):
        raise ValueError(f"p must lie in (1, inf), got {p}")


def agr_weight(xs: np.ndarray, m: int) -> np.ndarray:
    """min{1, x_{i+m} - x_i} with x_j = +inf beyond the last index."""
    n1 = xs.size
    w = np.ones(n1)
    if n1 > m:
        w[: n1 - m] = np.minimum(1.0, xs[m:] - xs[:-m])
    return w


def n_sequence(E, f=None, m: int = 1, p: float = 2.0) -> float:
    xs, ys = _xy(E, f)
    _check_p(p)
    if xs.size <= m:
        raise TooFewPoints(f"need #E >= m+1 = {m + 1}")
    dd = consecutive_divided_differences(xs, ys, m)
    return float(np.sum((xs[m:] - xs[:-m]) * np.abs(dd) ** p) ** (1.0 / p))


def _combos(n: int, r: int) -> np.ndarray:
    c = np.array(list(combinations(range(n), r)), dtype=int).reshape(-1, r)
    return c[np.argsort(c[:, -1], kind="stable")]


def _window_dp(combos: np.ndarray, terms: np.ndarray, tail=None) -> float:
    """max over index subsequences (>= m+1 points) of the sum of terms over
    their consecutive (m+1)-windows, plus tail(last m indices) if given.

    combos must be ordered by their last index."""
    best = {}
    for c, t in zip(map(tuple, combos), terms):
        val = best.get(c[:-1], 0.0) + t
        key = c[1:]
        if val > best.get(key, -1.0):
            best[key] = val
    if tail is None:
        return max(best.values())
    return max(v + tail(k) for k, v in best.items())


def n_variational_exact(E, f=None, m: int = 1, p: float = 2.0,
                        max_points: int = N_ENUM_GUARD) -> float:
    """Exact sup over subsequences of sum (x_{i+m}-x_i)|Delta^m f|^p, ^(1/p)."""
    xs, ys = _xy(E, f)
    _check_p(p)
    n = xs.size
    if n > max_points:
        raise InstanceTooLarge(f"{n} points exceeds guard {max_points}")
    if n <= m:
        raise TooFewPoints(f"need #E >= m+1 = {m + 1}")
    C = _combos(n, m + 1)
    X, Y = xs[C], ys[C]
    terms = (X[:, -1] - X[:, 0]) * np.abs(divided_differences_batch(X, Y)) ** p
    return float(_window_dp(C, terms) ** (1.0 / p))


def nw_sequence(E, f=None, m: int = 1, p: float = 2.0) -> float:
    xs, ys = _xy(E, f)
    _check_p(p)
    mt = min(m, xs.size - 1)
    w = agr_weight(xs, m)
    total = 0.0
    for k in range(mt + 1):
        dd = consecutive_divided_differences(xs, ys, k)
        total += float(np.sum(w[: dd.size] * np.abs(dd) ** p))
    return total ** (1.0 / p)


def nw_variational_exact(E, f=None, m: int = 1, p: float = 2.0,
                         max_points: int = NW_ENUM_GUARD) -> float:
    xs, ys = _xy(E, f)
    _check_p(p)
    n = xs.size
    if n > max_points:
        raise InstanceTooLarge(f"{n} points exceeds guard {max_points}")
    if n <= m:
        raise TooFewPoints(f"need #E >= m+1 = {m + 1}")
    C = _combos(n, m + 1)
    X, Y = xs[C], ys[C]
    inner = np.zeros(C.shape[0])
    for k in range(m + 1):
        inner += np.abs(divided_differences_batch(X[:, : k + 1], Y[:, : k + 1])) ** p
    terms = np.minimum(1.0, X[:, -1] - X[:, 0]) * inner

    def tail(key):
        idx = np.array(key)
        tx, ty = xs[idx], ys[idx]
        s = 0.0
        for k in range(m):
            s += float(np.sum(np.abs(consecutive_divided_differences(tx, ty, k)) ** p))
        return s

    return float(_window_dp(C, terms, tail) ** (1.0 / p))


# ---- sharp maximal functions -------------------------------------------

def _subset_table(xs, ys, k):
    n = xs.size
    from math import comb
    if comb(n, k + 1) > SUBSET_GUARD:
        raise InstanceTooLarge("too many subsets for the sharp maximal function")
    C = np.array(list(combinations(range(n), k + 1)), dtype=int).reshape(-1, k + 1)
    X = xs[C]
    dd = np.abs(divided_differences_batch(X, ys[C]))
    return X, dd


def _dist_to_set(x, X):
    """dist from each x (shape (q,)) to each row of X -> (q, N)."""
    return np.min(np.abs(x[:, None, None] - X[None, :, :]), axis=2)


def sharp_k_eval(E, f=None, m: int = 1, k: int = 0, x=0.0):
    """f#_k(x): local sup of |Delta^k f[S]| over S with dist(x, S) <= 1;
    for k = m the terms carry the weight diam S / diam(S u {x})."""
    xs, ys = _xy(E, f)
    xq = np.atleast_1d(np.asarray(x, dtype=float))
    if not 0 <= k <= m:
        raise ValueError("need 0 <= k <= m")
    if xs.size < k + 1:
        out = np.zeros(xq.size)
    else:
        X, dd = _subset_table(xs, ys, k)
        vals = np.broadcast_to(dd, (xq.size, dd.size)).copy()
        if k == m:
            diam = X[:, -1] - X[:, 0]
            big = np.maximum(X[None, :, -1], xq[:, None]) - np.minimum(X[None, :, 0], xq[:, None])
            vals = vals * diam[None, :] / big
        vals[_dist_to_set(xq, X) > 1.0] = 0.0
        out = vals.max(axis=1)
    return out if np.ndim(x) else float(out[0])


def weighted_sharp_eval(E, f=None, m: int = 1, x=0.0):
    """sup_S |Delta^m f[S]| diam S / diam({x} u S), no distance constraint."""
    xs, ys = _xy(E, f)
    xq = np.atleast_1d(np.asarray(x, dtype=float))
    X, dd = _subset_table(xs, ys, m)
    big = np.maximum(X[None, :, -1], xq[:, None]) - np.minimum(X[None, :, 0], xq[:, None])
    out = (dd * (X[:, -1] - X[:, 0]))[None, :] / big
    out = out.max(axis=1)
    return out if np.ndim(x) else float(out[0])


def sharp_m_global_eval(E, f=None, m: int = 1, x=0.0):
    """(Delta^m f)#(x) = sup_S |Delta^m f[S]| diam S / (|x - x_0| + |x - x_m|)."""
    xs, ys = _xy(E, f)
    xq = np.atleast_1d(np.asarray(x, dtype=float))
    X, dd = _subset_table(xs, ys, m)
    den = np.abs(xq[:, None] - X[None, :, 0]) + np.abs(xq[:, None] - X[None, :, -1])
    out = ((dd * (X[:, -1] - X[:, 0]))[None, :] / den).max(axis=1)
    return out if np.ndim(x) else float(out[0])


def _seg_integral(v, s, length, p):
    """integral_0^length (v + s t)^(-p) dt with v > 0, length possibly inf."""
    if length == np.inf:
        if s <= 0:
            return np.inf
        return v ** (1 - p) / (s * (p - 1))
    if length <= 0:
        return 0.0
    r = s * length / v
    if r == 0.0:
        return v ** (-p) * length
    return v ** (-p) * length * np.expm1((1 - p) * np.log1p(r)) / (r * (1 - p))


def _envelope_integral(v0, s, length, p):
    """integral over [0, length] of (min_j (v0_j + s_j t))^(-p)."""
    if v0.size == 0:
        return 0.0
    t = 0.0
    cur = int(np.lexsort((s, v0))[0])
    total = 0.0
    while True:
        vc = v0[cur] + s[cur] * t
        cand = s < s[cur]
        tc = np.full(s.size, np.inf)
        tc[cand] = (v0[cand] - v0[cur]) / (s[cur] - s[cand])
        tc[cand & (tc < t)] = t
        nxt_t = tc.min()
        if not nxt_t < length:
            return total + _seg_integral(vc, s[cur], length - t, p)
        total += _seg_integral(vc, s[cur], nxt_t - t, p)
        ties = np.flatnonzero(tc <= nxt_t)
        cur = int(ties[np.argmin(s[ties])])
        t = nxt_t


def sharp_k_lp_norm(E, f=None, m: int = 1, k: int = 0, p: float = 2.0) -> float:
    """||f#_k||_{L_p(R)}, integrated exactly cell by cell."""
    xs, ys = _xy(E, f)
    _check_p(p)
    if xs.size < k + 1:
        return 0.0
    X, dd = _subset_table(xs, ys, k)
    cuts = [xs - 1.0, xs + 1.0] + ([xs] if k == m else [])
    cuts = np.unique(np.concatenate(cuts))
    lo_d, hi_d = X[:, 0], X[:, -1]
    diam = hi_d - lo_d
    total = 0.0
    for c0, c1 in zip(cuts[:-1], cuts[1:]):
        mid = 0.5 * (c0 + c1)
        feas = (np.min(np.abs(X - mid), axis=1) <= 1.0) & (dd > 0)
        if not feas.any():
            continue
        if k < m:
            total += (c1 - c0) * dd[feas].max() ** p
            continue
        a = dd[feas] * diam[feas]
        lo, hi = lo_d[feas], hi_d[feas]
        v0 = (np.maximum(hi, c0) - np.minimum(lo, c0)) / a
        s = np.where(mid < lo, -1.0, np.where(mid > hi, 1.0, 0.0)) / a
        total += _envelope_integral(v0, s, c1 - c0, p)
    return float(total ** (1.0 / p))


def sharp_m_global_lp_norm(E, f=None, m: int = 1, p: float = 2.0) -> float:
    """||(Delta^m f)#||_{L_p(R)}, exact (tails integrated in closed form)."""
    xs, ys = _xy(E, f)
    _check_p(p)
    if xs.size <= m:
        raise TooFewPoints(f"need #E >= m+1 = {m + 1}")
    X, dd = _subset_table(xs, ys, m)
    keep = dd > 0
    if not keep.any():
        return 0.0
    lo, hi = X[keep, 0], X[keep, -1]
    a = dd[keep] * (hi - lo)

    def lines_at(c0, mid):
        v0 = (np.abs(c0 - lo) + np.abs(c0 - hi)) / a
        s = (np.where(mid > lo, 1.0, -1.0) + np.where(mid > hi, 1.0, -1.0)) / a
        return v0, s

    total = 0.0
    for c0, c1 in zip(xs[:-1], xs[1:]):
        v0, s = lines_at(c0, 0.5 * (c0 + c1))
        total += _envelope_integral(v0, s, c1 - c0, p)
    # tails: reflect so that the integration variable runs away from the data
    v0, s = lines_at(xs[-1], xs[-1] + 1.0)
    total += _envelope_integral(v0, s, np.inf, p)
    v0, s = lines_at(xs[0], xs[0] - 1.0)
    total += _envelope_integral(v0, -s, np.inf, p)
    return float(total ** (1.0 / p))


def n_infty(E, f=None, m: int = 1) -> float:
    """max over consecutive (m+1)-windows of |Delta^m f|."""
    xs, ys = _xy(E, f)
    if xs.size <= m:
        raise TooFewPoints(f"need #E >= m+1 = {m + 1}")
    return float(np.max(np.abs(consecutive_divided_differences(xs, ys, m))))


def subsequence_inequality_check(E, f=None, k: int = 1, p: float = 2.0, sub_indices=()):
    """Both sides of (t_k - t_0)|Delta^k g[t]|^p <= k^{p-1} sum_j (s_{j+k}-s_j)|Delta^k g[s_j..s_{j+k}]|^p."""
    xs, ys = _xy(E, f)
    idx = np.asarray(sub_indices, dtype=int)
    if (idx.size != k + 1 or idx[0] != 0 or idx[-1] != xs.size - 1
            or np.any(np.diff(idx) <= 0)):
        raise BadSubsequence("subsequence must have k+1 increasing indices incl. both ends")
    t, g = xs[idx], ys[idx]
    lhs = (t[-1] - t[0]) * abs(consecutive_divided_differences(t, g, k)[0]) ** p
    dd = consecutive_divided_differences(xs, ys, k)
    rhs = k ** (p - 1) * float(np.sum((xs[k:] - xs[:-k]) * np.abs(dd) ** p))
    return float(lhs), rhs


@dataclass
class TraceReport:
    m: int
    p: float
    n_exact: float | None = None
    n_sequence: float | None = None
    nw_exact: float | None = None
    nw_sequence: float | None = None
    sharp_norms: list | None = None
    sharp_m_global_norm: float | None = None
    n_infty: float | None = None
    jet_sequence: float | None = None
    jet_exact: float | None = None
    extension_seminorm: float | None = None
    extension_wnorm: float | None = None
    ratios: dict = dc_field(default_factory=dict)
    reasons: dict = dc_field(default_factory=dict)
