"""Polynomial kernel: shifted-monomial polynomials, divided differences,
Lagrange and Hermite interpolation, B-splines and |q|^p integrals."""

from __future__ import annotations

from dataclasses import dataclass
from math import comb, factorial

import numpy as np
from numpy.polynomial import legendre as _leg
from numpy.polynomial import polynomial as _npoly

from .errors import (BadInterval, BadSampleSet, DegenerateNodes,
                     QuadratureFailure, UnsupportedOrder)

DEFAULT_RTOL = 1e-9

_GL_NODES, _GL_WEIGHTS = _leg.leggauss(16)
QUAD_RTOL = 1e-10
QUAD_MAX_PANELS = 2 ** 14


@dataclass(frozen=True, eq=False)
class SampleSet:
    """Discrete data (E, f): strictly increasing finite abscissae and values."""

    xs: np.ndarray
    ys: np.ndarray

    def __post_init__(self):
        xs = np.atleast_1d(np.asarray(self.xs, dtype=float)).copy()
        ys = np.atleast_1d(np.asarray(self.ys, dtype=float)).copy()
        if xs.ndim != 1 or xs.shape != ys.shape:
            raise BadSampleSet("xs and ys must be 1-d arrays of equal length")
        if xs.size == 0:
            raise BadSampleSet("empty sample set")
        if not (np.all(np.isfinite(xs)) and np.all(np.isfinite(ys))):
            raise BadSampleSet("non-finite entry")
        if np.any(np.diff(xs) <= 0):
            raise BadSampleSet("abscissae must be strictly increasing")
        xs.flags.writeable = False
        ys.flags.writeable = False
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "ys", ys)

    @classmethod
    def from_unsorted(cls, xs, ys) -> "SampleSet":
        xs = np.asarray(xs, dtype=float)
        ys = np.asarray(ys, dtype=float)
        order = np.argsort(xs, kind="stable")
        return cls(xs[order], ys[order])

    def __len__(self):
        return self.xs.size

    def with_values(self, ys) -> "SampleSet":
        return SampleSet(self.xs, ys)


def _taylor_shift(a: np.ndarray, h: float) -> np.ndarray:
    """Coefficients of sum_j a_j (y + h)^j in powers of y (Horner)."""
    b = np.array([a[-1]], dtype=float)
    for aj in a[-2::-1]:
        nb = np.zeros(b.size + 1)
        nb[1:] += b
        nb[:-1] += h * b
        nb[0] += aj
        b = nb
    return b


def _padd(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    if x.size < y.size:
        x, y = y, x
    out = x.copy()
    out[: y.size] += y
    return out


@dataclass(frozen=True, eq=False)
class Poly:
    """q(x) = sum_j coeffs[j] * (x - center)**j."""

    center: float
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.coeffs, dtype=float)).copy()
        if c.size == 0:
            c = np.zeros(1)
        if not np.all(np.isfinite(c)):
            raise ValueError("non-finite polynomial coefficient")
        c.flags.writeable = False
        object.__setattr__(self, "center", float(self.center))
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def constant(cls, value, center=0.0) -> "Poly":
        return cls(center, [value])

    @property
    def degree(self) -> int:
        nz = np.flatnonzero(self.coeffs)
        return int(nz[-1]) if nz.size else 0

    def is_zero(self) -> bool:
        return not np.any(self.coeffs)

    def __call__(self, x):
        y = np.asarray(x, dtype=float) - self.center
        out = np.zeros_like(y) + self.coeffs[-1]
        for a in self.coeffs[-2::-1]:
            out = out * y + a
        return out if out.ndim else float(out)

    def deriv(self, order: int = 1) -> "Poly":
        c = self.coeffs
        for _ in range(order):
            if c.size == 1:
                return Poly(self.center, [0.0])
            c = c[1:] * np.arange(1, c.size)
        return Poly(self.center, c)

    def eval(self, x, order: int = 0):
        return self.deriv(order)(x) if order else self(x)

    def shift(self, center: float) -> "Poly":
        """Same polynomial re-expanded about a new center (Taylor shift)."""
        h = float(center) - self.center
        if h == 0.0:
            return self
        return Poly(center, _taylor_shift(self.coeffs, h))

    def truncate(self, degree: int) -> "Poly":
        if degree < 0:
            return Poly(self.center, [0.0])
        return Poly(self.center, self.coeffs[: degree + 1])

    def taylor(self, order: int = 0) -> float:
        """q^{(order)}(center)."""
        if order >= self.coeffs.size:
            return 0.0
        return float(self.coeffs[order] * factorial(order))

    def _coerce(self, other) -> np.ndarray:
        if isinstance(other, Poly):
            return other.shift(self.center).coeffs
        return np.array([float(other)])

    def __add__(self, other):
        return Poly(self.center, _npoly.polyadd(self.coeffs, self._coerce(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return Poly(self.center, _npoly.polysub(self.coeffs, self._coerce(other)))

    def __neg__(self):
        return Poly(self.center, -self.coeffs)

    def __mul__(self, other):
        if isinstance(other, Poly):
            return Poly(self.center, _npoly.polymul(self.coeffs, self._coerce(other)))
        return Poly(self.center, self.coeffs * float(other))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = Poly(self.center, [1.0])
        for _ in range(n):
            out = out * self
        return out

    def __repr__(self):
        return f"Poly(center={self.center!r}, coeffs={self.coeffs.tolist()!r})"


def _check_nodes(points, values=None):
    x = np.asarray(points, dtype=float)
    if x.ndim != 1 or x.size == 0:
        raise DegenerateNodes("need at least one node")
    if np.unique(x).size != x.size:
        raise DegenerateNodes("duplicate nodes")
    if values is None:
        return x
    y = np.asarray(values, dtype=float)
    if y.shape != x.shape:
        raise ValueError("points and values differ in length")
    return x, y


def _newton_table(x, y):
    """Top diagonal of the Newton table: Delta^j f[x_0..x_j], j = 0..k."""
    d = y.astype(float).copy()
    top = [d[0]]
    for j in range(1, x.size):
        d = (d[1:] - d[:-1]) / (x[j:] - x[:-j])
        top.append(d[0])
    return np.array(top)


def divided_difference(points, values) -> float:
    """Delta^k f[x_0..x_k] by the recursive (Neville-style) scheme."""
    x, y = _check_nodes(points, values)
    return float(_newton_table(x, y)[-1])


def divided_differences_batch(X, Y) -> np.ndarray:
    """Row-wise divided differences for node matrix X (N, k+1) and values Y."""
    X = np.asarray(X, dtype=float)
    d = np.asarray(Y, dtype=float).copy()
    k = X.shape[1] - 1
    for j in range(1, k + 1):
        d = (d[:, 1:] - d[:, :-1]) / (X[:, j:] - X[:, :-j])
    return d[:, 0]


def consecutive_divided_differences(xs, ys, k: int) -> np.ndarray:
    """Delta^k f[x_i..x_{i+k}] for every consecutive window i = 0..n-k."""
    x = np.asarray(xs, dtype=float)
    d = np.asarray(ys, dtype=float).copy()
    for j in range(1, k + 1):
        d = (d[1:] - d[:-1]) / (x[j:] - x[:-j])
    return d


def lagrange_poly(points, values, center=None) -> Poly:
    """Interpolating polynomial of degree <= k, expanded about `center`
    (default: midpoint of the node range)."""
    x, y = _check_nodes(points, values)
    if center is None:
        center = 0.5 * (x.min() + x.max())
    top = _newton_table(x, y)
    c = np.array([top[-1]])
    for j in range(x.size - 2, -1, -1):
        nc = np.zeros(c.size + 1)
        nc[1:] += c
        nc[:-1] += (center - x[j]) * c
        nc[0] += top[j]
        c = nc
    return Poly(center, c)


def bspline_eval(points, t):
    """Unit-integral B-spline M_k[S](t) on k+1 increasing knots.

    Uses the two-term recurrence, which is algebraically identical to
    k * sum_i (x_i - t)_+^{k-1} / w'(x_i) but free of cancellation.
    Support is the half-open interval [x_0, x_k).
    """
    x = np.asarray(points, dtype=float)
    k = x.size - 1
    if k < 1:
        raise UnsupportedOrder("B-spline needs at least two knots")
    if np.any(np.diff(x) <= 0):
        raise DegenerateNodes("knots must be strictly increasing")
    t = np.asarray(t, dtype=float)
    tt = t[..., None]
    M = np.where((x[:-1] <= tt) & (tt < x[1:]), 1.0 / (x[1:] - x[:-1]), 0.0)
    for j in range(2, k + 1):
        left = (tt - x[: k + 1 - j]) * M[..., :-1]
        right = (x[j:] - tt) * M[..., 1:]
        M = (j / (j - 1)) * (left + right) / (x[j:] - x[: k + 1 - j])
    out = M[..., 0]
    return out if out.ndim else float(out)


def bspline_truncated_power(points, t):
    """Direct truncated-power formula for M_k[S](t); used as a check."""
    x = np.asarray(points, dtype=float)
    k = x.size - 1
    if k < 1:
        raise UnsupportedOrder("B-spline needs at least two knots")
    t = np.asarray(t, dtype=float)[..., None]
    if k == 1:
        g = (x > t).astype(float)
    else:
        g = np.where(x > t, x - t, 0.0) ** (k - 1)
    w = np.array([np.prod([xi - xj for xj in x if xj != xi]) for xi in x])
    out = k * np.sum(g / w, axis=-1)
    return out if out.ndim else float(out)


def bspline_integral(points) -> float:
    """Integral of M_k[S] over its support; piecewise-exact Gauss rule."""
    x = np.asarray(points, dtype=float)
    k = x.size - 1
    if k < 1:
        raise UnsupportedOrder("B-spline needs at least two knots")
    nodes, weights = _leg.leggauss(k // 2 + 1)
    total = 0.0
    for a, b in zip(x[:-1], x[1:]):
        h = 0.5 * (b - a)
        total += h * np.dot(weights, bspline_eval(x, 0.5 * (a + b) + h * nodes))
    return float(total)


def hermite_gap(P_a: Poly, P_b: Poly, a: float, b: float, m: int) -> Poly:
    """Two-point Hermite polynomial of degree <= 2m-1 matching the jets of
    P_a at a and P_b at b up to order m-1 (explicit binomial formula)."""
    if not a < b:
        raise BadInterval(f"need a < b, got a={a}, b={b}")
    c = 0.5 * (a + b)
    h = b - a
    u = np.array([(c - a) / h, 1.0 / h])
    v = np.array([(b - c) / h, -1.0 / h])
    Pa = P_a.shift(a).coeffs
    Pb = P_b.shift(b).coeffs
    left = np.zeros(1)
    right = np.zeros(1)
    uk = np.ones(1)
    vk = np.ones(1)
    for k in range(m):
        w = comb(m + k - 1, m - 1)
        left = _padd(left, np.convolve(uk, _taylor_shift(Pa[: m - k], c - a)) * w)
        right = _padd(right, np.convolve(vk, _taylor_shift(Pb[: m - k], c - b)) * w)
        uk = np.convolve(uk, u)
        vk = np.convolve(vk, v)
    # after the loop uk = u^m and vk = v^m
    H = _padd(np.convolve(vk, left), np.convolve(uk, right))[: 2 * m]
    out = np.zeros(2 * m)
    out[: H.size] = H
    return Poly(c, out)


def hermite_k_constants(m: int) -> np.ndarray:
    """Matrix K with gamma_k = sum_i K[k-m, i] D_i h^{i-k}; inverse of
    A[n, k-m] = 1/(k-n)!, n = 0..m-1, k = m..2m-1."""
    A = np.array([[1.0 / factorial(k - n) for k in range(m, 2 * m)] for n in range(m)])
    return np.linalg.inv(A)


def hermite_gap_linear(P_a: Poly, P_b: Poly, a: float, b: float, m: int) -> Poly:
    """Same polynomial as hermite_gap, via P_a + sum_k gamma_k (x-a)^k/k!."""
    if not a < b:
        raise BadInterval(f"need a < b, got a={a}, b={b}")
    h = b - a
    K = hermite_k_constants(m)
    D = np.array([P_b.eval(b, i) - P_a.eval(b, i) for i in range(m)])
    coeffs = np.zeros(2 * m)
    base = P_a.shift(a).coeffs[:m]
    coeffs[: base.size] = base
    for k in range(m, 2 * m):
        gamma = sum(K[k - m, i] * D[i] * h ** (i - k) for i in range(m))
        coeffs[k] = gamma / factorial(k)
    return Poly(a, coeffs).shift(0.5 * (a + b))


def poly_eval(q: Poly, x, order: int = 0):
    if order < 0:
        raise ValueError("order must be nonnegative")
    return q.eval(x, order)


def _bisect_root(f, lo, hi, flo):
    while hi - lo > 1e-13 * max(1.0, abs(lo), abs(hi)):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0.0:
            return mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def real_roots(q: Poly, a: float, b: float) -> list:
    """Real roots of q in [a, b]: sign-change brackets on a 64*deg grid,
    polished by bisection, plus real companion-matrix roots as a backstop."""
    d = q.degree
    if d == 0:
        return []
    grid = np.linspace(a, b, 64 * d + 1)
    vals = q(grid)
    roots = list(grid[vals == 0.0])
    idx = np.flatnonzero(vals[:-1] * vals[1:] < 0)
    for i in idx:
        roots.append(_bisect_root(q, grid[i], grid[i + 1], vals[i]))
    c = q.coeffs[: d + 1]
    for r in np.roots(c[::-1]):
        if abs(r.imag) <= 1e-7 * (1.0 + abs(r.real)):
            xr = q.center + r.real
            if a <= xr <= b:
                roots.append(xr)
    return sorted(roots)


def poly_sup(q: Poly, a: float, b: float):
    """(max |q| on [a, b], argmax) via endpoints and critical points."""
    cand = [a, b] + real_roots(q.deriv(), a, b)
    cand = np.array(cand)
    vals = np.abs(q(cand))
    i = int(np.argmax(vals))
    return float(vals[i]), float(cand[i])


def _gl_panels(f, lo, hi):
    h = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    pts = mid[:, None] + h[:, None] * _GL_NODES[None, :]
    return h * (f(pts) @ _GL_WEIGHTS)


def adaptive_gl(f, a: float, b: float, rtol: float = QUAD_RTOL,
                max_panels: int = QUAD_MAX_PANELS, atol: float = 0.0) -> float:
    """Adaptive composite 16-node Gauss-Legendre with panel bisection.

    A panel is accepted when its two halves agree with the whole to
    rtol (relative to the running total) or to atol. Raises QuadratureFailure with
    the best estimate once more than max_panels panels are in use."""
    if b <= a:
        return 0.0
    lo = np.linspace(a, b, 5)
    hi, lo = lo[1:], lo[:-1]
    whole = _gl_panels(f, lo, hi)
    estimate = abs(whole.sum())
    done = 0.0
    panels = lo.size
    while lo.size:
        mid = 0.5 * (lo + hi)
        left = _gl_panels(f, lo, mid)
        right = _gl_panels(f, mid, hi)
        halves = left + right
        estimate = max(estimate, abs(done + halves.sum()))
        scale = max(estimate, 1e-300)
        err = np.abs(halves - whole)
        ok = err <= max(rtol * scale, atol) * (hi - lo) / (b - a)
        done += halves[ok].sum()
        bad = ~ok
        lo, hi, mid = lo[bad], hi[bad], mid[bad]
        panels += int(bad.sum())
        if panels > max_panels:
            best = done + halves[bad].sum()
            raise QuadratureFailure("adaptive quadrature did not converge", best)
        lo, hi = np.concatenate([lo, mid]), np.concatenate([mid, hi])
        whole = np.concatenate([left[bad], right[bad]])
    return float(done)


def poly_p_integral(q: Poly, a: float, b: float, p) -> float:
    """Integral of |q|^p over [a, b] (finite p >= 1), or sup |q| for p = inf."""
    if not (np.isfinite(a) and np.isfinite(b)) or a > b:
        raise BadInterval(f"need finite a <= b, got [{a}, {b}]")
    if p == np.inf:
        return poly_sup(q, a, b)[0]
    if p < 1:
        raise ValueError("p must be >= 1")
    if a == b or q.is_zero():
        return 0.0
    d = q.degree
    if d == 0:
        return abs(q.coeffs[0]) ** p * (b - a)
    if float(p).is_integer() and int(p) % 2 == 0:
        n = (d * int(p)) // 2 + 1
        nodes, weights = _leg.leggauss(n)
        h = 0.5 * (b - a)
        return float(h * np.dot(weights, q(0.5 * (a + b) + h * nodes) ** int(p)))
    cuts = [a] + [r for r in real_roots(q, a, b) if a < r < b] + [b]
    # absolute floor: rounding-level pieces cannot be resolved relatively
    atol = 1e-15 * poly_sup(q, a, b)[0] ** p * (b - a)
    total = 0.0
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        if hi > lo:
            total += adaptive_gl(lambda t: np.abs(q(t)) ** p, lo, hi, atol=atol)
    return total
