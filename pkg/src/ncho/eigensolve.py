"""Eigenvalues and eigenvectors of finite symmetric tridiagonal matrices.

Eigenvalues are bracketed by bisection on the Sturm count (number of
negative pivots of the shifted LDL^T factorization).  Eigenvectors come from
shifted inverse iteration.  Everything runs on plain Python floats so the
arithmetic is fully deterministic and independent of any LAPACK build.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass

import numpy as np

from .jacobi import NchoParams, SectorId, SymTridiag, diag_entry, offdiag_entry

DEFAULT_TOL = 1e-12
DEFAULT_MAX_ITER = 50
RESIDUAL_LIMIT = 1e-8

_EPS = sys.float_info.epsilon


class IndexOutOfRange(IndexError):
    pass


class NoConvergence(ArithmeticError):
    pass


@dataclass(frozen=True)
class EigenBracket:
    """Interval ``[lo, hi]`` known to contain eigenvalue number ``index`` (0-based)."""

    lo: float
    hi: float
    index: int

    @property
    def mid(self) -> float:
        return 0.5 * (self.lo + self.hi)

    @property
    def width(self) -> float:
        return self.hi - self.lo


@dataclass(frozen=True)
class EigVector:
    components: np.ndarray
    residual: float


def _bands(T: SymTridiag) -> tuple[list[float], list[float]]:
    return T.diag.tolist(), T.offdiag.tolist()


def _pivmin(d: list[float], e: list[float]) -> float:
    scale = max(max(abs(x) for x in d), max((abs(x) for x in e), default=0.0))
    return _EPS * max(scale, sys.float_info.min)


def _count(d: list[float], e2: list[float], x: float, pivmin: float) -> int:
    count = 0
    q = d[0] - x
    if abs(q) < pivmin:
        q = -pivmin
    if q < 0:
        count += 1
    for i in range(1, len(d)):
        q = (d[i] - x) - e2[i - 1] / q
        if abs(q) < pivmin:
            q = -pivmin
        if q < 0:
            count += 1
    return count


def sturm_count(T: SymTridiag, x: float) -> int:
    """Number of eigenvalues of ``T`` strictly below ``x``.

    Tiny pivots (below machine epsilon times the largest entry) are replaced
    by ``-pivmin``.
    """
    d, e = _bands(T)
    return _count(d, [v * v for v in e], x, _pivmin(d, e))


def gershgorin_bounds(T: SymTridiag) -> tuple[float, float]:
    d, e = _bands(T)
    n = len(d)
    lo = math.inf
    hi = -math.inf
    for i in range(n):
        r = (abs(e[i - 1]) if i > 0 else 0.0) + (abs(e[i]) if i < n - 1 else 0.0)
        lo = min(lo, d[i] - r)
        hi = max(hi, d[i] + r)
    return lo, hi


def _bisect(d, e2, k, lo, hi, tol, pivmin):
    # invariant: count(lo) <= k < count(hi)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if _count(d, e2, mid, pivmin) <= k:
            lo = mid
        else:
            hi = mid
    return lo, hi


def eigenvalue(T: SymTridiag, k: int, tol: float = DEFAULT_TOL) -> EigenBracket:
    """Bracket of width at most ``tol`` around the ``k``-th smallest eigenvalue.

    Bisection starts from the Gershgorin interval, padded so that the Sturm
    counts at the ends are exactly 0 and ``dim``.  If ``tol`` is below the
    floating-point spacing at the eigenvalue the bracket stops at adjacent
    doubles.
    """
    if not 0 <= k < T.dim:
        raise IndexOutOfRange(f"eigenvalue index {k} outside 0..{T.dim - 1}")
    if not tol > 0:
        raise ValueError("tol must be positive")
    d, e = _bands(T)
    e2 = [v * v for v in e]
    pivmin = _pivmin(d, e)
    glo, ghi = gershgorin_bounds(T)
    pad = 2 * _EPS * max(abs(glo), abs(ghi)) * T.dim + 2 * pivmin
    lo, hi = glo - pad, ghi + pad
    while _count(d, e2, lo, pivmin) > 0:
        lo -= 2 * (hi - lo)
    while _count(d, e2, hi, pivmin) < T.dim:
        hi += 2 * (hi - lo)
    lo, hi = _bisect(d, e2, k, lo, hi, tol, pivmin)
    return EigenBracket(lo, hi, k)


def _solve_shifted(d, e, shift, rhs):
    """Solve (T - shift I) x = rhs by Gaussian elimination with partial pivoting."""
    n = len(d)
    if n == 1:
        piv = d[0] - shift
        if piv == 0.0:
            piv = _EPS * max(abs(d[0]), 1.0)
        return [rhs[0] / piv]
    # row i after elimination: u0[i] x_i + u1[i] x_{i+1} + u2[i] x_{i+2}
    u0 = [v - shift for v in d]
    u1 = list(e) + [0.0]
    u2 = [0.0] * n
    low = list(e)
    b = list(rhs)
    scale = max(max(abs(v) for v in u0), max(abs(v) for v in e))
    tiny = _EPS * (scale if scale > 0 else 1.0)
    for i in range(n - 1):
        if abs(u0[i]) >= abs(low[i]):
            piv = u0[i] if u0[i] != 0.0 else tiny
            u0[i] = piv
            m = low[i] / piv
            u0[i + 1] -= m * u1[i]
            b[i + 1] -= m * b[i]
        else:
            # swap rows i and i+1
            m = u0[i] / low[i]
            u0[i] = low[i]
            t = u1[i]
            u1[i] = u0[i + 1]
            u0[i + 1] = t - m * u0[i + 1]
            if i < n - 2:
                u2[i] = u1[i + 1]
                u1[i + 1] = -m * u1[i + 1]
            b[i], b[i + 1] = b[i + 1], b[i] - m * b[i + 1]
    if u0[n - 1] == 0.0:
        u0[n - 1] = tiny
    x = [0.0] * n
    x[n - 1] = b[n - 1] / u0[n - 1]
    x[n - 2] = (b[n - 2] - u1[n - 2] * x[n - 1]) / u0[n - 2]
    for i in range(n - 3, -1, -1):
        x[i] = (b[i] - u1[i] * x[i + 1] - u2[i] * x[i + 2]) / u0[i]
    return x


def _residual(d, e, lam, v):
    n = len(d)
    r2 = 0.0
    for i in range(n):
        s = (d[i] - lam) * v[i]
        if i > 0:
            s += e[i - 1] * v[i - 1]
        if i < n - 1:
            s += e[i] * v[i + 1]
        r2 += s * s
    return math.sqrt(r2)


def _normalize(v):
    big = max(abs(c) for c in v)
    if big == 0.0 or not math.isfinite(big):
        return None
    v = [c / big for c in v]
    nrm = math.sqrt(sum(c * c for c in v))
    v = [c / nrm for c in v]
    for c in v:
        if c != 0.0:
            if c < 0:
                v = [-x for x in v]
            break
    return v


def eigenvector(T: SymTridiag, lam: float, max_iter: int = DEFAULT_MAX_ITER) -> EigVector:
    """Unit eigenvector for the eigenvalue approximated by ``lam``.

    Shifted inverse iteration from the all-ones vector.  Iteration stops one
    step after the residual ``||T v - lam v||`` drops below 1e-8.  The sign is
    fixed so that the first nonzero component is positive.
    """
    if max_iter < 1:
        raise ValueError("max_iter must be positive")
    d, e = _bands(T)
    v = _normalize([1.0] * len(d))
    res = math.inf
    polished = False
    for _ in range(max_iter):
        w = _normalize(_solve_shifted(d, e, lam, v))
        if w is None:
            break
        v = w
        res = _residual(d, e, lam, v)
        if res <= RESIDUAL_LIMIT:
            if polished:
                break
            polished = True
    if not res <= RESIDUAL_LIMIT:
        raise NoConvergence(f"inverse iteration residual {res:.3e} after {max_iter} iterations")
    return EigVector(np.array(v), res)


def forward_recurrence_check(sector: SectorId, params: NchoParams, lam: float, N: int) -> np.ndarray:
    """Components u_0..u_N of the three-term recurrence solution with u_0 = 1.

    Runs ``a(n) u_{n+1} = (2 lam - b(n)) u_n - a(n-1) u_{n-1}`` on the
    unhalved entries.  Errors grow geometrically with ``n``, so this is only
    a cross-check for small ``N`` (roughly 40 or less); it is not an
    eigenvector solver.
    """
    if N < 0:
        raise ValueError("N must be nonnegative")
    u = [1.0]
    prev = 0.0
    for n in range(N):
        a_n = offdiag_entry(sector.parity, n)
        a_prev = offdiag_entry(sector.parity, n - 1) if n > 0 else 0.0
        nxt = ((2 * lam - diag_entry(sector, params, n)) * u[n] - a_prev * prev) / a_n
        prev = u[n]
        u.append(nxt)
    return np.array(u)
