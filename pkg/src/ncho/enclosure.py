"""Two-sided enclosures of sector eigenvalues from finite truncations.

For a truncation ``T`` of size N+1, the matrices ``T - delta p_N`` and
``T + delta p_N`` (``p_N`` the projection on the last basis vector) bound the
infinite Jacobi matrix from below and above on the span of the first N+1
basis vectors, with the remaining tail bounded below by the cap ``Lambda(N)``.
When the upper eigenvalue does not exceed the cap, the n-th eigenvalues of
the two corrected truncations enclose the n-th eigenvalue of the sector.

Rigor note: eigenvalue brackets are computed in double precision and pushed
outward by a few ulps.  This is not directed-rounding interval arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .eigensolve import DEFAULT_TOL, IndexOutOfRange, eigenvalue
from .jacobi import Branch, NchoParams, Parity, SectorId, build_truncation, offdiag_entry

OUTWARD_ULPS = 4
CAP_SLACK = 1e-13
DEFAULT_N_MAX = 4096


class NotCertifiable(RuntimeError):
    """No certified enclosure met the request; ``best`` holds the narrowest certified one, if any."""

    def __init__(self, message: str, best: Enclosure | None = None):
        super().__init__(message)
        self.best = best


@dataclass(frozen=True)
class Enclosure:
    sector: SectorId
    n: int
    lower: float
    upper: float
    N: int
    cap: float
    certified: bool
    bisection_tol: float

    @property
    def width(self) -> float:
        return self.upper - self.lower

    @property
    def mid(self) -> float:
        return 0.5 * (self.lower + self.upper)

    def intersects(self, other: Enclosure) -> bool:
        return self.lower <= other.upper and other.lower <= self.upper


def _oriented(sector: SectorId, params: NchoParams) -> tuple[float, float]:
    if sector.branch is Branch.TWO:
        return params.beta, params.alpha
    return params.alpha, params.beta


def lambda_cap(sector: SectorId, params: NchoParams, N: int) -> float:
    """Certification cap Lambda_qp(N); grows linearly in N."""
    if N < 0:
        raise ValueError("N must be nonnegative")
    a, b = _oriented(sector, params)
    c1, c2 = (1.5, 3.5) if sector.parity is Parity.PLUS else (2.5, 4.5)
    if N % 2 == 0:
        m = min((2 * N + c1) / a, (2 * N + c2) / b)
    else:
        m = min((2 * N + c1) / b, (2 * N + c2) / a)
    return 0.5 * (a * b - 1) * m


def delta(sector: SectorId, params: NchoParams, N: int) -> float:
    """Size of the rank-one corner correction at truncation N."""
    if N < 0:
        raise ValueError("N must be nonnegative")
    a, b = _oriented(sector, params)
    return 0.5 * (a if N % 2 == 0 else b) * abs(offdiag_entry(sector.parity, N))


def _down(x: float, steps: int = OUTWARD_ULPS) -> float:
    for _ in range(steps):
        x = math.nextafter(x, -math.inf)
    return x


def _up(x: float, steps: int = OUTWARD_ULPS) -> float:
    for _ in range(steps):
        x = math.nextafter(x, math.inf)
    return x


def enclose(sector: SectorId, params: NchoParams, n: int, N: int,
            tol: float = DEFAULT_TOL) -> Enclosure:
    """Enclosure of the n-th eigenvalue of ``sector`` from the size-(N+1) truncation.

    The result is returned even when the cap test fails; ``certified`` is then
    False and the interval carries no guarantee.
    """
    if not 0 <= n <= N:
        raise IndexOutOfRange(f"eigenvalue index {n} outside 0..{N}")
    T = build_truncation(sector, params, N)
    dl = delta(sector, params, N)
    hi = eigenvalue(T.with_corner_shift(dl), n, tol).hi
    lo = eigenvalue(T.with_corner_shift(-dl), n, tol).lo
    upper, lower = _up(hi), _down(lo)
    cap = lambda_cap(sector, params, N)
    certified = upper <= cap - CAP_SLACK * abs(cap)
    return Enclosure(sector, n, lower, upper, N, cap, certified, tol)


def enclose_auto(sector: SectorId, params: NchoParams, n: int, width_goal: float,
                 N_max: int = DEFAULT_N_MAX, N_start: int | None = None) -> Enclosure:
    """Double the truncation size until the enclosure is certified and narrow enough.

    Starts at ``max(2n + 4, 16)`` unless ``N_start`` is given (it is still
    raised to at least ``n``).  Raises :class:`NotCertifiable` when no
    truncation up to ``N_max`` meets ``width_goal``.
    """
    if not width_goal > 0:
        raise ValueError("width_goal must be positive")
    tol = min(DEFAULT_TOL, width_goal / 4)
    N = max(2 * n + 4, 16) if N_start is None else max(N_start, n, 1)
    best = None
    while N <= N_max:
        enc = enclose(sector, params, n, N, tol)
        if enc.certified:
            if best is None or enc.width < best.width:
                best = enc
            if enc.width <= width_goal:
                return enc
        N *= 2
    if best is None:
        raise NotCertifiable(f"sector {sector} index {n}: no certified enclosure for N <= {N_max}")
    raise NotCertifiable(
        f"sector {sector} index {n}: best certified width {best.width:.3e} at N={best.N} "
        f"exceeds goal {width_goal:.3e}", best)
