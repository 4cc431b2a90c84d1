"""Lower bound on the gap between the odd and even sector of each branch.

The difference of the minus- and plus-parity Jacobi matrices, after a
diagonal similarity, is ``2 sqrt(alpha beta) - F`` with ``F`` the Jacobi
matrix of the sequence ``gamma_n``.  A weighted Cauchy-Schwarz split with
weights ``a_n`` (run up to ``n0``) bounds ``||F||`` by ``1 + gamma_{n0}^2``,
which gives the explicit constant computed by :func:`gap_lower_bound`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .jacobi import NchoParams

DEFAULT_N0 = 10000


class RecursionCheckFailed(ArithmeticError):
    def __init__(self, index: int, value: float):
        super().__init__(f"a_n recursion check failed at n={index} (a_n={value!r})")
        self.index = index
        self.value = value


def gamma(n: int) -> float:
    """sqrt((2n+2)(2n+3)) - sqrt((2n+1)(2n+2)), evaluated without cancellation."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    m = float(n)
    hi = math.sqrt((2 * m + 2) * (2 * m + 3))
    lo = math.sqrt((2 * m + 1) * (2 * m + 2))
    # difference of squares is 2(2n+2)
    return 2 * (2 * m + 2) / (hi + lo)


@lru_cache(maxsize=8)
def _a_sequence(n0: int) -> tuple[float, ...]:
    a = [2.0]
    for n in range(1, n0 + 1):
        g = gamma(n - 1)
        a.append(2.0 - g * g / a[-1])
    for n in range(n0):
        if not a[n] > 0:
            raise RecursionCheckFailed(n, a[n])
    if not a[n0] > 1:
        raise RecursionCheckFailed(n0, a[n0])
    return tuple(a)


def a_sequence(n0: int = DEFAULT_N0) -> list[float]:
    """Weights a_0..a_{n0} with a_0 = 2 and a_n = 2 - gamma_{n-1}^2 / a_{n-1}.

    Raises :class:`RecursionCheckFailed` if some a_n with n < n0 is not
    positive or a_{n0} is not above 1.
    """
    if n0 < 1:
        raise ValueError("n0 must be at least 1")
    return list(_a_sequence(n0))


def tail_constant(n0: int = DEFAULT_N0) -> float:
    """1 / (4 n0)^2, the slack term in the gap constant (1/1600000000 for n0 = 10000)."""
    return 1.0 / (4.0 * n0) ** 2


def f_norm_bound(n0: int = DEFAULT_N0) -> float:
    """Upper bound 1 + gamma_{n0}^2 on the norm of the gamma Jacobi matrix."""
    _a_sequence(n0)
    g2 = gamma(n0) ** 2
    if not g2 < 1 + tail_constant(n0):
        raise ArithmeticError(f"gamma_{n0}^2 = {g2!r} not below 1 + 1/(4 n0)^2")
    return 1 + g2


@dataclass(frozen=True)
class GapCertificate:
    params: NchoParams
    delta_value: float
    n0: int
    a_tail: float
    f_norm_bound: float
    in_region: bool

    @property
    def operator_bound(self) -> float:
        # Q_-p - Q_+p = (1/2) S^-1 (2 sqrt(ab) - F) S^-1, so the factor 1/2 halves delta_value
        return 0.5 * self.delta_value


def gap_lower_bound(params: NchoParams, n0: int = DEFAULT_N0) -> GapCertificate:
    """Delta(alpha, beta) as stated for the gap lambda_{-p}(n) - lambda_{+p}(n), p = 1, 2.

    ``delta_value`` is 2 min(sqrt(a/b), sqrt(b/a)) (sqrt(ab) - 1 - 1/(4 n0)^2).
    The operator inequality behind it only supports half of that
    (``operator_bound``); at alpha = beta = 3 the true gap sqrt(8) is below
    ``delta_value`` = 4.

    The bound is meaningful (positive) only when ``in_region`` holds, i.e.
    sqrt(alpha beta) > 1 + 1/(4 n0)^2.
    """
    a, b = params.alpha, params.beta
    c = tail_constant(n0)
    root = math.sqrt(a * b)
    delta_value = 2 * min(math.sqrt(a / b), math.sqrt(b / a)) * (root - 1 - c)
    seq = _a_sequence(n0)
    return GapCertificate(
        params=params,
        delta_value=delta_value,
        n0=n0,
        a_tail=seq[n0],
        f_norm_bound=f_norm_bound(n0),
        in_region=root > 1 + c,
    )
