"""Jacobi-matrix form of the four oscillator sectors.

Each sector (parity q = +/-, branch p = 1/2) is the semi-infinite matrix
``0.5 * J(a_q, b_qp)`` where ``J(a, b)`` has diagonal ``b`` and off-diagonal
``a``.  The entry generators below return the unhalved ``a`` and ``b``; the
factor 1/2 is applied only in :func:`build_truncation`.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np


class Parity(enum.Enum):
    PLUS = "+"
    MINUS = "-"


class Branch(enum.Enum):
    ONE = 1
    TWO = 2


@dataclass(frozen=True)
class NchoParams:
    """Oscillator parameters; requires alpha > 0, beta > 0 and alpha*beta > 1."""

    alpha: float
    beta: float

    def __post_init__(self):
        a, b = float(self.alpha), float(self.beta)
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "beta", b)
        if not (math.isfinite(a) and math.isfinite(b)):
            raise ValueError(f"parameters must be finite, got alpha={a}, beta={b}")
        if a <= 0 or b <= 0:
            raise ValueError(f"alpha and beta must be positive, got alpha={a}, beta={b}")
        if a * b <= 1:
            raise ValueError(f"alpha*beta must exceed 1, got {a * b}")

    @property
    def degenerate(self) -> bool:
        """True when alpha == beta; the two branches then coincide."""
        return self.alpha == self.beta

    def swapped(self) -> NchoParams:
        return NchoParams(self.beta, self.alpha)


@dataclass(frozen=True)
class SectorId:
    parity: Parity
    branch: Branch

    def sort_key(self) -> int:
        # +1, +2, -1, -2
        return (0 if self.parity is Parity.PLUS else 2) + self.branch.value - 1

    def __str__(self) -> str:
        return f"{self.parity.value}{self.branch.value}"

    @classmethod
    def parse(cls, text: str) -> SectorId:
        """Parse labels such as ``"+1"``, ``"-2"``, ``"plus2"``."""
        t = text.strip().lower()
        for prefix, parity in (("+", Parity.PLUS), ("plus", Parity.PLUS),
                               ("p", Parity.PLUS), ("-", Parity.MINUS),
                               ("minus", Parity.MINUS), ("m", Parity.MINUS)):
            rest = t[len(prefix):]
            if t.startswith(prefix) and rest in ("1", "2"):
                return cls(parity, Branch(int(rest)))
        raise ValueError(f"unknown sector label {text!r}; expected one of +1, +2, -1, -2")


SECTORS = tuple(SectorId(q, p) for q in (Parity.PLUS, Parity.MINUS) for p in (Branch.ONE, Branch.TWO))


@dataclass(frozen=True)
class SymTridiag:
    """Finite symmetric tridiagonal matrix given by its two bands."""

    diag: np.ndarray
    offdiag: np.ndarray

    def __post_init__(self):
        d = np.asarray(self.diag, dtype=float)
        e = np.asarray(self.offdiag, dtype=float)
        if d.ndim != 1 or e.ndim != 1:
            raise ValueError("diag and offdiag must be one-dimensional")
        if d.size == 0:
            raise ValueError("matrix must have dimension >= 1")
        if e.size != d.size - 1:
            raise ValueError(f"offdiag length {e.size} does not match diag length {d.size}")
        object.__setattr__(self, "diag", d)
        object.__setattr__(self, "offdiag", e)

    @property
    def dim(self) -> int:
        return self.diag.size

    def with_corner_shift(self, shift: float) -> SymTridiag:
        """Copy with ``shift`` added to the last diagonal entry."""
        d = self.diag.copy()
        d[-1] += shift
        return SymTridiag(d, self.offdiag.copy())

    def to_dense(self) -> np.ndarray:
        return np.diag(self.diag) + np.diag(self.offdiag, 1) + np.diag(self.offdiag, -1)


def offdiag_entry(parity: Parity, n: int) -> float:
    """Off-diagonal sequence a_+(n) = -sqrt((2n+1)(2n+2)), a_-(n) = -sqrt((2n+2)(2n+3))."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    m = float(n)
    if parity is Parity.PLUS:
        return -math.sqrt((2 * m + 1) * (2 * m + 2))
    return -math.sqrt((2 * m + 2) * (2 * m + 3))


def diag_entry(sector: SectorId, params: NchoParams, n: int) -> float:
    """Diagonal sequence b_qp(n), before the global factor 1/2.

    Parity Plus uses 1 + 4n, Minus uses 3 + 4n; branch 1 multiplies by alpha
    on even n and beta on odd n, branch 2 the other way round.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    base = (1.0 if sector.parity is Parity.PLUS else 3.0) + 4.0 * n
    even_coef, odd_coef = params.alpha, params.beta
    if sector.branch is Branch.TWO:
        even_coef, odd_coef = odd_coef, even_coef
    return (even_coef if n % 2 == 0 else odd_coef) * base


def build_truncation(sector: SectorId, params: NchoParams, N: int) -> SymTridiag:
    """The (N+1)-dimensional truncation 0.5 * J(a_q^N, b_qp^N)."""
    if N < 0:
        raise ValueError("N must be nonnegative")
    diag = np.array([diag_entry(sector, params, i) for i in range(N + 1)]) / 2
    off = np.array([offdiag_entry(sector.parity, i) for i in range(N)]) / 2
    return SymTridiag(diag, off)
