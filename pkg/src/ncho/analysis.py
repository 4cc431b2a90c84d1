"""Whole-spectrum checks built on sector enclosures.

The spectrum of Q is the union of the four sector spectra.  The functions
here merge certified sector enclosures, trace single eigenvalues over
parameter grids and test ordering statements (even ground state, simplicity,
odd/even no-crossing, the band inequality for E_{2n-2}, E_{2n-1}).
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial
from typing import Iterable, Sequence

from .eigensolve import eigenvalue, eigenvector
from .enclosure import DEFAULT_N_MAX, Enclosure, NotCertifiable, enclose_auto
from .gapcert import gap_lower_bound
from .jacobi import SECTORS, Branch, NchoParams, Parity, SectorId, build_truncation

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Interval:
    lower: float
    upper: float

    @property
    def mid(self) -> float:
        return 0.5 * (self.lower + self.upper)

    @property
    def width(self) -> float:
        return self.upper - self.lower

    def overlaps(self, other: Interval) -> bool:
        return self.lower <= other.upper and other.lower <= self.upper


@dataclass(frozen=True)
class SpectrumLine:
    value_lower: float
    value_upper: float
    sector: SectorId
    sector_index: int
    global_rank: int
    # intervals of this line and some other line intersect; order not proven
    overlap: bool = False

    @property
    def mid(self) -> float:
        return 0.5 * (self.value_lower + self.value_upper)


def _sector_enclosures(params, sector, count, width_goal, N_max):
    return [enclose_auto(sector, params, k, width_goal, N_max) for k in range(count)]


def merged_spectrum(params: NchoParams, count: int, width_goal: float = 1e-8,
                    N_max: int = DEFAULT_N_MAX) -> list[SpectrumLine]:
    """The lowest ``count`` eigenvalues of Q with their sector of origin.

    Each sector starts with indices ``0..ceil(count/4)+2``.  A sector is
    extended while its highest computed eigenvalue could still fall below
    the ``count``-th merged line, so the returned list is complete.  Lines
    are ranked by midpoint (ties by sector order +1, +2, -1, -2); any line
    whose interval meets another's is marked ``overlap``.
    """
    if count < 1:
        raise ValueError("count must be positive")
    per = math.ceil(count / 4) + 3
    encs = {s: _sector_enclosures(params, s, per, width_goal, N_max) for s in SECTORS}
    while True:
        pool = sorted((e for lst in encs.values() for e in lst),
                      key=lambda e: (e.mid, e.sector.sort_key(), e.n))
        threshold = sorted(e.upper for e in pool)[count - 1]
        short = [s for s in SECTORS if encs[s][-1].lower <= threshold]
        if not short:
            break
        for s in short:
            encs[s].append(enclose_auto(s, params, len(encs[s]), width_goal, N_max))
    # overlaps are judged among everything computed, not only the kept lines
    lines = []
    for rank, e in enumerate(pool[:count]):
        hit = any(o is not e and o.lower <= e.upper and e.lower <= o.upper for o in pool)
        lines.append(SpectrumLine(e.lower, e.upper, e.sector, e.n, rank, hit))
    return lines


def rank_bounds(lines: Sequence[SpectrumLine], rank: int) -> Interval:
    """Interval guaranteed to contain the eigenvalue of global rank ``rank``.

    Uses order statistics of the endpoints, so it stays valid when
    overlapping lines make the ranking itself uncertain.
    """
    lo = sorted(l.value_lower for l in lines)[rank]
    hi = sorted(l.value_upper for l in lines)[rank]
    return Interval(lo, hi)


@dataclass(frozen=True)
class GroundStateReport:
    E_plus: Interval
    E_minus: Interval
    simple: bool
    even: bool
    plus_branches: tuple[Enclosure, Enclosure]
    minus_branches: tuple[Enclosure, Enclosure]


def _interval_min(a: Enclosure, b: Enclosure) -> Interval:
    return Interval(min(a.lower, b.lower), min(a.upper, b.upper))


def ground_state_report(params: NchoParams, width_goal: float = 1e-8,
                        N_max: int = DEFAULT_N_MAX) -> GroundStateReport:
    """Is the lowest eigenvalue of Q even (from a Plus sector) and simple?

    ``even`` means the Plus ground interval lies strictly below the Minus
    one.  ``simple`` additionally needs the two Plus-branch ground intervals
    to be disjoint, which fails at alpha == beta where they coincide.
    """
    enc = {s: enclose_auto(s, params, 0, width_goal, N_max) for s in SECTORS}
    p1, p2, m1, m2 = (enc[s] for s in SECTORS)
    e_plus = _interval_min(p1, p2)
    e_minus = _interval_min(m1, m2)
    even = e_plus.upper < e_minus.lower
    disjoint = p1.upper < p2.lower or p2.upper < p1.lower
    return GroundStateReport(e_plus, e_minus, even and disjoint, even, (p1, p2), (m1, m2))


def iw07_band(params: NchoParams, n: int) -> Interval:
    a, b = params.alpha, params.beta
    s = math.sqrt((a * b - 1) / (a * b))
    return Interval((n - 0.5) * min(a, b) * s, (n - 0.5) * max(a, b) * s)


def iw07_check(params: NchoParams, n: int, width_goal: float = 1e-8,
               N_max: int = DEFAULT_N_MAX) -> bool:
    """Check that the eigenvalues of 0-based rank 2n-2 and 2n-1 lie in the band.

    The band is ``(n - 1/2) * [min, max](alpha, beta) * sqrt((ab - 1)/ab)``.
    Rank intervals come from :func:`rank_bounds`; the band is widened by
    ``width_goal`` on each side so that eigenvalues sitting exactly on a band
    edge (alpha == beta) are accepted at the resolution of the enclosures.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    lines = merged_spectrum(params, 2 * n, width_goal, N_max)
    band = iw07_band(params, n)
    for rank in (2 * n - 2, 2 * n - 1):
        r = rank_bounds(lines, rank)
        if not (band.lower - width_goal <= r.lower and r.upper <= band.upper + width_goal):
            return False
    return True


def positivity_check(sector: SectorId, params: NchoParams, N: int) -> bool:
    """All components of the truncated ground eigenvector are strictly positive."""
    if N < 2:
        raise ValueError("N must be at least 2")
    T = build_truncation(sector, params, N)
    lam = eigenvalue(T, 0).mid
    v = eigenvector(T, lam)
    return bool((v.components > 0).all())


@dataclass(frozen=True)
class CurvePoint:
    params: NchoParams
    enclosure: Enclosure

    @property
    def mid(self) -> float:
        return self.enclosure.mid


@dataclass
class CurveTrace:
    """Certified points of one eigenvalue-curve plus the grid points that failed."""

    points: list[CurvePoint] = field(default_factory=list)
    dropped: list[NchoParams] = field(default_factory=list)

    def __iter__(self):
        return iter(self.points)

    def __len__(self):
        return len(self.points)

    def __getitem__(self, i):
        return self.points[i]


def _try_enclose(sector, n, width_goal, N_max, params, N_start=None):
    try:
        return enclose_auto(sector, params, n, width_goal, N_max, N_start)
    except NotCertifiable as exc:
        log.warning("dropping %s: %s", params, exc)
        return None


def trace_curve(sector: SectorId, n: int, grid: Iterable[NchoParams], width_goal: float = 1e-8,
                N_max: int = DEFAULT_N_MAX, workers: int = 1) -> CurveTrace:
    """Enclosures of the n-th eigenvalue of ``sector`` along ``grid``, in grid order.

    With ``workers == 1`` each point starts at the truncation size that
    certified the previous point.  With more workers the points run in
    separate processes, each from the default start.
    """
    grid = list(grid)
    if not grid:
        raise ValueError("grid must not be empty")
    if workers > 1:
        job = partial(_try_enclose, sector, n, width_goal, N_max)
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(job, grid))
    else:
        results = []
        N_start = None
        for p in grid:
            enc = _try_enclose(sector, n, width_goal, N_max, p, N_start)
            if enc is not None:
                N_start = enc.N
            results.append(enc)
    trace = CurveTrace()
    for p, enc in zip(grid, results):
        if enc is None:
            trace.dropped.append(p)
        else:
            trace.points.append(CurvePoint(p, enc))
    return trace


@dataclass(frozen=True)
class CrossingRow:
    params: NchoParams
    gap_interval: Interval | None
    certified_no_crossing: bool
    delta: float
    in_region: bool
    minus: Enclosure | None = None
    plus: Enclosure | None = None


def crossing_report(branch: Branch, n: int, grid: Iterable[NchoParams], width_goal: float = 1e-8,
                    N_max: int = DEFAULT_N_MAX) -> list[CrossingRow]:
    """Certified gap between lambda_{-p}(n) and lambda_{+p}(n) at each grid point."""
    plus = SectorId(Parity.PLUS, branch)
    minus = SectorId(Parity.MINUS, branch)
    rows = []
    for p in grid:
        cert = gap_lower_bound(p)
        ep = _try_enclose(plus, n, width_goal, N_max, p)
        em = _try_enclose(minus, n, width_goal, N_max, p)
        if ep is None or em is None:
            rows.append(CrossingRow(p, None, False, cert.delta_value, cert.in_region, em, ep))
            continue
        gap = Interval(em.lower - ep.upper, em.upper - ep.lower)
        rows.append(CrossingRow(p, gap, gap.lower > 0, cert.delta_value, cert.in_region, em, ep))
    return rows
