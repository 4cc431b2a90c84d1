"""Certified spectral toolkit for non-commutative harmonic oscillators.

The oscillator Q(alpha, beta) splits into four sectors, each unitarily
equivalent to a semi-infinite Jacobi matrix.  This package builds finite
truncations of those matrices, brackets their eigenvalues with Sturm
bisection, turns the brackets into two-sided enclosures of the true sector
eigenvalues, and checks gap and ordering statements about the spectrum.
"""

from .jacobi import NchoParams, Parity, Branch, SectorId, SymTridiag, SECTORS
from .jacobi import offdiag_entry, diag_entry, build_truncation
from .eigensolve import (
    EigenBracket, EigVector, IndexOutOfRange, NoConvergence,
    sturm_count, eigenvalue, gershgorin_bounds, eigenvector,
    forward_recurrence_check,
)
from .enclosure import Enclosure, NotCertifiable, lambda_cap, delta, enclose, enclose_auto
from .gapcert import (
    GapCertificate, RecursionCheckFailed,
    gamma, a_sequence, f_norm_bound, gap_lower_bound,
)

__version__ = "0.1.0"
