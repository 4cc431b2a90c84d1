import numpy as np
import pytest

from ncho import NchoParams, SectorId

ACCEPTANCE_LINES = []


def charpoly_roots(d, e):
    """Eigenvalues as roots of det(T - x I), built by the three-term determinant recursion.

    Coefficients come from the recursion, np.roots gives starting points and a
    few Newton steps on the recursion-evaluated determinant polish them.
    """
    P = np.polynomial.Polynomial
    x = P([0.0, 1.0])
    p_prev, p = P([1.0]), P([d[0]]) - x
    for k in range(1, len(d)):
        p_prev, p = p, (d[k] - x) * p - e[k - 1] ** 2 * p_prev
    roots = np.sort(np.roots(p.coef[::-1]).real)

    def det_and_slope(t):
        f0, f1 = 1.0, d[0] - t
        g0, g1 = 0.0, -1.0
        for k in range(1, len(d)):
            f0, f1 = f1, (d[k] - t) * f1 - e[k - 1] ** 2 * f0
            g0, g1 = g1, -f0 + (d[k] - t) * g1 - e[k - 1] ** 2 * g0
        return f1, g1

    out = []
    for r in roots:
        for _ in range(20):
            f, g = det_and_slope(r)
            if g == 0:
                break
            step = f / g
            r -= step
            if abs(step) < 1e-15 * max(1.0, abs(r)):
                break
        out.append(r)
    return np.sort(out)


def dense_eigh(T):
    return np.linalg.eigh(T.to_dense())


@pytest.fixture
def p12():
    return NchoParams(1.0, 2.0)


@pytest.fixture
def plus1():
    return SectorId.parse("+1")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
