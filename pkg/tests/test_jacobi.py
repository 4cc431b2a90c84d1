import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from ncho import (
    SECTORS, Branch, NchoParams, Parity, SectorId, SymTridiag,
    build_truncation, diag_entry, offdiag_entry,
)

valid_params = st.tuples(
    st.floats(0.05, 20.0), st.floats(0.05, 20.0)
).filter(lambda ab: ab[0] * ab[1] > 1.0001).map(lambda ab: NchoParams(*ab))


def test_offdiag_examples():
    assert offdiag_entry(Parity.PLUS, 0) == pytest.approx(-1.4142135623, abs=1e-10)
    assert offdiag_entry(Parity.MINUS, 0) == pytest.approx(-2.4494897428, abs=1e-10)
    assert offdiag_entry(Parity.PLUS, 10) == pytest.approx(-math.sqrt(462), rel=1e-15)


def test_offdiag_huge_index_no_overflow():
    n = 2**62
    v = offdiag_entry(Parity.MINUS, n)
    assert math.isfinite(v) and v < 0
    assert v == pytest.approx(-2.0 * n, rel=1e-12)


def test_diag_examples():
    p = NchoParams(1, 2)
    assert diag_entry(SectorId.parse("+1"), p, 0) == 1
    assert diag_entry(SectorId.parse("+1"), p, 1) == 10
    assert diag_entry(SectorId.parse("-2"), p, 0) == 6


def test_truncation_examples():
    p = NchoParams(1, 2)
    T0 = build_truncation(SectorId.parse("+1"), p, 0)
    assert T0.diag.tolist() == [0.5] and T0.offdiag.size == 0
    T1 = build_truncation(SectorId.parse("+1"), p, 1)
    np.testing.assert_allclose(T1.diag, [0.5, 5.0])
    np.testing.assert_allclose(T1.offdiag, [-math.sqrt(2) / 2])
    T = build_truncation(SectorId.parse("-1"), NchoParams(3, 1), 1)
    np.testing.assert_allclose(T.diag, [4.5, 3.5])
    np.testing.assert_allclose(T.offdiag, [-math.sqrt(6) / 2])


def test_printed_matrix_pattern():
    # first rows of the +1 matrix: alpha, 5 beta, 9 alpha, 13 beta, 17 alpha; -sqrt(1*2), -sqrt(3*4), ...
    a, b = 1.3, 2.1
    T = build_truncation(SectorId.parse("+1"), NchoParams(a, b), 4)
    np.testing.assert_allclose(2 * T.diag, [a, 5 * b, 9 * a, 13 * b, 17 * a])
    np.testing.assert_allclose(2 * T.offdiag, [-math.sqrt(k * (k + 1)) for k in (1, 3, 5, 7)])


@pytest.mark.parametrize("bad", [(1, 1), (0.5, 1.5), (-1, -3), (0, 5), (float("nan"), 2)])
def test_params_rejected(bad):
    with pytest.raises(ValueError):
        NchoParams(*bad)


def test_degenerate_flag():
    assert NchoParams(2, 2).degenerate
    assert not NchoParams(1, 2).degenerate


def test_sector_labels():
    assert len(set(SECTORS)) == 4
    for s in SECTORS:
        assert SectorId.parse(str(s)) == s
    assert SectorId.parse("minus2") == SectorId(Parity.MINUS, Branch.TWO)
    with pytest.raises(ValueError):
        SectorId.parse("+3")


def test_symtridiag_shape_check():
    with pytest.raises(ValueError):
        SymTridiag([1.0, 2.0], [1.0, 2.0])


@given(valid_params, st.integers(0, 200), st.sampled_from([Parity.PLUS, Parity.MINUS]))
def test_branch_swap_symmetry(p, n, q):
    assert diag_entry(SectorId(q, Branch.ONE), p, n) == diag_entry(SectorId(q, Branch.TWO), p.swapped(), n)


@given(st.floats(1.01, 20.0), st.integers(0, 60), st.sampled_from([Parity.PLUS, Parity.MINUS]))
def test_equal_params_collapse_branches(t, N, q):
    p = NchoParams(t, t)
    T1 = build_truncation(SectorId(q, Branch.ONE), p, N)
    T2 = build_truncation(SectorId(q, Branch.TWO), p, N)
    assert np.array_equal(T1.diag, T2.diag) and np.array_equal(T1.offdiag, T2.offdiag)


@given(valid_params, st.integers(1, 80), st.sampled_from(SECTORS))
def test_offdiag_negative_and_diag_grows_by_parity(p, N, s):
    T = build_truncation(s, p, N)
    assert (T.offdiag < 0).all()
    # b(n+2) > b(n); consecutive entries need not increase (alpha=1, beta=2: 10 > 9)
    assert (T.diag[2:] > T.diag[:-2]).all()


def test_consecutive_diag_not_monotone():
    T = build_truncation(SectorId.parse("+1"), NchoParams(1, 2), 2)
    assert T.diag[1] > T.diag[2]
