import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ncho import (
    SECTORS, Branch, NchoParams, Parity, SectorId, IndexOutOfRange, NotCertifiable,
    build_truncation, delta, eigenvalue, enclose, enclose_auto, lambda_cap,
)

# 40-digit eigenvalues of the N=80 truncation (converged to all shown digits
# between N=40 and N=80), alpha=1, beta=2
TRUE_PLUS1 = [0.36691786000429581003, 2.4329137806505714903, 4.7148917758376111462, 6.2722828149163485315]
TRUE_MINUS1 = [1.1571202966975185383, 3.1282845462007903193, 5.4274692716376440121, 7.7012468958221359739]

valid_params = st.tuples(st.floats(0.3, 6.0), st.floats(0.3, 6.0)).filter(
    lambda ab: ab[0] * ab[1] > 1.05).map(lambda ab: NchoParams(*ab))


def test_cap_examples():
    p = NchoParams(1, 2)
    assert lambda_cap(SectorId.parse("+1"), p, 10) == 5.875
    assert lambda_cap(SectorId.parse("+2"), NchoParams(2, 1), 10) == 5.875
    assert lambda_cap(SectorId.parse("-1"), p, 10) == 6.125


def test_cap_odd_N_swaps_roles():
    p = NchoParams(1, 2)
    # odd N: min{beta^-1 (2N + 3/2), alpha^-1 (2N + 7/2)}
    assert lambda_cap(SectorId.parse("+1"), p, 11) == 0.5 * min(23.5 / 2, 25.5 / 1)
    assert lambda_cap(SectorId.parse("-1"), p, 11) == 0.5 * min(24.5 / 2, 26.5 / 1)


@pytest.mark.parametrize("s", SECTORS)
def test_cap_grows_linearly(s):
    p = NchoParams(0.8, 3.1)
    ratios = [lambda_cap(s, p, N) / N for N in (2**k for k in range(4, 16))]
    assert min(ratios) > 0
    assert max(ratios) / min(ratios) < 1.5


def test_delta_examples():
    p = NchoParams(1, 2)
    assert delta(SectorId.parse("+1"), p, 10) == pytest.approx(0.5 * math.sqrt(462), rel=1e-15)
    assert delta(SectorId.parse("+1"), p, 1) == pytest.approx(2 * math.sqrt(3), rel=1e-15)
    assert delta(SectorId.parse("+2"), NchoParams(2, 1), 10) == pytest.approx(0.5 * math.sqrt(462), rel=1e-15)


def test_enclose_n10_matches_dense_corrections(p12, plus1):
    T = build_truncation(plus1, p12, 10)
    dl = delta(plus1, p12, 10)
    lo_ev = np.linalg.eigvalsh(T.with_corner_shift(-dl).to_dense())
    hi_ev = np.linalg.eigvalsh(T.with_corner_shift(dl).to_dense())
    for n in range(3):
        e = enclose(plus1, p12, n, 10, 1e-12)
        assert e.certified and e.cap == 5.875
        assert e.lower == pytest.approx(lo_ev[n], abs=1e-11)
        assert e.upper == pytest.approx(hi_ev[n], abs=1e-11)
        assert e.lower <= TRUE_PLUS1[n] <= e.upper


def test_enclose_n10_frozen_values(p12, plus1):
    e0 = enclose(plus1, p12, 0, 10, 1e-12)
    assert e0.lower == pytest.approx(0.366917815827, abs=1e-11)
    assert e0.upper == pytest.approx(0.366917877998, abs=1e-11)
    e2 = enclose(plus1, p12, 2, 10, 1e-12)
    assert e2.lower == pytest.approx(4.647039942916, abs=1e-10)
    assert e2.upper == pytest.approx(4.721688318571, abs=1e-10)


def test_enclose_refuses_n3(p12, plus1):
    e = enclose(plus1, p12, 3, 10, 1e-6)
    assert not e.certified
    assert e.upper > e.cap


def test_enclose_index_checked(p12, plus1):
    with pytest.raises(IndexOutOfRange):
        enclose(plus1, p12, 11, 10)


def test_enclose_auto_ground(p12, plus1):
    e = enclose_auto(plus1, p12, 0, 1e-8)
    assert e.certified and e.width <= 1e-8
    assert e.lower <= TRUE_PLUS1[0] <= e.upper


def test_enclose_auto_n3(p12, plus1):
    e = enclose_auto(plus1, p12, 3, 1e-4, N_max=200)
    assert e.certified and e.width <= 1e-4
    assert e.lower <= TRUE_PLUS1[3] <= e.upper
    f = enclose(plus1, p12, 3, 40)
    assert f.certified and f.intersects(e)


@pytest.mark.parametrize("s", SECTORS)
def test_enclose_auto_vacuous_goal(s):
    p = NchoParams(1.3, 2.2)
    e = enclose_auto(s, p, 0, 1e308)
    assert e.N == 16 and e.certified


def test_enclose_auto_not_certifiable(p12, plus1):
    with pytest.raises(NotCertifiable) as info:
        enclose_auto(plus1, p12, 3, 1e-4, N_max=10)
    assert info.value.best is None
    with pytest.raises(NotCertifiable) as info:
        enclose_auto(plus1, p12, 0, 1e-30, N_max=64)
    assert info.value.best is not None and info.value.best.certified


def test_minus_sector_truth(p12):
    for n in range(4):
        e = enclose_auto(SectorId.parse("-1"), p12, n, 1e-9)
        assert e.lower <= TRUE_MINUS1[n] <= e.upper


@pytest.mark.parametrize("t", [1.2, 2.0, 3.5])
def test_equal_params_closed_form(t):
    # alpha == beta: lambda_{+p}(k) = s (2k + 1/2), lambda_{-p}(k) = s (2k + 3/2), s = sqrt(t^2 - 1)
    p = NchoParams(t, t)
    s = math.sqrt(t * t - 1)
    for sec in SECTORS:
        off = 0.5 if sec.parity is Parity.PLUS else 1.5
        for k in range(3):
            e = enclose_auto(sec, p, k, 1e-9)
            exact = s * (2 * k + off)
            assert e.lower - 1e-12 <= exact <= e.upper + 1e-12


@settings(max_examples=40, deadline=None)
@given(valid_params, st.sampled_from(SECTORS), st.integers(0, 5), st.integers(6, 40))
def test_minmax_ordering(p, s, n, N):
    tol = 1e-10
    T = build_truncation(s, p, N)
    dl = delta(s, p, N)
    mid = eigenvalue(T, n, tol).mid
    lo = eigenvalue(T.with_corner_shift(-dl), n, tol).mid
    hi = eigenvalue(T.with_corner_shift(dl), n, tol).mid
    assert lo <= mid + 2 * tol and mid <= hi + 2 * tol


@settings(max_examples=25, deadline=None)
@given(valid_params, st.sampled_from(SECTORS), st.integers(0, 3), st.sampled_from([12, 20, 32, 50]))
def test_tightening_with_doubled_N(p, s, n, N):
    tol = 1e-12
    a = enclose(s, p, n, N, tol)
    b = enclose(s, p, n, 2 * N, tol)
    if a.certified and b.certified:
        assert a.intersects(b)
        assert b.width <= a.width + 2 * tol


@pytest.mark.parametrize("q", [Parity.PLUS, Parity.MINUS])
def test_degenerate_branches_coincide(q):
    p = NchoParams(1.7, 1.7)
    for n in range(3):
        e1 = enclose(SectorId(q, Branch.ONE), p, n, 30, 1e-12)
        e2 = enclose(SectorId(q, Branch.TWO), p, n, 30, 1e-12)
        assert abs(e1.lower - e2.lower) <= 2e-12 and abs(e1.upper - e2.upper) <= 2e-12


def test_reported_interval_contains_bracket(p12, plus1):
    # outward nudge: reported ends lie strictly outside the raw bisection ends
    T = build_truncation(plus1, p12, 20)
    dl = delta(plus1, p12, 20)
    e = enclose(plus1, p12, 1, 20, 1e-12)
    assert e.upper > eigenvalue(T.with_corner_shift(dl), 1, 1e-12).hi
    assert e.lower < eigenvalue(T.with_corner_shift(-dl), 1, 1e-12).lo
