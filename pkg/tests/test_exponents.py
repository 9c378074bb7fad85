import math

import pytest
from hypothesis import assume, given, strategies as st

from mixmoments import exponents as ex
from mixmoments.errors import DomainError, PoleError, RegimeError

pos = st.floats(0, 200, allow_nan=False)


# --- P -----------------------------------------------------------------------

def test_p_examples():
    assert ex.p_exponent(7, 0, 10) == (0.0, "t>=0: t <= t_j <= 2T-t")
    assert ex.p_exponent(25, 0, 10).value == 10
    assert ex.p_exponent(20, 0, 10).value == 0


def test_p_small_t_j_branch_for_negative_t():
    # the direct form gives 4 = -2(t + t_j), twice the single-copy -t - t_j
    assert ex.p_exponent_direct(1, -3, 10) == 4
    assert ex.p_exponent(1, -3, 10) == (4, "t<=0: 0 <= t_j <= -t")


@given(pos, st.floats(-300, 300), pos)
def test_p_table_matches_direct(tj, t, T):
    assert ex.p_exponent(tj, t, T).value == pytest.approx(ex.p_exponent_direct(tj, t, T), abs=1e-9)


@given(pos, st.floats(-300, 300), pos, st.floats(0.01, 100))
def test_p_homogeneous(tj, t, T, lam):
    assert ex.p_exponent_direct(lam * tj, lam * t, lam * T) == pytest.approx(
        lam * ex.p_exponent_direct(tj, t, T), abs=1e-9 * (1 + lam) * (1 + tj + abs(t) + T))


@given(pos, st.floats(-300, 300), pos)
def test_p_nonnegative(tj, t, T):
    assert ex.p_exponent_direct(tj, t, T) >= -1e-9


def test_p_large_t_j_slope():
    a, b = ex.p_exponent(1000, 3, 10).value, ex.p_exponent(1001, 3, 10).value
    assert b - a == pytest.approx(2)


def test_p_domain():
    with pytest.raises(DomainError):
        ex.p_exponent(-1, 0, 1)


# --- Q -----------------------------------------------------------------------

def test_q_examples():
    assert ex.q_exponent(-1, 5, 10, 12) == (0.0, "middle: -t <= t_j <= 2T-t")
    assert ex.q_exponent_direct(-1, 5, 10, 12) == 0
    tphi = T = 10.0
    assert ex.q_exponent(0, 2 * tphi + 4, T, tphi) == (8.0, "large: t_j >= 2t_phi")
    assert ex.q_exponent(0, 0, 10, 10).value == 0


@st.composite
def q_inputs(draw):
    tphi = draw(st.floats(1.5, 150))
    T = draw(st.floats(0, tphi))
    t = draw(st.floats(-2 * tphi, T))
    tj = draw(st.floats(0, 500))
    return t, tj, T, tphi


@given(q_inputs())
def test_q_table_matches_direct(args):
    t, tj, T, tphi = args
    try:
        q = ex.q_exponent(t, tj, T, tphi).value
    except RegimeError:
        assume(False)
    assert q == pytest.approx(ex.q_exponent_direct(t, tj, T, tphi), abs=1e-9)
    assert q >= -1e-9


@given(q_inputs(), st.floats(0.01, 100))
def test_q_homogeneous(args, lam):
    t, tj, T, tphi = args
    scaled = ex.q_exponent_direct(lam * t, lam * tj, lam * T, lam * tphi)
    assert scaled == pytest.approx(lam * ex.q_exponent_direct(t, tj, T, tphi),
                                   abs=1e-9 * (1 + lam) * (1 + abs(t) + tj + T + tphi))


def test_q_regimes():
    assert ex.q_regime(3, 10, 12) == "large"
    assert ex.q_regime(-2, 10, 12) == "middle"
    assert ex.q_regime(-10, 10, 12) == "small"
    for bad in ((0, 20, 12), (11, 10, 12), (-30, 10, 12), (0, 0.5, 1.0)):
        with pytest.raises(RegimeError):
            ex.q_regime(*bad)


# --- H and Gamma weights -------------------------------------------------------

def test_h_weight_polynomial_regime():
    tj, t, T, L = 7.0, 0.0, 10.0, 3.0
    assert ex.p_exponent_direct(tj, t, T) == 0
    a = 0.5 + 1 / L
    poly = a * sum(math.log1p(abs(v)) for v in (t + tj, t - tj, t - 2 * T + tj, t - 2 * T - tj))
    poly += math.log1p(abs(t - T)) / L
    assert ex.h_weight(tj, t, T, L) == pytest.approx(math.exp(poly), rel=1e-14)


def test_h_weight_spot_value():
    # (t_j, t, T) = (5, 1, 10), log t_phi = 10, recomputed by hand: P = 0
    a = 0.6
    poly = a * (math.log(7) + math.log(5) + math.log(15) + math.log(25)) + math.log(10) / 10
    assert ex.h_weight(5, 1, 10, 10) == pytest.approx(math.exp(poly), rel=1e-14)


def test_h_weight_exponential_regime():
    tj, t = 200.0, 0.0
    a, b = 30.0, 60.0
    dp = ex.p_exponent_direct(tj, t, b) - ex.p_exponent_direct(tj, t, a)
    dlog = math.log(ex.h_weight(tj, t, b, 5.0)) - math.log(ex.h_weight(tj, t, a, 5.0))
    assert dlog == pytest.approx(-0.5 * math.pi * dp, abs=5)


def test_h_weight_domain():
    with pytest.raises(DomainError):
        ex.h_weight(1, 0, 1, 0.0)


def test_exact_weight_matches_stirling_assembly():
    for kind in ("H", "H1H2", "watson"):
        exact = ex.log_gamma_weight(40, 3, 25, 30, kind=kind)
        stir = ex.stirling_log_gamma_weight(40, 3, 25, 30, kind=kind)
        assert exact == pytest.approx(stir, abs=0.05)


def test_watson_weight_symmetric_in_t_j():
    a = ex.log_gamma_weight(10, 0, 20, 20, kind="watson")
    b = ex.log_gamma_weight(-10, 0, 20, 20, kind="watson")
    assert a == pytest.approx(b, rel=1e-13)


def test_watson_weight_stirling_spot():
    assert ex.log_gamma_weight(10, 0, 20, 20, kind="watson") == pytest.approx(
        ex.stirling_log_gamma_weight(10, 0, 20, 20, kind="watson"), abs=0.5)


def test_watson_weight_decays_beyond_threshold():
    T, tphi = 5.0, 6.0
    vals = [ex.log_gamma_weight(tj, 0, T, tphi, kind="watson") for tj in (25, 30, 40, 60)]
    assert all(b < a for a, b in zip(vals, vals[1:]))


def test_stirling_drift_bounded():
    base = (30.0, 2.0, 10.0, 12.0)
    assert ex.q_exponent_direct(base[1], base[0], base[2], base[3]) > 0

    def drift(lam):
        tj, t, T, tphi = (lam * v for v in base)
        return ex.log_gamma_weight(tj, t, T, tphi, kind="H1H2") + 0.5 * math.pi * ex.q_exponent_direct(t, tj, T, tphi)

    d0 = drift(1.0)
    for lam in (2, 4, 8):
        assert abs(drift(lam) - d0) <= 10 * math.log(lam)


def test_gamma_weight_squared_and_poles():
    lv = ex.log_gamma_weight(3, 1, 4, 5)
    assert ex.gamma_weight_exact(3, 1, 4, 5) == pytest.approx(math.exp(2 * lv))
    assert ex.gamma_weight_exact(3, 1, 4, 5, squared=False) == pytest.approx(math.exp(lv))
    with pytest.raises(PoleError):
        ex._check_poles([0j], 1e-8)
    with pytest.raises(DomainError):
        ex.log_gamma_weight(1, 1, 1, 2, kind="other")
