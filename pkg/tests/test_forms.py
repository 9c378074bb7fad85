import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from mixmoments import forms, quadrature, specfun
from mixmoments.errors import (
    DomainError,
    InsufficientCoefficientsError,
    MissingInputError,
    PoleError,
    UnsupportedParityError,
    ValidationError,
)
from oracles import eisenstein_lattice

MATRICES = [(1, 1, 0, 1), (0, -1, 1, 0), (2, 1, 1, 1), (1, 0, 3, 1), (3, 2, 4, 3), (5, -2, -2, 1)]


# --- points and reduction ----------------------------------------------------

def test_point_rejects_lower_half_plane():
    with pytest.raises(DomainError):
        forms.UpperHalfPoint(0.0, -1.0)


@pytest.mark.parametrize("z, w", [((0.0, 2.0), (0.0, 2.0)), ((1.3, 2.0), (0.3, 2.0)), ((0.0, 0.5), (0.0, 2.0))])
def test_reduction_examples(z, w):
    r = forms.reduce_to_fundamental_domain(forms.UpperHalfPoint(*z))
    assert (r.x, r.y) == pytest.approx(w, abs=1e-12)


@given(st.floats(-50, 50), st.floats(1e-3, 20))
def test_reduction_lands_in_domain(x, y):
    r = forms.reduce_to_fundamental_domain(complex(x, y))
    assert abs(r.real) <= 0.5 + 1e-12
    assert abs(r) >= 1 - 1e-12


def test_apply_modular_requires_unit_determinant():
    with pytest.raises(DomainError):
        forms.apply_modular((2, 0, 0, 1), 1j)


# --- Eisenstein series -------------------------------------------------------

def test_eisenstein_against_lattice_sum():
    val = forms.eisenstein_eval((0.0, 2.0), 1.5)
    ref = eisenstein_lattice(0.0, 2.0, 1.5)
    assert abs(val - ref) <= 1e-8 * abs(ref)


@pytest.mark.slow
def test_eisenstein_lattice_grid():
    rng = np.random.default_rng(5)
    worst = 0.0
    for _ in range(50):
        s = rng.uniform(1.2, 3.0) + 1j * rng.uniform(-3, 3)
        x, y = rng.uniform(-0.5, 0.5), rng.uniform(0.87, 2.5)
        ref = eisenstein_lattice(x, y, s)
        worst = max(worst, abs(forms.eisenstein_eval((x, y), s) - ref) / abs(ref))
    assert worst <= 1e-8


def test_eisenstein_cusp_decay():
    s = 0.5 + 5j
    diff = forms.eisenstein_eval((0.0, 50.0), s) - forms.constant_term(50.0, 5.0)
    assert abs(diff) <= 1e-12


def test_eisenstein_decay_rate_between_heights():
    s = 0.5 + 3j
    r20 = abs(forms.eisenstein_eval((0.2, 20.0), s) - forms.constant_term_s(20.0, s))
    r40 = abs(forms.eisenstein_eval((0.2, 40.0), s) - forms.constant_term_s(40.0, s))
    # exponential decay beats y^{-10}; the y = 40 residue is at rounding level
    assert r40 <= max(r20 * 2.0**-10, 1e-13)


def test_eisenstein_automorphy_example():
    z = 0.25 + 1.1j
    w = forms.reduce_to_fundamental_domain(z)
    s = 0.5 + 4j
    assert abs(forms.eisenstein_eval(z, s) - forms.eisenstein_eval(w, s)) <= 1e-10


def test_eisenstein_automorphy_within_propagated_error():
    rng = np.random.default_rng(7)
    x = rng.uniform(-0.5, 0.5, 1000)
    y = rng.uniform(1.0, 3.0, 1000)
    z = x + 1j * y
    s = 0.5 + 6j
    images = np.empty_like(z)
    for k, m in enumerate(rng.integers(0, len(MATRICES), 1000)):
        images[k] = forms.apply_modular(MATRICES[m], z[k])
    keep = images.imag > 0.6
    a, ea = forms.eisenstein_eval(z[keep], s, with_error=True)
    xr, yr = forms.reduce_points(images[keep].real, images[keep].imag)
    b, eb = forms.eisenstein_eval((xr, yr), s, with_error=True)
    assert np.all(np.abs(a - b) <= ea + eb)


@given(st.floats(-0.5, 0.5), st.floats(0.9, 3.0), st.floats(0.5, 20))
def test_eisenstein_conjugation(x, y, T):
    a = forms.eisenstein_eval((x, y), 0.5 + 1j * T)
    b = forms.eisenstein_eval((x, y), 0.5 - 1j * T)
    assert abs(np.conj(a) - b) <= 1e-9 * max(1.0, abs(a))


def test_eisenstein_functional_equation():
    s = 0.7 + 2j
    z = (0.1, 1.3)
    lhs = specfun.xi_completed(2 * s) * forms.eisenstein_eval(z, s)
    rhs = specfun.xi_completed(2 * (1 - s)) * forms.eisenstein_eval(z, 1 - s)
    assert abs(lhs - rhs) <= 1e-10 * abs(lhs)


def test_eisenstein_poles():
    for s in (0, 1, 0.5):
        with pytest.raises(PoleError):
            forms.eisenstein_eval((0, 1.2), s)


# --- constant term -----------------------------------------------------------

def test_constant_term_at_one():
    T = 3.3
    ratio = specfun.xi_completed(1 - 2j * T) / specfun.xi_completed(1 + 2j * T)
    assert abs(forms.constant_term(1.0, T) - (1 + ratio)) <= 1e-12


@given(st.floats(0.1, 100), st.floats(0.05, 300))
def test_constant_term_bound(y, T):
    assert abs(forms.constant_term(y, T)) <= 2 * math.sqrt(y) * (1 + 1e-12)


def test_constant_term_cusp_limit():
    T = 3.0
    e40 = forms.eisenstein_eval((0.0, 40.0), 0.5 + 1j * T)
    assert abs(forms.constant_term(40.0, T) - e40) <= 1e-12
    # same formula at y = 4 agrees with the Fourier series once the Bessel part is removed
    full = forms.eisenstein_eval((0.25, 4.0), 0.5 + 1j * T)
    assert abs(forms.constant_term(4.0, T) - full) < 1e-3


def test_constant_term_degenerate_at_zero():
    with pytest.raises(PoleError):
        forms.constant_term(2.0, 0.0)


# --- truncated and normalized --------------------------------------------------

def test_truncated_seam():
    A, T = 2.0, 4.0
    spec = forms.EisensteinSpec(T, truncation_A=A)
    at = forms.truncated_eisenstein_eval((0.1, A), spec)
    above = forms.truncated_eisenstein_eval((0.1, A * (1 + 1e-12)), spec)
    assert at == pytest.approx(forms.eisenstein_eval((0.1, A), 0.5 + 1j * T))
    assert abs(at - above) == pytest.approx(abs(forms.constant_term(A, T)), rel=1e-8)


def test_truncated_above_and_below():
    A, T = 4.0, 10.0
    spec = forms.EisensteinSpec(T, truncation_A=A)
    assert abs(forms.truncated_eisenstein_eval((0.3, 2 * A), spec)) < 1e-12
    below = forms.truncated_eisenstein_eval((0.3, A / 2 + 0.3), spec)
    assert below == forms.eisenstein_eval((0.3, A / 2 + 0.3), 0.5 + 1j * T)


def test_truncated_requires_height():
    with pytest.raises(MissingInputError):
        forms.truncated_eisenstein_eval((0, 1), forms.EisensteinSpec(3.0))
    with pytest.raises(DomainError):
        forms.EisensteinSpec(3.0, truncation_A=1.0)


@pytest.mark.parametrize("T", [1.0, math.exp(4), 40.0])
def test_normalization_factor(T):
    c = forms.normalization_factor(T)
    assert abs(c) == pytest.approx(math.sqrt((math.pi / 3) / math.log(0.25 + T * T)), rel=1e-14)
    z = (0.2, 1.4)
    ratio = forms.normalized_eisenstein_eval(z, T) / forms.eisenstein_eval(z, 0.5 + 1j * T)
    assert ratio == pytest.approx(c, rel=1e-13)


def test_normalization_requires_T_at_least_one():
    with pytest.raises(DomainError):
        forms.normalization_factor(0.5)


# --- Maass forms -------------------------------------------------------------

def test_maass_value_is_real(first_form):
    val, err = forms.maass_eval(first_form, (0.1, 1.3))
    assert isinstance(float(val), float) and np.isrealobj(val)
    assert err < 1e-8


def test_maass_cusp_decay(first_form):
    val, _ = forms.maass_eval(first_form, (0.0, 50.0))
    assert abs(val) <= 1e-10


def test_maass_automorphy(fixture_records):
    rng = np.random.default_rng(9)
    for rec in fixture_records:
        z = rng.uniform(-0.5, 0.5, 20) + 1j * rng.uniform(1.0, 2.0, 20)
        w = np.array([forms.apply_modular(MATRICES[k % len(MATRICES)], v) for k, v in enumerate(z)])
        keep = w.imag > 0.5
        xr, yr = forms.reduce_points(w[keep].real, w[keep].imag)
        a, _ = forms.maass_eval(rec, z[keep])
        b, _ = forms.maass_eval(rec, (xr, yr))
        assert np.max(np.abs(a - b)) <= 1e-6


def test_maass_even_symmetry(first_form):
    a, _ = forms.maass_eval(first_form, (0.23, 1.1))
    b, _ = forms.maass_eval(first_form, (-0.23, 1.1))
    assert a == pytest.approx(b, abs=1e-14)


@pytest.mark.slow
def test_maass_unit_norm(first_form):
    cfg = quadrature.QuadratureConfig(nx=32, ny=16, height_cutoff=6.0)
    norm = quadrature.integrate_fundamental(lambda x, y: forms.maass_eval(first_form, (x, y))[0] ** 2, cfg)
    assert norm.real == pytest.approx(1.0, rel=0.05)


def test_maass_errors(first_form):
    from dataclasses import replace

    with pytest.raises(InsufficientCoefficientsError):
        forms.maass_eval(first_form, (0.0, 0.002))
    with pytest.raises(MissingInputError):
        forms.maass_eval(replace(first_form, sym2_L_value=None), (0, 1.2))
    with pytest.raises(UnsupportedParityError):
        forms.maass_eval(replace(first_form, parity="odd"), (0, 1.2))


def test_record_invariants():
    with pytest.raises(ValidationError):
        forms.MaassFormRecord("bad", 10.0, [2.0, 0.5])
    rec = forms.MaassFormRecord("soft", 10.0, [1.0, 5.0, 0.1], source="synthetic")
    assert rec.ramanujan_flag
    with pytest.raises(ValueError):
        rec.coefficients[0] = 3.0
