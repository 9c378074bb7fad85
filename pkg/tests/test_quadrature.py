import math

import numpy as np
import pytest

from mixmoments import forms, formulas, quadrature
from mixmoments.errors import DomainError, InvalidGrowthError
from mixmoments.quadrature import GrowthTerm, QuadratureConfig


def test_volume_of_fundamental_domain():
    cfg = QuadratureConfig(height_cutoff=1e4)
    res = quadrature.integrate_fundamental(lambda x, y: np.ones_like(x), cfg)
    # the closed-form tail 1/Y is not included, so compare against pi/3 - 1/Y
    assert res.real + 1e-4 == pytest.approx(math.pi / 3, abs=1e-6)


def test_volume_with_exact_tail():
    res = quadrature.integrate_fundamental(lambda x, y: np.ones_like(x), QuadratureConfig(),
                                           tail=lambda Y: 1.0 / Y)
    assert res.real == pytest.approx(math.pi / 3, abs=1e-10)


def test_cusp_region_measure():
    A = 2.5
    res = quadrature.integrate_fundamental(lambda x, y: (y > A).astype(float), QuadratureConfig(height_cutoff=1e3),
                                           tail=lambda Y: 1.0 / Y, breakpoints=(A,))
    assert res.real == pytest.approx(1 / A, abs=1e-8)


def test_inner_products_with_constants(first_form):
    one = lambda x, y: np.ones_like(x)  # noqa: E731
    assert quadrature.inner_product(one, one, tail=lambda Y: 1 / Y).real == pytest.approx(math.pi / 3, abs=1e-10)
    phi = lambda x, y: forms.maass_eval(first_form, (x, y))[0]  # noqa: E731
    cfg = QuadratureConfig(height_cutoff=6.0)
    assert abs(quadrature.inner_product(phi, one, cfg).value) < 1e-3


def test_config_validation():
    with pytest.raises(DomainError):
        QuadratureConfig(nx=4)
    with pytest.raises(DomainError):
        QuadratureConfig(rule="simpson")
    assert QuadratureConfig().scaled(2).nx == 64


def test_midpoint_rule_agrees():
    f = lambda x, y: np.cos(2 * math.pi * x) ** 2 * np.exp(-y)  # noqa: E731
    a = quadrature.integrate_fundamental(f, QuadratureConfig())
    b = quadrature.integrate_fundamental(f, QuadratureConfig(rule="midpoint", nx=64, ny=64, target_tol=1e-5))
    assert a.real == pytest.approx(b.real, rel=1e-6)


def test_growth_exponents_zero_and_one_rejected():
    for alpha in (0, 1):
        with pytest.raises(InvalidGrowthError):
            quadrature.regularized_integral(lambda x, y: np.ones_like(x), [GrowthTerm(1.0, alpha)])


def test_regularized_empty_growth_is_plain_integral():
    f = lambda x, y: np.exp(-2 * math.pi * y) * np.cos(2 * math.pi * x)  # noqa: E731
    a = quadrature.regularized_integral(f, [])
    b = quadrature.integrate_fundamental(f)
    assert a.value == b.value


def test_regularized_pure_power():
    # below exponent 1/2 nothing is subtracted; the cutoff only moves the closed-form tail
    a = 0.3
    cfg = QuadratureConfig(height_cutoff=6.0)
    res = quadrature.regularized_integral(lambda x, y: y**a + 0j, [GrowthTerm(1.0, a)], cfg)
    res2 = quadrature.regularized_integral(lambda x, y: y**a + 0j, [GrowthTerm(1.0, a)],
                                           QuadratureConfig(height_cutoff=12.0))
    assert abs(res.value - res2.value) < 1e-8


@pytest.mark.slow
def test_regularized_square_stable_under_cutoff_doubling():
    # E(z, 3/4)^2 has a y^1 cross term, where regularization is undefined; split the shifts
    ss = (0.7, 0.8)
    growth = quadrature.eisenstein_product_growth(ss)
    F = lambda x, y: forms.eisenstein_eval((x, y), ss[0]) * forms.eisenstein_eval((x, y), ss[1])  # noqa: E731
    a = quadrature.regularized_integral(F, growth, QuadratureConfig(height_cutoff=3.0))
    b = quadrature.regularized_integral(F, growth, QuadratureConfig(height_cutoff=6.0))
    assert abs(a.value - b.value) <= 1e-4 * max(1.0, abs(b.value))


def test_equal_shifts_hit_the_excluded_exponent():
    with pytest.raises(InvalidGrowthError):
        quadrature.eisenstein_product_growth([0.75, 0.75]).validate()


def test_product_growth_terms():
    s = 0.5 + 2j
    g = quadrature.eisenstein_product_growth([s, s.conjugate()])
    exps = sorted((complex(t.alpha) for t in g.terms), key=lambda a: a.imag)
    # the two y^1 terms merge: |y^s|^2 and |phi(s)|^2 |y^{1-s}|^2
    assert np.allclose(exps, [1 - 4j, 1, 1 + 4j])
    merged = next(t for t in g.terms if abs(complex(t.alpha) - 1) < 1e-12)
    assert complex(merged.c) == pytest.approx(1 + abs(forms.scattering_phi(s)) ** 2)


@pytest.mark.slow
def test_truncated_norm_against_closed_form():
    q = quadrature.truncated_norm_squared(5.0, 2.0)
    assert q.real == pytest.approx(formulas.maass_selberg_truncated_norm(5.0, 2.0), rel=1e-4)
