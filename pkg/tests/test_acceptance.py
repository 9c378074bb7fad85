"""Acceptance criteria 1 to 11, each reported as one PASS/FAIL line.

Every test computes its measurement, records the line, then asserts. The
lines are repeated in a summary section at the end of the pytest run.
"""

import math
import subprocess
import sys
import time

import numpy as np

from mixmoments import exponents, formulas, forms, momentlab, quadrature, specfun
from mixmoments.errors import MixMomentsError, RegimeError
from oracles import eisenstein_lattice


def test_criterion_01_maass_selberg(acceptance):
    worst, slowest = 0.0, 0.0
    for T in (3, 5, 8):
        for A in (1.5, 2.0, 4.0):
            t0 = time.perf_counter()
            q = quadrature.truncated_norm_squared(T, A).real
            slowest = max(slowest, time.perf_counter() - t0)
            closed = formulas.maass_selberg_truncated_norm(T, A)
            worst = max(worst, abs(q - closed) / abs(closed))
    ok = worst <= 1e-3 and slowest <= 60
    acceptance(1, ok, f"Maass-Selberg 9 pairs: max rel dev {worst:.2e} (tol 1e-3), slowest {slowest:.1f}s (limit 60s)")
    assert ok


def test_criterion_02_mellin_barnes(acceptance):
    cases = ((2, 0, 0), (3, 0, 0), (2, 1.5, 0.5), (3, 2, 3), (4, 1, 2.5))
    worst = 0.0
    for s, t1, t2 in cases:
        closed = formulas.mellin_barnes_bessel(s, 1j * t1, 1j * t2)
        quad = formulas.bessel_mellin_quadrature(s, t1, t2)
        worst = max(worst, abs(quad - closed) / abs(closed))
    exact = formulas.mellin_barnes_bessel(2, 0, 0)
    ok = worst <= 1e-8 and abs(exact - 0.5) <= 1e-15
    acceptance(2, ok, f"Mellin-Barnes 5 sets: max rel dev {worst:.2e} (tol 1e-8); s=2 closed form {exact.real:.16g}")
    assert ok


def test_criterion_03_que_dirichlet(acceptance):
    worst = 0.0
    for T in (0.0, 2.0, 17.0):
        left, right = formulas.que_shrinking_dirichlet_identity(3, T, 10**5)
        # relative deviation: at T = 0 the truncation tail alone is 1.8e-8 in absolute terms
        worst = max(worst, abs(left - right) / abs(right))
    classical = specfun.zeta(3) ** 4 / specfun.zeta(6)
    _, right0 = formulas.que_shrinking_dirichlet_identity(3, 0.0, 10)
    same = abs(right0 - classical) <= 1e-14 * abs(classical)
    ok = worst <= 1e-8 and same
    acceptance(3, ok, f"eta_T^2 Dirichlet series T in {{0,2,17}}: max rel dev {worst:.2e} (tol 1e-8); "
                      f"T=0 equals zeta(3)^4/zeta(6): {same}")
    assert ok


def test_criterion_04_triple_product(acceptance):
    ss = (0.25, 1 / 6, 1 / 12)
    t0 = time.perf_counter()
    try:
        quad = quadrature.triple_eisenstein_integral(*ss).value
        closed = formulas.zagier_triple_product(*ss)
    except MixMomentsError as exc:
        # 1/2 + s1 - s2 - s3 = 1/2 + 0 puts xi(1) in the numerator, and the
        # product's constant term carries y^1, which cannot be regularized
        acceptance(4, False, f"triple product at {ss}: {type(exc).__name__}: {exc}")
        raise
    dev = abs(quad - closed) / abs(closed)
    elapsed = time.perf_counter() - t0
    ok = dev <= 1e-3 and elapsed <= 300
    acceptance(4, ok, f"triple product at {ss}: rel dev {dev:.2e} (tol 1e-3), {elapsed:.0f}s")
    assert ok


def test_criterion_05_exponents(acceptance):
    rng = np.random.default_rng(12345)
    n = 10_000
    worst_p = worst_q = 0.0
    nq = 0
    while nq < n:
        tphi = rng.uniform(1.5, 200)
        T = rng.uniform(0, tphi)
        t = rng.uniform(-2 * tphi, T)
        tj = rng.uniform(0, 600)
        try:
            q = exponents.q_exponent(t, tj, T, tphi).value
        except RegimeError:
            continue
        nq += 1
        worst_q = max(worst_q, abs(q - exponents.q_exponent_direct(t, tj, T, tphi)))
        tp = rng.uniform(-300, 300)
        worst_p = max(worst_p, abs(exponents.p_exponent(tj, tp, T).value
                                   - exponents.p_exponent_direct(tj, tp, T)))
    hom = 0.0
    for _ in range(1000):
        tj, t, T, tphi = rng.uniform(0, 100), rng.uniform(-50, 50), rng.uniform(0, 50), rng.uniform(1, 80)
        lam = rng.uniform(0.1, 10)
        hom = max(hom,
                  abs(exponents.p_exponent_direct(lam * tj, lam * t, lam * T)
                      - lam * exponents.p_exponent_direct(tj, t, T)),
                  abs(exponents.q_exponent_direct(lam * t, lam * tj, lam * T, lam * tphi)
                      - lam * exponents.q_exponent_direct(t, tj, T, tphi)))
    base = (30.0, 2.0, 10.0, 12.0)

    def drift(lam):
        tj, t, T, tphi = (lam * v for v in base)
        return (exponents.log_gamma_weight(tj, t, T, tphi, kind="H1H2")
                + 0.5 * math.pi * exponents.q_exponent_direct(t, tj, T, tphi))

    d0 = drift(1)
    ratios = [abs(drift(lam) - d0) / (10 * math.log(lam)) for lam in (2, 4, 8)]
    ok = worst_p <= 1e-9 and worst_q <= 1e-9 and hom <= 1e-9 and max(ratios) <= 1
    acceptance(5, ok, f"P/Q tables vs direct on {n} tuples: {worst_p:.1e}/{worst_q:.1e} (tol 1e-9); "
                      f"homogeneity {hom:.1e}; Stirling drift / (10 log lambda) max {max(ratios):.2f}")
    assert ok


def test_criterion_06_hecke(acceptance):
    rng = np.random.default_rng(6)
    worst = 0.0
    for alpha in range(11):
        b = momentlab.hecke_power_expand(alpha)
        th = rng.uniform(0.001, math.pi - 0.001, 100)
        rec = sum(bb * np.sin((beta + 1) * th) / np.sin(th) for beta, bb in enumerate(b))
        worst = max(worst, float(np.max(np.abs(rec - (2 * np.cos(th)) ** alpha))))
    b2 = momentlab.hecke_power_expand(2)
    sp = momentlab.SatakePair.from_angle(0.77)
    relation = abs(sp.sym(1) ** 2 - (b2[0] + b2[2] * sp.sym(2))) <= 1e-14 and b2 == [1, 0, 1]
    catalan = all(momentlab.hecke_power_expand(2 * k)[0] == math.comb(2 * k, k) // (k + 1) for k in range(11))
    ok = worst <= 1e-10 and relation and catalan
    acceptance(6, ok, f"Chebyshev reconstruction max err {worst:.1e} (tol 1e-10); "
                      f"lambda(p)^2 = 1 + lambda(p^2): {relation}; Catalan k<=10: {catalan}")
    assert ok


def test_criterion_07_density_and_exponents(acceptance):
    X = 1e12
    ll = math.log(math.log(X))
    m_ok = momentlab.m_func(0, 2j * 5, X) == ll
    v_ok = abs(momentlab.v_func(0, 2j * 5, X) - 6 * ll) <= 1e-15 * 6 * ll
    cor = momentlab.corollary_exponent(momentlab.MomentExponents(1.5, 0.5, 1.0), 5.0, X)
    prop = momentlab.sigma_mu_exponent(momentlab.MomentExponents(0.5, 0.5, 1.0), 0, 10j, X, 0.0).log_power
    ok = m_ok and v_ok and cor < 1 and abs(prop - 0.5) <= 1e-12
    acceptance(7, ok, f"M = loglog X: {m_ok}; V = 6 loglog X: {v_ok}; "
                      f"(3/2,1/2,1) exponent {cor:.6g} < 1; (1/2,1/2,1) exponent {prop:.6g}")
    assert ok


def test_criterion_08_prime_sums(acceptance):
    table = specfun.sieve(10**6)
    drift = momentlab.prime_sum_shifted(table, 1e6, 0).real - math.log(math.log(1e6))
    s100 = momentlab.prime_sum_shifted(table, 100, 0).real
    direct = sum(1.0 / p for p in range(2, 101) if all(p % q for q in range(2, int(p**0.5) + 1)))
    ok = abs(drift - 0.2615) <= 0.05 and abs(s100 - direct) <= 5e-4 and abs(s100 - 1.8029) <= 5e-4
    acceptance(8, ok, f"sum 1/p - loglog 1e6 = {drift:.6f} (0.2615 +- 0.05); "
                      f"sum_(p<=100) 1/p = {s100:.7f} vs direct {direct:.7f}")
    assert ok


def test_criterion_09_forms(acceptance, first_form):
    rng = np.random.default_rng(9)
    worst = 0.0
    for _ in range(50):
        s = rng.uniform(1.2, 3.0) + 1j * rng.uniform(-3, 3)
        x, y = rng.uniform(-0.5, 0.5), rng.uniform(0.87, 2.5)
        ref = eisenstein_lattice(x, y, s)
        worst = max(worst, abs(forms.eisenstein_eval((x, y), s) - ref) / abs(ref))
    x, y = rng.uniform(-3, 3, 1000), rng.uniform(0.5, 3, 1000)
    xr, yr = forms.reduce_points(x, y)
    a, ea = forms.eisenstein_eval((x, y), 0.5 + 7j, with_error=True)
    b, eb = forms.eisenstein_eval((xr, yr), 0.5 + 7j, with_error=True)
    ratio = float(np.max(np.abs(a - b) / (ea + eb)))
    cfg = quadrature.QuadratureConfig(nx=32, ny=16, height_cutoff=6.0)
    norm = quadrature.integrate_fundamental(lambda x, y: forms.maass_eval(first_form, (x, y))[0] ** 2, cfg).real
    ok = worst <= 1e-8 and ratio <= 1 and abs(norm - 1) <= 0.05
    acceptance(9, ok, f"lattice sum 50 points max rel dev {worst:.1e} (tol 1e-8); automorphy "
                      f"|diff|/error max {ratio:.2f} (<= 1); ||phi||^2 = {norm:.4f} (1 +- 5%)")
    assert ok


def test_criterion_10_decorrelation(acceptance):
    tau = 1e3
    worst = 0.0
    for d in np.linspace(-1e-3, 1e-3, 41):
        if d == 0:
            continue
        t = tau + d
        worst = max(worst, formulas.decorrelation_phase_error(t, tau) / (0.5 * abs(d) * math.log(t)))
    e = 1e-9
    jump = abs(formulas.decorrelation_main_term(tau + e, tau) - formulas.decorrelation_main_term(tau - e, tau))
    ok = worst <= 1 and jump <= 1e-12
    acceptance(10, ok, f"phase error / (0.5 |t-tau| log t) max {worst:.3f} (<= 1); "
                       f"continuity jump {jump:.1e} (tol 1e-12)")
    assert ok


def test_criterion_11_verify_all(acceptance, tmp_path):
    t0 = time.perf_counter()
    proc = subprocess.run([sys.executable, "-m", "mixmoments.cli", "verify", "all"],
                          capture_output=True, text=True, timeout=600, cwd=tmp_path)
    elapsed = time.perf_counter() - t0
    ok = proc.returncode == 0 and elapsed <= 600
    acceptance(11, ok, f"verify all: exit {proc.returncode} in {elapsed:.0f}s (limit 600s)")
    assert ok, proc.stdout[-3000:] + proc.stderr[-3000:]
