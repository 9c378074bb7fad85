"""Verification suites run by ``mixmoments verify``.

Each check compares a computed value against an oracle and records both
sides. Suites are plain functions returning lists of :class:`Check`. Only
the forms suite reads fixture data; if that fails the exception propagates
and the command line maps it to exit code 2.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import exponents, formulas, forms, ingest, momentlab, quadrature, specfun
from .errors import RegimeError

__all__ = ["Check", "RunReport", "SUITES", "run_suite"]


@dataclass
class Check:
    name: str
    oracle: str
    measured: float
    reference: float
    deviation: float
    tolerance: float
    passed: bool = field(init=False)

    def __post_init__(self):
        self.passed = bool(self.deviation <= self.tolerance)

    @property
    def status(self):
        return "PASS" if self.passed else "FAIL"


@dataclass
class RunReport:
    suite: str
    checks: list
    wall_time: float

    @property
    def ok(self):
        return all(c.passed for c in self.checks)

    def table(self):
        head = ("check", "status", "measured", "reference", "deviation", "tol", "oracle")
        rows = [(c.name, c.status, f"{c.measured:.12g}", f"{c.reference:.12g}",
                 f"{c.deviation:.2e}", f"{c.tolerance:.0e}", c.oracle) for c in self.checks]
        widths = [max(len(r[i]) for r in [head, *rows]) for i in range(len(head))]
        fmt = "  ".join(f"{{:<{w}}}" for w in widths)
        lines = [fmt.format(*head), fmt.format(*("-" * w for w in widths))]
        lines += [fmt.format(*r) for r in rows]
        n_fail = sum(not c.passed for c in self.checks)
        lines.append(f"{self.suite}: {len(self.checks) - n_fail}/{len(self.checks)} passed "
                     f"in {self.wall_time:.1f}s")
        return "\n".join(lines)

    def as_dict(self):
        return {
            "suite": self.suite,
            "wall_time": round(self.wall_time, 3),
            "checks": [{"name": c.name, "status": c.status, "measured": c.measured,
                        "reference": c.reference, "deviation": c.deviation,
                        "tolerance": c.tolerance, "oracle": c.oracle} for c in self.checks],
        }


def _rel(a, b):
    return abs(a - b) / max(abs(b), 1e-300)


def _cmp(name, oracle, measured, reference, tol, relative=True):
    m, r = complex(measured), complex(reference)
    dev = _rel(m, r) if relative else abs(m - r)
    shown_m = m.real if abs(m.imag) <= 1e-12 * max(1.0, abs(m)) else abs(m)
    shown_r = r.real if abs(r.imag) <= 1e-12 * max(1.0, abs(r)) else abs(r)
    return Check(name, oracle, float(shown_m), float(shown_r), float(dev), tol)


# ---------------------------------------------------------------------------
# suites
# ---------------------------------------------------------------------------

def suite_specfun():
    out = [_cmp("zeta(2)", "pi^2/6", specfun.zeta(2), math.pi**2 / 6, 1e-13)]
    s = 0.3 + 7j
    out.append(_cmp("xi(s) = xi(1-s)", "functional equation", specfun.xi_completed(s),
                    specfun.xi_completed(1 - s), 1e-9))
    from scipy.special import kv
    xs = np.linspace(0.05, 30, 40)
    ours = specfun.bessel_k(0.0, xs).value
    out.append(Check("K_0(x) on 40 points", "scipy.special.kv", float(np.max(np.abs(ours))),
                     float(np.max(np.abs(kv(0, xs)))),
                     float(np.max(np.abs(ours - kv(0, xs)) / kv(0, xs))), 1e-12))
    z = 2.5 + 3j
    out.append(_cmp("Gamma(z+1) = z Gamma(z)", "recurrence", np.exp(specfun.log_gamma(z + 1)),
                    z * np.exp(specfun.log_gamma(z)), 1e-12))
    rng = np.random.default_rng(0)
    worst = 0.0
    for _ in range(200):
        m, n = rng.integers(1, 400, size=2)
        if math.gcd(int(m), int(n)) != 1:
            continue
        a = specfun.eta_coefficient(3.0, int(m * n))
        b = specfun.eta_coefficient(3.0, int(m)) * specfun.eta_coefficient(3.0, int(n))
        worst = max(worst, abs(a - b))
    out.append(Check("eta_T multiplicative", "coprime pairs", worst, 0.0, worst, 1e-12))
    return out


def lattice_eisenstein(x, y, s, D=2000):
    """E(z, s) for Re s > 1 from the lattice sum over (c, d), rows c <= 5/y direct."""
    s = complex(s)
    C = int(math.ceil(5.0 / y))
    total = 0j
    for c in range(1, C + 1):
        b = c * y
        d = np.arange(math.ceil(-D - c * x), math.floor(D - c * x) + 1)
        u = d + c * x
        total += np.sum((u * u + b * b) ** (-s))
        # both tails by the integral plus the first two Euler-Maclaurin terms
        for edge in (d[-1] + 1 + c * x, -(d[0] - 1 + c * x)):
            total += (edge ** (1 - 2 * s) / (2 * s - 1) * (1 - s * (2 * s - 1) / (2 * s + 1) * (b / edge) ** 2)
                      + 0.5 * (edge * edge + b * b) ** (-s) + s / 6 * edge * (edge * edge + b * b) ** (-s - 1))
    lead = math.sqrt(math.pi) * np.exp(specfun.log_gamma(s - 0.5) - specfun.log_gamma(s)) * y ** (1 - 2 * s)
    rest = specfun.zeta(2 * s - 1) - sum(c ** (1 - 2 * s) for c in range(1, C + 1))
    total += lead * rest
    return y**s + y**s * total / specfun.zeta(2 * s)


def suite_forms(fixture=None):
    out = []
    rng = np.random.default_rng(1)
    worst = 0.0
    for _ in range(10):
        s = rng.uniform(1.2, 3.0) + 1j * rng.uniform(-2, 2)
        x, y = rng.uniform(-0.5, 0.5), rng.uniform(0.9, 2.0)
        worst = max(worst, _rel(forms.eisenstein_eval((x, y), s), lattice_eisenstein(x, y, s)))
    out.append(Check("E(z,s) vs lattice sum, 10 points", "direct lattice sum", worst, 0.0, worst, 1e-8))
    x = rng.uniform(-2, 2, 1000)
    y = rng.uniform(0.6, 3, 1000)
    xr, yr = forms.reduce_points(x, y)
    a, ea = forms.eisenstein_eval((x, y), 0.5 + 5j, with_error=True)
    b, eb = forms.eisenstein_eval((xr, yr), 0.5 + 5j, with_error=True)
    ratio = float(np.max(np.abs(a - b) / (ea + eb)))
    out.append(Check("automorphy on 1000 points", "propagated error", ratio, 0.0, ratio, 1.0))
    y = 20.0
    s = 0.5 + 3j
    r20 = abs(forms.eisenstein_eval((0.1, 20.0), s) - forms.constant_term_s(20.0, s))
    out.append(Check("cusp decay at y = 20", "K-Bessel decay", r20, 0.0, r20, 1e-12))
    recs = ingest.load_fixture(fixture)
    rec = recs[0]
    cfg = quadrature.QuadratureConfig(nx=32, ny=16, height_cutoff=6.0)
    norm = quadrature.integrate_fundamental(lambda x, y: forms.maass_eval(rec, (x, y))[0] ** 2, cfg)
    out.append(_cmp(f"||phi||^2 for {rec.label}", "unit normalization", norm.real, 1.0, 0.05))
    return out


def suite_identities():
    out = []
    for T in (3, 5, 8):
        for A in (1.5, 2.0, 4.0):
            q = quadrature.truncated_norm_squared(T, A).real
            out.append(_cmp(f"Maass-Selberg T={T} A={A}", "quadrature of |E^A|^2", q,
                            formulas.maass_selberg_truncated_norm(T, A), 1e-3))
    for s, t1, t2 in ((2, 0, 0), (3, 0, 0), (2, 1.5, 0.5), (3, 2, 3), (4, 1, 2.5)):
        out.append(_cmp(f"Mellin-Barnes s={s} t1={t1} t2={t2}", "Bessel quadrature",
                        formulas.bessel_mellin_quadrature(s, t1, t2),
                        formulas.mellin_barnes_bessel(s, 1j * t1, 1j * t2), 1e-8))
    for T in (0.0, 2.0, 17.0):
        left, right = formulas.que_shrinking_dirichlet_identity(3, T, 10**5)
        out.append(_cmp(f"eta_T^2 Dirichlet series T={T:g}", "zeta quotient", left, right, 1e-8))
    for ss in ((0.2, 0.1, 0.05), (0.3, 0.15, 0.1j)):
        out.append(_cmp(f"triple product {ss}", "regularized quadrature",
                        quadrature.triple_eisenstein_integral(*ss).value,
                        formulas.zagier_triple_product(*ss), 1e-3))
    tau = 1000.0
    worst = 0.0
    for d in np.linspace(-1e-3, 1e-3, 21):
        if d == 0:
            continue
        err = formulas.decorrelation_phase_error(tau + d, tau)
        worst = max(worst, err / (0.5 * abs(d) * math.log(tau + d)))
    out.append(Check("xi phase vs (t-tau) log tau", "exact xi phase", worst, 0.0, worst, 1.0))
    e = 1e-9
    jump = abs(formulas.decorrelation_main_term(tau + e, tau) - formulas.decorrelation_main_term(tau - e, tau))
    out.append(Check("decorrelation continuity", "left/right limits", jump, 0.0, jump, 1e-12))
    return out


def suite_exponents(n=10_000):
    out = []
    rng = np.random.default_rng(2)
    worst_p = worst_q = 0.0
    counted = 0
    for _ in range(n):
        T = rng.uniform(0, 50)
        t = rng.uniform(-2 * T - 1, 2 * T + 1)
        tj = rng.uniform(0, 200)
        worst_p = max(worst_p, abs(exponents.p_exponent(tj, t, T).value
                                   - exponents.p_exponent_direct(tj, t, T)))
        tphi = rng.uniform(2, 100)
        T = rng.uniform(0, tphi)
        t = rng.uniform(-T, T)
        try:
            q = exponents.q_exponent(t, tj, T, tphi).value
        except RegimeError:
            continue
        counted += 1
        worst_q = max(worst_q, abs(q - exponents.q_exponent_direct(t, tj, T, tphi)))
    out.append(Check(f"P table = direct form ({n} samples)", "absolute-value form", worst_p, 0.0, worst_p, 1e-9))
    out.append(Check(f"Q table = direct form ({counted} samples)", "absolute-value form", worst_q, 0.0, worst_q, 1e-9))
    hom = 0.0
    for _ in range(200):
        tj, t, T, tphi, lam = rng.uniform(0, 50), rng.uniform(-20, 20), rng.uniform(0, 30), rng.uniform(2, 60), rng.uniform(0.1, 10)
        hom = max(hom, abs(exponents.p_exponent_direct(lam * tj, lam * t, lam * T)
                           - lam * exponents.p_exponent_direct(tj, t, T)),
                  abs(exponents.q_exponent_direct(lam * t, lam * tj, lam * T, lam * tphi)
                      - lam * exponents.q_exponent_direct(t, tj, T, tphi)))
    out.append(Check("degree-1 homogeneity of P and Q", "scaling", hom, 0.0, hom, 1e-9))
    base = (30.0, 2.0, 10.0, 12.0)   # t_j, t, T, t_phi with Q > 0

    def drift(lam):
        tj, t, T, tphi = (lam * v for v in base)
        return (exponents.log_gamma_weight(tj, t, T, tphi, kind="H1H2")
                + 0.5 * math.pi * exponents.q_exponent_direct(t, tj, T, tphi))

    d0 = drift(1.0)
    for lam in (2, 4, 8):
        d = abs(drift(lam) - d0)
        out.append(Check(f"Stirling drift lambda={lam}", "10 log lambda", d, 0.0, d, 10 * math.log(lam)))
    return out


def suite_momentlab():
    out = []
    rng = np.random.default_rng(3)
    worst = 0.0
    for alpha in range(11):
        b = momentlab.hecke_power_expand(alpha)
        for th in rng.uniform(0.01, math.pi - 0.01, 100):
            rec = sum(bb * math.sin((beta + 1) * th) / math.sin(th) for beta, bb in enumerate(b))
            worst = max(worst, abs(rec - (2 * math.cos(th)) ** alpha))
    out.append(Check("Chebyshev reconstruction, alpha <= 10", "(2 cos theta)^alpha", worst, 0.0, worst, 1e-10))
    cat_ok = all(momentlab.hecke_power_expand(2 * k)[0] == math.comb(2 * k, k) // (k + 1) for k in range(11))
    out.append(Check("b_{2k,0} = Catalan(k), k <= 10", "Catalan numbers", float(cat_ok), 1.0, float(not cat_ok), 0.0))
    X = 1e8
    ll = math.log(math.log(X))
    out.append(_cmp("M(0, 2iT)", "loglog X", momentlab.m_func(0, 10j, X), ll, 0.0))
    out.append(_cmp("V(0, 2iT)", "6 loglog X", momentlab.v_func(0, 10j, X), 6 * ll, 1e-15))
    cor = momentlab.corollary_exponent(momentlab.MomentExponents(1.5, 0.5, 1.0), 5.0, X)
    out.append(Check("corollary exponent (3/2,1/2,1) < 1", "strict bound", cor, 1.0,
                     0.0 if cor < 1 else cor - 1, 0.0))
    half = momentlab.sigma_mu_exponent(momentlab.MomentExponents(0.5, 0.5, 1.0), 0, 10j, X, 0.0)
    out.append(_cmp("exponent (1/2,1/2,1)", "1/2", half.log_power, 0.5, 1e-12, relative=False))
    table = specfun.sieve(10**6)
    mert = momentlab.prime_sum_shifted(table, 1e6, 0).real - math.log(math.log(1e6))
    out.append(_cmp("sum 1/p - loglog x, x = 1e6", "Mertens constant 0.2615", mert, 0.2615, 0.05, relative=False))
    out.append(_cmp("sum_{p<=100} 1/p", "direct sum", momentlab.prime_sum_shifted(table, 100, 0).real,
                    sum(1 / p for p in table.upto(100)), 5e-4, relative=False))
    worst = 0.0
    for _ in range(1000):
        c = momentlab.coefficient_identities(momentlab.SatakePair.from_angle(rng.uniform(0, math.pi)),
                                             momentlab.SatakePair.from_angle(rng.uniform(0, math.pi)))
        worst = max(worst, abs(c.lam_j_sq_minus_2 - c.lam_j_p2_minus_1), abs(c.lam_j_p2_minus_1 - c.sym2_j_minus_1),
                    abs(c.von_mangoldt_j_p2 - c.sym2_j_minus_1),
                    abs(c.von_mangoldt_mixed_p2 - c.mixed_factorized))
    out.append(Check("Satake coefficient identities", "direct algebra", worst, 0.0, worst, 1e-12))
    return out


SUITES = {
    "specfun": suite_specfun,
    "forms": suite_forms,
    "identities": suite_identities,
    "exponents": suite_exponents,
    "momentlab": suite_momentlab,
}


def run_suite(name, fixture=None):
    t0 = time.perf_counter()
    fn = SUITES[name]
    checks = fn(fixture) if name == "forms" else fn()
    return RunReport(name, checks, time.perf_counter() - t0)
