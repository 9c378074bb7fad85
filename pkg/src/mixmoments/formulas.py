"""Closed-form main terms and identities.

Everything here is arithmetic on values from :mod:`specfun` plus L-values of
degree two and higher, which are never computed: they enter through an
:class:`LValueBundle` supplied by the caller.

Conventions: xi(s) = pi^{-s/2} Gamma(s/2) zeta(s), so xi(2) = pi/6 and
1/xi(2) = 6/pi; the archimedean factor of L(s, Sym^2 phi) for an even form
with spectral parameter t is pi^{-3s/2} Gamma(s/2) Gamma((s+2it)/2)
Gamma((s-2it)/2).
"""

from __future__ import annotations

import cmath
import math
from collections.abc import Mapping
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Optional, Union

import numpy as np

from . import forms, specfun
from .errors import DomainError, MissingInputError, PoleError

__all__ = [
    "A_0",
    "LValueBundle",
    "laurent_constant_xi",
    "full_domain_main_term",
    "sym2_gamma_log",
    "sym2_archimedean_log_derivative",
    "completed_sym2_log_derivative",
    "r_main_term",
    "simplified_main_term",
    "rankin_selberg_phi2_E",
    "maass_selberg_truncated_norm",
    "zagier_triple_product",
    "zagier_arguments",
    "que_shrinking_dirichlet_identity",
    "mellin_barnes_bessel",
    "bessel_mellin_quadrature",
    "watson_cusp_rhs",
    "continuous_spectrum_integrand",
    "decorrelation_main_term",
    "xi_phase",
    "xi_phase_derivative",
    "decorrelation_phase_error",
    "eisenstein_near_one",
    "eisenstein_near_one_residual",
    "cusp_residues",
    "i_prime_residue",
]

LOG_PI = math.log(math.pi)
XI_2 = math.pi / 6


# ---------------------------------------------------------------------------
# the Laurent constant a_0
# ---------------------------------------------------------------------------

def laurent_constant_xi(h=1e-2, levels=4):
    """c_0 in xi(s) = 1/(s-1) + c_0 + O(s-1), by extrapolation to s = 1.

    The symmetric average of xi(1+h) - 1/h and xi(1-h) + 1/h is even in h,
    so Richardson extrapolation in h^2 converges quickly.
    """
    def g(step):
        up = specfun.xi_completed(1 + step).real - 1 / step
        down = specfun.xi_completed(1 - step).real + 1 / step
        return 0.5 * (up + down)

    table = [g(h / 2**k) for k in range(levels)]
    for j in range(1, levels):
        f = 4.0**j
        table = [(f * table[k + 1] - table[k]) / (f - 1) for k in range(len(table) - 1)]
    return table[0]


#: constant a_0 of the main term, identified with c_0 above
A_0 = laurent_constant_xi()


# ---------------------------------------------------------------------------
# L-value inputs
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LValueBundle:
    """Degree >= 2 L-values of a fixed form phi, supplied by the caller.

    ``sym2_at_s`` maps complex points to L(s, Sym^2 phi); it may also be a
    callable. ``sym2_completed_log_derivative_at_1`` overrides the value of
    Lambda'/Lambda(1, Sym^2 phi) that is otherwise assembled from
    ``sym2_log_derivative_at_1``.
    """

    sym2_at_1: float
    sym2_log_derivative_at_1: Optional[float] = None
    sym2_at_s: Union[Mapping, Callable, None] = None
    central_values: Optional[Mapping] = None
    sym2_completed_log_derivative_at_1: Optional[float] = None

    def __post_init__(self):
        if not self.sym2_at_1 > 0:
            raise DomainError("L(1, Sym^2 phi) must be positive")

    @classmethod
    def from_record(cls, record, **kw):
        if record.sym2_L_value is None:
            raise MissingInputError(f"{record.label} carries no L(1, Sym^2) value")
        return cls(sym2_at_1=record.sym2_L_value, **kw)

    def sym2(self, s):
        s = complex(s)
        src = self.sym2_at_s
        if callable(src):
            return complex(src(s))
        if src is not None:
            for key, val in src.items():
                if abs(complex(key) - s) <= 1e-9 * max(1.0, abs(s)):
                    return complex(val)
        raise MissingInputError(f"L({s}, Sym^2 phi) was not supplied")

    def sym2_pair(self, s):
        """L(s) and L(conj s), using L(conj s) = conj L(s) when one is missing."""
        s = complex(s)
        try:
            a = self.sym2(s)
        except MissingInputError:
            a = None
        try:
            b = self.sym2(s.conjugate())
        except MissingInputError:
            b = None
        if a is None and b is None:
            raise MissingInputError(f"neither L({s}) nor L({s.conjugate()}) was supplied")
        return (a if a is not None else b.conjugate(), b if b is not None else a.conjugate())


def _require(value, what):
    if value is None:
        raise MissingInputError(f"{what} was not supplied")
    return value


# ---------------------------------------------------------------------------
# main terms
# ---------------------------------------------------------------------------

def full_domain_main_term(t_phi, T):
    """(3/pi)[log(1/4 + t_phi^2) + log(1/4 + T^2)]."""
    return 3 / math.pi * (math.log(0.25 + t_phi * t_phi) + math.log(0.25 + T * T))


def sym2_gamma_log(s, t_phi):
    """log of pi^{-3s/2} Gamma(s/2) Gamma((s+2it)/2) Gamma((s-2it)/2)."""
    s = complex(s)
    return (-1.5 * s * LOG_PI + specfun.log_gamma(s / 2)
            + specfun.log_gamma((s + 2j * t_phi) / 2) + specfun.log_gamma((s - 2j * t_phi) / 2))


def sym2_archimedean_log_derivative(t_phi):
    """d/ds log of the Sym^2 gamma factor at s = 1 (real)."""
    return (-1.5 * LOG_PI + 0.5 * specfun.digamma(0.5).real
            + specfun.digamma(0.5 + 1j * t_phi).real)


def completed_sym2_log_derivative(t_phi, lvals):
    """Lambda'/Lambda(1, Sym^2 phi) from L'/L plus the digamma terms."""
    if lvals.sym2_completed_log_derivative_at_1 is not None:
        return float(lvals.sym2_completed_log_derivative_at_1)
    lp = _require(lvals.sym2_log_derivative_at_1, "L'/L(1, Sym^2 phi)")
    return float(lp) + sym2_archimedean_log_derivative(t_phi)


def _xi_ratio(T):
    """xi(2iT)/xi(1+2iT) = xi(1-2iT)/xi(1+2iT), of modulus one."""
    return complex(np.exp(specfun.log_xi(1 - 2j * T) - specfun.log_xi(1 + 2j * T)))


def rankin_selberg_phi2_E(T, lvals, t_phi, kind="exact"):
    """<phi^2, E(., 1 + 2iT)> from the unfolding, as arithmetic on L-values.

    ``kind="exact"`` returns Lambda(1-2iT, Sym^2)xi(1-2iT) / (2 Lambda(1, Sym^2)
    xi(2-4iT)) with every Gamma factor kept. ``kind="envelope"`` replaces the
    Gamma quotient by exp(-(pi/2)(|T+t|+|T-t|-2t)) (1+|T|)^{-1/2} and keeps
    the finite L and zeta quotient.
    """
    if T == 0:
        raise PoleError("E(z, 1 + 2iT) has a pole at T = 0")
    s = 1 - 2j * T
    L_s = lvals.sym2(s)
    quotient = L_s * specfun.zeta(s) / (2 * lvals.sym2_at_1 * specfun.zeta(2 * s))
    if kind == "envelope":
        expo = -0.5 * math.pi * (abs(T + t_phi) + abs(T - t_phi) - 2 * t_phi)
        return quotient * math.exp(expo) / math.sqrt(1 + abs(T))
    if kind != "exact":
        raise DomainError(f"unknown kind {kind!r}")
    lg = (sym2_gamma_log(s, t_phi) - sym2_gamma_log(1, t_phi)
          + (-0.5 * s * LOG_PI + specfun.log_gamma(s / 2))
          - (-s * LOG_PI + specfun.log_gamma(s)))
    return quotient * complex(np.exp(lg))


def r_main_term(t_phi, T, lvals, prefactor=None):
    """The regularized main term R(phi, E_T).

    (1/xi(2)) conj[Lambda'/Lambda(1, Sym^2) + 2 Re xi'/xi(1+2iT)
    - 2 xi'(2)/xi(2) + a_0] plus the two unfolding terms
    rho <phi^2, E(1+2iT)> + conj(rho) <phi^2, E(1-2iT)> with
    rho = xi(2iT)/xi(1+2iT). Passing ``prefactor`` overrides rho.
    """
    if T == 0:
        raise PoleError("R(phi, E_T) is singular at T = 0")
    bracket = (completed_sym2_log_derivative(t_phi, lvals)
               + 2 * specfun.xi_log_derivative(1 + 2j * T).real
               - 2 * specfun.xi_log_derivative(2).real + A_0)
    rho = _xi_ratio(T) if prefactor is None else complex(prefactor)
    if rho == 0:
        unfold = 0j
    else:
        L_minus, L_plus = lvals.sym2_pair(1 - 2j * T)
        b_minus = LValueBundle(lvals.sym2_at_1, sym2_at_s={1 - 2j * T: L_minus})
        b_plus = LValueBundle(lvals.sym2_at_1, sym2_at_s={1 + 2j * T: L_plus})
        unfold = (rho * rankin_selberg_phi2_E(T, b_minus, t_phi)
                  + rho.conjugate() * rankin_selberg_phi2_E(-T, b_plus, t_phi))
    return complex(bracket / XI_2) + unfold


def simplified_main_term(t_phi, T, lvals):
    """(3/pi)[log(1/4+t^2) + log(1/4+T^2) + 2 L'/L(1, Sym^2) + 4 Re zeta'/zeta(1+2iT)].

    Differs from the bracket part of :func:`r_main_term` by a bounded amount.
    """
    lp = float(_require(lvals.sym2_log_derivative_at_1, "L'/L(1, Sym^2 phi)"))
    zz = specfun.zeta_log_derivative(1 + 2j * T).real
    return full_domain_main_term(t_phi, T) + 3 / math.pi * (2 * lp + 4 * zz)


# ---------------------------------------------------------------------------
# Eisenstein identities
# ---------------------------------------------------------------------------

def maass_selberg_truncated_norm(T, A):
    """||E^A(., 1/2 + iT)||^2 in closed form.

    The r -> 0 limit of the Maass--Selberg relation:
    2 log A + 4 Re xi'/xi(1+2iT)
    + (phi(1/2-iT) A^{2iT} - phi(1/2+iT) A^{-2iT}) / (2iT),
    where phi(s) = xi(2s-1)/xi(2s). The last term is 2i Im(...)/(2iT), so
    the whole expression is real.
    """
    if T < 1:
        raise DomainError("maass_selberg_truncated_norm requires T >= 1")
    if not A > 1:
        raise DomainError("truncation height A must exceed 1")
    osc = (forms.scattering_phi(0.5 - 1j * T) * A ** (2j * T)
           - forms.scattering_phi(0.5 + 1j * T) * A ** (-2j * T)) / (2j * T)
    val = 2 * math.log(A) + 4 * specfun.xi_log_derivative(1 + 2j * T).real + osc
    if abs(val.imag) > 1e-12 * max(1.0, abs(val)):
        raise ArithmeticError(f"Maass-Selberg value has imaginary part {val.imag:.2e}")
    return val.real


def zagier_arguments(s1, s2, s3):
    """Numerator and denominator xi-arguments of the triple product."""
    s1, s2, s3 = complex(s1), complex(s2), complex(s3)
    num = (0.5 + s1 + s2 + s3, 0.5 + s1 - s2 + s3, 0.5 + s1 + s2 - s3, 0.5 + s1 - s2 - s3)
    den = (1 + 2 * s1, 1 + 2 * s2, 1 + 2 * s3)
    return num, den


def zagier_triple_product(s1, s2, s3):
    """Regularized integral of E(1/2+s1) E(1/2+s2) E(1/2+s3) as a xi quotient."""
    num, den = zagier_arguments(s1, s2, s3)
    bad = [a for a in num + den if min(abs(a), abs(a - 1)) < 1e-12]
    if bad:
        err = PoleError("xi pole in triple product at arguments "
                        + ", ".join(f"{a.real:g}{a.imag:+g}i" for a in bad))
        err.arguments = bad
        raise err
    lv = sum(specfun.log_xi(a) for a in num) - sum(specfun.log_xi(a) for a in den)
    return complex(np.exp(lv))


def _eta_squares(T, N):
    """eta_T(n)^2 for n = 1..N, with eta_T(n) = n^{-iT} sigma_{2iT}(n)."""
    n = np.arange(1, N + 1, dtype=float)
    logn = np.log(n)
    powers = np.exp(2j * T * logn)
    sig = np.zeros(N, dtype=complex)
    for d in range(1, N + 1):
        sig[d - 1 :: d] += powers[d - 1]
    eta = (np.exp(-1j * T * logn) * sig).real
    return eta * eta


def que_shrinking_dirichlet_identity(s, T, N):
    """Truncated sum_{n<=N} eta_T(n)^2 n^{-s} and zeta(s)^2 zeta(s+2iT) zeta(s-2iT)/zeta(2s)."""
    s = complex(s)
    if s.real < 2:
        raise DomainError("requires Re(s) >= 2")
    N = int(N)
    if N < 1:
        raise DomainError("N must be positive")
    n = np.arange(1, N + 1, dtype=float)
    # sum small terms first
    terms = _eta_squares(float(T), N) * np.exp(-s * np.log(n))
    left = complex(np.sum(terms[::-1]))
    right = (specfun.zeta(s) ** 2 * specfun.zeta(s + 2j * T) * specfun.zeta(s - 2j * T)
             / specfun.zeta(2 * s))
    return left, right


def mellin_barnes_bessel(s, mu, nu):
    """int_0^inf K_mu(x) K_nu(x) x^{s-1} dx = 2^{s-3} prod Gamma((s +- mu +- nu)/2) / Gamma(s)."""
    s, mu, nu = complex(s), complex(mu), complex(nu)
    if not s.real > abs(mu.real) + abs(nu.real):
        raise DomainError("requires Re(s) > |Re mu| + |Re nu|")
    args = [(s + a * mu + b * nu) / 2 for a in (1, -1) for b in (1, -1)]
    lv = (s - 3) * math.log(2) + sum(specfun.log_gamma(a) for a in args) - specfun.log_gamma(s)
    return complex(np.exp(lv))


def bessel_mellin_quadrature(s, t1, t2, x_min=1e-12, x_max=60.0, panels=120, order=20):
    """Direct quadrature of int K_{it1}(x) K_{it2}(x) x^{s-1} dx in log x."""
    s = complex(s)
    if s.real <= 0:
        raise DomainError("requires Re(s) > 0")
    gx, gw = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(math.log(x_min), math.log(x_max), panels + 1)
    mid = 0.5 * (edges[1:] + edges[:-1])
    half = 0.5 * np.diff(edges)
    u = (mid[:, None] + half[:, None] * gx[None, :]).ravel()
    w = (half[:, None] * gw[None, :]).ravel()
    x = np.exp(u)
    k1 = specfun.bessel_k(1j * t1, x).value
    k2 = k1 if t2 == t1 else specfun.bessel_k(1j * t2, x).value
    return complex(np.sum(w * k1 * k2 * np.exp(s * u)))


def watson_cusp_rhs(lambda_values, sym2_values):
    """|<phi_j, phi^2>|^2 by Watson's formula.

    ``lambda_values`` needs "phi_j" = Lambda(1/2, phi_j) and "sym2phi_x_phi_j"
    = Lambda(1/2, Sym^2 phi x phi_j); ``sym2_values`` needs "phi" and "phi_j",
    the completed Lambda(1, Sym^2 .) values.
    """
    try:
        a = float(lambda_values["phi_j"])
        b = float(lambda_values["sym2phi_x_phi_j"])
        lf = float(sym2_values["phi"])
        lj = float(sym2_values["phi_j"])
    except KeyError as exc:
        raise MissingInputError(f"Watson input {exc.args[0]!r} was not supplied") from None
    if a < 0 or b < 0:
        raise DomainError("central values must be nonnegative")
    if lf <= 0 or lj <= 0:
        raise DomainError("Lambda(1, Sym^2) values must be positive")
    return a * b / (8 * lf * lf * lj)


def continuous_spectrum_integrand(tau, T, t_phi, lvals, eps=0.1):
    """|L(1/2-i tau, Sym^2)| |zeta(1/2+i tau)|^3 |zeta(1/2+i tau+2iT) zeta(1/2+i tau-2iT)|
    over (1+|tau|)(1+|tau-2T|)^{1/4}(1+|tau-2t_phi|)^{1/4}.

    Defined for |tau| <= 2T + t_phi^eps.
    """
    if abs(tau) > 2 * T + t_phi**eps:
        raise DomainError(f"|tau| = {abs(tau):g} exceeds 2T + t_phi^eps")
    L = lvals.sym2(0.5 - 1j * tau)
    z0 = abs(specfun.zeta(0.5 + 1j * tau))
    zp = abs(specfun.zeta(0.5 + 1j * (tau + 2 * T)))
    zm = abs(specfun.zeta(0.5 + 1j * (tau - 2 * T)))
    den = (1 + abs(tau)) * (1 + abs(tau - 2 * T)) ** 0.25 * (1 + abs(tau - 2 * t_phi)) ** 0.25
    return abs(L) * z0**3 * zp * zm / den


# ---------------------------------------------------------------------------
# decorrelation of nearby Eisenstein series
# ---------------------------------------------------------------------------

_SERIES_CUT = 1e-4


def decorrelation_main_term(t, tau):
    """(6/pi) sin((t - tau) log tau) / (t - tau), continuous at t = tau."""
    if not tau > 1:
        raise DomainError("requires tau > 1")
    lt = math.log(tau)
    d = t - tau
    u = d * lt
    if abs(u) < _SERIES_CUT:
        return 6 / math.pi * lt * (1 - u * u / 6 + u**4 / 120)
    return 6 / math.pi * math.sin(u) / d


def xi_phase(x):
    """arg xi(1 + 2ix), defined modulo 2 pi."""
    return specfun.log_xi(1 + 2j * x).imag


class PhaseDerivative(NamedTuple):
    exact: float
    leading: float


def xi_phase_derivative(x):
    """d/dx arg xi(1+2ix) = -log pi + Re psi(1/2+ix) + 2 Re zeta'/zeta(1+2ix).

    ``leading`` is the model log|1/2 + ix|.
    """
    if x < 2:
        raise DomainError("requires x >= 2")
    exact = (-LOG_PI + specfun.digamma(0.5 + 1j * x).real
             + 2 * specfun.zeta_log_derivative(1 + 2j * x).real)
    return PhaseDerivative(exact, math.log(abs(0.5 + 1j * x)))


def decorrelation_phase_error(t, tau):
    """|exact phase - model phase| for the rotation exp(i(t - tau) log tau).

    The exact phase is arg xi(1+2it) + arg xi(1-2i tau); the difference is
    reduced to (-pi, pi].
    """
    exact = xi_phase(t) - xi_phase(tau)
    d = exact - (t - tau) * math.log(tau)
    return abs(math.remainder(d, 2 * math.pi))


def eisenstein_near_one(T_small):
    """Pole model 3/(pi i T) for E(z, 1 + iT) as T -> 0."""
    if not 0 < abs(T_small) <= 0.1:
        raise DomainError("requires 0 < |T| <= 0.1")
    return 3 / (math.pi * 1j * T_small)


def eisenstein_near_one_residual(z, T_small):
    """E(z, 1 + iT) minus the pole model; stays bounded as T -> 0."""
    return forms.eisenstein_eval(z, 1 + 1j * T_small) - eisenstein_near_one(T_small)


# ---------------------------------------------------------------------------
# cusp contributions
# ---------------------------------------------------------------------------

def cusp_residues(t_phi, T, A, lvals):
    """(I' main value, J' value) of the cusp computation above height A.

    I' = Lambda'(1, Sym^2)/(xi(2) Lambda(1, Sym^2)); J' = rho <phi^2, E(1+2iT)>
    + conj(rho) <phi^2, E(1-2iT)> with rho = xi(2iT)/xi(1+2iT). A enters only
    the error terms.
    """
    if not A > 1:
        raise DomainError("truncation height A must exceed 1")
    i_main = completed_sym2_log_derivative(t_phi, lvals) / XI_2
    rho = _xi_ratio(T)
    L_minus, L_plus = lvals.sym2_pair(1 - 2j * T)
    b_minus = LValueBundle(lvals.sym2_at_1, sym2_at_s={1 - 2j * T: L_minus})
    b_plus = LValueBundle(lvals.sym2_at_1, sym2_at_s={1 + 2j * T: L_plus})
    j_val = (rho * rankin_selberg_phi2_E(T, b_minus, t_phi)
             + rho.conjugate() * rankin_selberg_phi2_E(-T, b_plus, t_phi))
    return complex(i_main), complex(j_val)


def i_prime_residue(t_phi, A, lvals):
    """Full double-pole residue 2 (f'(1) + a_0 f(1)) / (2 Lambda(1, Sym^2)).

    With f(s) = A^{1-s} Lambda(s, Sym^2)/xi(2s) this is
    (1/xi(2)) [Lambda'/Lambda - log A - 2 xi'(2)/xi(2) + a_0].
    """
    if not A > 1:
        raise DomainError("truncation height A must exceed 1")
    return (completed_sym2_log_derivative(t_phi, lvals) - math.log(A)
            - 2 * specfun.xi_log_derivative(2).real + A_0) / XI_2
