"""Prime sums, Hecke combinatorics and moment exponents.

The density function N(z, x) models sum_{p <= x} p^{-1-z}: it is loglog x
for tiny shifts, -log|z| in the middle band and 0 once |z| >= 1. M and V are
the mean and variance combinations that appear in the Gaussian heuristic for
log |L| values; :func:`sigma_mu_exponent` turns them into the power of log X
predicted for a mixed moment.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from . import specfun
from .errors import DomainError, InsufficientCoefficientsError

__all__ = [
    "SatakePair",
    "MomentExponents",
    "CoefficientValues",
    "coefficient_identities",
    "n_func",
    "m_func",
    "v_func",
    "prime_sum_shifted",
    "SatakeSampler",
    "short_dirichlet_sum",
    "hecke_power_expand",
    "dirichlet_poly_coeff",
    "MomentPrediction",
    "sigma_mu_exponent",
    "corollary_exponent",
    "gaussian_moment",
]

MAX_POWER = 40


@dataclass(frozen=True)
class SatakePair:
    alpha: complex
    beta: complex

    def __post_init__(self):
        if abs(self.alpha * self.beta - 1) > 1e-9:
            raise DomainError("Satake parameters must satisfy alpha * beta = 1")

    @classmethod
    def from_angle(cls, theta):
        a = cmath.exp(1j * theta)
        return cls(a, a.conjugate())

    @property
    def tempered(self):
        return abs(abs(self.alpha) - 1) < 1e-12

    def sym(self, k):
        """Trace of Sym^k: alpha^k + alpha^{k-2} beta + ... + beta^k."""
        a, b = self.alpha, self.beta
        return sum(a ** (k - i) * b**i for i in range(k + 1))


@dataclass(frozen=True)
class MomentExponents:
    l1: float
    l2: float
    l3: float

    def __post_init__(self):
        if min(self.l1, self.l2, self.l3) < 0:
            raise DomainError("moment exponents must be nonnegative")


class CoefficientValues(NamedTuple):
    lam_p: complex
    lam_p2: complex
    sym2: complex
    sym4: complex
    sym2_j: complex
    von_mangoldt_j_p2: complex            # Lambda_{phi_j}(p^2) = alpha_j^2 + beta_j^2
    lam_j_sq_minus_2: complex
    lam_j_p2_minus_1: complex
    sym2_j_minus_1: complex
    von_mangoldt_mixed_p2: complex        # Lambda_{Sym^2 phi x phi_j}(p^2), from Satake data
    mixed_factorized: complex             # (Sym4 - Sym2 + 1)(Sym2_j - 1)
    mixed_printed: complex                # the same with "+ 1" in the second factor


def coefficient_identities(sp, sp2):
    """Hecke and von Mangoldt coefficients at p and p^2.

    ``sp`` holds the Satake pair of phi, ``sp2`` that of phi_j. The mixed
    coefficient is computed two ways: as the sum of squares of the six
    Satake parameters alpha^2, 1, beta^2 times alpha_j, beta_j, and from the
    factorization through Sym^4, Sym^2 traces. Those agree with the second
    factor equal to lambda_{Sym^2 phi_j}(p) - 1; ``mixed_printed`` uses + 1
    and is kept only for comparison.
    """
    a, b = sp.alpha, sp.beta
    aj, bj = sp2.alpha, sp2.beta
    lam_j = sp2.sym(1)
    s2j = sp2.sym(2)
    sym2, sym4 = sp.sym(2), sp.sym(4)
    vm_j = aj**2 + bj**2
    mixed = sum((g * h) ** 2 for g in (a * a, 1, b * b) for h in (aj, bj))
    return CoefficientValues(
        lam_p=sp.sym(1),
        lam_p2=sp.sym(2),
        sym2=sym2,
        sym4=sym4,
        sym2_j=s2j,
        von_mangoldt_j_p2=vm_j,
        lam_j_sq_minus_2=lam_j**2 - 2,
        lam_j_p2_minus_1=sp2.sym(2) - 1,
        sym2_j_minus_1=s2j - 1,
        von_mangoldt_mixed_p2=mixed,
        mixed_factorized=(sym4 - sym2 + 1) * (s2j - 1),
        mixed_printed=(sym4 - sym2 + 1) * (s2j + 1),
    )


# ---------------------------------------------------------------------------
# density functions
# ---------------------------------------------------------------------------

def _check_x(x):
    if x < 10:
        raise DomainError("requires x >= 10")


def n_func(z, x):
    _check_x(x)
    r = abs(z)
    lx = math.log(x)
    if r <= 1 / lx:
        return math.log(lx)
    if r <= 1:
        return -math.log(r)
    return 0.0


def m_func(z1, z2, x):
    return n_func(z1, x) + n_func(z2, x)


def v_func(z1, z2, x):
    z1, z2 = complex(z1), complex(z2)
    return (2 * n_func(2 * z1, x) + 2 * n_func(2 * z2, x)
            + 2 * n_func(2 * z1.real, x) + 2 * n_func(2 * z2.real, x)
            + 4 * n_func(z1 + z2, x) + 4 * n_func(z1 + z2.conjugate(), x))


def prime_sum_shifted(table, x, z):
    """sum_{p <= x} p^{-1-z}, summed from the largest prime down."""
    p = table.upto(x).astype(float)
    terms = np.exp(-(1 + complex(z)) * np.log(p))
    return complex(np.sum(terms[::-1]))


# ---------------------------------------------------------------------------
# short Dirichlet sums
# ---------------------------------------------------------------------------

class SatakeSampler:
    """Random tempered Satake angles theta_p, one per prime, reproducible from a seed.

    lambda(p) = 2 cos theta_p. Angles are uniform on [0, pi] unless
    ``sato_tate`` is set, in which case they follow (2/pi) sin^2 theta.
    """

    def __init__(self, seed=0, limit=10**6, sato_tate=False):
        self.table = specfun.sieve(limit)
        rng = np.random.default_rng(seed)
        n = len(self.table)
        if sato_tate:
            # rejection sampling against the uniform envelope 2/pi
            out = np.empty(0)
            while out.size < n:
                th = rng.uniform(0, math.pi, 2 * n)
                keep = rng.uniform(0, 1, 2 * n) < np.sin(th) ** 2
                out = np.concatenate([out, th[keep]])
            self.theta = out[:n]
        else:
            self.theta = rng.uniform(0, math.pi, n)
        self._index = {int(p): i for i, p in enumerate(self.table.primes)}

    def pair(self, p):
        return SatakePair.from_angle(self.theta[self._index[int(p)]])

    def lam(self, p):
        return 2 * math.cos(self.theta[self._index[int(p)]])

    def lam_primes(self, x):
        ps = self.table.upto(x)
        return ps, 2 * np.cos(self.theta[: ps.size])


def _prime_coefficients(source, x):
    """Primes p <= x and lambda(p) from a Maass record or a sampler."""
    if isinstance(source, SatakeSampler):
        return source.lam_primes(x)
    coeffs = np.asarray(source.coefficients, dtype=float)
    if x > coeffs.size:
        raise InsufficientCoefficientsError(
            f"{getattr(source, 'label', 'record')} has {coeffs.size} coefficients, needs {int(x)}")
    ps = specfun.sieve(max(int(x), 2)).upto(x)
    return ps, coeffs[ps - 1]


def short_dirichlet_sum(source, x, z=0.0, weight="log_smoothed"):
    """Re sum_{p^n <= x, n <= 2} Lambda(p^n) / (n p^{n(1/2 + 1/log x + z)}) * w(p^n).

    Lambda(p) = lambda(p) and Lambda(p^2) = lambda(p)^2 - 2; the weight w is
    log(x/p^n)/log x for ``"log_smoothed"`` and 1 for ``"sharp"``.
    """
    if x < 2:
        return 0.0
    if weight not in ("sharp", "log_smoothed"):
        raise DomainError(f"unknown weight {weight!r}")
    ps, lam = _prime_coefficients(source, x)
    lx = math.log(x)
    expo = 0.5 + 1 / lx + complex(z)
    logp = np.log(ps.astype(float))
    total = 0j
    for n, coef in ((1, lam), (2, lam * lam - 2)):
        keep = n * logp <= lx
        lp = logp[keep]
        w = (lx - n * lp) / lx if weight == "log_smoothed" else 1.0
        total += np.sum(coef[keep] * np.exp(-n * expo * lp) * w) / n
    return float(total.real)


# ---------------------------------------------------------------------------
# exact combinatorics
# ---------------------------------------------------------------------------

def hecke_power_expand(alpha):
    """b_{alpha, beta} for beta = 0..alpha, with lambda(p)^alpha = sum b lambda(p^beta)."""
    alpha = int(alpha)
    if not 0 <= alpha <= MAX_POWER:
        raise DomainError(f"alpha must lie in [0, {MAX_POWER}]")
    f = math.factorial
    out = []
    for beta in range(alpha + 1):
        if (alpha - beta) % 2:
            out.append(0)
            continue
        num = f(alpha) * (beta + 1)
        den = f((alpha - beta) // 2) * f((alpha + beta) // 2 + 1)
        q, r = divmod(num, den)
        assert r == 0
        out.append(q)
    return out


def dirichlet_poly_coeff(r, x, prime_values, n):
    """a_{2r,x}(n): the coefficient of n^{-s} in (sum_{p <= x} a(p) p^{-s})^{2r}."""
    r, n = int(r), int(n)
    if r < 1 or n < 1:
        raise DomainError("r and n must be positive")
    fac = specfun.factorize(n) if n > 1 else {}
    if sum(fac.values()) != 2 * r or any(p > x for p in fac):
        return 0.0
    multinom = math.factorial(2 * r)
    value = 1.0
    for p, e in fac.items():
        if p not in prime_values:
            return 0.0
        multinom //= math.factorial(e)
        value *= prime_values[p] ** e
    return multinom * value


def gaussian_moment(n):
    """n-th moment of a standard Gaussian: (n-1)!! for even n, else 0."""
    n = int(n)
    if not 0 <= n <= MAX_POWER:
        raise DomainError(f"n must lie in [0, {MAX_POWER}]")
    if n % 2:
        return 0
    return math.prod(range(n - 1, 0, -2))


# ---------------------------------------------------------------------------
# moment exponents
# ---------------------------------------------------------------------------

class MomentPrediction(NamedTuple):
    mu: float
    sigma_sq: float
    log_power: float


def sigma_mu_exponent(exps, z1, z2, X, t_phi):
    """Mean, variance and predicted power of log X for a mixed moment.

    The mean uses the exponent -1/2 on loglog(X + t_phi), i.e. epsilon = 0.
    The power of log X is
    l1(l1-1)/2 + l2(l2-1)/2 + [l3(l1 - 1/2) M + l3^2 V / 8] / loglog X.
    """
    if X < 10:
        raise DomainError("requires X >= 10")
    l1, l2, l3 = exps.l1, exps.l2, exps.l3
    xs = X + t_phi
    ll = math.log(math.log(xs))
    M, V = m_func(z1, z2, xs), v_func(z1, z2, xs)
    mu = -0.5 * (l1 + l2) * ll - 0.5 * l3 * M
    sigma_sq = (l1 * l1 + l2 * l2) * ll + 0.25 * l3 * l3 * V + 2 * l1 * l3 * M
    llX = math.log(math.log(X))
    Mx, Vx = m_func(z1, z2, X), v_func(z1, z2, X)
    expo = (l1 * (l1 - 1) / 2 + l2 * (l2 - 1) / 2
            + (l3 * (l1 - 0.5) * Mx + l3 * l3 * Vx / 8) / llX)
    return MomentPrediction(mu, sigma_sq, expo)


def corollary_exponent(exps, T, X):
    """Power of log X after replacing l1 by l1 - l3, with z1 = 0, z2 = 2iT.

    In that configuration M = loglog X and V = 6 loglog X, so the result is
    l1(l1-1)/2 + l2(l2-1)/2 + l3^2/4 whenever T >= 1/2.
    """
    if exps.l1 < exps.l3:
        raise DomainError("requires l1 >= l3")
    shifted = MomentExponents(exps.l1 - exps.l3, exps.l2, exps.l3)
    return sigma_mu_exponent(shifted, 0, 2j * T, X, 0.0).log_power
