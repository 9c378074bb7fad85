"""Special-function kernel.

Complex log-Gamma and digamma come from :mod:`scipy.special`. Riemann zeta
(Euler--Maclaurin), the completed zeta ``xi``, and the K-Bessel function of
complex order (steepest-descent contour quadrature) are implemented here
because scipy does not provide them for complex arguments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy import special as sps

from .errors import DomainError, NearZeroError, PoleError

__all__ = [
    "log_gamma",
    "digamma",
    "zeta",
    "zeta_derivative",
    "zeta_log_derivative",
    "xi_completed",
    "log_xi",
    "xi_log_derivative",
    "bessel_k",
    "bessel_k_imag_order",
    "BesselResult",
    "PrimeTable",
    "sieve",
    "eta_coefficient",
    "divisor_sigma",
    "divisors",
    "factorize",
]

ZETA_IM_CEILING = 1e7
BESSEL_T_CEILING = 500.0
UNDERFLOW = 1e-300
LOG_PI = math.log(math.pi)


def _is_nonpositive_integer(s):
    s = np.asarray(s, dtype=complex)
    return (s.imag == 0) & (s.real <= 0) & (s.real == np.round(s.real))


def _scalar_or_array(out, like):
    if np.ndim(like) == 0:
        return out.item() if isinstance(out, np.ndarray) else out
    return out


# ---------------------------------------------------------------------------
# Gamma family
# ---------------------------------------------------------------------------

def log_gamma(s):
    """Complex log-Gamma, analytic on the slit plane with ``exp = Gamma``.

    Uses the branch of :func:`scipy.special.loggamma`, whose imaginary part is
    continuous along horizontal lines. That makes sums of log-Gamma values
    safe to exponentiate without tracking 2*pi jumps.
    """
    z = np.asarray(s, dtype=complex)
    if np.any(_is_nonpositive_integer(z)):
        raise PoleError(f"log_gamma has a pole at {s!r}")
    return _scalar_or_array(sps.loggamma(z), s)


def digamma(s):
    """Logarithmic derivative of Gamma for complex ``s``."""
    z = np.asarray(s, dtype=complex)
    if np.any(_is_nonpositive_integer(z)):
        raise PoleError(f"digamma has a pole at {s!r}")
    return _scalar_or_array(sps.psi(z), s)


# ---------------------------------------------------------------------------
# Riemann zeta by Euler--Maclaurin
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _bernoulli_table(kmax=30):
    """B_{2k}/(2k)! for k = 1..kmax, exact then rounded."""
    m = 2 * kmax
    a = [Fraction(0)] * (m + 1)
    b = [Fraction(0)] * (m + 1)
    for n in range(m + 1):
        a[n] = Fraction(1, n + 1)
        for j in range(n, 0, -1):
            a[j - 1] = j * (a[j - 1] - a[j])
        b[n] = a[0]  # Akiyama-Tanigawa gives B_1 = +1/2; even indices are standard
    return tuple(float(b[2 * k] / math.factorial(2 * k)) for k in range(1, kmax + 1))


def _zeta_em(s, derivative=False):
    """Return (zeta, zeta', abs error) at a single complex ``s`` with Re s > 0."""
    t = abs(s.imag)
    N = int(max(20, math.ceil(t)))
    coeffs = _bernoulli_table()
    logN = math.log(N)
    # head sum in chunks so N up to 1e7 stays within memory
    head = 0j
    dhead = 0j
    chunk = 1 << 20
    for lo in range(1, N, chunk):
        n = np.arange(lo, min(N, lo + chunk), dtype=float)
        ln = np.log(n)
        terms = np.exp(-s * ln)
        head += terms.sum()
        if derivative:
            dhead -= (ln * terms).sum()
    Ns = np.exp(-s * logN)
    val = head + N * Ns / (s - 1) + 0.5 * Ns
    dval = dhead
    if derivative:
        dval += -logN * N * Ns / (s - 1) - N * Ns / (s - 1) ** 2 - 0.5 * logN * Ns
    # tail corrections: B_{2k}/(2k)! * s(s+1)...(s+2k-2) * N^{-s-2k+1}
    poly = s
    dlogpoly = 1.0 / s
    npow = Ns / N
    err = abs(npow)
    prev = math.inf
    for k, c in enumerate(coeffs, start=1):
        if k > 1:
            poly *= (s + 2 * k - 3) * (s + 2 * k - 2)
            dlogpoly += 1.0 / (s + 2 * k - 3) + 1.0 / (s + 2 * k - 2)
            npow /= N * N
        term = c * poly * npow
        mag = abs(term)
        if mag > prev:  # asymptotic series started to diverge
            break
        val += term
        if derivative:
            dval += term * (dlogpoly - logN)
        prev = err = mag
        if mag < 1e-18 * abs(val):
            break
    return val, dval, err + 1e-16 * abs(val) * (1 + t * 1e-4)


def _check_zeta_arg(s):
    if s == 1:
        raise PoleError("zeta has a pole at s = 1")
    if s.real <= 0:
        raise DomainError(f"zeta requires Re(s) > 0, got {s}")
    if abs(s.imag) > ZETA_IM_CEILING:
        raise DomainError(f"|Im s| = {abs(s.imag):g} exceeds the 1e7 ceiling")


def zeta(s, with_error=False):
    """Riemann zeta on Re(s) > 0 via Euler--Maclaurin.

    The head sum runs to N = max(20, |Im s|) and up to 30 correction terms
    are added until they stop decreasing. With ``with_error`` the absolute
    size of the last correction is returned as an error estimate.
    """
    s = complex(s)
    _check_zeta_arg(s)
    val, _, err = _zeta_em(s)
    return (val, err) if with_error else val


def zeta_derivative(s):
    """zeta'(s) by termwise differentiation of the Euler--Maclaurin sum."""
    s = complex(s)
    _check_zeta_arg(s)
    return _zeta_em(s, derivative=True)[1]


def zeta_log_derivative(s, threshold=1e-9):
    s = complex(s)
    _check_zeta_arg(s)
    val, dval, _ = _zeta_em(s, derivative=True)
    if abs(val) < threshold:
        raise NearZeroError(f"|zeta({s})| = {abs(val):.2e} is below {threshold:g}")
    return dval / val


# ---------------------------------------------------------------------------
# completed zeta
# ---------------------------------------------------------------------------

def log_xi(s):
    """log xi(s) with xi(s) = pi^{-s/2} Gamma(s/2) zeta(s).

    For Re(s) <= 0 the functional equation xi(s) = xi(1-s) is used. The
    imaginary part is only defined modulo 2*pi.
    """
    s = complex(s)
    if s == 0 or s == 1:
        raise PoleError(f"xi has a pole at s = {s.real:g}")
    if s.real <= 0:
        s = 1 - s
    z = zeta(s)
    if z == 0:
        raise NearZeroError(f"zeta({s}) vanished")
    return -0.5 * s * LOG_PI + complex(sps.loggamma(s / 2)) + np.log(z)


def xi_completed(s):
    """Completed zeta xi(s); raises rather than overflow or underflow."""
    lx = log_xi(s)
    if not -700 < lx.real < 700:
        raise DomainError(f"xi({s}) is out of double range (log|xi| = {lx.real:.1f}); use log_xi")
    return complex(np.exp(lx))


def xi_log_derivative(s, threshold=1e-9):
    """xi'/xi(s) = -log(pi)/2 + psi(s/2)/2 + zeta'/zeta(s)."""
    s = complex(s)
    if s == 0 or s == 1:
        raise PoleError(f"xi has a pole at s = {s.real:g}")
    if s.real <= 0:
        return -xi_log_derivative(1 - s, threshold)
    return -0.5 * LOG_PI + 0.5 * complex(sps.psi(s / 2)) + zeta_log_derivative(s, threshold)


# ---------------------------------------------------------------------------
# K-Bessel of complex order by contour quadrature
# ---------------------------------------------------------------------------

_GL_X, _GL_W = np.polynomial.legendre.leggauss(20)


def _batched_panels(lo, hi, h):
    """Gauss-Legendre panels on [lo_i, hi_i] of width about h_i, for many i.

    Returns nodes, weights and the owner index of every node.
    """
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    span = np.maximum(hi - lo, 0.0)
    m = np.where(span > 0, np.maximum(1, np.ceil(span / h)), 0).astype(np.int64)
    owner = np.repeat(np.arange(lo.size), m)
    if owner.size == 0:
        return np.empty(0), np.empty(0), owner
    first = np.cumsum(m) - m
    k = np.arange(owner.size) - first[owner]
    width = (span / np.maximum(m, 1))[owner]
    mid = lo[owner] + (k + 0.5) * width
    nodes = (mid[:, None] + 0.5 * width[:, None] * _GL_X[None, :]).ravel()
    weights = (0.5 * width[:, None] * _GL_W[None, :]).ravel()
    return nodes, weights, np.repeat(owner, _GL_X.size)


def _sinh_minus_id(u):
    """sinh(u) - u without cancellation."""
    u = np.asarray(u, dtype=float)
    out = np.sinh(u) - u
    small = np.abs(u) < 0.6
    if np.any(small):
        us = u[small]
        u2 = us * us
        term = us * u2 / 6.0
        acc = term.copy()
        for k in range(2, 12):
            term = term * u2 / ((2 * k) * (2 * k + 1))
            acc += term
        out[small] = acc
    return out


def _dq_numerator(u):
    """sinh(u) - u cosh(u), accurate for small u."""
    u = np.asarray(u, dtype=float)
    out = np.sinh(u) - u * np.cosh(u)
    small = np.abs(u) < 0.6
    if np.any(small):
        us = u[small]
        u2 = us * us
        acc = np.zeros_like(us)
        pw = us.copy()
        fact = 1.0
        for k in range(1, 12):
            pw = pw * u2
            fact *= (2 * k) * (2 * k + 1)
            acc -= 2 * k * pw / fact
        out[small] = acc
    return out


def _descent_path(u, r):
    """Steepest-descent path v(u) = asin(r u / sinh u), used when x >= t.

    Returns v, cos v and dv/du (broadcasting ``u`` against ``r``).
    """
    u, r = np.broadcast_arrays(np.asarray(u, dtype=float), np.asarray(r, dtype=float))
    pos = u > 0
    sh = np.where(pos, np.sinh(u), 1.0)
    q = np.where(pos, u / sh, 1.0)
    one_minus_q = np.where(pos, _sinh_minus_id(u) / sh, 0.0)
    g = r * q
    one_minus_g = (1.0 - r) + r * one_minus_q
    cosv = np.sqrt(np.maximum(one_minus_g * (1.0 + g), 0.0))
    v = np.arctan2(g, cosv)
    with np.errstate(divide="ignore", invalid="ignore"):
        dv = np.where(cosv > 0, r * _dq_numerator(u) / (sh * sh) / cosv, 0.0)
    return v, cosv, dv


@dataclass(frozen=True)
class BesselResult:
    """K-Bessel values with an absolute error estimate.

    ``value`` is ``exp(pi |Im nu| / 2) K_nu(x)`` when ``scaled`` is true.
    ``underflow`` marks entries flushed to zero because their magnitude fell
    below 1e-300.
    """

    value: np.ndarray
    error: np.ndarray
    underflow: np.ndarray
    scaled: bool


_U_CANDIDATES = np.geomspace(0.02, 40.0, 80)


def _accumulate(owner, f, size):
    re = np.bincount(owner, weights=np.real(f), minlength=size)
    if np.iscomplexobj(f):
        re = re + 1j * np.bincount(owner, weights=np.imag(f), minlength=size)
    return re, np.bincount(owner, weights=np.abs(f), minlength=size)


def _two_halves(nu, x, w, dw, half_pi_t):
    """Integrand of (1/2)(upper contour + its mirror image)."""
    ch = np.cosh(w)
    e1 = -x * ch + nu * w + half_pi_t
    e2 = -x * np.conj(ch) - nu * np.conj(w) + half_pi_t
    return 0.5 * (np.exp(e1) * dw + np.exp(e2) * np.conj(dw))


NEAR_TURNING = 0.9


def _diagonal_and_tail(nu, a, t, x, u0, v0, width):
    """45-degree segment from u0 + i v0 down to the real axis, then the real axis to infinity."""
    half_pi_t = 0.5 * math.pi * t
    size = x.size
    tau, wts, own = _batched_panels(np.zeros_like(u0), v0, np.minimum(0.3, width))
    w = u0[own] + tau + 1j * (v0[own] - tau)
    f = _two_halves(nu, x[own], w, np.full(tau.shape, 1 - 1j), half_pi_t) * wts
    total, absum = _accumulate(own, f, size)
    L = u0 + v0
    need = 48.0 + half_pi_t
    U = np.maximum(np.arccosh(np.maximum(need / x, 1.0)) + 0.25, L)
    for _ in range(60):
        bad = -x * np.cosh(U) + abs(a) * U + half_pi_t > -48.0
        if not bad.any():
            break
        U = np.where(bad, U + 0.5, U)
    u, wts, own = _batched_panels(L, U, np.minimum(0.75, 2 * math.pi / max(t, 1e-300)))
    if u.size:
        f = _two_halves(nu, x[own], u.astype(complex), np.ones_like(u, dtype=complex), half_pi_t) * wts
        s_, a_ = _accumulate(own, f, size)
        total = total + s_
        absum = absum + a_
    return total, absum


def _kbessel_batch(a, t, xs):
    """exp(pi t/2) K_{a+it}(x) for t >= 0 and an array of x > 0.

    For x >= t the exact steepest-descent path through the saddle i*asin(t/x)
    is used. For x < t the contour runs along Im w = pi/2 to the saddle at
    acosh(t/x) + i pi/2, drops to the real axis on a 45-degree line and
    follows the real axis. Only the upper half is integrated; the lower half
    is its mirror image under w -> -conj(w).
    """
    nu = complex(a, t)
    half_pi_t = 0.5 * math.pi * t
    n = xs.size
    total = np.zeros(n, dtype=complex)
    absum = np.zeros(n)
    # near the turning point x ~ t the descent path bends sharply; a straight
    # 45-degree line through the saddle is used there instead
    A = xs >= t / NEAR_TURNING
    N = (xs >= t) & ~A
    if np.any(A):
        idx = np.nonzero(A)[0]
        x = xs[idx]
        r = t / x
        v0 = np.arcsin(r)
        peak = -x * np.cos(v0) - t * v0 + half_pi_t
        vc, cc, _ = _descent_path(_U_CANDIDATES[None, :], r[:, None])
        ex = (-x[:, None] * np.cosh(_U_CANDIDATES)[None, :] * cc - t * vc + half_pi_t
              + abs(a) * _U_CANDIDATES[None, :])
        ok = ex < (peak - 48.0)[:, None]
        first = np.where(ok.any(axis=1), ok.argmax(axis=1), _U_CANDIDATES.size - 1)
        U = _U_CANDIDATES[first]
        kappa = x * np.cos(v0)
        with np.errstate(divide="ignore"):
            sigma = np.minimum(1.0 / np.sqrt(kappa), np.cbrt(6.0 / x))
        h = np.minimum(np.minimum(sigma, 0.75), np.maximum(U / 8, 1e-3))
        u, wts, own = _batched_panels(np.zeros_like(U), U, h)
        xo, ro = x[own], r[own]
        v, cosv, dv = _descent_path(u, ro)
        if a == 0:
            f = np.exp(-xo * np.cosh(u) * cosv - t * v + half_pi_t) * wts
        else:
            f = _two_halves(nu, xo, u + 1j * v, 1 + 1j * dv, half_pi_t) * wts
        s_, a_ = _accumulate(own, f, idx.size)
        total[idx] += s_
        absum[idx] += a_
    B = xs < t
    if np.any(B):
        idx = np.nonzero(B)[0]
        x = xs[idx]
        u0 = np.arccosh(t / x)
        # horizontal segment Im w = pi/2
        u, wts, own = _batched_panels(np.zeros_like(u0), u0, np.minimum(0.75, 2 * math.pi / (t - x)))
        if u.size:
            xo = x[own]
            if a == 0:
                f = np.cos(t * u - xo * np.sinh(u)) * wts
            else:
                f = _two_halves(nu, xo, u + 0.5j * math.pi, np.ones_like(u, dtype=complex), half_pi_t) * wts
            s_, a_ = _accumulate(own, f, idx.size)
            total[idx] += s_
            absum[idx] += a_
        width = np.minimum(1.0 / np.sqrt(np.maximum(np.sqrt(t * t - x * x), 1e-12)), t ** (-1.0 / 3.0))
        s_, a_ = _diagonal_and_tail(nu, a, t, x, u0, np.full(x.shape, 0.5 * math.pi), width)
        total[idx] += s_
        absum[idx] += a_
    if np.any(N):
        idx = np.nonzero(N)[0]
        x = xs[idx]
        v0 = np.arcsin(t / x)
        kappa = x * np.cos(v0)
        width = np.minimum(1.0 / np.sqrt(np.maximum(kappa, 1e-12)), x ** (-1.0 / 3.0))
        s_, a_ = _diagonal_and_tail(nu, a, t, x, np.zeros_like(x), v0, width)
        total[idx] += s_
        absum[idx] += a_
    # rounding of the exponent, of size t acosh(t/x) + x at worst, is the other error source
    return total, (4e-16 + 2.2e-16 * (t * (1 + np.arcsinh(t / xs)) + xs)) * absum + 1e-20


def bessel_k(nu, x, scaled=False):
    """K_nu(x) for complex order ``nu`` and an array of positive ``x``.

    The integral K_nu(x) = (1/2) int exp(-x cosh w + nu w) dw is taken along
    a contour through the saddle points, so nothing cancels when x < |Im nu|.
    With ``scaled`` the result is multiplied by exp(pi |Im nu| / 2).

    Returns a :class:`BesselResult`.
    """
    nu = complex(nu)
    if abs(nu.imag) > BESSEL_T_CEILING:
        raise DomainError(f"|Im nu| = {abs(nu.imag):g} exceeds {BESSEL_T_CEILING:g}")
    if abs(nu.real) > 50:
        raise DomainError(f"|Re nu| = {abs(nu.real):g} exceeds 50")
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(~(xs > 0)) or not np.all(np.isfinite(xs)):
        raise DomainError("bessel_k requires finite x > 0")
    if nu.imag < 0:
        nu = -nu
    a, t = nu.real, nu.imag
    vals, errs = _kbessel_batch(a, t, xs.ravel())
    vals = vals.reshape(xs.shape)
    errs = errs.reshape(xs.shape)
    if not scaled and t > 0:
        damp = math.exp(-0.5 * math.pi * t)
        vals *= damp
        errs *= damp
    flag = np.abs(vals) < UNDERFLOW
    vals[flag] = 0.0
    errs[flag] = np.minimum(errs[flag], UNDERFLOW)
    if np.ndim(x) == 0:
        return BesselResult(vals[0], errs[0], bool(flag[0]), scaled)
    return BesselResult(vals, errs, flag, scaled)


def bessel_k_imag_order(t, x, scaled=False, return_flag=False):
    """Real-valued K_{it}(x) for real ``t`` and ``x > 0``.

    Values below 1e-300 are flushed to exactly 0. With ``return_flag`` a
    boolean underflow mask (or scalar) is returned as a second item.
    """
    res = bessel_k(1j * float(t), x, scaled=scaled)
    val = np.real(res.value)
    if np.ndim(val) == 0:
        val = float(val)
    return (val, res.underflow) if return_flag else val


# ---------------------------------------------------------------------------
# arithmetic
# ---------------------------------------------------------------------------

SIEVE_CEILING = 10**9


@dataclass(frozen=True)
class PrimeTable:
    """Immutable table of all primes up to ``limit``."""

    limit: int
    primes: np.ndarray

    def __post_init__(self):
        self.primes.setflags(write=False)

    def __len__(self):
        return len(self.primes)

    def upto(self, x):
        """Primes p <= x (x must not exceed ``limit``)."""
        if x > self.limit:
            raise DomainError(f"x = {x} exceeds table limit {self.limit}")
        return self.primes[: np.searchsorted(self.primes, x, side="right")]


def sieve(limit):
    """Sieve of Eratosthenes, segmented above 10^7 to bound memory."""
    limit = int(limit)
    if limit < 2:
        raise DomainError("sieve limit must be at least 2")
    if limit > SIEVE_CEILING:
        raise DomainError(f"sieve limit {limit} exceeds {SIEVE_CEILING}")
    root = math.isqrt(limit)
    small = np.ones(root + 1, dtype=bool)
    small[:2] = False
    for p in range(2, math.isqrt(root) + 1):
        if small[p]:
            small[p * p :: p] = False
    base = np.nonzero(small)[0]
    parts = [base]
    seg = 1 << 23
    for lo in range(root + 1, limit + 1, seg):
        hi = min(limit + 1, lo + seg)
        mark = np.ones(hi - lo, dtype=bool)
        for p in base:
            start = max(p * p, ((lo + p - 1) // p) * p)
            if start >= hi:
                continue
            mark[start - lo :: p] = False
        parts.append(np.nonzero(mark)[0] + lo)
    primes = np.concatenate(parts).astype(np.int64)
    return PrimeTable(limit, primes)


def factorize(n):
    """Prime factorization of a positive integer as {p: e}."""
    n = int(n)
    if n < 1:
        raise DomainError("factorize requires n >= 1")
    out = {}
    for p in (2, 3):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    p = 5
    while p * p <= n:
        for q in (p, p + 2):
            while n % q == 0:
                out[q] = out.get(q, 0) + 1
                n //= q
        p += 6
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def divisors(n):
    divs = [1]
    for p, e in factorize(n).items():
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def eta_coefficient(T, n):
    """eta_T(n) = sum over ab = n of (a/b)^{iT}, which is real.

    Multiplicative, with eta_T(p^k) = sum_{j=0}^{k} cos((k - 2j) T log p).
    """
    n = int(n)
    if n < 1:
        raise DomainError("eta_coefficient requires n >= 1")
    val = 1.0
    for p, k in factorize(n).items():
        lp = T * math.log(p)
        val *= sum(math.cos((k - 2 * j) * lp) for j in range(k + 1))
    return val


def divisor_sigma(s, n):
    """sigma_s(n) = sum_{d | n} d^s."""
    s = complex(s)
    val = 1.0 + 0j
    for p, k in factorize(n).items():
        ps = complex(p) ** s
        val *= sum(ps**j for j in range(k + 1))
    if val.imag == 0 and s.imag == 0:
        return val.real
    return val
