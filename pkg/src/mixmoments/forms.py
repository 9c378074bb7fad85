"""Eisenstein series and even Hecke--Maass forms on SL2(Z).

Points are passed as :class:`UpperHalfPoint`, complex numbers, or pairs of
arrays ``(x, y)``. Evaluation groups points by height so the K-Bessel
coefficients of each row are computed once.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

import numpy as np

from . import specfun
from .errors import (
    ConvergenceError,
    DomainError,
    InsufficientCoefficientsError,
    MissingInputError,
    PoleError,
    UnsupportedParityError,
    ValidationError,
)

VOL_X = math.pi / 3
MAX_FOURIER_TERMS = 20000
TAIL_RTOL = 1e-16


@dataclass(frozen=True)
class UpperHalfPoint:
    x: float
    y: float

    def __post_init__(self):
        if not (self.y > 0) or not math.isfinite(self.y) or not math.isfinite(self.x):
            raise DomainError(f"not a point of the upper half-plane: ({self.x}, {self.y})")

    @property
    def z(self):
        return complex(self.x, self.y)

    @classmethod
    def from_complex(cls, z):
        return cls(float(z.real), float(z.imag))


@dataclass(frozen=True)
class EisensteinSpec:
    T: float
    truncation_A: Optional[float] = None
    normalized: bool = False

    def __post_init__(self):
        if self.truncation_A is not None and not self.truncation_A > 1:
            raise DomainError("truncation height A must exceed 1")


@dataclass(frozen=True)
class MaassFormRecord:
    """Hecke--Maass cusp form data, normalized so that lambda(1) = 1.

    ``coefficients[n-1]`` holds lambda(n). ``ramanujan_flag`` is set when some
    |lambda(n)| exceeds 1.2 d(n), a soft sanity check.
    """

    label: str
    spectral_parameter: float
    coefficients: np.ndarray
    sym2_L_value: Optional[float] = None
    source: str = "fixture"
    parity: str = "even"
    spectral_parameter_text: Optional[str] = None
    provenance: str = ""
    ramanujan_flag: bool = field(default=False, compare=False)

    def __post_init__(self):
        coeffs = np.asarray(self.coefficients, dtype=float)
        coeffs.setflags(write=False)
        object.__setattr__(self, "coefficients", coeffs)
        if self.source not in ("lmfdb", "fixture", "synthetic"):
            raise ValidationError(f"unknown source {self.source!r}")
        if coeffs.size == 0 or abs(coeffs[0] - 1.0) > 1e-12:
            raise ValidationError(f"{self.label}: lambda(1) must equal 1")
        if not np.all(np.isfinite(coeffs)):
            raise ValidationError(f"{self.label}: non-finite coefficient")
        if self.sym2_L_value is not None and not self.sym2_L_value > 0:
            raise ValidationError(f"{self.label}: L(1, Sym^2) must be positive")
        bound = 1.2 * _divisor_counts(coeffs.size)
        object.__setattr__(self, "ramanujan_flag", bool(np.any(np.abs(coeffs) > bound)))

    @property
    def n_max(self):
        return self.coefficients.size

    def rho1(self):
        """|rho(1)| = sqrt(cosh(pi t) / (2 L(1, Sym^2))), taken positive."""
        if self.sym2_L_value is None:
            raise MissingInputError(f"{self.label}: L(1, Sym^2) value is required")
        return math.sqrt(math.cosh(math.pi * self.spectral_parameter) / (2 * self.sym2_L_value))


@lru_cache(maxsize=8)
def _divisor_counts(n):
    d = np.zeros(n + 1, dtype=float)
    for k in range(1, n + 1):
        d[k::k] += 1
    return d[1:]


# ---------------------------------------------------------------------------
# modular group
# ---------------------------------------------------------------------------

def _as_xy(z):
    if isinstance(z, UpperHalfPoint):
        return np.array([z.x]), np.array([z.y]), True
    if isinstance(z, tuple) and len(z) == 2:
        x, y = (np.asarray(v, dtype=float) for v in z)
        x, y = np.broadcast_arrays(x, y)
        scalar = x.ndim == 0
        return np.atleast_1d(x).astype(float), np.atleast_1d(y).astype(float), scalar
    arr = np.asarray(z)
    if np.iscomplexobj(arr) or arr.dtype.kind in "fi":
        arr = arr.astype(complex)
        return np.atleast_1d(arr.real).copy(), np.atleast_1d(arr.imag).copy(), arr.ndim == 0
    raise TypeError(f"cannot interpret {type(z).__name__} as a point")


def _wrap(values, scalar):
    return values[0] if scalar else values


def apply_modular(matrix, z):
    """Apply (a b; c d) to z = x + iy; returns a complex array or scalar."""
    a, b, c, d = (int(v) for v in np.ravel(matrix))
    if a * d - b * c != 1:
        raise DomainError("matrix must have determinant 1")
    x, y, scalar = _as_xy(z)
    w = x + 1j * y
    out = (a * w + b) / (c * w + d)
    return _wrap(out, scalar)


def reduce_points(x, y, tol=1e-12, max_steps=10_000):
    """Vectorized reduction of points to the standard fundamental domain."""
    x = np.array(x, dtype=float, copy=True).ravel()
    y = np.array(y, dtype=float, copy=True).ravel()
    if np.any(~(y > 0)):
        raise DomainError("all points need y > 0")
    active = np.ones(x.size, dtype=bool)
    for _ in range(max_steps):
        x[active] -= np.floor(x[active] + 0.5)
        r2 = x * x + y * y
        flip = active & (r2 < 1 - tol)
        if not flip.any():
            break
        x[flip], y[flip] = -x[flip] / r2[flip], y[flip] / r2[flip]
        active = flip
    else:
        raise ConvergenceError(f"reduction did not converge in {max_steps} steps")
    return x, y


def reduce_to_fundamental_domain(z):
    """Map z into {|x| <= 1/2, x^2 + y^2 >= 1} by translations and inversion."""
    x, y, scalar = _as_xy(z)
    rx, ry = reduce_points(x, y)
    if isinstance(z, UpperHalfPoint):
        return UpperHalfPoint(float(rx[0]), float(ry[0]))
    out = rx + 1j * ry
    return _wrap(out, scalar)


# ---------------------------------------------------------------------------
# Eisenstein series
# ---------------------------------------------------------------------------

def _check_s(s):
    s = complex(s)
    for pole in (0.0, 0.5, 1.0):
        if abs(s - pole) < 1e-14:
            raise PoleError(f"E(z, s) expansion is singular at s = {pole:g}")
    return s


def scattering_phi(s):
    """phi(s) = xi(2s-1)/xi(2s), evaluated in log space."""
    s = _check_s(s)
    return complex(np.exp(specfun.log_xi(2 * s - 1) - specfun.log_xi(2 * s)))


@lru_cache(maxsize=64)
def _arith_weights(s, n):
    """n^{s-1/2} sigma_{1-2s}(n) for n = 1..N."""
    ks = np.arange(1, n + 1, dtype=float)
    powers = np.exp((1 - 2 * s) * np.log(ks))
    sig = np.zeros(n, dtype=complex)
    for d in range(1, n + 1):
        sig[d - 1 :: d] += powers[d - 1]
    return np.exp((s - 0.5) * np.log(ks)) * sig


def default_cutoff(t, y, W=1.5):
    return max(1, int(math.ceil((abs(t) + 10) / (2 * math.pi * y) * W)))


def _eisenstein_row_coeffs(s, y, n_terms, scale):
    """Fourier coefficients c_n (n = 1..N) at height y, with error, grown until negligible."""
    nu = s - 0.5
    lpref = -0.5 * math.pi * abs(nu.imag) - specfun.log_xi(2 * s)
    pref = 4 * math.sqrt(y) * np.exp(lpref)
    N = max(n_terms, int(math.ceil((abs(nu.imag) + 2 * abs(nu.real) + 45) / (2 * math.pi * y))))
    while True:
        if N > MAX_FOURIER_TERMS:
            raise ConvergenceError(f"Fourier cutoff exceeds {MAX_FOURIER_TERMS} at y = {y:g}")
        n = np.arange(1, N + 1)
        kb = specfun.bessel_k(nu, 2 * math.pi * n * y, scaled=True)
        w = _arith_weights(s, N)
        c = pref * w * kb.value
        tail = np.abs(c[-3:]).max()
        if tail <= TAIL_RTOL * scale or kb.underflow[-1]:
            err = np.sum(np.abs(pref * w) * kb.error) + 3 * tail
            return c, err
        N = int(N * 1.5) + 1


def constant_term_s(y, s):
    """y^s + phi(s) y^{1-s} for general s."""
    s = _check_s(s)
    y = np.asarray(y, dtype=float)
    return y**s + scattering_phi(s) * y ** (1 - s)


def eisenstein_eval(z, s, fourier_cutoff=None, with_error=False):
    """E(z, s) from its Fourier expansion.

    The cutoff is raised until the Bessel terms drop below 1e-16 of the
    constant term, so truncation is negligible for y >= 0.5. Points are not
    reduced here; call :func:`reduce_to_fundamental_domain` first for small y.
    """
    s = _check_s(s)
    x, y, scalar = _as_xy(z)
    if np.any(~(y > 0)):
        raise DomainError("points need y > 0")
    out = np.empty(x.size, dtype=complex)
    errs = np.empty(x.size)
    phi = scattering_phi(s)
    ys, inverse = np.unique(y, return_inverse=True)
    for k, yk in enumerate(ys):
        sel = np.nonzero(inverse == k)[0]
        const = yk**s + phi * yk ** (1 - s)
        scale = max(abs(const), 1.0)
        n0 = fourier_cutoff or default_cutoff((s - 0.5).imag, yk)
        c, err = _eisenstein_row_coeffs(s, float(yk), int(n0), scale)
        n = np.arange(1, c.size + 1)
        xs = x[sel] - np.round(x[sel])
        out[sel] = const + np.cos(2 * math.pi * np.outer(xs, n)) @ c
        # rounding in the cosine arguments and in y^s grows with n and |s log y|
        errs[sel] = err + 1e-15 * (np.abs(c).sum() + 2 * math.pi * (np.abs(c) * n).sum() * 0.5
                                   + abs(const) * (1 + abs(s) * abs(math.log(yk))))
    res = _wrap(out, scalar)
    return (res, _wrap(errs, scalar)) if with_error else res


def constant_term(y, T):
    """e(y, 1/2 + iT) = y^{1/2+iT} + xi(1-2iT)/xi(1+2iT) y^{1/2-iT}."""
    if T == 0:
        raise PoleError("constant term is degenerate at T = 0")
    ratio = np.exp(specfun.log_xi(1 - 2j * T) - specfun.log_xi(1 + 2j * T))
    y = np.asarray(y, dtype=float)
    val = y ** (0.5 + 1j * T) + ratio * y ** (0.5 - 1j * T)
    return val.item() if val.ndim == 0 else val


def truncated_eisenstein_eval(z, spec, fourier_cutoff=None, with_error=False):
    """E^A(z, 1/2+iT): E on y <= A, E minus its constant term above A."""
    if spec.truncation_A is None:
        raise MissingInputError("EisensteinSpec.truncation_A is required")
    x, y, scalar = _as_xy(z)
    s = 0.5 + 1j * spec.T
    val, err = eisenstein_eval((x, y), s, fourier_cutoff, with_error=True)
    above = y > spec.truncation_A
    if np.any(above):
        val[above] -= constant_term(y[above], spec.T)
    if spec.normalized:
        val = val * normalization_factor(spec.T)
    res = _wrap(val, scalar)
    return (res, _wrap(err, scalar)) if with_error else res


def normalization_factor(T):
    """sqrt(vol/log(1/4+T^2)) times the unimodular phase xi(1+2iT)/|xi(1+2iT)|."""
    if T < 1:
        raise DomainError("normalized Eisenstein series requires T >= 1")
    phase = np.exp(1j * specfun.log_xi(1 + 2j * T).imag)
    return math.sqrt(VOL_X / math.log(0.25 + T * T)) * complex(phase)


def normalized_eisenstein_eval(z, T, fourier_cutoff=None, with_error=False):
    """Unit-mass normalized E_T, rotated so the phase is fixed."""
    c = normalization_factor(T)
    val, err = eisenstein_eval(z, 0.5 + 1j * T, fourier_cutoff, with_error=True)
    return (c * val, abs(c) * err) if with_error else c * val


# ---------------------------------------------------------------------------
# Maass cusp forms
# ---------------------------------------------------------------------------

def maass_eval(record, z, fourier_cutoff=None, with_error=True):
    """phi(z) = 4 sqrt(y) rho(1) sum_n lambda(n) K_{it}(2 pi n y) cos(2 pi n x).

    Returns ``(value, error_estimate)`` unless ``with_error`` is false. The
    product rho(1) K is formed from the scaled Bessel function so that the
    factors exp(+-pi t/2) cancel exactly.
    """
    if record.parity != "even":
        raise UnsupportedParityError("only even Maass forms are supported")
    if record.sym2_L_value is None:
        raise MissingInputError(f"{record.label}: L(1, Sym^2) value is required")
    t = record.spectral_parameter
    x, y, scalar = _as_xy(z)
    # rho(1) exp(-pi t/2) = sqrt((1 + exp(-2 pi t)) / (4 L))
    rho_scaled = math.sqrt((1 + math.exp(-2 * math.pi * t)) / (4 * record.sym2_L_value))
    out = np.empty(x.size)
    errs = np.empty(x.size)
    ys, inverse = np.unique(y, return_inverse=True)
    for k, yk in enumerate(ys):
        sel = np.nonzero(inverse == k)[0]
        N = fourier_cutoff or default_cutoff(t, yk)
        need = int(math.ceil((abs(t) + 45) / (2 * math.pi * yk)))
        N = max(N, need) if fourier_cutoff is None else N
        if N > record.n_max:
            raise InsufficientCoefficientsError(
                f"{record.label}: need {N} coefficients at y = {yk:g}, have {record.n_max}"
            )
        n = np.arange(1, N + 1)
        kb = specfun.bessel_k(1j * t, 2 * math.pi * n * yk, scaled=True)
        c = 4 * math.sqrt(yk) * rho_scaled * record.coefficients[:N] * np.real(kb.value)
        out[sel] = np.cos(2 * math.pi * np.outer(x[sel], n)) @ c
        trunc = 3 * abs(c[-1])
        errs[sel] = trunc + np.sum(np.abs(4 * math.sqrt(yk) * rho_scaled * record.coefficients[:N]) * kb.error)
    res = _wrap(out, scalar)
    return (res, _wrap(errs, scalar)) if with_error else res
