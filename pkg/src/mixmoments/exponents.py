"""Archimedean exponents P, Q and the Gamma weights they control.

P and Q are piecewise-linear functions describing the exponential decay of
products of Gamma factors. Each has a direct absolute-value form, which is
the oracle for the case tables implemented here. Boundaries between cases go
to the first listed branch; adjacent branches agree there.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from . import specfun
from .errors import DomainError, PoleError, RegimeError

__all__ = [
    "PiecewiseExponent",
    "p_exponent",
    "p_exponent_direct",
    "q_exponent",
    "q_exponent_direct",
    "q_regime",
    "h_weight",
    "gamma_weight_exact",
    "log_gamma_weight",
    "stirling_log_gamma_weight",
]


class PiecewiseExponent(NamedTuple):
    value: float
    branch: str


def p_exponent_direct(t_j, t, T):
    return abs(t_j + t) + abs(t_j - t) + abs(t_j - 2 * T + t) - t_j + t - 2 * T


def p_exponent(t_j, t, T):
    """P(t_j, t, T) by case analysis.

    Three tables: 0 <= t <= T, t > T, and t <= 0. The lowest branch is
    2(t - t_j) (resp. -2(t + t_j)), which is what the absolute-value form
    gives.
    """
    if t_j < 0 or T < 0:
        raise DomainError("requires t_j >= 0 and T >= 0")
    if 0 <= t <= T:
        if t_j >= 2 * T - t:
            return PiecewiseExponent(2 * t_j + 2 * t - 4 * T, "t>=0: t_j >= 2T-t")
        if t_j >= t:
            return PiecewiseExponent(0.0, "t>=0: t <= t_j <= 2T-t")
        return PiecewiseExponent(2 * (t - t_j), "t>=0: 0 <= t_j <= t")
    if t > T:
        if t_j >= t:
            return PiecewiseExponent(2 * t_j + 2 * t - 4 * T, "t>T: t_j >= t")
        if t_j >= 2 * T - t:
            return PiecewiseExponent(4 * t - 4 * T, "t>T: 2T-t <= t_j <= t")
        return PiecewiseExponent(2 * (t - t_j), "t>T: 0 <= t_j <= 2T-t")
    if t_j >= 2 * T - t:
        return PiecewiseExponent(2 * t_j + 2 * t - 4 * T, "t<=0: t_j >= 2T-t")
    if t_j >= -t:
        return PiecewiseExponent(0.0, "t<=0: -t <= t_j <= 2T-t")
    return PiecewiseExponent(-2 * (t + t_j), "t<=0: 0 <= t_j <= -t")


def q_exponent_direct(t, t_j, T, t_phi):
    return 0.5 * (abs(t_j - 2 * t_phi) + abs(t_j + t) + abs(t_j - t) + abs(t_j - 2 * T + t)
                  + t) - t_phi - T


def q_regime(t, T, t_phi):
    """Which of the three t-ranges applies: "large", "middle" or "small"."""
    if t_phi <= 1:
        raise RegimeError("requires t_phi > 1 so that log t_phi > 0")
    if T > t_phi:
        raise RegimeError(f"case tables assume T <= t_phi (T={T}, t_phi={t_phi})")
    cap = math.log(t_phi) ** 20
    if 0 <= t <= cap:
        if t > T:
            raise RegimeError(f"t={t} exceeds T={T}; the table for t >= 0 needs t <= T")
        return "large"
    if 2 * T - 2 * t_phi <= t <= 0:
        return "middle"
    if -cap <= t <= 2 * T - 2 * t_phi:
        if t < -2 * t_phi:
            raise RegimeError(f"t={t} below -2 t_phi; the case table is not ordered there")
        return "small"
    raise RegimeError(f"t={t} lies in none of the three ranges")


def q_exponent(t, t_j, T, t_phi):
    """Q(t, t_j, T, t_phi) by case analysis in the regime selected by t."""
    if t_j < 0:
        raise DomainError("requires t_j >= 0")
    regime = q_regime(t, T, t_phi)
    top = 2 * t_j - 2 * t_phi + t - 2 * T
    if regime == "large":
        if t_j >= 2 * t_phi:
            return PiecewiseExponent(top, "large: t_j >= 2t_phi")
        if t_j >= 2 * T - t:
            return PiecewiseExponent(t_j - 2 * T + t, "large: 2T-t <= t_j <= 2t_phi")
        if t_j >= t:
            return PiecewiseExponent(0.0, "large: t <= t_j <= 2T-t")
        return PiecewiseExponent(t - t_j, "large: t_j <= t")
    if regime == "middle":
        if t_j >= 2 * t_phi:
            return PiecewiseExponent(top, "middle: t_j >= 2t_phi")
        if t_j >= 2 * T - t:
            return PiecewiseExponent(t_j + t - 2 * T, "middle: 2T-t <= t_j <= 2t_phi")
        if t_j >= -t:
            return PiecewiseExponent(0.0, "middle: -t <= t_j <= 2T-t")
        return PiecewiseExponent(-t - t_j, "middle: t_j <= -t")
    if t_j >= 2 * T - t:
        return PiecewiseExponent(top, "small: t_j >= 2T-t")
    if t_j >= 2 * t_phi:
        return PiecewiseExponent(t_j - 2 * t_phi, "small: 2t_phi <= t_j <= 2T-t")
    if t_j >= -t:
        return PiecewiseExponent(0.0, "small: -t <= t_j <= 2t_phi")
    return PiecewiseExponent(-t - t_j, "small: t_j <= -t")


def h_weight(t_j, t, T, log_tphi):
    """Stirling envelope of the H weight: polynomial factors times exp(-(pi/2) P)."""
    if not log_tphi > 0:
        raise DomainError("log_tphi must be positive")
    a = 0.5 + 1 / log_tphi
    logpoly = a * sum(math.log1p(abs(x)) for x in (t + t_j, t - t_j, t - 2 * T + t_j, t - 2 * T - t_j))
    logpoly += math.log1p(abs(t - T)) / log_tphi
    return math.exp(logpoly - 0.5 * math.pi * p_exponent_direct(t_j, t, T))


# ---------------------------------------------------------------------------
# exact Gamma weights
# ---------------------------------------------------------------------------

def _gamma_args(kind, t_j, t, T, t_phi):
    """(numerator args, numerator powers, denominator args, denominator powers).

    Each entry contributes power * log|Gamma(arg)|.
    """
    if kind in ("H", "H1H2"):
        sigma = 0.5 + 1 / math.log(t_phi)
        num = [(sigma + 1j * t + s * 1j * t_j) / 2 for s in (1, -1)]
        num += [(sigma + 1j * t - 2j * T + s * 1j * t_j) / 2 for s in (1, -1)]
        den = [0.5 + 1j * t_j, 0.5 + 1j * T, sigma + 1j * t - 1j * T]
        npow, dpow = [1.0] * 4, [1.0] * 3
        if kind == "H1H2":
            num += [(0.5 + 1j * t_j) / 2]
            npow += [2.0]
            num += [(0.5 + 2j * t_phi + s * 1j * t_j) / 2 for s in (1, -1)]
            npow += [1.0, 1.0]
            den += [0.5 + 1j * t_j, 0.5 + 1j * t_phi]
            dpow += [1.0, 2.0]
        return num, npow, den, dpow
    if kind == "watson":
        num = [(0.5 + 1j * T + a * 1j * t_phi + b * 1j * t_j) / 2 for a in (1, -1) for b in (1, -1)]
        den = [0.5 + 1j * T, 0.5 + 1j * t_phi, 0.5 + 1j * t_j]
        return num, [1.0] * 4, den, [1.0] * 3
    raise DomainError(f"unknown weight kind {kind!r}")


def _check_poles(args, eps):
    for z in args:
        if z.real <= eps and abs(z.imag) < eps and abs(z.real - round(z.real)) < eps:
            raise PoleError(f"Gamma argument {z} within {eps} of a pole")


def log_gamma_weight(t_j, t, T, t_phi, kind="H", eps=1e-8):
    """log of the unsquared magnitude |ratio of Gamma products|.

    ``kind="H"`` is the ratio whose square is the weight H(t_j, t, T);
    ``"H1H2"`` multiplies in the H2 factor of the cusp-form sum (its log is
    about -(pi/2) Q); ``"watson"`` gives the square root of the Watson
    factor gamma(t_j, t_phi, T).
    """
    num, npow, den, dpow = _gamma_args(kind, t_j, t, T, t_phi)
    _check_poles(num + den, eps)
    lg = lambda z: specfun.log_gamma(z).real
    return (sum(p * lg(z) for z, p in zip(num, npow))
            - sum(p * lg(z) for z, p in zip(den, dpow)))


def gamma_weight_exact(t_j, t, T, t_phi, eps=1e-8, kind="H", squared=True):
    """Exact Gamma weight, |ratio|^2 by default (the form that enters the sums).

    For ``kind="watson"`` the ``t`` argument is ignored. The value may
    underflow to zero deep in the decay regime; use :func:`log_gamma_weight`
    there.
    """
    lv = log_gamma_weight(t_j, t, T, t_phi, kind=kind, eps=eps)
    return math.exp(2 * lv if squared else lv)


def _stirling_log_abs(z):
    z = complex(z)
    return ((z - 0.5) * np.log(z) - z).real + 0.5 * math.log(2 * math.pi)


def stirling_log_gamma_weight(t_j, t, T, t_phi, kind="H"):
    """Same as :func:`log_gamma_weight` with every log|Gamma| replaced by Stirling's leading terms."""
    num, npow, den, dpow = _gamma_args(kind, t_j, t, T, t_phi)
    return (sum(p * _stirling_log_abs(z) for z, p in zip(num, npow))
            - sum(p * _stirling_log_abs(z) for z, p in zip(den, dpow)))
