"""Integration over the modular fundamental domain.

The domain F = {|x| <= 1/2, x^2 + y^2 >= 1} cut at height Y_max is split
into the arc strip sqrt(1-x^2) <= y <= 1, integrated by x-slices whose lower
limit is exact, and the rectangle 1 <= y <= Y_max. On the rectangle the x
rule is the midpoint rule, which is spectrally accurate for integrands that
are 1-periodic in x. In y the mesh is uniform in log y, with optional
breakpoints (e.g. a truncation height A) placed on panel edges.

Integrands are vectorized callables ``f(x, y) -> array``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np

from . import forms
from .errors import ConvergenceError, DomainError, InvalidGrowthError

VOL_F = math.pi / 3


@dataclass(frozen=True)
class QuadratureConfig:
    """Grid parameters.

    ``nx`` counts midpoint nodes across the rectangle (and Gauss nodes across
    the arc strip); ``ny`` counts nodes per log-y panel. ``rule`` selects
    Gauss--Legendre panels (default) or the midpoint rule with one Richardson
    step.
    """

    nx: int = 32
    ny: int = 16
    height_cutoff: float = 8.0
    target_tol: float = 1e-8
    panel_width: float = 0.35
    rule: str = "gauss"
    max_refinements: int = 1
    breakpoints: tuple = ()

    def __post_init__(self):
        if self.nx < 8 or self.ny < 8:
            raise DomainError("nx and ny must be at least 8")
        if not self.height_cutoff >= 2:
            raise DomainError("height_cutoff must be at least 2")
        if not self.target_tol > 0:
            raise DomainError("target_tol must be positive")
        if self.rule not in ("gauss", "midpoint"):
            raise DomainError(f"unknown rule {self.rule!r}")

    def scaled(self, factor):
        return replace(self, nx=max(8, int(round(self.nx * factor))), ny=max(8, int(round(self.ny * factor))))


@dataclass(frozen=True)
class QuadResult:
    value: complex
    error: float
    nodes: int = 0

    def __complex__(self):
        return complex(self.value)

    @property
    def real(self):
        return complex(self.value).real


@dataclass(frozen=True)
class GrowthTerm:
    """One term c/n! y^alpha log^n y of a cusp expansion."""

    c: complex
    alpha: complex
    n: int = 0


@dataclass(frozen=True)
class GrowthSpec:
    terms: tuple = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(
            t if isinstance(t, GrowthTerm) else GrowthTerm(*t) for t in self.terms))

    def validate(self):
        for t in self.terms:
            for bad in (0.0, 1.0):
                if abs(complex(t.alpha) - bad) < 1e-12:
                    raise InvalidGrowthError(
                        f"growth exponent {complex(t.alpha)} equals {bad:g}; "
                        "the subtraction is undefined there")
        return self


# ---------------------------------------------------------------------------
# grids
# ---------------------------------------------------------------------------

def _gauss(n):
    x, w = np.polynomial.legendre.leggauss(n)
    return x, w


def _midpoint(n):
    x = (np.arange(n) + 0.5) / n * 2 - 1
    return x, np.full(n, 2.0 / n)


def _line_rule(a, b, n, rule, width=None):
    """Composite rule on [a, b] (in whatever variable), panels of at most ``width``."""
    base = _gauss(n) if rule == "gauss" else _midpoint(n)
    m = 1 if width is None else max(1, int(math.ceil((b - a) / width)))
    edges = np.linspace(a, b, m + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    nodes = (mid[:, None] + half[:, None] * base[0][None, :]).ravel()
    weights = (half[:, None] * base[1][None, :]).ravel()
    return nodes, weights


def fundamental_grid(cfg, breakpoints=()):
    """Nodes (x, y) and weights w for sum w f(x, y) ~ int_F f dx dy / y^2."""
    rule = cfg.rule
    # arc strip: x-slices with the exact lower limit sqrt(1 - x^2)
    xa, wa = _line_rule(-0.5, 0.5, cfg.nx, rule)
    base_y = _gauss(cfg.ny) if rule == "gauss" else _midpoint(cfg.ny)
    lo = np.sqrt(1 - xa * xa)
    half = 0.5 * (1 - lo)
    ya = 0.5 * (1 + lo)[:, None] + half[:, None] * base_y[0][None, :]
    wya = half[:, None] * base_y[1][None, :]
    arc_x = np.repeat(xa, cfg.ny)
    arc_y = ya.ravel()
    arc_w = (wa[:, None] * wya).ravel() / arc_y**2
    # rectangle: midpoint in x (periodic), log-y panels split at breakpoints
    xr = (np.arange(cfg.nx) + 0.5) / cfg.nx - 0.5
    cuts = sorted({1.0, cfg.height_cutoff, *[b for b in breakpoints if 1 < b < cfg.height_cutoff]})
    vs, wv = [], []
    for a, b in zip(cuts[:-1], cuts[1:]):
        v, w = _line_rule(math.log(a), math.log(b), cfg.ny, rule, cfg.panel_width)
        vs.append(v)
        wv.append(w)
    v = np.concatenate(vs)
    w = np.concatenate(wv)
    yr = np.exp(v)
    wy = w * np.exp(-v)  # dy / y^2 = e^{-v} dv
    rect_x = np.tile(xr, yr.size)
    rect_y = np.repeat(yr, cfg.nx)
    rect_w = np.repeat(wy, cfg.nx) / cfg.nx
    return (np.concatenate([arc_x, rect_x]),
            np.concatenate([arc_y, rect_y]),
            np.concatenate([arc_w, rect_w]))


def _tail_value(tail, Y):
    if tail is None:
        return 0j
    if callable(tail):
        return complex(tail(Y))
    total = 0j
    for c, beta in tail:
        beta = complex(beta)
        if beta.real >= 1:
            raise DomainError("tail exponent must have real part below 1")
        total += complex(c) * Y ** (beta - 1) / (1 - beta)
    return total


def _raw_integral(f, cfg, breakpoints):
    x, y, w = fundamental_grid(cfg, breakpoints)
    vals = np.asarray(f(x, y))
    if vals.shape != x.shape:
        vals = np.broadcast_to(vals, x.shape)
    return complex(np.sum(w * vals)), x.size


def integrate_fundamental(f, cfg=QuadratureConfig(), tail=None, breakpoints=None):
    """Integrate f over F cut at ``cfg.height_cutoff`` against dx dy / y^2.

    ``tail`` accounts for y > Y_max: either a callable of Y_max or a list of
    (c, beta) meaning f ~ sum c y^beta there (Re beta < 1), integrated
    exactly. The error estimate compares the result with a grid of 2/3 the
    resolution (Gauss) or applies one Richardson step (midpoint).
    """
    bps = tuple(cfg.breakpoints) + tuple(breakpoints or ())
    if callable(f):
        func = f
    else:
        const = complex(f)
        func = lambda x, y: np.full(x.shape, const)  # noqa: E731
    cur = cfg
    for attempt in range(cfg.max_refinements + 1):
        if cur.rule == "gauss":
            fine, nodes = _raw_integral(func, cur, bps)
            coarse, _ = _raw_integral(func, cur.scaled(2 / 3), bps)
            value, err = fine, abs(fine - coarse)
        else:
            coarse, _ = _raw_integral(func, cur, bps)
            fine, nodes = _raw_integral(func, replace(cur, nx=2 * cur.nx, ny=2 * cur.ny), bps)
            value = (4 * fine - coarse) / 3
            err = abs(value - fine)
        value += _tail_value(tail, cur.height_cutoff)
        if err <= cfg.target_tol * max(1.0, abs(value)):
            return QuadResult(value, err, nodes)
        cur = cur.scaled(1.5)
    raise ConvergenceError(
        f"quadrature error estimate {err:.2e} above target {cfg.target_tol:.1e} (value {value})")


def inner_product(f, g, cfg=QuadratureConfig(), tail=None, breakpoints=None):
    """<f, g> = int_F f conj(g) dmu."""
    fv = f if callable(f) else (lambda x, y, c=complex(f): np.full(x.shape, c))
    gv = g if callable(g) else (lambda x, y, c=complex(g): np.full(x.shape, c))
    return integrate_fundamental(lambda x, y: fv(x, y) * np.conj(gv(x, y)), cfg, tail, breakpoints)


# ---------------------------------------------------------------------------
# regularized integrals
# ---------------------------------------------------------------------------

_FD_STEP = {1: 1e-4, 2: 1e-3, 3: 1e-2, 4: 2e-2}


def _fd_derivative(g, s, n):
    """n-th derivative of g at s: central differences with one Richardson step."""
    if n == 0:
        return g(s)
    if n not in _FD_STEP:
        raise DomainError("derivative order above 4 is not supported")
    h = _FD_STEP[n]

    def central(step):
        k = np.arange(n + 1)
        coef = np.array([(-1) ** j * math.comb(n, j) for j in k], dtype=float)
        pts = s + (n / 2 - k) * step
        return sum(c * g(p) for c, p in zip(coef, pts)) / step**n

    return (4 * central(h) - central(2 * h)) / 3


def eisenstein_growth_part(growth, x, y):
    """E_Phi(z) = sum over Re(alpha) > 1/2 of c/n! d^n/ds^n E(z, s) at s = alpha."""
    total = np.zeros(np.shape(x), dtype=complex)
    for t in growth.terms:
        a = complex(t.alpha)
        if a.real <= 0.5:
            continue
        g = lambda s: forms.eisenstein_eval((x, y), s)  # noqa: E731
        total += complex(t.c) / math.factorial(t.n) * _fd_derivative(g, a, t.n)
    return total


def growth_tail(growth, Y):
    """Exact int_Y^inf of the residual constant term of F - E_Phi against dy/y^2."""
    total = 0j
    for t in growth.terms:
        a = complex(t.alpha)
        c = complex(t.c) / math.factorial(t.n)
        if a.real > 0.5:
            # E(z, s) leaves -phi(s) y^{1-s} behind; int_Y^inf y^{-1-s} dy = Y^{-s}/s
            g = lambda s: forms.scattering_phi(s) * Y ** (-s) / s  # noqa: E731
            total -= c * _fd_derivative(g, a, t.n)
        else:
            g = lambda s: Y ** (s - 1) / (1 - s)  # noqa: E731
            total += c * _fd_derivative(g, a, t.n)
    return total


def regularized_integral(F, growth, cfg=QuadratureConfig(), breakpoints=None):
    """Renormalized integral of F by subtraction of an Eisenstein growth part.

    ``growth`` must list the constant term of F above the cutoff: every term
    c/n! y^alpha log^n y. Those with Re(alpha) > 1/2 are removed by
    subtracting c/n! d^n E(z, alpha); what remains above ``cfg.height_cutoff``
    is a finite sum of powers, integrated in closed form. Exponents 0 and 1
    are rejected.
    """
    growth = GrowthSpec(tuple(growth.terms) if isinstance(growth, GrowthSpec) else tuple(growth))
    growth.validate()
    if not growth.terms:
        return integrate_fundamental(F, cfg, breakpoints=breakpoints)

    def integrand(x, y):
        return F(x, y) - eisenstein_growth_part(growth, x, y)

    return integrate_fundamental(integrand, cfg, tail=lambda Y: growth_tail(growth, Y),
                                 breakpoints=breakpoints)


def eisenstein_product_growth(ss):
    """Growth terms of prod_i E(z, s_i): expand prod (y^{s_i} + phi(s_i) y^{1-s_i})."""
    terms = {}
    parts = [(1.0 + 0j, 0j)]
    for s in ss:
        s = complex(s)
        ph = forms.scattering_phi(s)
        parts = [(c * 1, a + s) for c, a in parts] + [(c * ph, a + 1 - s) for c, a in parts]
    for c, a in parts:
        key = (round(a.real, 12), round(a.imag, 12))
        terms[key] = terms.get(key, (0j, a))
        terms[key] = (terms[key][0] + c, a)
    return GrowthSpec(tuple(GrowthTerm(c, a, 0) for c, a in terms.values()))


# ---------------------------------------------------------------------------
# ready-made integrals
# ---------------------------------------------------------------------------

def truncated_norm_squared(T, A, cfg=None):
    """int_F |E^A(z, 1/2 + iT)|^2 dmu by quadrature.

    Above the cutoff E^A is a pure Bessel tail, so no tail correction is
    needed once ``height_cutoff`` sits a few units above A.
    """
    cfg = cfg or QuadratureConfig(nx=32, ny=16, height_cutoff=A + 6)
    spec = forms.EisensteinSpec(T, truncation_A=A)

    def f(x, y):
        return np.abs(forms.truncated_eisenstein_eval((x, y), spec)) ** 2

    return integrate_fundamental(f, cfg, breakpoints=(A,))


def triple_eisenstein_integral(s1, s2, s3, cfg=None):
    """Regularized int_F E(z, 1/2+s1) E(z, 1/2+s2) E(z, 1/2+s3) dmu."""
    ss = [0.5 + complex(s) for s in (s1, s2, s3)]
    cfg = cfg or QuadratureConfig(nx=32, ny=16, height_cutoff=4.0)

    def F(x, y):
        out = forms.eisenstein_eval((x, y), ss[0])
        for s in ss[1:]:
            out = out * forms.eisenstein_eval((x, y), s)
        return out

    return regularized_integral(F, eisenstein_product_growth(ss), cfg)
