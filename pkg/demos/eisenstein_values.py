"""Eisenstein series on the modular surface, from automorphy up into the cusp."""

import numpy as np

from mixmoments import forms

# a point in the fundamental domain and one of its translates under SL2(Z)
z = (0.1, 1.3)
w = forms.apply_modular(((2, 1), (1, 1)), complex(*z))
s = 0.5 + 7j

a, ea = forms.eisenstein_eval(z, s, with_error=True)
b, eb = forms.eisenstein_eval((w.real, w.imag), s, with_error=True)
print(f"E(z, s)     = {a:.12f}  (+- {ea:.1e})")
print(f"E(gz, s)    = {b:.12f}  (+- {eb:.1e})")
print(f"difference  = {abs(a - b):.1e}")

# high in the cusp the constant term y^s + phi(s) y^(1-s) is all that survives
for y in (2.0, 4.0, 8.0):
    full = forms.eisenstein_eval((0.3, y), s)
    const = forms.constant_term_s(y, s)
    print(f"y = {y:4.1f}   E - constant term = {abs(full - const):.2e}")

# truncation removes the constant term above height A, leaving a rapidly decaying function
T, A = 7.0, 2.0
ys = np.array([1.0, 1.5, 2.5, 4.0, 6.0])
vals = forms.truncated_eisenstein_eval((np.zeros_like(ys), ys), forms.EisensteinSpec(T=T, truncation_A=A))
for y, v in zip(ys, vals):
    print(f"E^A(iy, 1/2+{T:g}i) at y = {y:3.1f}: {abs(v):.3e}")
