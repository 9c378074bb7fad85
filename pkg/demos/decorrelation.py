"""Two Eisenstein series with nearby spectral parameters are not independent.

The main term (6/pi) sin((t-tau) log tau)/(t-tau) peaks at t = tau with height
(6/pi) log tau and only decays on the scale 1/log tau, so series whose
parameters differ by less than about 1 stay correlated.
"""

import math

import numpy as np

from mixmoments import formulas

tau = 100.0
print(f"peak value (6/pi) log tau = {6 / math.pi * math.log(tau):.6f}")
for d in np.linspace(-1.0, 1.0, 11):
    v = formulas.decorrelation_main_term(tau + d, tau)
    bar = "#" * max(0, int(round(4 * v)))
    print(f"t - tau = {d:+.1f}  {v:9.5f}  {bar}")

# the phase model is accurate to first order in t - tau
for d in (1e-2, 1e-3, 1e-4):
    err = formulas.decorrelation_phase_error(1e3 + d, 1e3)
    print(f"|t - tau| = {d:.0e}: phase error {err:.2e}")
