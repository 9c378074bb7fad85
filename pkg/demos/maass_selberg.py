"""Norm of the truncated Eisenstein series: closed form against direct quadrature.

The closed form grows like 2 log A plus a bounded oscillation. Quadrature over
the fundamental domain has to reproduce it for every truncation height.
"""

import time

from mixmoments import formulas, quadrature

T = 5.0
print(f"{'A':>5} {'closed form':>14} {'quadrature':>14} {'rel. dev':>10} {'sec':>5}")
for A in (1.5, 2.0, 3.0, 4.0, 6.0):
    t0 = time.perf_counter()
    q = quadrature.truncated_norm_squared(T, A).real
    dt = time.perf_counter() - t0
    c = formulas.maass_selberg_truncated_norm(T, A)
    print(f"{A:5.1f} {c:14.9f} {q:14.9f} {abs(q - c) / abs(c):10.1e} {dt:5.1f}")
