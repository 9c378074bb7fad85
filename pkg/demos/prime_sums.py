"""Arithmetic inputs to the moment predictions.

Mertens' theorem and the Hecke relations come first, then the predicted
powers of log X for mixed moments.
"""

import math

from mixmoments import momentlab, specfun

table = specfun.sieve(10**6)
for x in (1e3, 1e4, 1e5, 1e6):
    s = momentlab.prime_sum_shifted(table, x, 0).real
    print(f"x = {x:8.0e}  sum 1/p - loglog x = {s - math.log(math.log(x)):.6f}")
print("Mertens constant     0.261497...")

# lambda(p)^a as a combination of lambda(p^b); the constant terms are Catalan numbers
for a in range(0, 9, 2):
    print(f"a = {a}: {momentlab.hecke_power_expand(a)}")

# under the Sato-Tate law lambda(p) has mean 0 and second moment 1
sampler = momentlab.SatakeSampler(seed=0, limit=10**5, sato_tate=True)
_, lam = sampler.lam_primes(10**5)
print(f"Sato-Tate sample: mean lambda = {lam.mean():+.4f}, mean lambda^2 = {(lam ** 2).mean():.4f}")

X = 1e12
for exps in ((0.5, 0.5, 1.0), (1.5, 0.5, 1.0), (2.0, 2.0, 0.0)):
    p = momentlab.sigma_mu_exponent(momentlab.MomentExponents(*exps), 0, 10j, X, 0.0)
    print(f"exponents {exps}: mu = {p.mu:8.3f}  sigma^2 = {p.sigma_sq:8.3f}  power of log X = {p.log_power:.4f}")
