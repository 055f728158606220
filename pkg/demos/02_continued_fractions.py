#!/usr/bin/env python3
"""Exact continued fractions: convergents, growth exponents, Diophantine tests."""

import math

from harperlab.contfrac import (
    beta_exponent,
    dc_alpha_membership,
    dc_membership,
    expand,
    golden,
    silver,
)

print("=== golden and silver means ===")
g, s = golden(), silver()
print("  golden digits:", g.digits(12))
print("  golden q_n (Fibonacci):", [g.q(n) for n in range(1, 10)])
print("  silver convergents:", [s.convergent(n) for n in range(1, 5)])

print("\n=== certified expansion of a float ===")
x = (math.sqrt(5) - 1) / 2
cf = expand(x, max_depth=20)
p, q = cf.convergent(20)
print(f"  expand({x:.15f}) -> digits {cf.digits(20)}")
print(f"  deepest convergent {p}/{q}, |x - p/q| = {abs(x - p / q):.2e}")

print("\n=== denominator growth exponent ===")
fe = beta_exponent(g, depth=25, warmup=10)
print(f"  golden: estimate {fe.beta_estimate:.4f} (digit-based {fe.alt_estimate:.4f})")
print("  per level (n, ln q_(n+1)/q_n):",
      [(n, round(v, 4)) for n, v in fe.per_level[8:14]])

print("\n=== Diophantine scans in exact arithmetic ===")
v = dc_membership(g, tau=2.0, gamma=0.2, K=200)
print(f"  golden in DC(2, 0.2) up to K=200: holds={v.holds}")
v = dc_alpha_membership(0.25, g, tau=2.0, gamma=0.1, K=100)
print(f"  theta=1/4 in DC_alpha(2, 0.1) up to |k|<=100: holds={v.holds}")
theta = g.fraction(10**12) / 2
v = dc_alpha_membership(theta, g, tau=2.0, gamma=0.1, K=10)
print(f"  theta=alpha/2 violates at k={v.k} with ||2 theta - k alpha|| <= {v.value:.1e}")
