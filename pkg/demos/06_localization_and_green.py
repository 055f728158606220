#!/usr/bin/env python3
"""Localization diagnostics: eigenfunction decay rates and Green's functions."""

import math

from harperlab.cocycle import lyapunov_formula
from harperlab.contfrac import golden
from harperlab.errors import PoorlyLocalized
from harperlab.model import CouplingTriple, OperatorSample, build_truncation, green_function
from harperlab.spectral import decay_fit, regularity_test

print("=== eigenfunction decay at the Lyapunov rate ===")
for t in [(0.0, 0.4, 0.0), (0.1, 0.5, 0.2)]:
    c = CouplingTriple(*t)
    fit = decay_fit(OperatorSample(c, golden(), 0.135), 800)
    print(
        f"  {t}: slope {fit.slope:.4f} vs -L = {-lyapunov_formula(c):.4f}, "
        f"r^2 = {fit.r2:.4f}, E = {fit.eigenvalue:.4f}"
    )

print("\n=== no exponential fit in the absolutely continuous regime ===")
try:
    decay_fit(OperatorSample(CouplingTriple(0.1, 2.0, 0.1), golden(), 0.135), 800)
    print("  unexpected: got a fit in region II")
except PoorlyLocalized as exc:
    print(f"  region II coupling: {exc}")

print("\n=== windowed Green's functions ===")
s = OperatorSample(CouplingTriple(0, 0.3, 0), golden(), 0.135)
tr = build_truncation(s, -12, 12)
e = 0.77
print("  |G(0, x)| for the 25-site window at E = 0.77:")
for x in range(0, 13, 3):
    g = abs(green_function(tr, e, 0, x))
    rate = -math.log(g) / x if x else float("nan")
    print(f"    x = {x:2d}: |G| = {g:.3e}" + (f"  (decay rate {rate:.3f})" if x else ""))

print("\n=== (m, k)-regularity of a site ===")
res = regularity_test(s, energy=0.77, y=0, m=1.0, k=18)
print(f"  y=0 is (1.0, 18)-regular: {res.regular}, window {res.window}")
res = regularity_test(s, energy=0.77, y=0, m=50.0, k=18)
print(f"  y=0 is (50, 18)-regular: {res.regular} (rate unattainable)")
