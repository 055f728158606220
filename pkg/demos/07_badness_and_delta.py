#!/usr/bin/env python3
"""The arithmetic side of the transition: delta(alpha, theta) and window mass.

A frequency forged with beta > L makes every normalized solution carry mass
in a fixed window (the obstruction to eigenfunctions); at beta = 0 a
localized witness keeps the window mass bounded.
"""

import numpy as np

from harperlab._tridiag import bisect_eigenvalues, inverse_iteration
from harperlab.contfrac import ConstantBeta, beta_exponent, forge, golden
from harperlab.model import CouplingTriple, OperatorSample, build_truncation
from harperlab.spectral import badness_scan, delta_exponent

print("=== delta tracks beta for admissible phases ===")
cf = forge(golden(), n0=3, schedule=ConstantBeta(0.3), levels=3)
c = CouplingTriple(0.25, 0.5, 0.25)  # single zero of c
dest, dlevels = delta_exponent(c, cf, theta=0.135, depth=cf.depth)
fe = beta_exponent(cf, depth=cf.depth)
print("  level   beta      delta")
for (n, b), (_, d) in zip(fe.per_level, dlevels):
    print(f"   {n}     {b:8.4f}  {d:8.4f}")

print("\n=== window-mass scan: beta = 1.0 > L = ln 2 ===")
cf_bad = forge(golden(), n0=2, schedule=ConstantBeta(1.0), levels=3)
samp = OperatorSample(CouplingTriple(0, 0.5, 0), cf_bad, 0.135)
for N in (8, 16, 32, 64):
    rep = badness_scan(samp, C=3.0, N=N, E_count=6, refine=True)
    print(f"  N = {N:3d}: min mass {rep.min_mass:10.3f}  verdict {rep.verdict}")

print("\n=== contrast: golden frequency (beta = 0), localized witness ===")
samp = OperatorSample(CouplingTriple(0, 0.5, 0), golden(), 0.135)
size = 512
tr = build_truncation(samp, -size // 2, size - 1 - size // 2)
d, b = tr.gauge_symmetric()
eigs = bisect_eigenvalues(d, b)
rng = np.random.default_rng(5)
near = [
    float(eigs[i])
    for i in range(size)
    if abs(int(np.argmax(np.abs(inverse_iteration(d, b, eigs[i], rng=rng)))) + tr.x1) <= 2
]
print(f"  eigenvalues with eigenvector peaked near the origin: {[round(e, 4) for e in near[:3]]}")
for N in (8, 16, 32):
    rep = badness_scan(samp, C=3.0, N=N, energies=near[:2], refine=True)
    print(f"  N = {N:3d}: min mass {rep.min_mass:10.3f}  verdict {rep.verdict}")
