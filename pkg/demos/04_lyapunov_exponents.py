#!/usr/bin/env python3
"""Lyapunov exponents: closed formula vs long transfer-matrix products."""

import time

from harperlab.cocycle import lyapunov_formula, lyapunov_numeric
from harperlab.contfrac import golden
from harperlab.model import CouplingTriple, OperatorSample
from harperlab.spectral import truncated_spectrum

couplings = [
    (0.0, 0.5, 0.0),   # almost Mathieu, L = ln 2
    (0.1, 0.5, 0.2),   # generic region I
    (0.25, 1.0, 0.25), # on the boundary line: L = 0
    (0.1, 2.0, 0.1),   # region II: L = 0 on the spectrum
]

print("coupling              formula    numeric    stderr     time")
for t in couplings:
    c = CouplingTriple(*t)
    s = OperatorSample(c, golden(), 0.0)
    spec = truncated_spectrum(s, 512)
    e_mid = float(spec.eigenvalues[256])
    t0 = time.perf_counter()
    est = lyapunov_numeric(s, e_mid, n_steps=50_000, theta_grid=32)
    dt = time.perf_counter() - t0
    print(
        f"{str(t):<20}  {lyapunov_formula(c):.5f}    {est.value:.5f}   "
        f"{est.stderr:.1e}   {dt:4.1f}s"
    )

print("\noff the spectrum the exponent exceeds the on-spectrum value:")
c = CouplingTriple(0, 0.5, 0)
s = OperatorSample(c, golden(), 0.0)
for e in [0.0065, 4.0, 10.0]:
    est = lyapunov_numeric(s, e, n_steps=5000, theta_grid=16)
    print(f"  E = {e:5.2f}: {est.value:.4f}")
