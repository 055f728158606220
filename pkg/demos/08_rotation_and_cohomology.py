#!/usr/bin/env python3
"""Rotation numbers, small divisors, and the rigidity of commutants."""

import numpy as np

from harperlab.cocycle import (
    commutant_rigidity_check,
    constant_rotation,
    degree,
    rotation_matrix,
    rotation_number,
    rotation_number_map,
    solve_cohomological,
)
from harperlab.contfrac import golden, silver
from harperlab.errors import DivisorFloorViolated
from harperlab.model import CouplingTriple, OperatorSample

print("=== fibered rotation numbers ===")
m = constant_rotation(float(golden().fraction(10**9)), 0.3125)
est = rotation_number_map(m.matrix, golden(), n_steps=50_000)
print(f"  constant R_0.3125 recovered as {est.value:.8f}")

s = OperatorSample(CouplingTriple(0.1, 2.0, 0.1), golden(), 0.135)
print("  normalized cocycle in region II, rho(E) non-increasing with gap plateaus:")
for e in np.linspace(-2.5, 4.5, 8):
    est = rotation_number(s, float(e), n_steps=8000)
    print(f"    E = {e:+5.2f}: rho = {est.value:.5f} (stderr {est.stderr:.1e})")

print("\n=== topological degree ===")
for k in (-2, 0, 3):
    print(f"  theta -> R_(k theta/2) with k={k}: degree {degree(lambda th, _k=k: rotation_matrix(_k*th/2))}")

print("\n=== cohomological equation with small divisors ===")
a = float(golden().fraction(10**9))
K = 8
rng = np.random.default_rng(1)
psi0 = rng.standard_normal(2 * K + 1)
psi0[K] = 0.0
ks = np.arange(-K, K + 1)
phi = psi0 * (np.exp(2j * np.pi * ks * a) - 1.0)
psi, report = solve_cohomological(phi, a, s_max=3)
print(f"  round-trip error {np.max(np.abs(psi - psi0)):.2e}")
print(f"  weighted norms sum |k|^j |psi_hat|: {[round(t, 3) for t in report.totals]}")
print(f"  smallest divisor met: {report.min_divisor:.3e}")

print("\n=== commutant rigidity ===")
rho = float(silver().fraction(10**9)) / 2
rep = commutant_rigidity_check(rho, golden(), bandwidth=500, tau=2.0, gamma=0.05)
print(
    f"  rho = silver/2: all {rep.modes_checked} off-diagonal modes killed, "
    f"min divisor {rep.min_divisor:.2e} at k = {rep.argmin_k}"
)
try:
    commutant_rigidity_check(golden().fraction(10**9) / 2, golden(), bandwidth=50)
except DivisorFloorViolated as exc:
    print(f"  rho = alpha/2 is resonant: divisor floor violated at k = {exc.k}")
