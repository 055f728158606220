#!/usr/bin/env python3
"""Forging frequencies with prescribed denominator growth.

Digit schedules splice a controlled tail onto a nice base frequency: either
every digit grows like floor(e^(beta q)) or a single burst is followed by an
all-ones (hence Diophantine) tail.
"""

from harperlab.contfrac import (
    ConstantBeta,
    SingleBurst,
    beta_exponent,
    dc_membership,
    forge,
    golden,
)

print("=== constant-beta schedule targeting beta = 0.3 ===")
cf = forge(golden(), n0=3, schedule=ConstantBeta(0.3), levels=3)
print("  digits:", cf.digits(cf.depth))
print("  q_n:", [cf.q(n) for n in range(1, cf.depth + 1)])
fe = beta_exponent(cf, depth=cf.depth, warmup=1)
for n, v in fe.per_level:
    print(f"    level {n}: ln q_(n+1)/q_n = {v:.4f}")
print(f"  estimate past the active levels: {fe.beta_estimate:.4f} (target 0.3)")

print("\n=== shared head: forged stream equals the base up to n0 ===")
base = golden()
for n in range(4):
    assert cf.convergent(n) == base.convergent(n)
print("  convergents 0..3 match the golden mean bit for bit")

print("\n=== single burst with all-ones tail stays Diophantine ===")
burst = forge(golden(), n0=4, schedule=SingleBurst(1.2), levels=10)
print("  digits:", burst.digits(burst.depth))
v = dc_membership(burst, tau=2.0, gamma=1e-3, K=60)
print(f"  DC(2, 1e-3) up to K=60: holds={v.holds}")

print("\n=== the digit cap refuses astronomically long digits ===")
capped = forge(golden(), n0=4, schedule=ConstantBeta(2.0), levels=8, cap_decimal=100)
print(f"  stream stopped at depth {capped.depth} with truncated={capped.truncated}")
