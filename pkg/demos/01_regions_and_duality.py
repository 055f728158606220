#!/usr/bin/env python3
"""Tour of the coupling-space geometry: regions, lines, and the duality map."""

import numpy as np

from harperlab.model import CouplingTriple, classify, duality, c_zeros, zero_structure

print("=== region classification ===")
samples = [
    (0.1, 0.5, 0.2),
    (0.25, 0.5, 0.25),
    (0.1, 2.0, 0.1),
    (1.0, 0.5, 1.0),
    (1.5, 0.5, 0.2),
    (0.5, 0.5, 0.5),
    (0.25, 1.0, 0.25),
    (1.0, 2.0, 1.0),
]
for t in samples:
    c = CouplingTriple(*t)
    cls = classify(c)
    zs = zero_structure(c)
    print(f"  {t}: {cls.tag.value:<10} boundary={cls.boundary!s:<5} zeros={zs.kind.value}")

print("\n=== duality is an involution and maps I -> II ===")
rng = np.random.default_rng(0)
for _ in range(5):
    s = rng.uniform(0, 0.9)
    f = rng.uniform(0, 1)
    c = CouplingTriple(s * f, rng.uniform(0.1, 0.9), s * (1 - f))
    d = duality(c)
    back = duality(d)
    print(
        f"  {tuple(round(v, 3) for v in c.astuple())} ({classify(c).tag.value}) "
        f"-> {tuple(round(v, 3) for v in d.astuple())} ({classify(d).tag.value}), "
        f"round trip error {max(abs(a - b) for a, b in zip(back.astuple(), c.astuple())):.1e}"
    )

print("\n=== zeros of the off-diagonal function ===")
for t in [(0.1, 0.7, 0.2), (0.25, 0.5, 0.25), (0.5, 0.5, 0.5), (0.2, 0.5, 0.3)]:
    c = CouplingTriple(*t)
    print(f"  {t}: offsets {[round(z, 6) for z in c_zeros(c)]}"
          f"  (each zero sits at offset - alpha/2)")
