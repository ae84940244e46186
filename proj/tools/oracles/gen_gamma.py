"""Reference Gamma values on the test strip, computed with mpmath at 30 digits."""
import json
import random

import mpmath

mpmath.mp.dps = 30
random.seed(20240611)
points = [(1.0, 0.0), (5.0, 0.0), (0.5, 0.0), (0.1, 0.0), (10.0, 0.0), (-0.5, 0.0), (-2.3, 0.7)]
for _ in range(60):
    points.append((random.uniform(0.1, 10.0), random.uniform(-10.0, 10.0)))
for _ in range(20):
    points.append((random.uniform(-6.0, 0.1), random.uniform(-3.0, 3.0)))
rows = []
for re, im in points:
    g = mpmath.gamma(mpmath.mpc(re, im))
    rows.append({"re": re, "im": im, "gre": float(g.real), "gim": float(g.imag)})
with open("tests/data/gamma_values.json", "w") as f:
    json.dump(rows, f, indent=1)
