"""Map the Wronskian over the lower half-plane and watch its zeros line up.

Resonances are the zeros of the Jost-solution Wronskian continued into
Im w < 0.  For a constant layer they sit on an exact horizontal lattice:
spacing pi/tau in the real direction, at constant depth ln|Xi| / (2 tau).
The scaled evaluator stays overflow-free far below the real axis, and on
piecewise-constant media it can be cross-checked against the closed-form
transfer-matrix product.
"""

import math

import numpy as np

from stratres import (HalfSpace, LayerProfile, MediumModel,
                      WronskianEvaluator, transfer_matrix_wronskian)

hs = HalfSpace.from_wave(c=1.0, m=math.sqrt(2.0))
model = MediumModel(hs, LayerProfile.constant(1.0, 1.0, 1.0), hs)
ev = WronskianEvaluator(model)

# coarse |W| map: rows are depths, columns sweep the real axis
re = np.linspace(0.3, 4.2 * math.pi, 72)
im = np.linspace(-1.8, -0.2, 9)
rows = []
for b in im[::-1]:
    vals = np.abs(ev.wronskian_many(re + 1j * b))
    rows.append(vals)
floor = np.log10(np.array(rows))
lo, hi = floor.min(), floor.max()
glyphs = " .:-=+*#%@"
print("log10 |W| (dark = small, zeros at depth ln(9)/2 ~ 1.10):")
for b, row in zip(im[::-1], floor):
    line = "".join(glyphs[int((1.0 - (v - lo) / (hi - lo)) * (len(glyphs) - 1))]
                   for v in row)
    print(f"Im w = {b:+.2f} |{line}|")

# the transfer-matrix product is an independent closed-form oracle here
probe = np.array([2.0 - 0.7j, 3 * math.pi - 1.0986j, 11.0 - 2.3j])
num = ev.wronskian_many(probe)
ora = transfer_matrix_wronskian(model, probe)
print("\nnumeric vs transfer-matrix:")
for w, a, b in zip(probe, num, ora):
    print(f"  w = {w:+.4f}: |num - oracle| = {abs(a - b):.3e}")
