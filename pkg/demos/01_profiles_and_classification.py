"""Build media three ways and see how their interface smoothness is classified.

The resonance distribution of a layered medium is governed by how the
impedance-related quantity m = sqrt(c / chi) meets the half-space values
at z = 0 and z = h: a jump, a kink, or a curvature mismatch each produce
a different asymptotic law.
"""

import math

from stratres import (HalfSpace, LayerProfile, MediumModel,
                      classify_smoothness, endpoint_data, eval_material)

# A constant layer between identical half-spaces with an impedance jump.
hs = HalfSpace.from_wave(c=1.0, m=math.sqrt(2.0))
jumpy = MediumModel(hs, LayerProfile.constant(h=1.0, c=1.0, m=1.0), hs)

# A polynomial layer whose m matches the half-spaces in value but not slope.
kinked = MediumModel(HalfSpace.from_wave(1.0, 1.0),
                     LayerProfile.polynomial(1.0, c_coeffs=[1.0],
                                             m_coeffs=[1.0, 1.0, 1.0]),
                     HalfSpace.from_wave(1.0, 3.0))

# A C^1 layer: m = 1 + z^2 (1 - z)^2 matches value and slope at both ends,
# leaving only a curvature mismatch.
hs1 = HalfSpace.from_wave(1.0, 1.0)
smooth = MediumModel(hs1,
                     LayerProfile.polynomial(1.0, c_coeffs=[1.0],
                                             m_coeffs=[1.0, 0.0, 1.0, -2.0, 1.0]),
                     hs1)

for label, model in (("discontinuous", jumpy), ("kinked", kinked),
                     ("C1-smooth", smooth)):
    data = endpoint_data(model)
    case = classify_smoothness(data)
    print(f"{label:14s}: m jump at 0: {data.m0:.3f} vs {data.m_minus:.3f}, "
          f"slope at 0: {data.dm_minus:+.3f} -> {case.tag.value}")

# eval_material is total in z: half-space constants outside the layer.
for z in (-0.5, 0.25, 1.5):
    rho, chi, c, m = eval_material(kinked, z)
    print(f"z = {z:+.2f}: rho = {rho:.4f}, chi = {chi:.4f}, c = {c:.4f}, m = {m:.4f}")
