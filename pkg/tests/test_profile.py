import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from stratres import (HalfSpace, LayerProfile, MediumModel, ProfileError,
                      SmoothnessTag, build_profile, classify_smoothness,
                      endpoint_data, eval_material, parse_profile_text)

positive = st.floats(min_value=0.05, max_value=20.0,
                     allow_nan=False, allow_infinity=False)


@given(c=positive, m=positive)
def test_halfspace_wave_roundtrip(c, m):
    hs = HalfSpace.from_wave(c=c, m=m)
    assert hs.c == pytest.approx(c, rel=1e-12)
    assert hs.m == pytest.approx(m, rel=1e-12)
    # m^{-2} = sqrt(rho chi) is the impedance
    assert math.sqrt(hs.rho * hs.chi) == pytest.approx(m ** -2, rel=1e-12)


def test_halfspace_rejects_nonpositive():
    with pytest.raises(ProfileError):
        HalfSpace(rho=-1.0, chi=1.0)
    with pytest.raises(ProfileError):
        HalfSpace.from_wave(c=0.0, m=1.0)


def test_constant_layer_material():
    lay = LayerProfile.constant(2.0, c=3.0, m=0.5)
    assert lay.h == 2.0
    assert lay.c(1.0) == pytest.approx(3.0)
    assert lay.m(0.3) == pytest.approx(0.5)
    assert lay.chi(1.5) == pytest.approx(3.0 / 0.25)
    assert lay.dm(1.0) == 0.0
    assert lay.d2m(1.0) == 0.0


def test_polynomial_layer_derivatives():
    lay = LayerProfile.polynomial(1.0, c_coeffs=[1.0, 0.5],
                                  m_coeffs=[1.0, 1.0, 1.0])
    z = 0.37
    assert lay.c(z) == pytest.approx(1.0 + 0.5 * z)
    assert lay.dc(z) == pytest.approx(0.5)
    assert lay.m(z) == pytest.approx(1.0 + z + z * z)
    assert lay.dm(z) == pytest.approx(1.0 + 2.0 * z)
    assert lay.d2m(z) == pytest.approx(2.0)
    # dchi from chi = c / m^2
    eps = 1e-6
    fd = (lay.chi(z + eps) - lay.chi(z - eps)) / (2 * eps)
    assert lay.dchi(z) == pytest.approx(fd, rel=1e-7)


def test_spline_layer_clamped_derivatives():
    z = np.linspace(0.0, 1.0, 9)
    lay = LayerProfile.from_table(z, 1.0 + 0.1 * z, 1.0 + z * z,
                                  dc_ends=(0.1, 0.1), dm_ends=(0.0, 2.0))
    assert lay.dm(0.0) == pytest.approx(0.0, abs=1e-12)
    assert lay.dm(1.0) == pytest.approx(2.0, rel=1e-12)
    assert lay.m(0.5) == pytest.approx(1.25, rel=1e-3)


def test_spline_layer_needs_origin_and_enough_samples():
    with pytest.raises(ProfileError):
        LayerProfile.from_table([0.1, 0.5, 0.8, 1.0], [1, 1, 1, 1],
                                [1, 1, 1, 1], (0, 0), (0, 0))
    with pytest.raises(ProfileError):
        LayerProfile.from_table([0.0, 0.5, 1.0], [1, 1, 1], [1, 1, 1],
                                (0, 0), (0, 0))


def test_stack_layer_panels():
    lay = LayerProfile.from_stack([(0.5, 1.0, 1.0), (0.5, 2.0, 1.5)])
    assert lay.h == pytest.approx(1.0)
    assert lay.c(0.25) == pytest.approx(1.0)
    assert lay.c(0.75) == pytest.approx(2.0)
    assert len(lay.panels()) == 2
    assert lay.stack is not None


def test_eval_material_total_on_and_off_layer(stack_model):
    _, _, c, _ = eval_material(stack_model, -1.0)
    assert c == pytest.approx(stack_model.left.c)
    _, _, c, _ = eval_material(stack_model, 0.35)
    assert c == pytest.approx(2.0)
    _, _, c, _ = eval_material(stack_model, 5.0)
    assert c == pytest.approx(stack_model.right.c)
    zs = np.array([-0.5, 0.1, 0.95, 2.0])
    rho, chi, c, m = eval_material(stack_model, zs)
    assert c.shape == zs.shape
    assert np.allclose(c, m * m * chi) and np.allclose(rho, chi / c ** 2)


def test_classification_three_cases(xi9_model, case_ii_model, case_iii_model):
    assert classify_smoothness(endpoint_data(xi9_model)).tag is SmoothnessTag.CASE_I
    assert classify_smoothness(endpoint_data(case_ii_model)).tag is SmoothnessTag.CASE_II
    assert classify_smoothness(endpoint_data(case_iii_model)).tag is SmoothnessTag.CASE_III


def test_classification_unclassified_when_curvature_vanishes():
    # C^1 match with zero curvature at one endpoint: none of the cases apply
    hs = HalfSpace.from_wave(1.0, 1.0)
    layer = LayerProfile.polynomial(1.0, c_coeffs=[1.0],
                                    m_coeffs=[1.0, 0.0, 0.0, 1.0, -1.0])
    model = MediumModel(hs, layer, hs)
    assert classify_smoothness(endpoint_data(model)).tag is SmoothnessTag.UNCLASSIFIED


def test_endpoint_data_values(case_ii_model):
    d = endpoint_data(case_ii_model)
    assert d.m0 == pytest.approx(1.0)
    assert d.m1 == pytest.approx(3.0)
    assert d.m_minus == pytest.approx(1.0)
    assert d.m_plus == pytest.approx(3.0)
    assert d.dm_minus == pytest.approx(1.0)
    assert d.dm_plus == pytest.approx(3.0)


PROFILE_TEXT = """
[left]
c = 1.0
m = 1.4142135623730951

[layer]
kind = constant
h = 1.0
c = 1.0
m = 1.0

[right]
rho = 0.5
chi = 0.5
"""


def test_profile_text_roundtrip():
    model = build_profile(parse_profile_text(PROFILE_TEXT))
    assert model.layer.h == 1.0
    assert model.left.m == pytest.approx(math.sqrt(2.0))
    assert model.right.c == pytest.approx(1.0)


def test_profile_text_rejects_unknown_keys():
    with pytest.raises(ProfileError):
        build_profile(parse_profile_text(PROFILE_TEXT + "\n[bogus]\nx = 1\n"))
    bad = PROFILE_TEXT.replace("rho = 0.5", "rho = 0.5\nwhatever = 3")
    with pytest.raises(ProfileError):
        build_profile(parse_profile_text(bad))


def test_profile_text_spline_requires_clamps():
    text = """
[left]
c = 1
m = 1

[layer]
kind = spline
samples = 0.0 1.0 1.0
    0.25 1.0 1.1
    0.5 1.0 1.3
    1.0 1.0 1.2

[right]
c = 1
m = 1
"""
    with pytest.raises(ProfileError, match="clamped"):
        build_profile(parse_profile_text(text))


@given(h=positive, c=positive, m=positive)
def test_constant_layer_chi_rho_consistency(h, c, m):
    lay = LayerProfile.constant(h, c, m)
    z = h / 3.0
    assert lay.c(z) == pytest.approx(math.sqrt(lay.chi(z) / lay.rho(z)), rel=1e-12)
    assert lay.m(z) == pytest.approx(math.sqrt(lay.c(z) / lay.chi(z)), rel=1e-12)
