import math

import pytest

from stratres import HalfSpace, LayerProfile, MediumModel


@pytest.fixture(scope="session")
def xi9_model():
    """Constant layer, symmetric impedance jump: Xi = 9, tau = 1.

    Exact resonances pi n - i ln(9)/2 for every integer n != 0.
    """
    hs = HalfSpace.from_wave(c=1.0, m=math.sqrt(2.0))
    return MediumModel(hs, LayerProfile.constant(1.0, 1.0, 1.0), hs)


@pytest.fixture(scope="session")
def xi_neg9_model():
    """Constant layer with Xi = -9: exact resonances pi(n + 1/2) - i ln(9)/2."""
    left = HalfSpace.from_wave(c=1.0, m=math.sqrt(2.0))
    right = HalfSpace.from_wave(c=1.0, m=math.sqrt(0.5))
    return MediumModel(left, LayerProfile.constant(1.0, 1.0, 1.0), right)


@pytest.fixture(scope="session")
def case_ii_model():
    """Continuous profile with kinked impedance: m = 1 + z + z^2, c = 1.

    Endpoint values match the half-spaces (m(0)=1, m(1)=3), first
    derivatives do not vanish; the three Theta normalization candidates
    take the distinct values 9, 1, 1/3.
    """
    left = HalfSpace.from_wave(1.0, 1.0)
    right = HalfSpace.from_wave(1.0, 3.0)
    layer = LayerProfile.polynomial(1.0, c_coeffs=[1.0], m_coeffs=[1.0, 1.0, 1.0])
    return MediumModel(left, layer, right)


@pytest.fixture(scope="session")
def case_iii_model():
    """C^1 profile: m = 1 + z^2 (1-z)^2, c = 1; endpoint curvatures +2.

    Endpoint potential values are -2 on both sides, so the drift
    intercept is ln 2 / tau with tau = 1.
    """
    hs = HalfSpace.from_wave(1.0, 1.0)
    layer = LayerProfile.polynomial(1.0, c_coeffs=[1.0],
                                    m_coeffs=[1.0, 0.0, 1.0, -2.0, 1.0])
    return MediumModel(hs, layer, hs)


@pytest.fixture(scope="session")
def stack_model():
    """Three constant sublayers; exercised against the transfer-matrix oracle."""
    layer = LayerProfile.from_stack([(0.3, 1.0, 1.0), (0.4, 2.0, 1.5),
                                     (0.3, 1.5, 0.8)])
    return MediumModel(HalfSpace.from_wave(1.0, math.sqrt(2.0)), layer,
                       HalfSpace.from_wave(1.2, 0.9))


@pytest.fixture(scope="session")
def varc_model():
    """Variable sound speed c = 1 + z/2, constant m: tau = 2 ln(3/2)."""
    left = HalfSpace.from_wave(1.0, math.sqrt(2.0))
    right = HalfSpace.from_wave(1.5, math.sqrt(2.0))
    layer = LayerProfile.polynomial(1.0, c_coeffs=[1.0, 0.5], m_coeffs=[1.0])
    return MediumModel(left, layer, right)
