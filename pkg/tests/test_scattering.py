import math

import numpy as np
import pytest

from stratres import (DomainError, HalfSpace, LayerProfile, MediumModel,
                      RootFindError, breit_wigner, detect_peaks, dump_spectrum_csv,
                      estimate_tau, phase_derivative, reflection_coefficient,
                      reflection_scan)


def test_flux_conservation(xi9_model, case_ii_model, varc_model):
    om = np.linspace(0.7, 25.0, 300)
    for model in (xi9_model, case_ii_model, varc_model):
        scan = reflection_scan(model, om)
        assert scan.flux_residual.max() < 1e-9
        assert np.all(np.abs(scan.r) <= 1.0 + 1e-10)


def test_constant_layer_reflection_closed_form(xi9_model):
    # symmetric m-jump layer: |r|^2 = (Xi - 1)/Xi * sin^2(w tau) / ...
    # checked at the quarter-wave point w = pi/2 where the reflection
    # is extremal: r = (Z - 1/Z) sin / (2i cos + (Z + 1/Z) sin) with Z = 2
    s = reflection_coefficient(xi9_model, 0.5 * math.pi)
    assert abs(s.r) == pytest.approx(1.5 / 2.5, rel=1e-9)
    assert s.flux_residual < 1e-10


def test_scan_rejects_threshold(xi9_model):
    with pytest.raises(DomainError):
        reflection_scan(xi9_model, [1e-9, 1.0])


def test_phase_derivative_peak_matches_exact(xi9_model):
    om = np.linspace(2.6, 3.7, 301)
    ds = phase_derivative(xi9_model, om)
    peaks = detect_peaks(om, ds)
    assert len(peaks) == 1
    # exact peak of d sigma / d omega for the constant layer at w = pi n
    exact = (2.0 * 9.0 / 8.0 - 1.0) / math.pi
    assert peaks[0].omega == pytest.approx(math.pi, abs=1e-3)
    assert peaks[0].height == pytest.approx(exact, rel=1e-3)


def test_phase_derivative_step_guard(xi9_model):
    with pytest.raises(DomainError, match="decrease"):
        phase_derivative(xi9_model, [3.0], domega=2.9)


def test_breit_wigner_profile():
    w_n = 5.0 - 0.3j
    om = np.linspace(4.0, 6.0, 101)
    bw = breit_wigner(w_n, om)
    k = np.argmax(bw)
    assert om[k] == pytest.approx(5.0, abs=0.02)
    assert bw.max() == pytest.approx(1.0 / (math.pi * 0.3), rel=1e-3)
    with pytest.raises(ValueError):
        breit_wigner(5.0 + 0.3j, om)


def test_breit_wigner_matches_narrow_resonance():
    # nearly matched half-spaces make gamma small, so the first resonance
    # is isolated and the measured peak height approaches -1/(pi Im w_1)
    m0 = math.sqrt((1.0954451150103324 + 1) / (1.0954451150103324 - 1) * 2 - 1)
    xi = ((m0 * m0 + 1.0) / (m0 * m0 - 1.0)) ** 2
    hs = HalfSpace.from_wave(1.0, m0)
    model = MediumModel(hs, LayerProfile.constant(1.0, 1.0, 1.0), hs)
    gamma = 0.5 * math.log(xi)
    om = np.linspace(math.pi - 0.35, math.pi + 0.35, 401)
    ds = phase_derivative(model, om)
    peaks = detect_peaks(om, ds)
    bw_height = 1.0 / (math.pi * gamma)
    assert peaks[0].height == pytest.approx(bw_height, rel=0.05)


def test_detect_peaks_synthetic_and_tau_estimate():
    om = np.linspace(0.5, 20.0, 4000)
    truth = [math.pi * n - 0.4j for n in range(1, 7)]
    curve = sum(breit_wigner(w, om) for w in truth)
    peaks = detect_peaks(om, curve)
    assert len(peaks) == 6
    report = estimate_tau(peaks)
    assert report.tau_hat == pytest.approx(1.0, rel=0.01)
    assert report.gap_spread < 0.05


def test_detect_peaks_errors():
    om = np.linspace(0.0, 1.0, 50)
    with pytest.raises(RootFindError):
        detect_peaks(om, np.ones_like(om))
    with pytest.raises(RootFindError):
        estimate_tau(detect_peaks(om, np.exp(-((om - 0.5) ** 2) * 100)))


def test_spectrum_csv(tmp_path, xi9_model):
    scan = reflection_scan(xi9_model, np.linspace(1.0, 2.0, 5))
    path = tmp_path / "spectrum.csv"
    dump_spectrum_csv(scan, path)
    lines = path.read_text().strip().splitlines()
    assert lines[0] == "omega,abs_r,arg_r,abs_t,arg_t,flux_residual"
    assert len(lines) == 6
