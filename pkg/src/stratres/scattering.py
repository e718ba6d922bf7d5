"""Reflection, transmission, and scattering-phase diagnostics on the real axis.

For a unit wave e^{-i w z / c0} incident from the left half-space, the
reflection and transmission coefficients follow from the trace of the
right Jost solution at z = 0:

    t' = 2 i Z0 / W,   r = t' f+(0) - 1,   t = t' e^{i w h / c1},

with Z0 = w chi0 / c0 and W the (unscaled) Wronskian.  Energy flux
conservation (chi0/c0)(1 - |r|^2) = (chi1/c1)|t|^2 holds on the real axis
and is reported as a relative residual with every sample.

The scattering phase is sigma(w) = arg t / pi (det S = e^{2 i arg t} for
this 1-d problem); its derivative peaks at the real parts of resonances,
with the isolated-resonance height -1 / (pi Im w_n).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.signal import find_peaks, peak_widths

from .errors import DomainError, RootFindError
from .profile import MediumModel
from .wronskian import WronskianEvaluator


@dataclass(frozen=True)
class ReflectionSample:
    omega: float
    r: complex
    t: complex
    flux_residual: float


@dataclass(frozen=True)
class ReflectionScan:
    omegas: np.ndarray
    r: np.ndarray
    t: np.ndarray
    flux_residual: np.ndarray

    def __iter__(self):
        for k in range(len(self.omegas)):
            yield ReflectionSample(float(self.omegas[k]), complex(self.r[k]),
                                   complex(self.t[k]),
                                   float(self.flux_residual[k]))


def _scan(evaluator: WronskianEvaluator, omegas: np.ndarray) -> ReflectionScan:
    model = evaluator.model
    left, right = model.left, model.right
    u, p, scale_log = evaluator.jost_plus_trace_many(omegas)
    unscale = np.exp(-scale_log)
    a = u * unscale
    b = p * unscale
    z0 = omegas * left.chi / left.c
    w = b + 1j * z0 * a
    t_in = 2j * z0 / w
    r = t_in * a - 1.0
    t = t_in * np.exp(1j * omegas * model.h / right.c)
    flux_in = (left.chi / left.c) * (1.0 - np.abs(r) ** 2)
    flux_out = (right.chi / right.c) * np.abs(t) ** 2
    resid = np.abs(flux_in - flux_out) / (left.chi / left.c)
    return ReflectionScan(omegas=np.asarray(omegas).real.astype(float),
                          r=r, t=t, flux_residual=resid)


def reflection_scan(model: MediumModel, omegas, rtol: float = 1e-10,
                    atol: float = 1e-12) -> ReflectionScan:
    """Reflection/transmission coefficients at real frequencies.

    ``omegas`` must be real and clear of the omega = 0 threshold.
    """
    omegas = np.atleast_1d(np.asarray(omegas, dtype=float))
    ev = WronskianEvaluator(model, rtol=rtol, atol=atol)
    if np.any(np.abs(omegas) < ev.omega_min):
        raise DomainError("reflection scan includes the omega = 0 threshold")
    return _scan(ev, omegas.astype(complex))


def reflection_coefficient(model: MediumModel, omega: float,
                           rtol: float = 1e-10,
                           atol: float = 1e-12) -> ReflectionSample:
    scan = reflection_scan(model, [float(omega)], rtol=rtol, atol=atol)
    return next(iter(scan))


def phase_derivative(model: MediumModel, omegas, domega: float | None = None,
                     rtol: float = 1e-10, atol: float = 1e-12) -> np.ndarray:
    """d sigma / d omega with sigma = arg t / pi, by central differences.

    The step must keep each phase increment off the branch cut; a jump
    larger than 0.9 pi raises DomainError asking for a smaller ``domega``.
    """
    omegas = np.atleast_1d(np.asarray(omegas, dtype=float))
    ev = WronskianEvaluator(model, rtol=rtol, atol=atol)
    if domega is None:
        domega = math.pi / (200.0 * ev.tau)
    lo = omegas - 0.5 * domega
    hi = omegas + 0.5 * domega
    if np.any(np.abs(lo) < ev.omega_min):
        raise DomainError("phase derivative stencil crosses the omega = 0 threshold")
    scan = _scan(ev, np.concatenate([lo, hi]).astype(complex))
    n = len(omegas)
    dphi = np.angle(scan.t[n:] / scan.t[:n])
    if np.any(np.abs(dphi) > 0.9 * math.pi):
        raise DomainError("phase step exceeds 0.9 pi; decrease domega")
    return dphi / (domega * math.pi)


def breit_wigner(omega_n: complex, omegas) -> np.ndarray:
    """Isolated-resonance phase-derivative profile for the zero omega_n."""
    if omega_n.imag >= 0.0:
        raise ValueError("omega_n must lie in the open lower half-plane")
    omegas = np.asarray(omegas, dtype=float)
    return (-omega_n.imag / math.pi) / np.abs(omegas - omega_n) ** 2


@dataclass(frozen=True)
class Peak:
    omega: float
    height: float
    width: float


@dataclass(frozen=True)
class PeakReport:
    peaks: tuple
    tau_hat: float
    gap_mean: float
    gap_spread: float

    def to_json_dict(self) -> dict:
        return {
            "tau_hat": self.tau_hat,
            "gap_mean": self.gap_mean,
            "gap_spread": self.gap_spread,
            "peaks": [{"omega": p.omega, "height": p.height, "width": p.width}
                      for p in self.peaks],
        }


def detect_peaks(omegas, values, prominence_rel: float = 0.05) -> tuple:
    """Local maxima of a sampled curve, with parabolic vertex refinement.

    ``prominence_rel`` is relative to the sampled value range.  Returns a
    tuple of Peak records; widths are measured at half prominence in the
    omega coordinate.
    """
    omegas = np.asarray(omegas, dtype=float)
    values = np.asarray(values, dtype=float)
    span = float(np.max(values) - np.min(values))
    if span <= 0.0:
        raise RootFindError("flat curve: no peaks to detect")
    idx, props = find_peaks(values, prominence=prominence_rel * span)
    if len(idx) == 0:
        raise RootFindError("no peaks above the prominence threshold")
    widths, _, _, _ = peak_widths(values, idx, rel_height=0.5)
    step = float(np.mean(np.diff(omegas)))
    peaks = []
    for k, i in enumerate(idx):
        om, ht = float(omegas[i]), float(values[i])
        if 0 < i < len(values) - 1:
            y0, y1, y2 = values[i - 1], values[i], values[i + 1]
            denom = y0 - 2.0 * y1 + y2
            if denom < 0.0:
                d = 0.5 * (y0 - y2) / denom
                om = float(omegas[i] + d * step)
                ht = float(y1 - 0.25 * (y0 - y2) * d)
        peaks.append(Peak(omega=om, height=ht, width=float(widths[k] * step)))
    return tuple(peaks)


def estimate_tau(peaks) -> PeakReport:
    """Travel-time estimate pi / (mean peak spacing) from >= 2 peaks."""
    if len(peaks) < 2:
        raise RootFindError("need at least two peaks to estimate the travel time")
    pos = np.array(sorted(p.omega for p in peaks))
    gaps = np.diff(pos)
    gap_mean = float(np.mean(gaps))
    gap_spread = float(np.max(gaps) - np.min(gaps))
    return PeakReport(peaks=tuple(peaks), tau_hat=math.pi / gap_mean,
                      gap_mean=gap_mean, gap_spread=gap_spread)


def dump_spectrum_csv(scan: ReflectionScan, path):
    """CSV columns: omega, |r|, arg r, |t|, arg t, flux residual."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("omega,abs_r,arg_r,abs_t,arg_t,flux_residual\n")
        for s in scan:
            fh.write(f"{s.omega:.17g},{abs(s.r):.17g},"
                     f"{math.atan2(s.r.imag, s.r.real):.17g},"
                     f"{abs(s.t):.17g},{math.atan2(s.t.imag, s.t.real):.17g},"
                     f"{s.flux_residual:.17g}\n")
