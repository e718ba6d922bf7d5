"""Jost solution traces and the (scaled) generalized Wronskian.

The outgoing Jost solution f+ equals exp(i w z / c1) for z > h.  We
integrate the first-order system in the interface-continuous variables
(U, P) with P = chi U', scaled by

    sigma(z) = exp(-i w (y(z) - tau) - i w h / c1),     y(z) = int_0^z dz/c,

which keeps magnitudes representable deep in the lower half-plane (the
scaling is zero-free, so the scaled Wronskian has exactly the zeros of
{f-, f+}).  With Ut = sigma U and Pt = sigma P the system is local:

    Ut' = -(i w / c) Ut + Pt / chi,
    Pt' = -(i w / c) Pt - rho w^2 Ut,

with data Ut(h) = 1, Pt(h) = i w chi1 / c1.  Evaluating f- = exp(-i w z/c0)
at z = 0 gives the scaled Wronskian

    What(w) = Pt(0) + (i w chi0 / c0) Ut(0) = sigma(0) {f-, f+}.

The derivative dWhat/dw is integrated alongside as the variational system
(not finite differences), so Newton refinement stays quadratic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from ._ivp import solve_panel
from .errors import DomainError, ProfileError
from .profile import MediumModel

OMEGA_MIN_FACTOR = 1e-6   # omega_min = 1e-6 / tau excludes the w = 0 threshold
DEFAULT_IMAX_FACTOR = 60.0  # deepest Im w the evaluator will accept, in 1/tau


@dataclass(frozen=True)
class BoundaryTrace:
    """Scaled trace of f+ at z = 0.

    ``u`` and ``p`` are sigma(0) * f+(0) and sigma(0) * (chi f+')(0-);
    ``scale_log`` is log sigma(0) = i w (tau - h/c1), so the raw values
    are u * exp(-scale_log), p * exp(-scale_log).
    """

    u: complex
    p: complex
    scale_log: complex


def _layer_travel_time(layer) -> float:
    tau = 0.0
    for (lo, hi) in layer.panels():
        cf, _, _ = layer.panel_material(lo, hi)
        val, _ = quad(lambda z: 1.0 / float(cf(z)), lo, hi,
                      epsabs=0.0, epsrel=1e-13, limit=200)
        tau += val
    return tau


class WronskianEvaluator:
    """Pure, immutable evaluator of the scaled Wronskian What(w).

    Deterministic for fixed tolerances; safe to call concurrently.
    Batched entry points (``wronskian_many``) share the adaptive z-steps
    across all frequencies, which is the intended parallelization axis.
    """

    def __init__(self, model: MediumModel, rtol: float = 1e-10,
                 atol: float = 1e-12, imax: float | None = None):
        self.model = model
        self.rtol = float(rtol)
        self.atol = float(atol)
        self.tau = _layer_travel_time(model.layer)
        self.omega_min = OMEGA_MIN_FACTOR / self.tau
        self.imax = DEFAULT_IMAX_FACTOR / self.tau if imax is None else float(imax)
        # panels in integration order (z = h down to 0), with material closures
        self._panels = []
        for (lo, hi) in reversed(model.layer.panels()):
            c_fn, chi_fn, rho_fn = model.layer.panel_material(lo, hi)
            self._panels.append((hi, lo, c_fn, chi_fn, rho_fn))

    # -- validation ----------------------------------------------------------

    def _check(self, omegas: np.ndarray):
        if np.any(np.abs(omegas) < self.omega_min):
            raise DomainError(
                f"|omega| below omega_min = {self.omega_min:.3e} "
                "(the omega = 0 threshold is excluded)")
        if np.any(omegas.imag < -self.imax):
            raise DomainError(f"Im omega below the configured scan depth -{self.imax:.3e}")

    # -- core propagation ----------------------------------------------------

    def _propagate(self, omegas: np.ndarray, with_derivative: bool,
                   record=None):
        """Integrate the scaled (U, P) system from z = h to z = 0.

        Returns the final state of shape (B, 2) or (B, 4), plus the list of
        recorded states if ``record`` (descending z values) is given.
        """
        omegas = np.atleast_1d(np.asarray(omegas, dtype=complex))
        self._check(omegas)
        right = self.model.right
        om2 = omegas**2
        n = omegas.shape[0]
        k = 4 if with_derivative else 2
        y = np.zeros((n, k), dtype=complex)
        y[:, 0] = 1.0
        y[:, 1] = 1j * omegas * right.chi / right.c
        if with_derivative:
            y[:, 3] = 1j * right.chi / right.c

        rec = None
        recorded = None
        if record is not None:
            # descending z values; snap to panel edges within rounding
            tiny = 1e-12 * max(self.model.h, 1.0)
            edges = np.concatenate([[p[0] for p in self._panels],
                                    [self._panels[-1][1]]])
            rec = []
            for t in record:
                t = float(t)
                close = edges[np.argmin(np.abs(edges - t))]
                rec.append(close if abs(close - t) <= tiny else t)
            recorded = {}
            if rec and abs(rec[0] - self.model.h) <= tiny:
                recorded[rec[0]] = y.copy()

        for (zhi, zlo, c_fn, chi_fn, rho_fn) in self._panels:

            def rhs(z, Y, _c=c_fn, _chi=chi_fn, _rho=rho_fn):
                cz = float(_c(z))
                chz = float(_chi(z))
                rz = float(_rho(z))
                iw_c = (1j / cz) * omegas
                out = np.empty_like(Y)
                out[:, 0] = -iw_c * Y[:, 0] + Y[:, 1] / chz
                out[:, 1] = -iw_c * Y[:, 1] - (rz * om2) * Y[:, 0]
                if with_derivative:
                    out[:, 2] = -iw_c * Y[:, 2] + Y[:, 3] / chz - (1j / cz) * Y[:, 0]
                    out[:, 3] = (-iw_c * Y[:, 3] - (rz * om2) * Y[:, 2]
                                 - (1j / cz) * Y[:, 1] - 2.0 * rz * omegas * Y[:, 0])
                return out

            if rec is not None:
                panel_targets = [t for t in rec if zlo < t < zhi]
                y, got = solve_panel(rhs, zhi, zlo, y, self.rtol, self.atol,
                                     record=panel_targets)
                for t, g in zip(panel_targets, got):
                    recorded[t] = g
                if any(abs(t - zlo) == 0.0 for t in rec):
                    recorded[zlo] = y.copy()
            else:
                y = solve_panel(rhs, zhi, zlo, y, self.rtol, self.atol)

        if record is not None:
            return y, [recorded[t] for t in rec]
        return y

    # -- public API ----------------------------------------------------------

    def jost_plus_trace(self, omega: complex) -> BoundaryTrace:
        """Scaled values of f+ and its traction at z = 0."""
        y = self._propagate(np.array([omega]), with_derivative=False)
        scale_log = 1j * complex(omega) * (self.tau - self.model.h / self.model.right.c)
        return BoundaryTrace(u=complex(y[0, 0]), p=complex(y[0, 1]),
                             scale_log=scale_log)

    def jost_plus_trace_many(self, omegas):
        """Batch version of jost_plus_trace: arrays (u, p, scale_log)."""
        omegas = np.atleast_1d(np.asarray(omegas, dtype=complex))
        y = self._propagate(omegas, with_derivative=False)
        scale_log = 1j * omegas * (self.tau - self.model.h / self.model.right.c)
        return y[:, 0], y[:, 1], scale_log

    def wronskian_many(self, omegas) -> np.ndarray:
        omegas = np.atleast_1d(np.asarray(omegas, dtype=complex))
        y = self._propagate(omegas, with_derivative=False)
        left = self.model.left
        return y[:, 1] + (1j * omegas * left.chi / left.c) * y[:, 0]

    def wronskian(self, omega: complex) -> complex:
        return complex(self.wronskian_many(np.array([omega]))[0])

    def wronskian_and_derivative_many(self, omegas):
        omegas = np.atleast_1d(np.asarray(omegas, dtype=complex))
        y = self._propagate(omegas, with_derivative=True)
        left = self.model.left
        zl = 1j * left.chi / left.c
        w = y[:, 1] + zl * omegas * y[:, 0]
        dw = y[:, 3] + zl * y[:, 0] + zl * omegas * y[:, 2]
        return w, dw

    def wronskian_derivative(self, omega: complex) -> complex:
        _, dw = self.wronskian_and_derivative_many(np.array([omega]))
        return complex(dw[0])


def jost_plus_trace(model: MediumModel, omega: complex, rtol: float = 1e-10,
                    atol: float = 1e-12) -> BoundaryTrace:
    """One-shot scaled Jost trace (see WronskianEvaluator.jost_plus_trace)."""
    return WronskianEvaluator(model, rtol=rtol, atol=atol).jost_plus_trace(omega)


# ---------------------------------------------------------------------------
# Transfer-matrix oracle for piecewise-constant layers
# ---------------------------------------------------------------------------

def transfer_matrix_wronskian(model: MediumModel, omega):
    """Closed-form scaled Wronskian for a piecewise-constant layer.

    Propagates (U, P) across each constant sublayer with the exact 2x2
    matrix (entries cos, -(c/(w chi)) sin, (w chi / c) sin, cos for the
    rightward->leftward sweep) and applies the same exp(i w tau) scaling
    as the numerical evaluator, so the two agree to rounding plus
    integrator tolerance.  Accepts scalar or array omega.
    """
    stack = model.layer.stack
    if stack is None:
        raise DomainError("transfer-matrix oracle requires a piecewise-constant layer")
    omega = np.asarray(omega, dtype=complex)
    scalar = omega.ndim == 0
    w = np.atleast_1d(omega)
    right = model.right
    left = model.left
    u = np.ones_like(w)
    p = 1j * w * right.chi / right.c
    tau = 0.0
    for (length, c, m) in reversed(stack):
        chi = c / m**2
        arg = (w / c) * length
        cosv = np.cos(arg)
        sinv = np.sin(arg)
        u_new = cosv * u - (c / (w * chi)) * sinv * p
        p_new = (w * chi / c) * sinv * u + cosv * p
        u, p = u_new, p_new
        tau += length / c
    what = np.exp(1j * w * tau) * (p + (1j * w * left.chi / left.c) * u)
    return complex(what[0]) if scalar else what


def dump_wronskian_grid(evaluator: WronskianEvaluator, re_values, im_values,
                        path):
    """CSV dump of What over a rectangular omega grid for external plotting.

    Columns: Re omega, Im omega, Re What, Im What, |What|.
    """
    re_values = np.asarray(re_values, dtype=float)
    im_values = np.asarray(im_values, dtype=float)
    rr, ii = np.meshgrid(re_values, im_values, indexing="ij")
    omegas = (rr + 1j * ii).ravel()
    w = evaluator.wronskian_many(omegas)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("re_omega,im_omega,re_w,im_w,abs_w\n")
        for om, val in zip(omegas, w):
            fh.write(f"{om.real:.17g},{om.imag:.17g},"
                     f"{val.real:.17g},{val.imag:.17g},{abs(val):.17g}\n")
