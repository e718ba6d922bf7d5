"""Liouville transform: travel-time coordinate, inverse chart, potential.

The change of variables y = int_0^z dz/c with phi = U/m turns the
propagator equation into Schroedinger form -phi'' + V phi = w^2 phi on
(y_minus, y_plus) with

    V(y) = -(1/m) { (c^2 chi'/chi) m' + c^2 m'' },

all right-hand quantities evaluated at z(y) with z-derivatives.  The
chart uses the convention y_minus = 0, y_plus = tau; only the difference
tau enters any formula, so the origin is free.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq

from .profile import MediumModel
from .wronskian import WronskianEvaluator

_QUAD_OPTS = dict(epsabs=0.0, epsrel=1e-12, limit=200)


def travel_time(model: MediumModel) -> float:
    """tau = int_0^h dz/c(z), by adaptive quadrature split at the knots."""
    tau = 0.0
    layer = model.layer
    for (lo, hi) in layer.panels():
        c_fn, _, _ = layer.panel_material(lo, hi)
        val, _ = quad(lambda z: 1.0 / float(c_fn(z)), lo, hi, **_QUAD_OPTS)
        tau += val
    return tau


@dataclass(frozen=True)
class TravelTimeChart:
    """Monotone map y(z) on [0, h] with inverse, and the potential support."""

    model: MediumModel
    tau: float
    knots_z: np.ndarray
    knots_y: np.ndarray

    @property
    def y_minus(self) -> float:
        return 0.0

    @property
    def y_plus(self) -> float:
        return self.tau

    @property
    def potential_support(self) -> tuple:
        return (0.0, self.tau)

    def y_of_z(self, z: float) -> float:
        z = float(z)
        layer = self.model.layer
        if z <= 0.0:
            return z / self.model.left.c
        if z >= layer.h:
            return self.tau + (z - layer.h) / self.model.right.c
        i = int(np.searchsorted(self.knots_z, z, side="right") - 1)
        i = min(max(i, 0), len(self.knots_z) - 2)
        lo, hi = self.knots_z[i], self.knots_z[i + 1]
        c_fn, _, _ = layer.panel_material(lo, hi)
        val, _ = quad(lambda s: 1.0 / float(c_fn(s)), lo, z, **_QUAD_OPTS)
        return float(self.knots_y[i] + val)

    def z_of_y(self, y: float) -> float:
        y = float(y)
        layer = self.model.layer
        if y <= 0.0:
            return y * self.model.left.c
        if y >= self.tau:
            return layer.h + (y - self.tau) * self.model.right.c
        i = int(np.searchsorted(self.knots_y, y, side="right") - 1)
        i = min(max(i, 0), len(self.knots_y) - 2)
        lo, hi = self.knots_z[i], self.knots_z[i + 1]
        if self.knots_y[i] == y:
            return float(lo)
        return float(brentq(lambda z: self.y_of_z(z) - y, lo, hi,
                            xtol=1e-15, rtol=8.9e-16))


def liouville_map(model: MediumModel) -> TravelTimeChart:
    """Build the travel-time chart (y at every knot, total tau)."""
    layer = model.layer
    knots_z = np.asarray(layer.breakpoints, dtype=float)
    ys = [0.0]
    for (lo, hi) in layer.panels():
        c_fn, _, _ = layer.panel_material(lo, hi)
        val, _ = quad(lambda z: 1.0 / float(c_fn(z)), lo, hi, **_QUAD_OPTS)
        ys.append(ys[-1] + val)
    knots_y = np.asarray(ys)
    return TravelTimeChart(model=model, tau=float(knots_y[-1]),
                           knots_z=knots_z, knots_y=knots_y)


def potential(model: MediumModel, chart: TravelTimeChart, y: float) -> float:
    """Schroedinger potential V(y); exactly zero outside [y_minus, y_plus].

    chi' is computed from the canonical (c, m) parameterization via
    chi' = (c'm - 2cm')/m^3, avoiding a second differentiation pipeline.
    """
    y = float(y)
    if y < chart.y_minus or y > chart.y_plus:
        return 0.0
    z = chart.z_of_y(y)
    layer = model.layer
    c = float(layer.c(z))
    m = float(layer.m(z))
    dm = float(layer.dm(z))
    d2m = float(layer.d2m(z))
    chi = float(layer.chi(z))
    dchi = float(layer.dchi(z))
    return -(1.0 / m) * ((c * c * dchi / chi) * dm + c * c * d2m)


def potential_on_grid(model: MediumModel, chart: TravelTimeChart, ys):
    return np.array([potential(model, chart, y) for y in np.asarray(ys, dtype=float)])


def dump_chart(model: MediumModel, chart: TravelTimeChart, path, n: int = 513):
    """CSV dump (y, z, V) of the chart and potential for plotting."""
    ys = np.linspace(chart.y_minus, chart.y_plus, n)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("y,z,V\n")
        for y in ys:
            z = chart.z_of_y(y)
            v = potential(model, chart, y)
            fh.write(f"{y:.17g},{z:.17g},{v:.17g}\n")


def verify_transform(model: MediumModel, chart: TravelTimeChart, omega: complex,
                     n_grid: int = 1001, rtol: float = 1e-13,
                     atol: float = 1e-15) -> float:
    """Max relative residual of -phi'' + V phi = w^2 phi for phi = U/m.

    U is taken from the Jost integrator on a uniform y grid, unscaled, and
    phi'' is formed with a five-point finite-difference stencil, so the
    check is independent of the integration path.  The caller must keep
    omega away from 0 and |Im omega| moderate (the unscaling is explicit).
    """
    omega = complex(omega)
    tau = chart.tau
    ys = np.linspace(0.0, tau, n_grid)
    zs = np.array([chart.z_of_y(y) for y in ys])
    zs[0], zs[-1] = 0.0, model.h
    ev = WronskianEvaluator(model, rtol=rtol, atol=atol)
    _, rec = ev._propagate(np.array([omega]), with_derivative=False,
                           record=list(zs[::-1]))
    ut = np.array([state[0, 0] for state in rec])[::-1]  # scaled U, ascending z
    u = ut * np.exp(1j * omega * (ys - tau))             # common factor dropped
    m = model.layer.m(zs)
    phi = u / m
    v = potential_on_grid(model, chart, ys)

    hgrid = ys[1] - ys[0]
    # five-point second derivative on the interior
    i = np.arange(2, n_grid - 2)
    d2 = (-phi[i - 2] + 16 * phi[i - 1] - 30 * phi[i]
          + 16 * phi[i + 1] - phi[i + 2]) / (12.0 * hgrid**2)
    residual = -d2 + v[i] * phi[i] - omega**2 * phi[i]
    scale = np.max(np.abs(omega**2 * phi[i]))
    return float(np.max(np.abs(residual)) / scale)
