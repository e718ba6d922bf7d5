"""Adaptive Dormand-Prince 5(4) integrator for complex linear systems.

The right-hand sides here are smooth per panel and share the independent
variable z across a whole batch of frequencies, so the batch is stepped
together with a single adaptive step size controlled by the worst element.
This is what makes frequency scans and contour sampling cheap.
"""

from __future__ import annotations

import numpy as np

from .errors import IntegrationError

# Dormand-Prince 5(4) tableau (FSAL).
_C2, _C3, _C4, _C5 = 1 / 5, 3 / 10, 4 / 5, 8 / 9

_A21 = 1 / 5
_A31, _A32 = 3 / 40, 9 / 40
_A41, _A42, _A43 = 44 / 45, -56 / 15, 32 / 9
_A51, _A52, _A53, _A54 = 19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729
_A61, _A62, _A63, _A64, _A65 = 9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656
_B1, _B3, _B4, _B5, _B6 = 35 / 384, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84
# b5 - b4 (error estimator weights, k7 included)
_E1, _E3, _E4, _E5, _E6, _E7 = (71 / 57600, -71 / 16695, 71 / 1920,
                                -17253 / 339200, 22 / 525, -1 / 40)

_MAX_STEPS = 1_000_000
_MIN_FACTOR = 0.2
_MAX_FACTOR = 5.0
_SAFETY = 0.9


def solve_panel(f, z0, z1, y0, rtol, atol, record=None):
    """Integrate dy/dz = f(z, y) from z0 to z1 (either direction).

    Parameters
    ----------
    f : callable(z, y) -> dy
        Smooth on the whole closed panel; y is a complex ndarray.
    y0 : complex ndarray
        Initial state, arbitrary shape (batch dims leading).
    record : sequence of float, optional
        z values (strictly between z0 and z1 in traversal order) at which
        the solution is additionally reported; steps are clipped to land
        on them, so they are exact solution points, not interpolants.

    Returns
    -------
    y_end : ndarray
    recorded : list of ndarray (one per record point) if record is given.
    """
    z0 = float(z0)
    z1 = float(z1)
    y = np.array(y0, dtype=complex)
    if z1 == z0:
        return (y, []) if record is not None else y
    direction = 1.0 if z1 > z0 else -1.0
    span = abs(z1 - z0)

    targets = []
    if record is not None:
        targets = sorted((float(t) for t in record), reverse=(direction < 0))
        recorded = []

    z = z0
    k1 = f(z, y)
    # initial step from the local derivative scale
    scale = atol + rtol * np.abs(y)
    d = float(np.max(np.abs(k1) / scale)) if y.size else 0.0
    h = min(span, 0.1 / d) if d > 0 else span / 10.0
    h = max(h, span * 1e-12)

    nsteps = 0
    worst = 0.0
    tidx = 0
    while (z1 - z) * direction > 1e-14 * span:
        nsteps += 1
        if nsteps > _MAX_STEPS:
            raise IntegrationError(
                f"step limit exceeded on panel [{z0}, {z1}]", worst_error=worst)
        h = min(h, abs(z1 - z))
        if targets and tidx < len(targets):
            h = min(h, abs(targets[tidx] - z))
            if h == 0.0:
                # already standing on a target
                recorded.append(y.copy())
                tidx += 1
                continue
        hs = h * direction

        k2 = f(z + _C2 * hs, y + hs * (_A21 * k1))
        k3 = f(z + _C3 * hs, y + hs * (_A31 * k1 + _A32 * k2))
        k4 = f(z + _C4 * hs, y + hs * (_A41 * k1 + _A42 * k2 + _A43 * k3))
        k5 = f(z + _C5 * hs, y + hs * (_A51 * k1 + _A52 * k2 + _A53 * k3 + _A54 * k4))
        k6 = f(z + hs, y + hs * (_A61 * k1 + _A62 * k2 + _A63 * k3
                                 + _A64 * k4 + _A65 * k5))
        y5 = y + hs * (_B1 * k1 + _B3 * k3 + _B4 * k4 + _B5 * k5 + _B6 * k6)
        k7 = f(z + hs, y5)
        err = hs * (_E1 * k1 + _E3 * k3 + _E4 * k4 + _E5 * k5 + _E6 * k6 + _E7 * k7)

        sc = atol + rtol * np.maximum(np.abs(y), np.abs(y5))
        errnorm = float(np.max(np.abs(err) / sc))
        worst = max(worst, errnorm)

        if errnorm <= 1.0:
            z = z + hs
            y = y5
            k1 = k7
            if targets and tidx < len(targets) and abs(z - targets[tidx]) <= 1e-14 * span:
                recorded.append(y.copy())
                tidx += 1
            factor = _MAX_FACTOR if errnorm == 0.0 else min(
                _MAX_FACTOR, _SAFETY * errnorm ** -0.2)
            h = h * factor
        else:
            h = h * max(_MIN_FACTOR, _SAFETY * errnorm ** -0.2)
            if h < 1e-15 * span:
                raise IntegrationError(
                    f"step size underflow on panel [{z0}, {z1}] "
                    f"(local error estimate {errnorm:.3e})", worst_error=errnorm)

    if record is not None:
        # unreached targets coincide with the panel end
        while tidx < len(targets):
            recorded.append(y.copy())
            tidx += 1
        return y, recorded
    return y
