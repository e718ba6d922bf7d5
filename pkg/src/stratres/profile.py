"""Stratified medium: half-space constants, layer coefficient profiles,
endpoint data and smoothness classification.

The layer is parameterized canonically by the pair (c(z), m(z)) with
c the sound speed and m = sqrt(c/chi).  The aggregate modulus and the
density are derived views:

    chi = c / m**2,        rho = 1 / (c * m**2).

All models are immutable after construction and safe to evaluate
concurrently.
"""

from __future__ import annotations

import configparser
import io
import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Sequence

import numpy as np
from numpy.polynomial import Polynomial
from scipy.interpolate import CubicSpline

from .errors import ProfileError

DEFAULT_CLASSIFY_TOL = 1e-9

_VALIDATION_GRID = 257  # positivity check resolution per layer


# ---------------------------------------------------------------------------
# Half-spaces
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HalfSpace:
    """Homogeneous half-space with density ``rho`` (kg/m^3) and aggregate
    modulus ``chi`` (Pa).  Derived: sound speed ``c`` and ``m = sqrt(c/chi)``.
    """

    rho: float
    chi: float

    def __post_init__(self):
        if not (self.rho > 0 and math.isfinite(self.rho)):
            raise ProfileError(f"half-space rho must be positive, got {self.rho}")
        if not (self.chi > 0 and math.isfinite(self.chi)):
            raise ProfileError(f"half-space chi must be positive, got {self.chi}")

    @property
    def c(self) -> float:
        return math.sqrt(self.chi / self.rho)

    @property
    def m(self) -> float:
        return math.sqrt(self.c / self.chi)

    @classmethod
    def from_wave(cls, c: float, m: float) -> "HalfSpace":
        """Construct from (c, m) instead of (rho, chi)."""
        if not (c > 0 and m > 0):
            raise ProfileError(f"half-space c, m must be positive, got c={c}, m={m}")
        chi = c / m**2
        return cls(rho=chi / c**2, chi=chi)


# ---------------------------------------------------------------------------
# Layer profiles
# ---------------------------------------------------------------------------

class LayerProfile:
    """Coefficients of the layer on [0, h].

    Supported representations (``kind``):

    * ``"constant"``     -- constant c, m;
    * ``"polynomial"``   -- c(z), m(z) polynomials in z;
    * ``"spline"``       -- C^2 cubic interpolant of (z, c, m) samples with
      clamped (user-supplied) endpoint first derivatives;
    * ``"stack"``        -- piecewise-constant sublayers (for the
      transfer-matrix oracle).
    """

    def __init__(self, h, kind, c_fn, dc_fn, m_fn, dm_fn, d2m_fn,
                 breakpoints, stack=None):
        self.h = float(h)
        self.kind = kind
        self._c = c_fn
        self._dc = dc_fn
        self._m = m_fn
        self._dm = dm_fn
        self._d2m = d2m_fn
        self.breakpoints = np.asarray(breakpoints, dtype=float)
        self.stack = stack  # tuple of (length, c, m) or None
        if not (self.h > 0 and math.isfinite(self.h)):
            raise ProfileError(f"layer thickness must be positive, got {h}")
        self._validate_positive()

    def _validate_positive(self):
        z = np.linspace(0.0, self.h, _VALIDATION_GRID)
        z = np.union1d(z, self.breakpoints)
        c = self.c(z)
        m = self.m(z)
        if not np.all(np.isfinite(c)) or np.any(c <= 0):
            raise ProfileError("layer c(z) must be positive and finite on [0, h]")
        if not np.all(np.isfinite(m)) or np.any(m <= 0):
            raise ProfileError("layer m(z) must be positive and finite on [0, h]")

    # -- coefficient evaluation (vectorized) --------------------------------

    def c(self, z):
        return self._c(z)

    def dc(self, z):
        return self._dc(z)

    def m(self, z):
        return self._m(z)

    def dm(self, z):
        return self._dm(z)

    def d2m(self, z):
        return self._d2m(z)

    def chi(self, z):
        return self.c(z) / self.m(z) ** 2

    def rho(self, z):
        return 1.0 / (self.c(z) * self.m(z) ** 2)

    def dchi(self, z):
        """chi' from the canonical parameterization: (c'm - 2cm')/m^3."""
        m = self.m(z)
        return (self.dc(z) * m - 2.0 * self.c(z) * self.dm(z)) / m**3

    # -- panel access for the integrator ------------------------------------

    def panels(self):
        """Sub-intervals of [0, h] on which the coefficients are smooth."""
        b = self.breakpoints
        return [(b[i], b[i + 1]) for i in range(len(b) - 1)]

    def panel_material(self, lo: float, hi: float):
        """Scalar-z material callables (c, chi, rho) valid on [lo, hi]."""
        if self.stack is not None:
            zmid = 0.5 * (lo + hi)
            c = float(self.c(zmid))
            m = float(self.m(zmid))
            chi = c / m**2
            rho = 1.0 / (c * m**2)
            return (lambda z: c), (lambda z: chi), (lambda z: rho)
        return self.c, self.chi, self.rho

    # -- constructors --------------------------------------------------------

    @classmethod
    def constant(cls, h, c, m):
        c = float(c)
        m = float(m)
        zero = lambda z: np.zeros_like(np.asarray(z, dtype=float))
        return cls(h, "constant",
                   lambda z: np.full_like(np.asarray(z, dtype=float), c),
                   zero,
                   lambda z: np.full_like(np.asarray(z, dtype=float), m),
                   zero, zero,
                   breakpoints=[0.0, h],
                   stack=((float(h), c, m),))

    @classmethod
    def polynomial(cls, h, c_coeffs: Sequence[float], m_coeffs: Sequence[float]):
        """Coefficients in ascending powers of z."""
        pc = Polynomial(np.asarray(c_coeffs, dtype=float))
        pm = Polynomial(np.asarray(m_coeffs, dtype=float))
        return cls(h, "polynomial",
                   lambda z: pc(np.asarray(z, dtype=float)),
                   pc.deriv(1), pm, pm.deriv(1), pm.deriv(2),
                   breakpoints=[0.0, h])

    @classmethod
    def from_table(cls, z, c, m, dc_ends, dm_ends):
        """C^2 cubic-spline layer through samples (z, c, m).

        ``dc_ends`` and ``dm_ends`` are the clamped first derivatives
        (value at z=0, value at z=h); they are required because the
        endpoint derivatives of m drive the smoothness classification.
        """
        z = np.asarray(z, dtype=float)
        c = np.asarray(c, dtype=float)
        m = np.asarray(m, dtype=float)
        if len(z) < 4:
            raise ProfileError(
                f"spline layer needs at least 4 samples (m'' undefined otherwise), got {len(z)}")
        if np.any(np.diff(z) <= 0):
            raise ProfileError("spline sample abscissae must be strictly increasing")
        if z[0] != 0.0:
            raise ProfileError("spline samples must start at z=0")
        h = z[-1]
        sc = CubicSpline(z, c, bc_type=((1, float(dc_ends[0])), (1, float(dc_ends[1]))))
        sm = CubicSpline(z, m, bc_type=((1, float(dm_ends[0])), (1, float(dm_ends[1]))))
        return cls(h, "spline", sc, sc.derivative(1), sm, sm.derivative(1),
                   sm.derivative(2), breakpoints=z)

    @classmethod
    def from_stack(cls, sublayers: Sequence[tuple]):
        """Piecewise-constant layer from (length, c, m) sublayers."""
        sub = tuple((float(l), float(c), float(m)) for (l, c, m) in sublayers)
        if not sub:
            raise ProfileError("stack layer needs at least one sublayer")
        for (l, c, m) in sub:
            if l <= 0:
                raise ProfileError(f"sublayer length must be positive, got {l}")
        edges = np.concatenate([[0.0], np.cumsum([l for (l, _, _) in sub])])
        h = edges[-1]
        cs = np.array([c for (_, c, _) in sub])
        ms = np.array([m for (_, _, m) in sub])

        def piece(z):
            idx = np.clip(np.searchsorted(edges, np.asarray(z, dtype=float),
                                          side="right") - 1, 0, len(sub) - 1)
            return idx

        zero = lambda z: np.zeros_like(np.asarray(z, dtype=float))
        return cls(h, "stack",
                   lambda z: cs[piece(z)], zero,
                   lambda z: ms[piece(z)], zero, zero,
                   breakpoints=edges, stack=sub)


# ---------------------------------------------------------------------------
# Full medium
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MediumModel:
    """Layer profile on [0, h] flanked by two homogeneous half-spaces."""

    left: HalfSpace
    layer: LayerProfile
    right: HalfSpace

    @property
    def h(self) -> float:
        return self.layer.h


def eval_material(model: MediumModel, z):
    """Material data (rho, chi, c, m) at depth z (total function of z).

    For z < 0 the left half-space constants are returned, for z > h the
    right half-space constants; inside [0, h] the layer profile.
    Accepts scalars or arrays.
    """
    z = np.asarray(z, dtype=float)
    scalar = z.ndim == 0
    z = np.atleast_1d(z)
    rho = np.empty_like(z)
    chi = np.empty_like(z)
    c = np.empty_like(z)
    m = np.empty_like(z)
    h = model.h
    left = z < 0.0
    right = z > h
    inner = ~(left | right)
    for mask, hs in ((left, model.left), (right, model.right)):
        rho[mask] = hs.rho
        chi[mask] = hs.chi
        c[mask] = hs.c
        m[mask] = hs.m
    if np.any(inner):
        zi = z[inner]
        c[inner] = model.layer.c(zi)
        m[inner] = model.layer.m(zi)
        chi[inner] = model.layer.chi(zi)
        rho[inner] = model.layer.rho(zi)
    if scalar:
        return float(rho[0]), float(chi[0]), float(c[0]), float(m[0])
    return rho, chi, c, m


# ---------------------------------------------------------------------------
# Endpoint data and smoothness classification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EndpointData:
    """One-sided limits at the layer boundary that drive case selection.

    Subscripts: 0/1 are the half-space values at z<0 / z>h; minus/plus are
    the layer-side limits at z=0+ / z=h-.  Derivatives are with respect
    to z.
    """

    m0: float
    m1: float
    m_minus: float
    m_plus: float
    dm_minus: float
    dm_plus: float
    d2m_minus: float
    d2m_plus: float
    chi0: float
    chi1: float
    chi_minus: float
    chi_plus: float
    c0: float
    c1: float
    c_minus: float
    c_plus: float


def endpoint_data(model: MediumModel) -> EndpointData:
    """One-sided endpoint values and derivatives of the medium."""
    lay = model.layer
    h = lay.h
    return EndpointData(
        m0=model.left.m, m1=model.right.m,
        m_minus=float(lay.m(0.0)), m_plus=float(lay.m(h)),
        dm_minus=float(lay.dm(0.0)), dm_plus=float(lay.dm(h)),
        d2m_minus=float(lay.d2m(0.0)), d2m_plus=float(lay.d2m(h)),
        chi0=model.left.chi, chi1=model.right.chi,
        chi_minus=float(lay.chi(0.0)), chi_plus=float(lay.chi(h)),
        c0=model.left.c, c1=model.right.c,
        c_minus=float(lay.c(0.0)), c_plus=float(lay.c(h)),
    )


class SmoothnessTag(Enum):
    CASE_I = "i"
    CASE_II = "ii"
    CASE_III = "iii"
    UNCLASSIFIED = "unclassified"


@dataclass(frozen=True)
class SmoothnessCase:
    tag: SmoothnessTag
    tol: float


def classify_smoothness(data: EndpointData,
                        tol: float = DEFAULT_CLASSIFY_TOL) -> SmoothnessCase:
    """Classify the profile into the asymptotic-law cases.

    * case i   : m jumps at both ends;
    * case ii  : m continuous at both ends, m' nonzero at both ends;
    * case iii : m and m' continuous/zero at both ends, m''(0+) m''(h-) > 0.

    Anything ambiguous is reported as unclassified, never guessed.
    """
    if tol <= 0:
        raise ValueError("classification tolerance must be positive")
    jump0 = abs(data.m_minus - data.m0)
    jump1 = abs(data.m_plus - data.m1)
    if jump0 > tol and jump1 > tol:
        return SmoothnessCase(SmoothnessTag.CASE_I, tol)
    if jump0 <= tol and jump1 <= tol:
        d0 = abs(data.dm_minus)
        d1 = abs(data.dm_plus)
        if d0 > tol and d1 > tol:
            return SmoothnessCase(SmoothnessTag.CASE_II, tol)
        if d0 <= tol and d1 <= tol and data.d2m_minus * data.d2m_plus > tol * tol:
            return SmoothnessCase(SmoothnessTag.CASE_III, tol)
    return SmoothnessCase(SmoothnessTag.UNCLASSIFIED, tol)


# ---------------------------------------------------------------------------
# Profile-specification records and files
# ---------------------------------------------------------------------------

_HALFSPACE_KEYS = {"rho", "chi", "c", "m"}
_LAYER_KEYS = {"kind", "h", "c", "m", "samples", "dc", "dm", "sublayers"}


def _build_halfspace(rec: dict, side: str) -> HalfSpace:
    unknown = set(rec) - _HALFSPACE_KEYS
    if unknown:
        raise ProfileError(f"unknown keys in [{side}]: {sorted(unknown)}")
    if {"rho", "chi"} <= set(rec):
        return HalfSpace(rho=float(rec["rho"]), chi=float(rec["chi"]))
    if {"c", "m"} <= set(rec):
        return HalfSpace.from_wave(c=float(rec["c"]), m=float(rec["m"]))
    raise ProfileError(f"[{side}] needs either (rho, chi) or (c, m)")


def _as_float_list(v) -> list:
    if isinstance(v, str):
        return [float(tok) for tok in v.split()]
    if isinstance(v, (int, float)):
        return [float(v)]
    return [float(x) for x in v]


def _build_layer(rec: dict) -> LayerProfile:
    unknown = set(rec) - _LAYER_KEYS
    if unknown:
        raise ProfileError(f"unknown keys in [layer]: {sorted(unknown)}")
    kind = rec.get("kind")
    if kind is None:
        raise ProfileError("[layer] requires the key 'kind'")
    if kind == "constant":
        return LayerProfile.constant(float(rec["h"]), float(rec["c"]), float(rec["m"]))
    if kind == "polynomial":
        return LayerProfile.polynomial(float(rec["h"]),
                                       _as_float_list(rec["c"]),
                                       _as_float_list(rec["m"]))
    if kind == "spline":
        samples = rec["samples"]
        if isinstance(samples, str):
            rows = [[float(tok) for tok in line.split()]
                    for line in samples.strip().splitlines() if line.strip()]
        else:
            rows = [list(map(float, row)) for row in samples]
        if any(len(r) != 3 for r in rows):
            raise ProfileError("spline samples must be rows of (z, c, m)")
        arr = np.asarray(rows, dtype=float)
        if "dc" not in rec or "dm" not in rec:
            raise ProfileError(
                "spline layer requires clamped endpoint derivatives 'dc' and 'dm' "
                "(interpolation defaults must not choose the smoothness case)")
        dc = _as_float_list(rec["dc"])
        dm = _as_float_list(rec["dm"])
        if len(dc) != 2 or len(dm) != 2:
            raise ProfileError("'dc' and 'dm' must each give two values (at z=0 and z=h)")
        lay = LayerProfile.from_table(arr[:, 0], arr[:, 1], arr[:, 2], dc, dm)
        if "h" in rec and abs(float(rec["h"]) - lay.h) > 1e-12 * lay.h:
            raise ProfileError("[layer] h disagrees with the last sample abscissa")
        return lay
    if kind == "stack":
        sub = rec["sublayers"]
        if isinstance(sub, str):
            rows = [[float(tok) for tok in line.split()]
                    for line in sub.strip().splitlines() if line.strip()]
        else:
            rows = [list(map(float, row)) for row in sub]
        if any(len(r) != 3 for r in rows):
            raise ProfileError("stack sublayers must be rows of (length, c, m)")
        lay = LayerProfile.from_stack([tuple(r) for r in rows])
        if "h" in rec and abs(float(rec["h"]) - lay.h) > 1e-12 * lay.h:
            raise ProfileError("[layer] h disagrees with the sum of sublayer lengths")
        return lay
    raise ProfileError(f"unknown layer kind {kind!r} "
                       "(expected constant|polynomial|spline|stack)")


def build_profile(spec: dict) -> MediumModel:
    """Build a MediumModel from a profile-specification record.

    The record has three entries: ``left``, ``layer``, ``right``.  See the
    README for the full grammar; unknown keys are rejected.
    """
    unknown = set(spec) - {"left", "layer", "right"}
    if unknown:
        raise ProfileError(f"unknown top-level sections: {sorted(unknown)}")
    for key in ("left", "layer", "right"):
        if key not in spec:
            raise ProfileError(f"missing section [{key}]")
    return MediumModel(left=_build_halfspace(spec["left"], "left"),
                       layer=_build_layer(spec["layer"]),
                       right=_build_halfspace(spec["right"], "right"))


def parse_profile_text(text: str) -> dict:
    """Parse the INI-style profile grammar into a specification record."""
    cp = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ProfileError(f"cannot parse profile file: {exc}") from exc
    spec = {}
    for section in cp.sections():
        if section not in ("left", "layer", "right"):
            raise ProfileError(f"unknown section [{section}]")
        spec[section] = dict(cp.items(section))
    return spec


def load_profile(path) -> MediumModel:
    """Read a profile file and build the medium model."""
    with open(path, "r", encoding="utf-8") as fh:
        return build_profile(parse_profile_text(fh.read()))
