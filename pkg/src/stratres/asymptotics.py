"""Leading-order resonance laws and the numeric-vs-predicted comparison.

Three smoothness cases; tau is the layer travel time and n the lattice
index.  With xi, theta and the endpoint potentials v-, v+ defined from
the endpoint data:

* case i,  xi > 1 :   w_n = pi n / tau - i ln(xi) / (2 tau)
* case i,  xi < -1:   w_n = pi (n + 1/2) / tau - i ln(-xi) / (2 tau)
* case ii           : w_n = pi n / tau - i (ln|2 pi n| - ln(tau sqrt(theta))) / tau
* case iii          : w_n = pi n / tau - i (2 ln|2 pi n| - ln(tau^2 sqrt(v- v+))) / tau

The printed sources disagree on the normalization of theta; all variants
are computed and the comparison fit selects one empirically (see
``theta_constant``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import CaseError
from .profile import EndpointData, SmoothnessTag

#: theta normalization variants, keyed by a short tag.
THETA_VARIANTS = ("chi0_chim", "chi0_chi1", "no_m0m1")
DEFAULT_THETA_VARIANT = "chi0_chi1"  # equals m0 m1 chi- chi+ m-' m+' when chi is continuous


def xi_constant(data: EndpointData, tol: float = 1e-12) -> float:
    """Case-i constant xi = (m0^2+m-^2)(m1^2+m+^2) / ((m0^2-m-^2)(m1^2-m+^2))."""
    d0 = data.m0**2 - data.m_minus**2
    d1 = data.m1**2 - data.m_plus**2
    if abs(d0) <= tol or abs(d1) <= tol:
        raise CaseError("not case i: an endpoint m jump vanishes")
    xi = (data.m0**2 + data.m_minus**2) * (data.m1**2 + data.m_plus**2) / (d0 * d1)
    assert abs(xi) > 1.0
    return xi


@dataclass(frozen=True)
class ThetaCandidates:
    """All printed theta normalizations plus the configured default.

    * ``chi0_chim``: m0 m1 chi0 chi- m-' m+'
    * ``chi0_chi1``: m0 m1 chi0 chi1 m-' m+'
    * ``no_m0m1``  :       chi- chi+ m-' m+'

    ``selected`` is the value used downstream (variant ``chi0_chi1``,
    which coincides with m0 m1 chi- chi+ m-' m+' under the case-ii
    endpoint continuity that makes theta well defined).
    """

    values: dict
    variant: str

    @property
    def selected(self) -> float:
        return self.values[self.variant]


def theta_constant(data: EndpointData, tol: float = 1e-9,
                   variant: str = DEFAULT_THETA_VARIANT) -> ThetaCandidates:
    """Case-ii constants under every printed normalization."""
    if abs(data.m_minus - data.m0) > tol or abs(data.m_plus - data.m1) > tol:
        raise CaseError("not case ii: endpoint m values do not match")
    if abs(data.dm_minus) <= tol or abs(data.dm_plus) <= tol:
        raise CaseError("not case ii: an endpoint m' vanishes")
    prod = data.dm_minus * data.dm_plus
    m01 = data.m0 * data.m1
    values = {
        "chi0_chim": m01 * data.chi0 * data.chi_minus * prod,
        "chi0_chi1": m01 * data.chi0 * data.chi1 * prod,
        "no_m0m1": data.chi_minus * data.chi_plus * prod,
    }
    if variant not in values:
        raise ValueError(f"unknown theta variant {variant!r}")
    if values[variant] <= 0:
        raise CaseError(
            "theta <= 0 under the chosen normalization (m-' m+' < 0); "
            "the logarithmic law does not apply — check the derivative signs")
    return ThetaCandidates(values=values, variant=variant)


def endpoint_potentials(data: EndpointData) -> tuple:
    """Case-iii endpoint potentials (v-, v+) = (-c0^2 m-''/m0, -c1^2 m+''/m1)."""
    v_minus = -data.c0**2 * data.d2m_minus / data.m0
    v_plus = -data.c1**2 * data.d2m_plus / data.m1
    if v_minus * v_plus <= 0:
        raise CaseError("case iii hypothesis violated: V(y-) V(y+) <= 0")
    return v_minus, v_plus


@dataclass(frozen=True)
class AsymptoticModel:
    """The data needed to evaluate the leading-order law for one profile."""

    case: SmoothnessTag
    tau: float
    xi: float | None = None
    theta: ThetaCandidates | None = None
    v_minus: float | None = None
    v_plus: float | None = None


def build_asymptotic_model(data: EndpointData, case: SmoothnessTag, tau: float,
                           theta_variant: str = DEFAULT_THETA_VARIANT) -> AsymptoticModel:
    if case == SmoothnessTag.CASE_I:
        return AsymptoticModel(case=case, tau=tau, xi=xi_constant(data))
    if case == SmoothnessTag.CASE_II:
        return AsymptoticModel(case=case, tau=tau,
                               theta=theta_constant(data, variant=theta_variant))
    if case == SmoothnessTag.CASE_III:
        vm, vp = endpoint_potentials(data)
        return AsymptoticModel(case=case, tau=tau, v_minus=vm, v_plus=vp)
    raise CaseError("no asymptotic law for an unclassified profile")


def uses_half_lattice(am: AsymptoticModel) -> bool:
    """True when the real parts sit on pi (n + 1/2) / tau (case i, xi < -1)."""
    return am.case == SmoothnessTag.CASE_I and am.xi is not None and am.xi < 0


def expected_drift_slope(am: AsymptoticModel) -> float:
    """Slope of Im w_n against ln|2 pi n|: 0, -1/tau or -2/tau."""
    return {SmoothnessTag.CASE_I: 0.0,
            SmoothnessTag.CASE_II: -1.0 / am.tau,
            SmoothnessTag.CASE_III: -2.0 / am.tau}[am.case]


def expected_drift_intercept(am: AsymptoticModel, theta_value: float | None = None) -> float:
    """Intercept of the same fit under the model's constants."""
    tau = am.tau
    if am.case == SmoothnessTag.CASE_I:
        return -math.log(abs(am.xi)) / (2.0 * tau)
    if am.case == SmoothnessTag.CASE_II:
        th = am.theta.selected if theta_value is None else theta_value
        return math.log(tau * math.sqrt(th)) / tau
    return math.log(tau**2 * math.sqrt(am.v_minus * am.v_plus)) / tau


def asymptotic_resonance(am: AsymptoticModel, n: int) -> complex:
    """Leading-order prediction w_hat_n for lattice index n."""
    tau = am.tau
    if am.case == SmoothnessTag.CASE_I:
        if n == 0 and not uses_half_lattice(am):
            raise ValueError("n = 0 is the excluded threshold index")
        if am.xi > 1.0:
            return math.pi * n / tau - 0.5j * math.log(am.xi) / tau
        return (math.pi * (n + 0.5) / tau) - 0.5j * math.log(-am.xi) / tau
    if n == 0:
        raise ValueError("n = 0 is the excluded threshold index")
    if am.case == SmoothnessTag.CASE_II:
        drift = (math.log(abs(2.0 * math.pi * n))
                 - math.log(tau * math.sqrt(am.theta.selected))) / tau
        return math.pi * n / tau - 1j * drift
    if am.case == SmoothnessTag.CASE_III:
        drift = (2.0 * math.log(abs(2.0 * math.pi * n))
                 - math.log(tau**2 * math.sqrt(am.v_minus * am.v_plus))) / tau
        return math.pi * n / tau - 1j * drift
    raise CaseError("no asymptotic law for an unclassified profile")


# ---------------------------------------------------------------------------
# Comparison against enumerated resonances
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ComparisonRow:
    n: int
    omega_numeric: complex
    omega_predicted: complex
    gap: float
    gap_times_n: float


@dataclass(frozen=True)
class ComparisonReport:
    """Least-squares drift fit of Im w_n against ln|2 pi n| plus per-n gaps."""

    rows: tuple
    slope: float
    intercept: float
    # least-squares intercept with the slope pinned to its theoretical
    # value; converges faster than the free fit at moderate n
    intercept_at_expected_slope: float
    expected_slope: float
    expected_intercept: float
    n_fit_min: int
    theta_intercepts: dict | None = None
    selected_theta_variant: str | None = None

    def to_json_dict(self) -> dict:
        return {
            "slope": self.slope,
            "intercept": self.intercept,
            "intercept_at_expected_slope": self.intercept_at_expected_slope,
            "expected_slope": self.expected_slope,
            "expected_intercept": self.expected_intercept,
            "n_fit_min": self.n_fit_min,
            "theta_intercepts": self.theta_intercepts,
            "selected_theta_variant": self.selected_theta_variant,
            "rows": [
                {"n": r.n,
                 "re_omega": r.omega_numeric.real,
                 "im_omega": r.omega_numeric.imag,
                 "re_predicted": r.omega_predicted.real,
                 "im_predicted": r.omega_predicted.imag,
                 "gap": r.gap,
                 "gap_times_n": r.gap_times_n}
                for r in self.rows
            ],
        }

    def write_gap_csv(self, path):
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("n,gap\n")
            for r in self.rows:
                fh.write(f"{r.n},{r.gap:.17g}\n")


def compare(resonances, am: AsymptoticModel, n_fit_min: int = 10) -> ComparisonReport:
    """Compare enumerated resonances with the leading-order law.

    The drift fit uses indices with |n| >= n_fit_min (small n is
    pre-asymptotic).  For case ii the fitted intercept is compared against
    every theta normalization candidate and the closest one is recorded.
    """
    rows = []
    for res in sorted(resonances, key=lambda r: r.n):
        pred = asymptotic_resonance(am, res.n)
        gap = abs(res.omega - pred)
        rows.append(ComparisonRow(n=res.n, omega_numeric=res.omega,
                                  omega_predicted=pred, gap=gap,
                                  gap_times_n=gap * abs(res.n)))
    fit = [(r.n, r.omega_numeric) for r in rows if abs(r.n) >= n_fit_min]
    if len(fit) < 10:
        raise ValueError(
            f"need at least 10 resonances with |n| >= {n_fit_min} for the drift fit")
    x = np.array([math.log(abs(2.0 * math.pi * n)) for n, _ in fit])
    y = np.array([om.imag for _, om in fit])
    slope, intercept = np.polyfit(x, y, 1)
    intercept_fixed = float(np.mean(y - expected_drift_slope(am) * x))

    theta_intercepts = None
    selected = None
    if am.case == SmoothnessTag.CASE_II:
        theta_intercepts = {
            tag: expected_drift_intercept(am, theta_value=val)
            for tag, val in am.theta.values.items() if val > 0
        }
        selected = min(theta_intercepts,
                       key=lambda tag: abs(theta_intercepts[tag] - intercept))

    return ComparisonReport(rows=tuple(rows), slope=float(slope),
                            intercept=float(intercept),
                            intercept_at_expected_slope=intercept_fixed,
                            expected_slope=expected_drift_slope(am),
                            expected_intercept=expected_drift_intercept(am),
                            n_fit_min=n_fit_min,
                            theta_intercepts=theta_intercepts,
                            selected_theta_variant=selected)
