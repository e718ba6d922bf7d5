"""Scattering resonances of a stratified elastic layer between half-spaces.

The medium is a fluid-like stratified slab 0 < z < h with density rho(z)
and stiffness chi(z), sandwiched between homogeneous half-spaces.
Resonances are the lower-half-plane zeros of the Wronskian of the two
Jost solutions; this package locates them, audits the count by the
argument principle, and compares their drift against closed-form
asymptotic laws determined by the smoothness of the profile at the
interfaces.
"""

from .errors import (CaseError, DomainError, IntegrationError, ProfileError,
                     RootFindError)
from .profile import (HalfSpace, LayerProfile, MediumModel, EndpointData,
                      SmoothnessCase, SmoothnessTag, build_profile,
                      classify_smoothness, endpoint_data, eval_material,
                      load_profile, parse_profile_text)
from .liouville import (TravelTimeChart, liouville_map, potential,
                        potential_on_grid, travel_time, verify_transform,
                        dump_chart)
from .wronskian import (BoundaryTrace, WronskianEvaluator, jost_plus_trace,
                        transfer_matrix_wronskian, dump_wronskian_grid)
from .asymptotics import (AsymptoticModel, ComparisonReport, ComparisonRow,
                          ThetaCandidates, THETA_VARIANTS,
                          DEFAULT_THETA_VARIANT, asymptotic_resonance,
                          build_asymptotic_model, compare,
                          endpoint_potentials, expected_drift_intercept,
                          expected_drift_slope, theta_constant,
                          uses_half_lattice, xi_constant)
from .resonances import (EnumerateOptions, EnumerationResult, Resonance,
                         SearchBox, count_zeros, enumerate_resonances,
                         refine, result_to_json_dict, write_resonance_csv)
from .scattering import (Peak, PeakReport, ReflectionSample, ReflectionScan,
                         breit_wigner, detect_peaks, dump_spectrum_csv,
                         estimate_tau, phase_derivative,
                         reflection_coefficient, reflection_scan)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
