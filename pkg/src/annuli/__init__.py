"""Averages over annuli: maximal functions, Fourier kernels and ergodic averages.

Annuli ``ann(r, e) = {t : r - e <= |t| <= r}`` interpolate between spheres
(``e -> 0``) and balls (``e = r``). The package measures how the thickness
function ``r -> e(r)`` decides whether maximal averages satisfy weak-type
bounds and whether mean ergodic averages over annuli converge.
"""

from .errors import DomainError, ToleranceError
from .geometry import (
    AnnulusSpec,
    Ball,
    Constant,
    PowerLaw,
    Proportional,
    Table,
    annulus_volume,
    band_fraction,
    contains,
    parse_thickness,
    thickness,
    unit_ball_volume,
    unit_sphere_area,
)
from .specfun import bessel_j, sphere_fourier
from .fields import (
    BallIndicator,
    Counterexample,
    RadialPower,
    ScaledCounterexample,
    TrigWave,
    critical_norm,
    lower_bound_rhs,
    parse_field,
    power_integral,
)
from .quadrature import (
    Estimate,
    MonteCarlo,
    Product,
    Shell,
    annulus_average,
    annulus_mean,
    parse_scheme,
    sample_annulus,
    sample_sphere,
    sphere_average,
    sphere_mean,
)
from .maximal import (
    Box,
    RadialBand,
    WeakTypeReport,
    cap_measure,
    control_report,
    dichotomy_report,
    growth_regression,
    maximal_over_radii,
    proof_radius_average,
    superlevel_volume,
    threshold,
    weak_type_ratio,
)
from .fourier import KernelQuery, annulus_kernel, decay_scan, kernel_1d
from .ergodic import TorusSystem, TrigPoly, flow_average, mean_l2_error, spectral_average

__all__ = [
    "DomainError",
    "ToleranceError",
    "AnnulusSpec",
    "Ball",
    "Constant",
    "PowerLaw",
    "Proportional",
    "Table",
    "annulus_volume",
    "band_fraction",
    "contains",
    "parse_thickness",
    "thickness",
    "unit_ball_volume",
    "unit_sphere_area",
    "bessel_j",
    "sphere_fourier",
    "BallIndicator",
    "Counterexample",
    "RadialPower",
    "ScaledCounterexample",
    "TrigWave",
    "critical_norm",
    "lower_bound_rhs",
    "parse_field",
    "power_integral",
    "Estimate",
    "MonteCarlo",
    "Product",
    "Shell",
    "annulus_average",
    "annulus_mean",
    "parse_scheme",
    "sample_annulus",
    "sample_sphere",
    "sphere_average",
    "sphere_mean",
    "Box",
    "RadialBand",
    "WeakTypeReport",
    "cap_measure",
    "control_report",
    "dichotomy_report",
    "growth_regression",
    "maximal_over_radii",
    "proof_radius_average",
    "superlevel_volume",
    "threshold",
    "weak_type_ratio",
    "KernelQuery",
    "annulus_kernel",
    "decay_scan",
    "kernel_1d",
    "TorusSystem",
    "TrigPoly",
    "flow_average",
    "mean_l2_error",
    "spectral_average",
]

__version__ = "0.1.0"
