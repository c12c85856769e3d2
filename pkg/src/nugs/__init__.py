"""Nonuniform generalized sampling: wavelet reconstructions of compactly
supported signals from nonuniform Fourier samples."""

from .constants import (
    ConstantsReport,
    c2_estimate,
    constants_report,
    haar_bound,
    quadratic_form_extrema,
    reconstruction_bound,
    z_residual,
)
from .operators import (
    SamplingOperator,
    build_system,
    condition_number,
    gridding_reconstruct,
    l2_error,
    measure,
    perturb_measurements,
    projection_error,
    reconstruct,
    reconstruction_error,
    solve_nugs,
)
from .sampling import (
    SamplingScheme,
    compute_weights,
    density_of,
    jittered_scheme,
    log_scheme,
    seip_scheme,
    uniform_scheme,
)
from .signals import Expansion, ExpSum, NormalizedSinc, TrigPoly, parse_signal
from .wavelets import basis_fourier, build_space, dwt, idwt, make_filter, project

__version__ = "0.1.0"

__all__ = [
    "ConstantsReport",
    "ExpSum",
    "Expansion",
    "NormalizedSinc",
    "SamplingOperator",
    "SamplingScheme",
    "TrigPoly",
    "basis_fourier",
    "build_space",
    "build_system",
    "c2_estimate",
    "compute_weights",
    "condition_number",
    "constants_report",
    "density_of",
    "dwt",
    "gridding_reconstruct",
    "haar_bound",
    "idwt",
    "jittered_scheme",
    "l2_error",
    "log_scheme",
    "make_filter",
    "measure",
    "parse_signal",
    "perturb_measurements",
    "project",
    "projection_error",
    "quadratic_form_extrema",
    "reconstruct",
    "reconstruction_bound",
    "reconstruction_error",
    "seip_scheme",
    "solve_nugs",
    "uniform_scheme",
    "z_residual",
]
