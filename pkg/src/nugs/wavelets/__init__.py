"""Scaling filters, refinable functions and wavelet spaces on [0, 1]."""

from .dwt import dwt, idwt
from .filters import ScalingFilter, check_filter, make_filter
from .refinable import cascade_evaluate, phi_hat, phi_values
from .space import (
    ReconstructionSpace,
    basis_fourier,
    build_space,
    evaluate,
    gram_matrix,
    inner_products,
    project,
    scaling_fourier,
)

__all__ = [
    "ReconstructionSpace",
    "ScalingFilter",
    "basis_fourier",
    "build_space",
    "cascade_evaluate",
    "check_filter",
    "dwt",
    "evaluate",
    "gram_matrix",
    "idwt",
    "inner_products",
    "make_filter",
    "phi_hat",
    "phi_values",
    "project",
    "scaling_fourier",
]
