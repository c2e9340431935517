"""Numerics for Zen spaces of analytic functions on the right half-plane.

Hardy and weighted Bergman spaces are the closed-form special cases; every
routine also accepts a general doubling boundary measure.
"""
import os

if os.environ.get("ZEN_THREADS"):
    # cap BLAS pools before numpy loads them
    for _var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
        os.environ.setdefault(_var, os.environ["ZEN_THREADS"])

from .errors import ConvergenceError, SpecFormatError, ValidationError, ZenError
from .measure import BoundaryMeasure, bergman_measure, delta2_ratio, hardy_measure, mass_cdf, validate_measure
from .spaces import ZenSpace, kernel_eval, kernel_norm_sq, weight_eval
from .norms import norm_via_isometry, zen_norm_direct
from .symbols import Composite, Constant, Identity, Multiplier, Nevanlinna, Scaling, Shift, Sqrt
from .composition import (angular_derivative, composition_report, ess_norm_lower, is_bounded_zen,
                          kernel_quotient_lower_bound, norm_bounds_zen, scaling_norm, weak_null_check,
                          weighted_bergman_criterion)

__version__ = "0.1.0"
