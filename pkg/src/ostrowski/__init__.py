"""Executable Ostrowski and Hermite-Hadamard type bounds for functions whose
derivatives are m-convex, with a composite midpoint rule error estimator."""

from .bounds import (BoundParams, BoundResult, holder_lipschitz_bound,
                     holder_midpoint_bound, holder_ostrowski_bound,
                     kernel_identity_residual, mconvex_ostrowski_bound,
                     ostrowski_lhs, power_mean_ostrowski_bound, verify_sweep)
from .errors import DomainError, InfeasibleBoundError, IntegrationError
from .funlib import (Function1D, Interval, builtin, from_expression, integrate,
                     mean_value, parse_function_spec)
from .mconvex import ConvexityGrid, check_m_convex, check_starshaped, in_km, max_m

__version__ = "0.1.0"
