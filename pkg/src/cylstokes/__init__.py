"""Semi-analytical Stokes flow around two nearly touching rigid cylinders in a linear background flow.

The exterior of two equal disks is mapped to a strip in bipolar coordinates,
where the no-slip problems reduce to Fourier series with closed-form
coefficients.  Singular solutions capture the gap blow-up; rigid-motion
constants are fixed by force and torque balance.
"""

from .assembly import (
    BACKGROUNDS,
    Background,
    FlowSolution,
    IntegralSet,
    Qn,
    RigidConstants,
    boundary_integrals,
    eval_flow,
    eval_flow_bipolar,
    eval_flow_grid,
    parse_background,
    rigid_constants,
    sigma_narrow_asymptotic,
    solve_flow,
)
from .errors import ConfigurationError, ConvergenceError, CylStokesError, DegeneracyError, DomainError
from .fields import FieldSample
from .geometry import Geometry, bipolar_to_cart, cart_to_bipolar, make_geometry
from .noslip import F0_G0, coefficients, field_v, k_rot, k_v, truncation_order
from .singular import h1_field, h2_tilde_field, singular_constants
from .validation import Check, RateFit, SupNorm, fd_stokes_residual, fit_rate, sup_norm_estimate, sup_norms

__version__ = "0.1.0"

__all__ = [
    "BACKGROUNDS", "Background", "Check", "ConfigurationError", "ConvergenceError", "CylStokesError",
    "DegeneracyError", "DomainError", "F0_G0", "FieldSample", "FlowSolution", "Geometry", "IntegralSet",
    "Qn", "RateFit", "RigidConstants", "SupNorm", "bipolar_to_cart", "boundary_integrals", "cart_to_bipolar",
    "coefficients", "eval_flow", "eval_flow_bipolar", "eval_flow_grid", "fd_stokes_residual", "field_v",
    "fit_rate", "h1_field", "h2_tilde_field", "k_rot", "k_v", "make_geometry", "parse_background",
    "rigid_constants", "sigma_narrow_asymptotic", "singular_constants", "solve_flow", "sup_norm_estimate",
    "sup_norms", "truncation_order",
]
