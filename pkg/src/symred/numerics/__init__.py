"""Floating-point side: special functions, family evaluation, RK integration."""

from .special import E1, SpecialDomainError, special, special_array
from .rk import ATOL, RTOL, IntegrationError, StepSizeUnderflow, Trajectory, dopri5
from .families import (ValidityViolation, as_number, check_validity, eval_family, family_defect, family_evaluator,
                       family_ic, family_phi, integrate, resolve_params, system_rhs)

__all__ = [
    "ATOL", "E1", "IntegrationError", "RTOL", "SpecialDomainError", "StepSizeUnderflow",
    "Trajectory", "ValidityViolation", "as_number", "check_validity", "dopri5", "eval_family",
    "family_defect", "family_evaluator", "family_ic", "family_phi", "integrate", "resolve_params", "special",
    "special_array", "system_rhs",
]
