"""Closed-form solver for linear fractional differential equations.

Equations have the form ``sum_j c_j D^{j alpha} y = g`` with the Jumarie
derivative D^alpha and forcing built from atoms
``t^{k alpha} E_alpha(a t^alpha)``.
"""

from .errors import (
    AlphaMismatchError,
    ArgumentTooLargeError,
    ConvergenceError,
    DegenerateOperatorError,
    DomainError,
    FdeError,
    NotARootError,
    NotRealError,
    ParseError,
    ResidualError,
    StepUnderflowError,
    ValidationError,
)
from .kernels import BACKEND
from .operators import OperatorPoly, char_roots
from .solver import Problem, Solution, solve, solve_alpha_order_quadrature
from .special import MLConfig, frac_cos, frac_sin, gamma, mittag_leffler
from .terms import FracTerm, TermSum, d_alpha, d_alpha_n, evaluate, integrate_alpha, to_real

__version__ = "0.1.0"

__all__ = [
    "AlphaMismatchError", "ArgumentTooLargeError", "ConvergenceError",
    "DegenerateOperatorError", "DomainError", "FdeError", "NotARootError", "NotRealError",
    "ParseError", "ResidualError", "StepUnderflowError", "ValidationError", "BACKEND",
    "OperatorPoly", "char_roots", "Problem", "Solution", "solve",
    "solve_alpha_order_quadrature", "MLConfig", "frac_cos", "frac_sin", "gamma",
    "mittag_leffler", "FracTerm", "TermSum", "d_alpha", "d_alpha_n", "evaluate",
    "integrate_alpha", "to_real",
]
