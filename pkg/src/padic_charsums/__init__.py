"""Verification toolkit for smoothed character sums of binary quadratic forms
modulo prime powers."""

from .characters import DirichletCharacter, UnitPhase, char_construct, char_eval, postnikov_a0
from .charsum_pipeline import QuadraticForm, SumParams, sum_SQ
from .expsums import IntPolynomial, RationalFunc, clz_check, complete_sum, critical_points
from .padic_core import PAdicInt, hensel_sqrt, ord_p_int, padic_log
from .smooth_weights import DEFAULT_WEIGHT, ProductShift, ScaledBump, StandardBump, fourier_transform

__version__ = "0.1.0"
