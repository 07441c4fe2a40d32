"""Constructive approximation by finite Blaschke products, inner functions and their quotients."""

from .approx_fbp import (TaylorSeries, caratheodory_approximant, exp_shift_series, fisher_approximate,
                         fisher_decompose_factor, fisher_decompose_product)
from .blaschke import BlaschkeQuotient, FiniteBlaschkeProduct, quotient_from_meromorphic
from .combination import ConvexCombination, FactoredCombination
from .disc import BoundaryGrid, FourierCoefficients, continuous_argument, fourier, harmonic_extension, inverse_fourier
from .douglas_rudin import ArcSet, build_map, douglas_rudin_approximate, two_valued_approximate
from .elliptic import EllipticParameters, complete_elliptic_K, jacobi_sn, solve_modulus
from .errors import (BlaschkeLabError, CapacityError, DegenerateInputError, DomainError, NumericalError,
                     PreconditionError, ResolutionError, SearchError)
from .inner import InnerFunction, frostman_approximate, is_blaschke_test, radial_log_mean
from .numrange import berger_stampfli_check, numerical_radius
from .unimodular import hankel_distance_estimate, helson_sarason, marshall_average, riemann_unimodular_combo

__version__ = "0.1.0"

__all__ = [
    "ArcSet",
    "BlaschkeLabError",
    "BlaschkeQuotient",
    "BoundaryGrid",
    "CapacityError",
    "ConvexCombination",
    "DegenerateInputError",
    "DomainError",
    "EllipticParameters",
    "FactoredCombination",
    "FiniteBlaschkeProduct",
    "FourierCoefficients",
    "InnerFunction",
    "NumericalError",
    "PreconditionError",
    "ResolutionError",
    "SearchError",
    "TaylorSeries",
    "berger_stampfli_check",
    "build_map",
    "caratheodory_approximant",
    "complete_elliptic_K",
    "continuous_argument",
    "douglas_rudin_approximate",
    "exp_shift_series",
    "fisher_approximate",
    "fisher_decompose_factor",
    "fisher_decompose_product",
    "fourier",
    "frostman_approximate",
    "hankel_distance_estimate",
    "harmonic_extension",
    "helson_sarason",
    "inverse_fourier",
    "is_blaschke_test",
    "jacobi_sn",
    "marshall_average",
    "numerical_radius",
    "quotient_from_meromorphic",
    "radial_log_mean",
    "riemann_unimodular_combo",
    "solve_modulus",
    "two_valued_approximate",
]
