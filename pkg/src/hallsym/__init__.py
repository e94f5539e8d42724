"""Exact desk-scale checks of Lusztig's symmetries through Ringel-Hall functions."""

from .laurent import (
    DEFAULT_CONVENTION,
    EvalConvention,
    LaurentFraction,
    LaurentPoly,
    SqrtQValue,
    eval_sqrt_q,
    gaussian_count,
    qbinom,
    qfact,
    qint,
)
from .freealg import FreeElement, reflection_word, serre_element, theta, theta_y, weight_of
from .rank2 import CoordVector, decompose_theta_i, from_coords, lusztig_T, project, to_coords
from .hall import (
    HallFunction,
    Q,
    Qprime,
    QuiverShape,
    avatar,
    hall_product,
    locus_indicator,
    omega_i,
    rank_certificate,
    transfer,
    varpi,
)
from .resolution import (
    c_recursive,
    chi_E_symbolic,
    coefficients,
    euler_check,
    qbinom_alternating,
    resolution_shadow,
)

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_CONVENTION",
    "EvalConvention",
    "LaurentFraction",
    "LaurentPoly",
    "SqrtQValue",
    "eval_sqrt_q",
    "gaussian_count",
    "qbinom",
    "qfact",
    "qint",
    "FreeElement",
    "reflection_word",
    "serre_element",
    "theta",
    "theta_y",
    "weight_of",
    "CoordVector",
    "decompose_theta_i",
    "from_coords",
    "lusztig_T",
    "project",
    "to_coords",
    "HallFunction",
    "Q",
    "Qprime",
    "QuiverShape",
    "avatar",
    "hall_product",
    "locus_indicator",
    "omega_i",
    "rank_certificate",
    "transfer",
    "varpi",
    "c_recursive",
    "chi_E_symbolic",
    "coefficients",
    "euler_check",
    "qbinom_alternating",
    "resolution_shadow",
]
