"""Exact evaluation of arithmetic BF path integrals.

Brute-force enumeration of pairs of cohomology classes, with phase sums
evaluated exactly in Z[zeta_n], checked against closed-form orders of class
groups, unit groups, Mordell-Weil and Tate-Shafarevich groups.
"""

from .abgroup import AbElement, CyclicHom, InvariantFactors
from .bf_av import AVModel, build_av_instance, path_integral_av, random_model
from .bf_gm import FieldData, GMInstance, closed_form_gm, path_integral_gm
from .cyclo import PhaseVector, phase_sum_as_integer
from .pathsum import PathIntegralReport
from .quadforms import QuadForm, class_group

__all__ = [
    "AbElement",
    "AVModel",
    "CyclicHom",
    "FieldData",
    "GMInstance",
    "InvariantFactors",
    "PathIntegralReport",
    "PhaseVector",
    "QuadForm",
    "build_av_instance",
    "class_group",
    "closed_form_gm",
    "path_integral_av",
    "path_integral_gm",
    "phase_sum_as_integer",
    "random_model",
]

__version__ = "0.1.0"
