"""Roots of Bernstein-Sato polynomials supported at the origin for
homogeneous polynomials whose projective hypersurface has only weighted
homogeneous isolated singularities, computed by exact graded linear algebra.
"""

from .bsengine import RootReport, analyze
from .errors import BsrootsError, InputError, InvariantError, WViolation
from .koszul import GradedTable
from .localspec import SingularityData, aggregate, load_singularities
from .polyring import HomogPoly, parse_expr, parse_poly

__version__ = "0.1.0"

__all__ = [
    "RootReport",
    "analyze",
    "BsrootsError",
    "InputError",
    "InvariantError",
    "WViolation",
    "GradedTable",
    "SingularityData",
    "aggregate",
    "load_singularities",
    "HomogPoly",
    "parse_expr",
    "parse_poly",
]
