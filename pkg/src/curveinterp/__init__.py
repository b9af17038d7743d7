"""Exact interpolation of planar algebraic curves through points, boxes and segments."""
from .exactnum import Ival, Matrix, UniPoly, parse_number
from .polybasis import Monomial, Poly, Support, even_support, graded_support, parse_poly

__version__ = "0.1.0"
