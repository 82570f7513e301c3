"""Exact polynomial arithmetic and matrix kernels over Q."""

from .poly import Poly, arith, as_poly, unify_vars
from .order import MonomialOrder, DEGREVLEX
from .parse import parse_poly, format_poly, is_name
from .matrix import PolyMatrix, det_ff, det_cofactor, char_poly, sylvester, resultant, pseudo_divide

__all__ = [
    "Poly", "arith", "as_poly", "unify_vars",
    "MonomialOrder", "DEGREVLEX",
    "parse_poly", "format_poly", "is_name",
    "PolyMatrix", "det_ff", "det_cofactor", "char_poly", "sylvester", "resultant", "pseudo_divide",
]
