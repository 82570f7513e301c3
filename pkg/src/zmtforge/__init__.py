"""
zmtforge — certificate-producing constructive commutative algebra over Q:
Groebner bases and ideal membership, integral-dependence certificates,
Zariski's Main Theorem and the Multivariate Hensel Lemma.
"""

__version__ = "0.4.0"

from .errors import ZmtforgeError
from .config import EngineCaps, current_caps, load_caps, use_caps
from .ring import Poly, PolyMatrix, parse_poly
from .ideal import Algebra, Ideal, groebner, member, radical_member
from .integrality import IntegralityCertificate, Verdict, verify_cert

__all__ = [
    "__version__", "ZmtforgeError", "EngineCaps", "current_caps", "load_caps", "use_caps",
    "Poly", "PolyMatrix", "parse_poly", "Algebra", "Ideal", "groebner", "member", "radical_member",
    "IntegralityCertificate", "Verdict", "verify_cert",
]
