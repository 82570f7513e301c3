from .groebner import GroebnerBasis, groebner, normal_form
from .ideals import (Ideal, Membership, RadicalMembership, eliminate, fresh_var, local_member_poly, member,
                     radical_member, same_ideal, saturate)
from .algebra import Algebra, Element, LocalAt, SubalgebraMembership, local_member, subalg_member

__all__ = [
    "GroebnerBasis", "groebner", "normal_form",
    "Ideal", "Membership", "RadicalMembership", "eliminate", "fresh_var", "local_member_poly", "member",
    "radical_member", "same_ideal", "saturate",
    "Algebra", "Element", "LocalAt", "SubalgebraMembership", "local_member", "subalg_member",
]
