"""
The two-unknown system over Q[a, b] localized at <a, b>:

    x + b x y + 2 b x^2 = a
    y + a x^2 + a x y + b y^2 = b
"""

from __future__ import annotations

import pytest

from src.zmtforge.hensel import verify_hensel_polynomial
from src.zmtforge.ideal import member
from src.zmtforge.ring import parse_poly

T = "1 + a*x + b*y"
W = "1 + 2*b*x + b*y"

QUARTIC = (
    "-u^4 + (1 + 4*a*b + a^2 + 3*b^2)*u^3"
    " + b*(b^5 + 8*a*b^4 + 7*a^2*b^3 - a^3*b^2 - 4*b*a^4 + a^5 - 6*a^2*b - a^3 + 4*a*b^2)*u^2"
    " - a^2*b^2*(a - b)*(a + 2*b)*(2*b^2 - 9*a*b + a^2)*u"
    " + a^4*b^3*(a - 4*b)*(a + 2*b)^2*(a - b)^2"
)


@pytest.fixture
def t(P):
    return P(T)


@pytest.fixture
def w(P):
    return P(W)


@pytest.mark.parametrize("lhs,rhs", [
    ("({T})*x", "a + (a - 2*b)*x^2"),
    ("({T})*y", "b - a*x^2"),
    ("({W})*x", "a"),
])
def test_linear_relations_hold_without_localizing(worked_ring, P, lhs, rhs):
    diff = P(lhs.format(T=T, W=W)) - P(rhs)
    assert member(diff, worked_ring.relations).ok


def test_t_is_integral_over_the_base(worked_ring, t, P):
    rel = t * t - (1 + P("a*x")) * t - P("b^2") + P("a*b*x^2")
    assert member(rel, worked_ring.relations).ok


def test_misprinted_t_equation_fails(worked_ring, worked_local, t, P):
    # differs from the true relation by (1 - b)(a x^2 - b) = -(1 - b) y t
    rel = t * t - (1 + P("a*x")) * t - P("b") + P("a*x^2")
    assert not member(rel, worked_ring.relations).ok
    assert not worked_local.is_zero(worked_local.poly(rel))
    gap = (1 - P("b")) * (P("a*x^2") - P("b")) + (1 - P("b")) * P("y") * t
    assert member(gap, worked_ring.relations).ok


@pytest.mark.slow
def test_hensel_quartic_for_t_w_squared(worked_system, t, w):
    h = -parse_poly(QUARTIC, ("a", "b", "u")).rename({"u": "T"})
    s = t * w * w
    v = verify_hensel_polynomial(worked_system, s, h, "T")
    assert v, v.detail
