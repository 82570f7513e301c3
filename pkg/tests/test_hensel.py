from __future__ import annotations

import dataclasses

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.zmtforge.errors import A1NotUnit, HypothesisNotSatisfied, JacobianNotUnit
from src.zmtforge.hensel import (HenselSystem, NewtonState, cleared_identity, extend_system, isolate_zero,
                                 mhl_pipeline, monicize, newton_run, normalize_sign, rational_inverse,
                                 verify_hensel_polynomial, verify_mhl, verify_monicization, verify_newton_state)
from src.zmtforge.ideal import Algebra, Ideal, LocalAt, member
from src.zmtforge.ring import Poly, PolyMatrix, parse_poly
from strategies import polys

AX = ("a", "x")


@pytest.fixture
def base_a() -> Algebra:
    return Algebra(("a",), Ideal((), ("a",)), LocalAt.one_plus((Poly.var("a"),)), ("a",))


@pytest.fixture
def m_a() -> Ideal:
    return Ideal((Poly.var("a"),), ("a",))


@pytest.fixture
def catalan(base_a, m_a) -> HenselSystem:
    """x = a + x^2, the generating series of the Catalan numbers."""
    return HenselSystem(base_a, m_a, ("x",), (parse_poly("x - x^2 - a", AX),))


@pytest.fixture
def linear(base_a, m_a) -> HenselSystem:
    return HenselSystem(base_a, m_a, ("x",), (parse_poly("x - a", AX),))


# --- systems --------------------------------------------------------------------

def test_system_shape_is_checked(base_a, m_a):
    with pytest.raises(HypothesisNotSatisfied, match="collide"):
        HenselSystem(base_a, m_a, ("a",), (parse_poly("a"),))
    with pytest.raises(HypothesisNotSatisfied, match="equations"):
        HenselSystem(base_a, m_a, ("x", "y"), (parse_poly("x - a", AX),))


def test_jacobian_must_be_a_unit_at_the_origin(base_a, m_a):
    flat = HenselSystem(base_a, m_a, ("x",), (parse_poly("x - 1", AX),))
    with pytest.raises(HypothesisNotSatisfied, match="vanish"):
        flat.check()
    degenerate = HenselSystem(base_a, m_a, ("x",), (parse_poly("a*x + x^2", AX),))
    with pytest.raises(JacobianNotUnit):
        degenerate.check()


def test_translation_moves_the_zero(base_a, m_a):
    shifted = HenselSystem(base_a, m_a, ("x",), (parse_poly("x - 1 - a", AX),))
    moved = shifted.translate([1])
    assert moved.eqs[0] == parse_poly("x - a", AX)
    moved.check()


def test_rational_inverse():
    m = PolyMatrix.from_rows([[Poly.const(2), Poly.const(1)], [Poly.const(1), Poly.const(1)]])
    inv = rational_inverse(m)
    assert m @ inv == PolyMatrix.identity(2)
    singular = PolyMatrix.from_rows([[Poly.const(1), Poly.const(2)], [Poly.const(2), Poly.const(4)]])
    with pytest.raises(JacobianNotUnit):
        rational_inverse(singular)
    with pytest.raises(JacobianNotUnit):
        rational_inverse(PolyMatrix.from_rows([[Poly.var("a")]]))


# --- Newton -----------------------------------------------------------------------

def test_newton_doubles_precision(catalan):
    states = newton_run(catalan, 3)
    assert [s.k for s in states] == [0, 1, 2, 3]
    assert states[1].point[0] == Poly.var("a")
    assert states[2].point[0] == parse_poly("a + a^2 + 2*a^3", ("a",))
    # the Catalan numbers up to a^7
    truth = parse_poly("a + a^2 + 2*a^3 + 5*a^4 + 14*a^5 + 42*a^6 + 132*a^7", ("a",))
    a8 = Ideal((Poly.var("a"),), ("a",)).power(8)
    assert member(states[3].point[0] - truth, a8).ok


def test_newton_on_the_worked_system(worked_system):
    states = newton_run(worked_system, 2)
    assert len(states) == 3
    for s in states:
        assert verify_newton_state(worked_system, s)
    assert states[1].point == (Poly.var("a"), Poly.var("b"))


def test_tampered_newton_state_is_rejected(worked_system):
    states = newton_run(worked_system, 1)
    lying = dataclasses.replace(states[0], k=1)
    v = verify_newton_state(worked_system, lying)
    assert not v.ok and v.reason == "NotInIdeal"
    drifted = NewtonState((Poly.var("a") + Poly.var("b") ** 2, Poly.var("b")), states[1].u, 2)
    assert verify_newton_state(worked_system, drifted).reason == "NotInIdeal"


# --- isolation and extension --------------------------------------------------------

def test_isolating_the_simple_zero(catalan):
    iso = isolate_zero(catalan)
    assert iso.e == parse_poly("1 - x", ("x",))
    assert not iso.translated
    assert iso.jacobian_normalizer == PolyMatrix.identity(1)


def test_isolation_at_a_translated_point(catalan):
    # x - x^2 has its other residual zero at x = 1, with Jacobian -1 there
    iso = isolate_zero(catalan, point=[1])
    assert iso.translated
    assert iso.e == Poly.var("x")


def test_extension_puts_every_unknown_in_m(catalan):
    iso = isolate_zero(catalan)
    ext = extend_system(catalan, iso)
    assert ext.vars == ("x", "X2")
    x, x2 = Poly.var("x"), Poly.var("X2")
    assert ext.eqs[1] == 1 - (1 - x2) * (1 - x)
    b = ext.plain_algebra()
    full = b.relations + ext.point_ideal.embed(b.vars)
    assert member(b.poly(x), full).ok
    assert member(b.poly(x2), full).ok


def test_no_residual_zero(catalan):
    with pytest.raises(HypothesisNotSatisfied, match="residual zero"):
        isolate_zero(catalan, point=[2])


# --- monicization --------------------------------------------------------------------

def test_linear_monicization_is_the_identity_map(base_a, m_a):
    r = monicize(parse_poly("x - a", AX), "x", base_a, m_a)
    assert r.n == 1
    assert r.g == Poly.var("x")
    assert verify_monicization(r, base_a, m_a)


def test_quadratic_monicization(base_a, m_a):
    f = parse_poly("-a + x + x^2", AX)
    r = monicize(f, "x", base_a, m_a)
    assert r.g_denominator == 1
    assert r.g == parse_poly("x^2 + x - a", AX)
    assert cleared_identity(f, "x", r.g_numerator).is_zero()
    assert r.b0 == -Poly.var("a")


@given(c0=st.integers(-3, 3).filter(bool), c1=st.integers(-3, 3),
       top=st.lists(st.integers(-3, 3), min_size=1, max_size=3))
def test_monicization_identity_holds(c0, c1, top):
    base = Algebra(("a",), Ideal((), ("a",)), LocalAt.one_plus((Poly.var("a"),)), ("a",))
    m = Ideal((Poly.var("a"),), ("a",))
    a, x = Poly.var("a"), Poly.var("x")
    f = c0 * a + (1 + c1 * a) * x
    for k, c in enumerate(top, start=2):
        f = f + c * x ** k
    r = monicize(f, "x", base, m)
    assert cleared_identity(f, "x", r.g_numerator).is_zero()
    assert verify_monicization(r, base, m)


def test_tampered_monicization(base_a, m_a):
    r = monicize(parse_poly("-a + x + 3*x^2", AX), "x", base_a, m_a)
    off = dataclasses.replace(r, g_numerator=r.g_numerator + 1)
    assert verify_monicization(off, base_a, m_a).reason == "RecoveryIdentity"
    scaled = dataclasses.replace(r, g_denominator=r.g_denominator * 2)
    assert verify_monicization(scaled, base_a, m_a).reason == "NotMonic"


def test_monicization_hypotheses(base_a, m_a):
    with pytest.raises(A1NotUnit):
        monicize(parse_poly("-a + a*x + x^2", AX), "x", base_a, m_a)
    with pytest.raises(HypothesisNotSatisfied, match="not in M"):
        monicize(parse_poly("1 + x", AX), "x", base_a, m_a)


# --- Hensel polynomials ------------------------------------------------------------------

def test_hensel_polynomial_checks(linear):
    s = parse_poly("1 + x", AX)
    t = ("a", "T")
    assert verify_hensel_polynomial(linear, s, parse_poly("T - 1 - a", t))
    assert verify_hensel_polynomial(linear, s, parse_poly("1 + a - T", t))
    assert verify_hensel_polynomial(linear, s, parse_poly("T - 1", t)).reason == "Annihilation"
    assert verify_hensel_polynomial(linear, s, parse_poly("T - a", t)).reason == "ResidualShape"
    assert verify_hensel_polynomial(linear, s, parse_poly("2*T - 2 - 2*a", t)).reason == "NotMonic"


def test_normalize_sign():
    p = parse_poly("-T^2 + T + a", ("a", "T"))
    assert normalize_sign(p, "T") == -p
    assert normalize_sign(-p, "T") == -p


def test_pipeline_on_a_linear_system(linear):
    run = mhl_pipeline(linear)
    assert not run.extended
    assert run.monicized is None
    assert run.verdict
    tv = run.reduced.var
    assert run.reduced.h.lc_in(tv) == 1
    assert verify_mhl(run.reduced, run.zero)
    assert len(run.zero.zeros) == 1


@pytest.mark.slow
def test_pipeline_on_the_worked_system(worked_system):
    run = mhl_pipeline(worked_system)
    assert run.verdict
    res = run.reduced
    assert verify_hensel_polynomial(res.system, res.s.numerator, res.h, res.var)
    assert len(run.zero.zeros) == res.system.n
    doc = run.to_json()
    assert doc["mhl"]["h"] == str(res.h)


@settings(max_examples=50, deadline=None)
@given(p0=polys(("a",), 2, max_terms=3), p1=polys(("a",), 2, max_terms=3),
       top=st.lists(polys(("a",), 2, max_terms=2), min_size=0, max_size=3))
def test_monicization_sweep_lands_in_m_and_one_plus_m(p0, p1, top):
    base = Algebra(("a",), Ideal((), ("a",)), LocalAt.one_plus((Poly.var("a"),)), ("a",))
    m = Ideal((Poly.var("a"),), ("a",))
    a, x = Poly.var("a"), Poly.var("x")
    f = a * p0 + (1 + a * p1) * x
    for k, c in enumerate(top, start=2):
        f = f + c * x ** k
    r = monicize(f, "x", base, m)
    full = base.relations + m.embed(base.vars)
    assert member(base.poly(r.b0), full).ok
    assert member(base.poly(r.b1 - 1), full).ok
    assert verify_monicization(r, base, m)
