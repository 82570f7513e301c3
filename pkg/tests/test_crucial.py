from __future__ import annotations

import dataclasses

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from src.zmtforge.crucial import (crucial_lemma, power_relation, strong_transcendence_check, subresultant_chain,
                                  verify_crucial)
from src.zmtforge.errors import HypothesisNotSatisfied
from src.zmtforge.ideal import Algebra, Ideal
from src.zmtforge.ring import Poly, parse_poly
from strategies import monic_in, polys, to_sympy

X = sympy.Symbol("x")


def _monic(coeffs):
    x = Poly.var("x")
    d = len(coeffs)
    return x ** d + sum((c * x ** k for k, c in enumerate(coeffs)), Poly.const(0))


@given(st.lists(st.integers(-4, 4), min_size=2, max_size=3), polys(("x",), 3))
def test_last_subresultant_is_the_resultant(fc, g):
    f = _monic(fc)
    if g.degree("x") < f.degree("x") - 1:
        g = g + Poly.var("x") ** (f.degree("x") - 1)
    chain = subresultant_chain(f, g, "x")
    assert chain.d == f.degree("x")
    assert chain.s(0) == int(sympy.resultant(to_sympy(f), to_sympy(g), X))
    assert chain.check_cofactors()


@pytest.mark.parametrize("g,expected", [
    ("x^2 - 1", 2),
    ("x^2 + 4*x - 5", 1),
    ("x^2 + 1", 0),
    ("x^3 + 3*x^2 - x - 3", 3),
])
def test_gcd_degree_from_principal_coefficients(g, expected):
    f = parse_poly("x^3 + 3*x^2 - x - 3")          # (x - 1)(x + 1)(x + 3)
    assert subresultant_chain(f, parse_poly(g), "x").gcd_degree() == expected


def test_parametric_chain_matches_sympy():
    f, g = parse_poly("x^2 + a*x + b"), parse_poly("x + c")
    chain = subresultant_chain(f, g, "x")
    a, b, c = sympy.symbols("a b c")
    want = sympy.resultant(X ** 2 + a * X + b, X + c, X)
    assert sympy.expand(to_sympy(chain.s(0)) - want) == 0
    assert chain.check_cofactors()


def test_chain_needs_a_monic_first_argument():
    with pytest.raises(HypothesisNotSatisfied):
        subresultant_chain(parse_poly("2*x^2 + 1"), parse_poly("x"), "x")


def test_strong_transcendence_outcomes():
    vs = ("a", "x")
    zero_divisor = Algebra(vs, Ideal((parse_poly("a*x", vs),)), base=("a",))
    a, x = Poly.var("a"), Poly.var("x")
    report = strong_transcendence_check(a, [Poly.const(0), Poly.const(1)], x, zero_divisor)
    assert report.verdict == "fails-with-witness" and report.witness == 1

    killed = Algebra(vs, Ideal((a,), vs), base=("a",))
    assert strong_transcendence_check(a, [Poly.const(1), x], x, killed).verdict == "holds"

    with pytest.raises(HypothesisNotSatisfied):
        strong_transcendence_check(a, [Poly.const(1)], x, Algebra(vs, Ideal((), vs), base=("a",)))


def test_power_relation_of_a_square_root():
    rel = parse_poly("T^2 - a")
    assert power_relation(rel, "T", 1) == rel
    assert power_relation(rel, "T", 2) == parse_poly("T^2 - 2*a*T + a^2")


@pytest.fixture
def root_of_a():
    vs = ("a", "t", "x")
    return Algebra(vs, Ideal((parse_poly("t^2 - a", vs),)), base=("a",))


def test_crucial_lemma_when_t_lies_in_the_ideal(root_of_a):
    i = Ideal((Poly.var("t"),), ("a", "t", "x"))
    w = crucial_lemma(root_of_a, "x", Poly.var("t"), parse_poly("T^2 - a"), i)
    assert w.m == 1 and w.y.numerator == Poly.var("t")
    assert w.branches[0]["branch"] == "t in I*S"
    assert verify_crucial(w, root_of_a, "x", Poly.var("t"), i)


def test_crucial_lemma_when_t_is_integral(root_of_a):
    i = Ideal((Poly.var("a"),), ("a",))
    w = crucial_lemma(root_of_a, "x", Poly.var("t"), parse_poly("T^2 - a"), i)
    assert w.m == 1 and w.n == 2
    assert w.closure and w.closure[0].provenance == ("Crucial",)
    assert verify_crucial(w, root_of_a, "x", Poly.var("t"), i)
    assert w.to_json()["branches"] == [{"branch": "t integral over R"}]


def test_crucial_lemma_needs_tx_in_the_radical():
    vs = ("a", "t", "x")
    unit_root = Algebra(vs, Ideal((parse_poly("t^2 - 1", vs),)), base=("a",))
    i = Ideal((Poly.var("a"),), ("a",))
    with pytest.raises(HypothesisNotSatisfied, match="radical"):
        crucial_lemma(unit_root, "x", Poly.var("t"), parse_poly("T^2 - 1"), i)


@pytest.fixture
def root_of_ax():
    vs = ("a", "t", "x")
    return Algebra(vs, Ideal((parse_poly("t^2 - a*x", vs),)), base=("a",))


def test_crucial_lemma_walks_the_chain_and_collapses(root_of_ax):
    i = Ideal((Poly.var("a"),), ("a",))
    t = Poly.var("t")
    w = crucial_lemma(root_of_ax, "x", t, parse_poly("T^2 - a*x"), i, direct=False)
    assert w.chain is not None and w.chain.d == 2
    kinds = [b["branch"] for b in w.branches if "j" in b]
    assert len(kinds) == 2 and set(kinds) <= {"zero", "saturation", "conductor"}
    collapse = next(b for b in w.branches if "collapse" in b)
    assert collapse["collapse"] > 2 and collapse["kronecker"] == len(w.kronecker)
    assert w.kronecker and all(c.provenance[0] == "Crucial" for c in w.kronecker)
    assert w.m == 2
    assert root_of_ax.equal(w.y.numerator, parse_poly("a*x", ("a", "t", "x")))
    assert verify_crucial(w, root_of_ax, "x", t, i)
    assert "chain" in w.to_json()


def test_verify_crucial_rejects_a_y_outside_the_ideal(root_of_ax):
    i = Ideal((Poly.var("a"),), ("a",))
    t = Poly.var("t")
    w = crucial_lemma(root_of_ax, "x", t, parse_poly("T^2 - a*x"), i, direct=False)
    off = dataclasses.replace(w, y=root_of_ax.element(t ** 2 + 1), a=root_of_ax.element(-1))
    v = verify_crucial(off, root_of_ax, "x", t, i)
    assert not v and v.reason == "NotInIdeal"


@settings(max_examples=100, deadline=None)
@given(monic_in("x", 2, st.integers(-3, 3)), monic_in("x", 4, st.integers(-3, 3), min_deg=1),
       polys(("x",), 4, max_terms=4))
def test_gcd_degree_sweep_against_sympy(common, f1, g1):
    f, g = common * f1, common * g1
    if g.is_zero():
        g = common
    chain = subresultant_chain(f, g, "x")
    want = sympy.degree(sympy.gcd(to_sympy(f), to_sympy(g)), X)
    assert chain.gcd_degree() == want
