from __future__ import annotations

import dataclasses

import pytest

from src.zmtforge.errors import HypothesisNotSatisfied
from src.zmtforge.ideal import Algebra, Ideal, member
from src.zmtforge.integrality import verify_cert
from src.zmtforge.ring import Poly, parse_poly
from src.zmtforge.zmt import (ZmtProblem, certify_integral, find_residual_monic, quasi_finite_witness, verify_global,
                              verify_zmt, zmt_accept, zmt_base, zmt_global, zmt_main)

VS = ("a", "x")


@pytest.fixture
def idempotent_split():
    """x = a x^2: the fibre over a = 0 is the single point x = 0, the rest sits over a != 0."""
    return Algebra(VS, Ideal((parse_poly("a*x^2 - x", VS),)), base=("a",))


@pytest.fixture
def problem(idempotent_split):
    return ZmtProblem(idempotent_split, ("x",), Ideal((Poly.var("a"),), VS), (Poly.var("x"),))


def test_base_case_finds_an_element_of_one_plus_i(problem, idempotent_split):
    res = zmt_main(problem)
    s = res.s.numerator
    assert member(s - 1, idempotent_split.relations + problem.ideal).ok
    assert len(res.certs) == 2
    assert all(verify_cert(c) for c in res.certs)
    assert verify_zmt(problem, res)
    assert zmt_base(problem).s == res.s


def test_accepting_a_proposed_element(problem, idempotent_split):
    res = zmt_accept(problem, parse_poly("1 - a*x"))
    assert verify_zmt(problem, res)
    assert res.certs[1].monic == Poly.var("T")
    with pytest.raises(HypothesisNotSatisfied):
        zmt_accept(problem, parse_poly("1 + a"))


def test_residual_monic_is_found_modulo_the_ideal(problem):
    seed = dataclasses.replace(problem, residual=())
    assert find_residual_monic(seed, 0) == Poly.var("x")


def test_hypotheses_are_checked(idempotent_split):
    a = Ideal((Poly.var("a"),), VS)
    with pytest.raises(HypothesisNotSatisfied, match="not in i"):
        zmt_main(ZmtProblem(idempotent_split, ("x",), a, (parse_poly("x - 1"),)))
    with pytest.raises(HypothesisNotSatisfied, match="not monic"):
        zmt_main(ZmtProblem(idempotent_split, ("x",), a, (parse_poly("2*x"),)))
    with pytest.raises(HypothesisNotSatisfied, match="generated in A"):
        zmt_main(ZmtProblem(idempotent_split, ("x",), Ideal((Poly.var("x"),), VS), (Poly.var("x"),)))


def test_no_generators_gives_one():
    alg = Algebra(("a",), Ideal((), ("a",)), base=("a",))
    res = zmt_main(ZmtProblem(alg, (), Ideal((Poly.var("a"),), ("a",))))
    assert res.s.numerator == 1 and len(res.certs) == 1


def test_unit_ideal_gives_zero(idempotent_split):
    p = ZmtProblem(idempotent_split, ("x",), Ideal((Poly.const(1),), VS), (Poly.var("x"),))
    res = zmt_main(p)
    assert res.s.numerator.is_zero()
    assert verify_zmt(p, res)


def test_verifier_rejects_a_short_certificate_list(problem):
    res = zmt_main(problem)
    short = dataclasses.replace(res, certs=res.certs[:1])
    v = verify_zmt(problem, short)
    assert not v and v.reason == "ResidualShape"
    swapped = dataclasses.replace(res, certs=tuple(reversed(res.certs)))
    assert not verify_zmt(problem, swapped)


def test_certify_integral():
    owner = Algebra(VS, Ideal((parse_poly("x^2 - a", VS),)), base=("a",))
    assert certify_integral(owner, Poly.var("x"), ("a",)).monic == parse_poly("T^2 - a")
    assert certify_integral(owner, parse_poly("x^2 + 1"), ("a",)).provenance == ("Trivial",)
    inverse = Algebra(VS, Ideal((parse_poly("a*x - 1", VS),)), base=("a",))
    assert certify_integral(inverse, Poly.var("x"), ("a",)) is None


def test_global_form_for_an_inverse():
    owner = Algebra(VS, Ideal((parse_poly("a*x - 1", VS),)), base=("a",))
    witness = quasi_finite_witness(owner, ("x",), [Poly.var("a")])
    assert witness.verify(owner, ("x",))
    assert [inv for inv, _ in witness.data] == [(), (0,)]
    res = zmt_global(owner, ("x",), witness)
    assert [str(s) for s in res.family] == ["a"]
    assert verify_global(owner, ("x",), res)
    assert len(res.to_json()["comaximality"]) == 1


def test_global_form_rejects_a_bad_family():
    owner = Algebra(VS, Ideal((parse_poly("a*x - 1", VS),)), base=("a",))
    res = zmt_global(owner, ("x",), quasi_finite_witness(owner, ("x",), [Poly.var("a")]))
    broken = dataclasses.replace(res, comaximality=(Poly.const(0),))
    v = verify_global(owner, ("x",), broken)
    assert not v and v.reason == "Comaximality"


def test_certificates_from_another_algebra_are_rejected(problem):
    res = zmt_main(problem)
    collapsed = Algebra(VS, Ideal((Poly.var("x"),), VS), base=("a",))
    moved = tuple(dataclasses.replace(c, element=collapsed.element(c.element.numerator, c.element.denominator))
                  for c in res.certs)
    v = verify_zmt(problem, dataclasses.replace(res, certs=moved))
    assert not v and v.reason == "Annihilation"
    assert "outside B" in v.detail


def test_witness_branches_are_checked_against_the_algebra():
    owner = Algebra(VS, Ideal((parse_poly("a*x - 1", VS),)), base=("a",))
    witness = quasi_finite_witness(owner, ("x",), [Poly.var("a")])
    dropped = dataclasses.replace(witness, data=witness.data[:1])
    assert witness.verify(owner, ("x",))
    assert dropped.verify(owner, ("x",)).reason == "ResidualShape"
    emptied = dataclasses.replace(witness, data=(((), ()), ((0,), ())))
    assert emptied.verify(owner, ("x",)).reason == "ResidualShape"
