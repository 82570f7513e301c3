from __future__ import annotations

import logging

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.zmtforge.errors import NotADivisor, PNotAnnihilating
from src.zmtforge.ideal import Algebra, Ideal
from src.zmtforge.integrality import (Carrier, IntegralityCertificate, SplittingAlgebra, Tower, content_ideal,
                                      elimination_cert, emmanuel, gauss_joyal, kronecker_cert, kronecker_certs,
                                      lying_over_cert, lying_over_root_cert, lying_over_unit, verify_cert)
from src.zmtforge.ring import Poly, parse_poly
from strategies import bounded_polys, monic_in


def _generic(n, prefix="a", var="x"):
    names = tuple(f"{prefix}{j}" for j in range(n + 1))
    coeffs = [Poly.var(v) for v in names]
    rel = sum((c * Poly.var(var) ** j for j, c in enumerate(coeffs)), Poly.const(0))
    return names, coeffs, rel


@pytest.mark.parametrize("n", [1, 2, 3])
def test_emmanuel_certificates_over_the_generic_relation(n):
    names, coeffs, rel = _generic(n)
    owner = Algebra(names + ("x",), Ideal((rel,)), base=names)
    seq = emmanuel(coeffs, Poly.var("x"), owner)
    assert seq.n == n
    assert len(seq.u_certs) == len(seq.ux_certs) == n + 1
    for cert in seq.u_certs + seq.ux_certs:
        assert cert.provenance == ("Emmanuel",)
        assert verify_cert(cert), str(cert.monic)
    assert seq.ideals_agree()


@given(st.integers(1, 3), st.data())
def test_emmanuel_sweep_over_integer_relations(n, data):
    coeffs = data.draw(st.lists(st.integers(-5, 5), min_size=n + 1, max_size=n + 1).filter(lambda c: c[-1] != 0))
    x = Poly.var("x")
    rel = sum((c * x ** j for j, c in enumerate(coeffs)), Poly.const(0))
    owner = Algebra(("x",), Ideal((rel,)))
    seq = emmanuel(coeffs, x, owner)
    assert all(verify_cert(c) for c in seq.u_certs + seq.ux_certs)


def test_emmanuel_with_random_coefficients(rng):
    coeffs = [int(c) for c in rng.integers(-9, 10, size=4)]
    coeffs[-1] = coeffs[-1] or 7
    x = Poly.var("x")
    owner = Algebra(("x",), Ideal((sum((c * x ** j for j, c in enumerate(coeffs)), Poly.const(0)),)))
    seq = emmanuel(coeffs, owner.element(x))
    assert all(verify_cert(c) for c in seq.u_certs + seq.ux_certs)
    assert seq.to_json()["coeffs"] == [str(Poly.const(c)) for c in coeffs]


def test_emmanuel_rejects_a_non_root():
    with pytest.raises(PNotAnnihilating):
        emmanuel([1, 1], Poly.var("x"), Algebra(("x",)))


def test_kronecker_linear_factor_of_a_monic():
    f, h = parse_poly("X + a"), parse_poly("X^2 + a*X + b*X + a*b")
    cert = kronecker_cert(f, h, 0)
    assert cert.monic == parse_poly("T^2 - a*T - b*T + a*b")
    assert cert.location == "over-ideal" and "Kronecker" in cert.provenance
    assert verify_cert(cert)


@pytest.mark.parametrize("k,m", [(1, 1), (1, 2), (2, 1), (2, 2)])
def test_kronecker_certificates_for_generic_factors(k, m):
    X = Poly.var("X")
    f = X ** k + sum((Poly.var(f"a{j}") * X ** j for j in range(k)), Poly.const(0))
    g = X ** m + sum((Poly.var(f"b{j}") * X ** j for j in range(m)), Poly.const(0))
    h = f * g
    certs = kronecker_certs(f, h)
    assert len(certs) == k
    c = content_ideal(h, "X")
    for j, cert in enumerate(certs):
        assert cert.element.numerator == Poly.var(f"a{j}")
        assert set(cert.over_ideal.gens) == set(c.gens)
        assert verify_cert(cert)


def test_splitting_algebra_splits():
    base = Algebra(("a0", "a1"), Ideal((), ("a0", "a1")), base=("a0", "a1"))
    split = SplittingAlgebra.build(base, parse_poly("X^2 + a1*X + a0"))
    assert split.root_vars == ("t1", "t2") and split.rank == 2
    assert len(split.basis()) == 2
    assert split.splits()


def test_kronecker_needs_a_divisor():
    with pytest.raises(NotADivisor):
        kronecker_cert(parse_poly("X + a"), parse_poly("X^2 + b"), 0)


def test_gauss_joyal_exponent_two():
    f, g = parse_poly("a1*X + a0"), parse_poly("b1*X + b0")
    w = gauss_joyal(f, g, 1, 0)
    assert w.product == parse_poly("a1*b0")
    assert w.exponent == 2 and w.status == "member"


@pytest.fixture
def square_root_ring():
    vs = ("a", "x")
    return Algebra(vs, Ideal((parse_poly("x^2 - a", vs),)), base=("a",))


def test_lying_over_power_and_root(square_root_ring):
    i = Ideal((Poly.var("a"),), ("a",))
    cert = lying_over_cert(Poly.var("x"), i, owner=square_root_ring)
    assert cert.over_ideal is not None and cert.provenance == ("LyingOver",)
    assert verify_cert(cert)
    n, root = lying_over_root_cert(square_root_ring.element(Poly.var("x")), i)
    assert n == 2
    assert root.element.numerator == Poly.var("x")
    assert verify_cert(root)


def test_lying_over_unit_combination():
    owner = Algebra(("x",))
    x = Poly.var("x")
    gs = lying_over_unit([x, 1 - x], owner)
    assert owner.reduce(gs[0] * x + gs[1] * (1 - x)) == 1


def test_elimination_certificate(square_root_ring):
    owner = Algebra(("a", "x"), Ideal((parse_poly("x^2 - a*x - 1"),)), base=("a",))
    cert = elimination_cert(Poly.var("x"), owner)
    assert cert.monic == parse_poly("T^2 - a*T - 1")
    assert verify_cert(cert)
    assert elimination_cert(parse_poly("x + 1"), square_root_ring).degree == 2


def test_elimination_certificate_absent_when_not_integral():
    owner = Algebra(("a", "x"), Ideal((parse_poly("a*x - 1"),)), base=("a",))
    assert elimination_cert(Poly.var("x"), owner) is None


@pytest.fixture
def two_roots():
    vs = ("a", "x", "y")
    return Algebra(vs, Ideal((parse_poly("x^2 - a", vs), parse_poly("y^2 - a - 1", vs))), base=("a",))


def test_tower_certificate_for_a_sum_of_roots(two_roots):
    tower = Tower(two_roots, ("a",))
    tower, c1 = tower.adjoin(Poly.var("x"), parse_poly("T^2 - a"), "T")
    tower, c2 = tower.adjoin(Poly.var("y"), parse_poly("T^2 - a - 1"), "T")
    assert tower.rank == 4 and tower.check_carriers() is None
    cert = tower.certificate(Poly.var(c1) + Poly.var(c2))
    assert cert.degree == 4 and cert.coeff_vars == ("a",)
    assert cert.element.numerator == parse_poly("x + y")
    assert verify_cert(cert)


def test_tower_with_a_wrong_image_is_rejected(two_roots):
    bad = Tower(two_roots, ("a",), (Carrier("c", Poly.var("y"), parse_poly("c^2 - a")),))
    assert bad.check_carriers() == "c"
    v = verify_cert(bad.certificate(Poly.var("c")))
    assert not v and v.reason == "TowerInvalid"


def test_checker_rejects_tampered_certificates(square_root_ring):
    x = square_root_ring.element(Poly.var("x"))
    good = IntegralityCertificate(x, parse_poly("T^2 - a"), "T", ("a",))
    assert verify_cert(good)
    cases = {
        "NotMonic": parse_poly("2*T^2 - 2*a"),
        "CoefficientLocation": parse_poly("T^2 - x^2"),
        "Annihilation": parse_poly("T^2 - a - 1"),
    }
    for reason, monic in cases.items():
        v = verify_cert(IntegralityCertificate(x, monic, "T", ("a",)))
        assert not v and v.reason == reason
    over = IntegralityCertificate(x, parse_poly("T^2 - a"), "T", ("a",), Ideal((Poly.var("a") - 1,), ("a",)))
    assert verify_cert(over).reason == "CoefficientLocation"


# --- acceptance sweeps ---------------------------------------------------------------

@pytest.mark.slow
@settings(max_examples=200, deadline=None)
@given(st.integers(1, 4), st.data())
def test_emmanuel_sweep_over_bivariate_coefficients(n, data):
    coeffs = data.draw(st.lists(bounded_polys(("a", "b"), 2), min_size=n + 1, max_size=n + 1)
                       .filter(lambda cs: not cs[-1].is_zero()))
    x = Poly.var("x")
    rel = sum((c * x ** j for j, c in enumerate(coeffs)), Poly.const(0))
    owner = Algebra(("a", "b", "x"), Ideal((rel,)), base=("a", "b"))
    seq = emmanuel(coeffs, x, owner)
    assert seq.ideals_agree()
    assert all(verify_cert(c) for c in seq.u_certs + seq.ux_certs)


@pytest.mark.slow
@settings(max_examples=100, deadline=None)
@given(monic_in("X", 3, bounded_polys(("a", "b"), 1, max_terms=2, coeff=2), min_deg=1),
       monic_in("X", 3, bounded_polys(("a", "b"), 1, max_terms=2, coeff=2)),
       st.tuples(st.integers(-5, 5), st.integers(-5, 5)))
def test_kronecker_sweep_specializes_to_zero(f, g, point):
    ring = Algebra(("a", "b"), base=("a", "b"))
    h = f * g
    certs = kronecker_certs(f, h, base=ring)
    assert len(certs) == f.degree("X")
    at = dict(zip(("a", "b"), point))
    for cert in certs:
        assert verify_cert(cert), str(cert.monic)
        # the monic vanishes at the coefficient, hence at every integer specialization
        value = cert.monic.substitute({cert.var: cert.element.numerator}, strict=False).evaluate(at)
        assert value.is_zero()


def test_kronecker_above_the_splitting_limit_logs_the_skipped_check(caplog):
    f = parse_poly("X^5 + a")
    h = f * parse_poly("X + 1")
    with caplog.at_level(logging.WARNING, logger="src.zmtforge.integrality.kronecker"):
        cert = kronecker_cert(f, h, 0)
    assert verify_cert(cert)
    assert any("not checked in the splitting algebra" in r.getMessage() for r in caplog.records)
