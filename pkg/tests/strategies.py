"""Shared hypothesis strategies and the sympy bridge used as a test oracle."""

from __future__ import annotations

import sympy
from hypothesis import strategies as st

from src.zmtforge.ring import Poly, PolyMatrix


def polys(vars=("x", "y"), max_deg=3, max_terms=4, coeff=4):
    exps = st.tuples(*[st.integers(0, max_deg)] * len(vars))
    return st.dictionaries(exps, st.integers(-coeff, coeff), max_size=max_terms).map(
        lambda t: Poly(vars, t))


def nonconstant_in(v, vars=("x", "y"), max_deg=3):
    return polys(vars, max_deg).filter(lambda p: p.degree(v) >= 1)


def matrices(n, vars=("a",), max_deg=2):
    return st.lists(polys(vars, max_deg, max_terms=3), min_size=n * n, max_size=n * n).map(
        lambda es: PolyMatrix(n, n, tuple(es)))


def to_sympy(p: Poly):
    return sympy.expand(sympy.sympify(str(p).replace("^", "**")))


def bounded_polys(vars=("a", "b"), total_deg=2, max_terms=3, coeff=3):
    """Polynomials whose total degree stays at or below total_deg."""
    exps = st.tuples(*[st.integers(0, total_deg)] * len(vars)).filter(lambda e: sum(e) <= total_deg)
    return st.dictionaries(exps, st.integers(-coeff, coeff), max_size=max_terms).map(
        lambda t: Poly(vars, t))


def monic_in(var, max_deg, coeffs, min_deg=0):
    """var^d + lower terms drawn from coeffs, d in [min_deg, max_deg]."""
    x = Poly.var(var)
    return st.integers(min_deg, max_deg).flatmap(
        lambda d: st.lists(coeffs, min_size=d, max_size=d).map(
            lambda cs: x ** d + sum((c * x ** k for k, c in enumerate(cs)), Poly.const(0))))
