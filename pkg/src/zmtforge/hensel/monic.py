"""
monic.py — turning a Hensel polynomial a_0 + a_1 X + ... + a_n X^n with a_1
a unit and a_0 in M into a monic one with the same residual shape.

With y = -a_0 a_1^-1 / (X + 1), (X+1)^n f(y) = a_0 g(X) where

    g(X) = (X+1)^n - (X+1)^(n-1) + sum_{k>=2} (-1)^k a_k a_0^(k-1) a_1^-k (X+1)^(n-k).

g is kept as G / a_1^n with G polynomial over the base.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional

from ..errors import A1NotUnit, HypothesisNotSatisfied
from ..ideal.algebra import Algebra
from ..ideal.groebner import groebner
from ..ideal.ideals import Ideal, member
from ..integrality.certs import Verdict
from ..ring.poly import Poly, as_poly

log = logging.getLogger(__name__)

__all__ = ["MonicizationResult", "monicize", "verify_monicization", "cleared_identity"]


@dataclass(frozen=True)
class MonicizationResult:
    f: Poly
    var: str
    n: int
    a0: Poly
    a1: Poly
    g_numerator: Poly               # G = a_1^n g
    g_denominator: Poly             # a_1^n
    b0: Poly                        # G(0)
    b1: Poly                        # G'(0)

    @property
    def g(self) -> Optional[Poly]:
        """g itself when a_1 is a rational constant."""
        if not self.g_denominator.is_constant():
            return None
        return self.g_numerator / self.g_denominator.const_value()

    def to_json(self) -> dict:
        return {
            "f": str(self.f),
            "var": self.var,
            "n": self.n,
            "a0": str(self.a0),
            "a1": str(self.a1),
            "g_numerator": str(self.g_numerator),
            "g_denominator": str(self.g_denominator),
            "b0": str(self.b0),
            "b1": str(self.b1),
        }


def cleared_identity(f: Poly, var: str, g_numerator: Poly) -> Poly:
    """a_0 G(X) - sum_k a_k (-a_0)^k a_1^(n-k) (X+1)^(n-k); the zero polynomial when G is right."""
    coeffs = f.coeffs_in(var)
    n = max(coeffs)
    a0 = coeffs.get(0, Poly.const(0))
    a1 = coeffs.get(1, Poly.const(0))
    xp1 = Poly.var(var) + 1
    rhs = Poly.const(0)
    for k, ak in coeffs.items():
        rhs = rhs + ak * (-a0) ** k * a1 ** (n - k) * xp1 ** (n - k)
    return a0 * g_numerator - rhs


def monicize(f: Poly, var: str, base: Algebra, point_ideal: Ideal) -> MonicizationResult:
    f = as_poly(f)
    coeffs = f.coeffs_in(var)
    if not coeffs or max(coeffs) < 1:
        raise HypothesisNotSatisfied(f"{f} has no positive degree in {var}")
    n = max(coeffs)
    a0 = coeffs.get(0, Poly.const(0))
    a1 = coeffs.get(1, Poly.const(0))
    full = base.relations + point_ideal.embed(base.vars)
    if not groebner(full.with_gens(base.poly(a1))).is_unit():
        raise A1NotUnit(f"a_1 = {a1} is not a unit modulo M")
    if not member(base.poly(a0), full).ok:
        raise HypothesisNotSatisfied(f"a_0 = {a0} is not in M")

    xp1 = Poly.var(var) + 1
    lead = a1 ** n
    g = lead * xp1 ** n - lead * xp1 ** (n - 1)
    for k in range(2, n + 1):
        ak = coeffs.get(k)
        if ak is not None:
            g = g + ak * a0 ** (k - 1) * a1 ** (n - k) * xp1 ** (n - k) * (-1) ** k
    b0 = g.substitute({var: 0}, strict=False)
    b1 = g.derivative(var).substitute({var: 0}, strict=False)
    out = MonicizationResult(f, var, n, a0, a1, g, lead, b0, b1)
    v = verify_monicization(out, base, point_ideal)
    if not v.ok:
        raise HypothesisNotSatisfied(f"monicization of {f} failed its own check: {v.detail}")
    log.info("monicize: degree %d, g = (%s)/(%s)", n, g, lead)
    return out


def verify_monicization(r: MonicizationResult, base: Algebra, point_ideal: Ideal) -> Verdict:
    if not cleared_identity(r.f, r.var, r.g_numerator).is_zero():
        return Verdict.failed("RecoveryIdentity", "a_0 g(X) differs from (X+1)^n f(-a_0/(a_1 (X+1)))")
    top = r.g_numerator.coeffs_in(r.var)
    if max(top) != r.n or top[r.n] != r.g_denominator:
        return Verdict.failed("NotMonic", f"leading coefficient {top.get(max(top))} is not a_1^n")
    full = base.relations + point_ideal.embed(base.vars)
    if not member(base.poly(r.b0), full).ok:
        return Verdict.failed("ResidualShape", f"g(0) = {r.b0} is not in M")
    if not member(base.poly(r.b1 - r.g_denominator), full).ok:
        return Verdict.failed("SlopeAtOne", f"g'(0) is not in 1 + M: {r.b1} vs {r.g_denominator}")
    return Verdict.passed()
