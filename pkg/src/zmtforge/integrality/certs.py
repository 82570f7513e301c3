"""
certs.py — integral-dependence certificates and their independent checker.

A certificate says: `element` is a root of `monic`, whose non-leading
coefficients live in Q[coeff_vars] (over-base) or additionally in a named
ideal (over-ideal). Tower-backed certificates also carry the tower in which
the monic was computed; the checker then re-validates the tower itself.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

from ..ideal.algebra import Element
from ..ideal.ideals import Ideal, member
from ..ring.poly import Poly

log = logging.getLogger(__name__)

__all__ = ["Verdict", "IntegralityCertificate", "verify_cert", "evaluate_monic", "combine_verdicts"]

REASONS = (
    "NotMonic", "Annihilation", "CoefficientLocation", "TowerInvalid", "ResidualShape",
    "SlopeAtOne", "RecoveryIdentity", "ZeroTransport", "Comaximality", "NotInIdeal",
)


@dataclass(frozen=True)
class Verdict:
    ok: bool
    reason: str = ""
    detail: str = ""

    def __bool__(self) -> bool:
        return self.ok

    @classmethod
    def passed(cls, detail: str = "") -> "Verdict":
        return cls(True, "", detail)

    @classmethod
    def failed(cls, reason: str, detail: str = "") -> "Verdict":
        if reason not in REASONS:
            raise ValueError(f"unknown verdict reason {reason!r}")
        return cls(False, reason, detail)

    def to_json(self) -> dict:
        return {"ok": self.ok, "reason": self.reason, "detail": self.detail}


def combine_verdicts(*verdicts: Verdict) -> Verdict:
    for v in verdicts:
        if not v.ok:
            return v
    return Verdict.passed()


@dataclass(frozen=True)
class IntegralityCertificate:
    element: Element
    monic: Poly
    var: str = "T"
    coeff_vars: Tuple[str, ...] = ()
    over_ideal: Optional[Ideal] = None
    provenance: Tuple[str, ...] = ()
    tower: Optional[object] = field(default=None, compare=False)
    expression: Optional[Poly] = None

    @property
    def location(self) -> str:
        return "over-ideal" if self.over_ideal is not None else "over-base"

    @property
    def degree(self) -> int:
        return self.monic.degree(self.var)

    def coefficients(self) -> Dict[int, Poly]:
        return self.monic.coeffs_in(self.var)

    def with_provenance(self, *tags: str) -> "IntegralityCertificate":
        return IntegralityCertificate(self.element, self.monic, self.var, self.coeff_vars, self.over_ideal,
                                      tuple(tags) + self.provenance, self.tower, self.expression)

    def to_json(self) -> dict:
        out = {
            "element": str(self.element),
            "numerator": str(self.element.numerator),
            "denominator": str(self.element.denominator),
            "owner": self.element.owner.to_json(),
            "monic": str(self.monic),
            "var": self.var,
            "coeff_vars": list(self.coeff_vars),
            "location": self.location,
            "provenance": list(self.provenance),
        }
        if self.over_ideal is not None:
            out["ideal"] = [str(g) for g in self.over_ideal.gens]
        if self.tower is not None:
            out["tower"] = self.tower.to_json()
            out["expression"] = str(self.expression)
        return out


def evaluate_monic(monic: Poly, var: str, element: Element) -> Poly:
    """Numerator of monic(num/den), i.e. sum c_k num^k den^(d-k), reduced in the owner."""
    owner = element.owner
    coeffs = monic.coeffs_in(var)
    d = max(coeffs)
    num, den = element.numerator, element.denominator
    acc = owner.poly(coeffs[d])
    den_pow = owner.poly(1)
    for k in range(d - 1, -1, -1):
        den_pow = den_pow * den
        c = coeffs.get(k)
        acc = acc * num
        if c is not None:
            acc = acc + c * den_pow
        acc = owner.reduce(acc)
    return acc


def verify_cert(c: IntegralityCertificate) -> Verdict:
    """Re-check monicity, coefficient location and annihilation from scratch."""
    coeffs = c.coefficients()
    if not coeffs:
        return Verdict.failed("NotMonic", "zero polynomial")
    d = max(coeffs)
    if d < 1:
        return Verdict.failed("NotMonic", f"degree {d} in {c.var}")
    if coeffs[d] != 1:
        return Verdict.failed("NotMonic", f"leading coefficient {coeffs[d]}")

    allowed = set(c.coeff_vars)
    for k, coef in coeffs.items():
        if k == d:
            continue
        stray = [v for v in coef.used_vars() if v not in allowed]
        if stray:
            return Verdict.failed("CoefficientLocation", f"coefficient of {c.var}^{k} uses {stray}")
        if c.over_ideal is not None and not member(coef, c.over_ideal).ok:
            return Verdict.failed("CoefficientLocation", f"coefficient {coef} of {c.var}^{k} not in {c.over_ideal}")

    owner = c.element.owner
    if c.tower is not None:
        bad = c.tower.check_carriers()
        if bad is not None:
            return Verdict.failed("TowerInvalid", f"carrier {bad} does not satisfy its relation")
        img = c.tower.image(c.expression)
        if not owner.is_zero(img * c.element.denominator - c.element.numerator):
            return Verdict.failed("TowerInvalid", "tower expression does not match the element")
        rest = c.tower.reduce(c.monic.substitute({c.var: c.expression}))
        if not rest.is_zero():
            return Verdict.failed("Annihilation", f"monic at the tower expression leaves {rest}")
        return Verdict.passed()

    value = evaluate_monic(c.monic, c.var, c.element)
    if not owner.is_zero(value):
        return Verdict.failed("Annihilation", f"monic at {c.element} leaves {value}")
    return Verdict.passed()
