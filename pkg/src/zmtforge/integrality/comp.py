"""
comp.py — shifting an element by a polynomial in x until it becomes integral
over the base, and gluing integrality over R[x] with integrality over R.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Dict, Mapping, Optional, Sequence, Tuple

from ..errors import InvariantRecheckFailed, SubalgebraWitnessMissing
from ..ideal.algebra import Algebra, Element, subalg_member
from ..ideal.ideals import fresh_var
from ..ring.matrix import pseudo_divide, resultant
from ..ring.poly import Poly, as_poly
from .certs import IntegralityCertificate, verify_cert
from .tower import Tower

log = logging.getLogger(__name__)

__all__ = ["ShiftResult", "GlueResult", "shift_monic", "homogenize", "weight_of", "shift_cert", "glue"]

EXTRA_E = 8


def shift_monic(p: Poly, r1: Poly, c: Poly, yvar: str, wvar: str, extra: int = 0) -> Poly:
    """
    For w with C(y, w) = 0 and w p(y) = r1(y), p monic in y: the monic
    W^E L(1/W, W), where L(V, W) = Res_y(p - V r1, C) and E = deg_V L + extra.
    """
    v = fresh_var("V", set(p.vars) | set(r1.vars) | set(c.vars) | {yvar, wvar})
    big_l = resultant(p - Poly.var(v) * r1, c, yvar)
    if big_l.is_zero():
        raise InvariantRecheckFailed("shift resultant vanished identically")
    e_top = max(big_l.degree(v), 0) + extra
    w = Poly.var(wvar)
    out = Poly.const(0)
    for e, coef in big_l.coeffs_in(v).items():
        out = out + coef * w ** (e_top - e)
    out = out.trim()
    if out.lc_in(wvar) != 1:
        raise InvariantRecheckFailed(f"shifted relation is not monic in {wvar}: leading {out.lc_in(wvar)}")
    return out


def homogenize(poly: Poly, weights: Mapping[str, int], images: Mapping[str, Poly], w: Poly, total: int) -> Poly:
    """
    w^total * poly, rewritten so that every weighted variable v appears only
    through images[v] = w^weights[v] * v.
    """
    poly = as_poly(poly)
    idx = {v: poly.vars.index(v) for v in weights if v in poly.vars}
    other = [v for v in poly.vars if v not in idx]
    out = Poly.const(0)
    w_pow: Dict[int, Poly] = {}
    for e, c in poly.items():
        wt = sum(weights[v] * e[i] for v, i in idx.items())
        if wt > total:
            raise ValueError(f"monomial weight {wt} exceeds the homogenizing degree {total}")
        term = Poly.monomial({v: e[poly.vars.index(v)] for v in other}, c)
        for v, i in idx.items():
            if e[i]:
                term = term * images[v] ** e[i]
        k = total - wt
        if k not in w_pow:
            w_pow[k] = w ** k
        out = out + term * w_pow[k]
    return out


def weight_of(poly: Poly, weights: Mapping[str, int]) -> int:
    poly = as_poly(poly)
    idx = {v: poly.vars.index(v) for v in weights if v in poly.vars}
    return max((sum(weights[v] * e[i] for v, i in idx.items()) for e, _ in poly.items()), default=0)


@dataclass(frozen=True)
class ShiftResult:
    m: int
    q: Poly
    w: Element
    cert: IntegralityCertificate = field(compare=False)

    def to_json(self) -> dict:
        return {"m": self.m, "q": str(self.q), "w": str(self.w), "cert": self.cert.to_json()}


def _rescale(poly: Poly, xvar: str, yvar: str, a: Poly, shift: int) -> Poly:
    """sum_j c_j a^(shift-j) Y^j for poly = sum_j c_j x^j."""
    out = Poly.const(0)
    y = Poly.var(yvar)
    for j, c in poly.coeffs_in(xvar).items():
        if shift < j:
            raise ValueError("rescale shift below the degree")
        out = out + c.restrict([v for v in c.vars if v != xvar]) * a ** (shift - j) * y ** j
    return out


def shift_cert(t: "Element | Poly", p: Poly, integral_rel: Poly, x_var: str, owner: Optional[Algebra] = None,
               t_var: str = "T", coeff_vars: Optional[Sequence[str]] = None) -> ShiftResult:
    """
    t p(x) in R[x] and t integral over R[x] (integral_rel, monic in t_var).
    Returns m, q with a^m t - q(x) integral over R, a the leading coefficient of p.
    """
    if isinstance(t, Element):
        owner, t = t.owner, t.numerator
    if owner is None:
        raise ValueError("shift_cert needs an owner algebra")
    cv = tuple(coeff_vars) if coeff_vars is not None else owner.base
    ring = owner if set(owner.base) == set(cv) else owner.with_base(cv)
    tv = owner.poly(t)
    mem = subalg_member(owner.reduce(tv * p), [Poly.var(x_var)], owner=ring)
    if not mem.ok:
        raise SubalgebraWitnessMissing(f"t*p(x) = ({t})*({p}) is not in the subring generated by {x_var}")
    r = mem.witness
    dp = p.degree(x_var)
    a = p.lc_in(x_var).restrict([v for v in p.vars if v != x_var])
    taken = set(owner.vars) | set(cv) | set(integral_rel.vars)
    wvar = fresh_var(t_var, taken)

    if dp <= 0:
        m = 0 if a == 1 else 1
        w_poly = owner.reduce(tv * a ** m - r)
        cert = IntegralityCertificate(owner.element(w_poly), Poly.var(wvar), wvar, cv, None, ("Comp",))
        return ShiftResult(m, r, owner.element(w_poly), cert)

    d = integral_rel.degree(t_var)
    rel_coeffs = integral_rel.coeffs_in(t_var)
    if a == 1:
        m, yvar, p_t, r_t, rel = 0, x_var, p, r, integral_rel
    else:
        m = max(0, r.degree(x_var) - (dp - 1))
        for i, c in rel_coeffs.items():
            if i < d:
                m = max(m, -(-c.degree(x_var) // (d - i)))
        yvar = fresh_var("Y", taken | {wvar})
        p_low = p - a * Poly.var(x_var) ** dp
        p_t = _rescale(p_low, x_var, yvar, a, dp - 1) + Poly.var(yvar) ** dp
        r_t = _rescale(r, x_var, yvar, a, m + dp - 1)
        rel = Poly.const(0)
        for i, c in rel_coeffs.items():
            rel = rel + _rescale(c, x_var, yvar, a, m * (d - i)) * Poly.var(t_var) ** i

    q, r1, _ = pseudo_divide(r_t, p_t, yvar)
    c_rel = rel.substitute({t_var: Poly.var(wvar) + q})
    q_x = q if yvar == x_var else q.substitute({yvar: a * Poly.var(x_var)})
    w_poly = owner.reduce(tv * a ** m - owner.poly(q_x))
    element = owner.element(w_poly)
    for extra in range(EXTRA_E):
        monic = shift_monic(p_t, r1, c_rel, yvar, wvar, extra)
        cert = IntegralityCertificate(element, monic, wvar, cv, None, ("Comp",))
        if verify_cert(cert):
            log.debug("shift_cert: m=%d, degree %d after %d extra", m, cert.degree, extra)
            return ShiftResult(m, q_x, element, cert)
    raise InvariantRecheckFailed(f"no shifted relation verified for {w_poly}")


@dataclass(frozen=True)
class GlueResult:
    n: int
    w: Element
    certs: Tuple[IntegralityCertificate, ...] = field(compare=False)
    tower: Optional[Tower] = field(default=None, compare=False)

    def to_json(self) -> dict:
        return {"N": self.n, "w": str(self.w), "certs": [c.to_json() for c in self.certs]}


def _adjoin_cert(tower: Tower, cert: IntegralityCertificate, prefix: str) -> Tuple[Tower, str]:
    return tower.adjoin(cert.element.numerator, cert.monic, cert.var, prefix, "Given")


def glue(t: Element, ys: Sequence[Poly], x_var: str, s: Element, cert_t: IntegralityCertificate,
         cert_tys: Sequence[IntegralityCertificate], cert_s: IntegralityCertificate,
         cert_sx: IntegralityCertificate, coeff_vars: Optional[Sequence[str]] = None) -> GlueResult:
    """
    t and every t y_j integral over R[x], s and s x integral over R: with N = d + 1,
    d the largest power of x in the relations over R[x], w = s^N t and w x, w y_j
    are integral over R.
    """
    if len(ys) != len(cert_tys):
        raise ValueError("one certificate per y is required")
    owner = t.owner
    cv = tuple(coeff_vars) if coeff_vars is not None else owner.base
    d = 0
    for c in (cert_t, *cert_tys):
        for k, coef in c.coefficients().items():
            d = max(d, coef.degree(x_var))
    n = d + 1
    tower = Tower(owner, cv)
    tower, s_name = _adjoin_cert(tower, cert_s, "S")
    tower, sx_name = _adjoin_cert(tower, cert_sx, "SX")
    s_p, sx_p = Poly.var(s_name), Poly.var(sx_name)

    def lift(cert: IntegralityCertificate, image: Poly, prefix: str) -> Tuple[Tower, str]:
        e = cert.degree
        rel = Poly.const(0)
        for i, coef in cert.coefficients().items():
            part = coef if i == e else homogenize(coef, {x_var: 1}, {x_var: sx_p}, s_p, d * (e - i))
            rel = rel + part * Poly.var(cert.var) ** i
        return tower.adjoin(image, rel, cert.var, prefix, "Glue")

    s_d = owner.reduce(s.numerator ** d)
    tower, u_name = lift(cert_t, s_d * t.numerator, "U")
    uy_names = []
    for c in cert_tys:
        tower, name = lift(c, s_d * c.element.numerator, "UY")
        uy_names.append(name)
    u_p = Poly.var(u_name)
    w_poly = owner.reduce(s.numerator * s_d * t.numerator)
    x = Poly.var(x_var)
    certs = [
        tower.certificate(s_p * u_p, owner.element(w_poly), provenance=("Glue",)),
        tower.certificate(sx_p * u_p, owner.element(owner.reduce(w_poly * x)), provenance=("Glue",)),
    ]
    for y, name in zip(ys, uy_names):
        certs.append(tower.certificate(s_p * Poly.var(name), owner.element(owner.reduce(w_poly * owner.poly(y))),
                                       provenance=("Glue",)))
    log.info("glue: N=%d, tower rank %d", n, tower.rank)
    return GlueResult(n, owner.element(w_poly), tuple(certs), tower)
