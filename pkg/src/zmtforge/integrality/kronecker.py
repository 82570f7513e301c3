"""
kronecker.py — splitting algebras, Kronecker's lemma and Gauss-Joyal witnesses.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

from ..config import current_caps
from ..errors import ExponentCapExceeded, InvariantRecheckFailed, NotADivisor
from ..ideal.algebra import Algebra
from ..ideal.ideals import Ideal, fresh_var, member, radical_member
from ..ring.matrix import pseudo_divide
from ..ring.poly import Poly, unify_vars
from .certs import IntegralityCertificate
from .lying_over import lying_over_root_cert

log = logging.getLogger(__name__)

__all__ = ["SplittingAlgebra", "kronecker_cert", "kronecker_certs", "GaussJoyalWitness", "gauss_joyal",
           "content_ideal", "coefficient_ring"]

MATERIALIZE_LIMIT = 4


def content_ideal(h: Poly, var: str, drop_leading_one: bool = True) -> Ideal:
    """Coefficient ideal of h in var; a leading coefficient 1 is left out when asked."""
    coeffs = h.coeffs_in(var)
    d = max(coeffs) if coeffs else -1
    gens = [c for k, c in coeffs.items() if not (drop_leading_one and k == d and c == 1)]
    ctx = tuple(v for v in h.vars if v != var)
    return Ideal(tuple(g.restrict(ctx) for g in gens), ctx)


@dataclass(frozen=True)
class SplittingAlgebra:
    base: Algebra
    monic_input: Poly
    var: str
    root_vars: Tuple[str, ...]
    rewrite_rules: Tuple[Poly, ...]

    @classmethod
    def build(cls, base: Algebra, f: Poly, var: str = "X", prefix: str = "t") -> "SplittingAlgebra":
        k = f.degree(var)
        if k < 1 or f.lc_in(var) != 1:
            raise ValueError(f"splitting algebra needs a monic polynomial of positive degree in {var}, got {f}")
        taken = set(base.vars) | set(f.vars)
        roots: List[str] = []
        for j in range(1, k + 1):
            name = fresh_var(f"{prefix}{j}", taken)
            taken.add(name)
            roots.append(name)
        x = Poly.var(var)
        rules = []
        g = f
        for r in roots:
            g_at = g.substitute({var: Poly.var(r)})
            rules.append(g_at.restrict(unify_vars(base.vars, roots)))
            g = (g - g_at).exact_div(x - Poly.var(r))
        return cls(base, f, var, tuple(roots), tuple(rules))

    @property
    def degree(self) -> int:
        return len(self.root_vars)

    @property
    def rank(self) -> int:
        return math.factorial(self.degree)

    def algebra(self) -> Algebra:
        vs = unify_vars(self.base.vars, self.root_vars)
        rel = Ideal(self.base.relations.gens + self.rewrite_rules, vs)
        return Algebra(vs, rel, self.base.local_at, self.base.base or self.base.vars)

    def basis(self) -> List[Poly]:
        """t_1^e_1 ... t_n^e_n with e_i <= n - i."""
        n = self.degree
        out = []
        for exps in itertools.product(*[range(n - i) for i in range(n)]):
            out.append(Poly.monomial(dict(zip(self.root_vars, exps))))
        return out

    def splits(self) -> bool:
        """prod (X - t_i) - f reduces to 0 under the rewrite rules."""
        prod = Poly.const(1)
        for r in self.root_vars:
            prod = prod * (Poly.var(self.var) - Poly.var(r))
        alg = self.algebra()
        return alg.reduce((prod - self.monic_input).embed(alg.vars)).is_zero()


def coefficient_ring(f: Poly, h: Poly, var: str, base: Optional[Algebra]) -> Algebra:
    if base is not None:
        return base
    vs = tuple(v for v in unify_vars(f.vars, h.vars) if v != var)
    return Algebra(vs, Ideal((), vs), base=vs)


def _check_divides(f: Poly, h: Poly, var: str, ring: Algebra) -> None:
    _, r, _ = pseudo_divide(h, f, var)
    for c in r.coeffs_in(var).values():
        if not ring.is_zero(ring.poly(c.restrict(ring.vars))):
            raise NotADivisor(f"{f} does not divide {h} in {var}; remainder {r}")


def kronecker_cert(f: Poly, h: Poly, which: int, var: str = "X", base: Optional[Algebra] = None,
                   cert_var: str = "T") -> IntegralityCertificate:
    """
    Certificate for the coefficient of var^which in the monic f over the
    coefficient ideal of h (f dividing h).
    """
    k = f.degree(var)
    if k < 1 or f.lc_in(var) != 1:
        raise ValueError(f"kronecker_cert needs f monic of positive degree in {var}")
    if not 0 <= which < k:
        raise ValueError(f"coefficient index {which} outside 0..{k - 1}")
    ring = coefficient_ring(f, h, var, base)
    _check_divides(f, h, var, ring)
    n = h.degree(var)
    h_monic = h.lc_in(var) == 1
    c = content_ideal(h, var, drop_leading_one=h_monic).embed(ring.vars)
    a = f.coeffs_in(var).get(which, Poly.const(0)).restrict(ring.vars)

    if k == 1 and h_monic:
        t = Poly.var(cert_var)
        monic = h.substitute({var: -t}) * (-1) ** n
        return IntegralityCertificate(ring.element(a), monic, cert_var, ring.vars, c, ("Kronecker",))

    cap = current_caps().exp_cap
    if h_monic and k <= MATERIALIZE_LIMIT:
        split = SplittingAlgebra.build(ring, f, var)
        alg = split.algebra()
        c_split = c.embed(alg.vars)
        for r in split.root_vars:
            if not member(Poly.var(r) ** n, alg.relations + c_split).ok:
                raise InvariantRecheckFailed(f"root {r} does not satisfy {r}^{n} in c(h) in the splitting algebra")
        cap = min(cap, k * (n - 1) + 1)
    elif h_monic:
        log.warning("kronecker_cert: f has degree %d > %d, roots of f are not checked in the splitting algebra; "
                    "the exponent bound falls back to exp_cap = %d", k, MATERIALIZE_LIMIT, cap)
    try:
        _, cert = lying_over_root_cert(ring.element(a), c, [Poly.const(1)], coeff_vars=ring.vars, var=cert_var)
    except ExponentCapExceeded:
        raise ExponentCapExceeded(f"no power of {a} up to {cap} lies in {c}")
    if cert.degree > cap:
        raise ExponentCapExceeded(f"exponent {cert.degree} for {a} exceeds the splitting bound {cap}")
    log.debug("kronecker_cert: coefficient %s, exponent %d", a, cert.degree)
    return cert.with_provenance("Kronecker")


def kronecker_certs(f: Poly, h: Poly, var: str = "X", base: Optional[Algebra] = None
                    ) -> Tuple[IntegralityCertificate, ...]:
    return tuple(kronecker_cert(f, h, j, var, base) for j in range(f.degree(var)))


@dataclass(frozen=True)
class GaussJoyalWitness:
    product: Poly
    content: Ideal
    exponent: Optional[int]

    @property
    def status(self) -> str:
        return "member" if self.exponent is not None else "unknown-exponent"

    def to_json(self) -> dict:
        return {"product": str(self.product), "content": [str(g) for g in self.content.gens],
                "exponent": self.exponent, "status": self.status}


def gauss_joyal(f: Poly, g: Poly, i: int, j: int, var: str = "X") -> GaussJoyalWitness:
    """k with (f_i g_j)^k in c(f g)."""
    h = f * g
    c = content_ideal(h, var, drop_leading_one=False)
    p = (f.coeffs_in(var).get(i, Poly.const(0)) * g.coeffs_in(var).get(j, Poly.const(0)))
    p = p.restrict([v for v in p.vars if v != var])
    res = radical_member(p, c)
    if not res.ok:
        raise InvariantRecheckFailed(f"{p} is not in the radical of c(fg) = {c}")
    return GaussJoyalWitness(p, c, res.exponent)
