"""
tower.py — certified integral towers.

A tower is Q[base][c_1, ..., c_k] / <r_1, ..., r_k> where r_j is monic in c_j
with coefficients in the base and the earlier carriers, together with a ring
map c_j -> image_j into an owner algebra. The relations form a lex Groebner
basis by construction, so the tower is a free base-module on the standard
monomials and every element has a characteristic polynomial over the base.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from ..errors import UnknownVariable
from ..ideal.algebra import Algebra, Element
from ..ideal.groebner import GroebnerBasis, groebner
from ..ideal.ideals import Ideal, fresh_var
from ..ring.matrix import PolyMatrix, char_poly
from ..ring.order import MonomialOrder
from ..ring.poly import Poly, Scalar, as_poly, unify_vars
from .certs import IntegralityCertificate

log = logging.getLogger(__name__)

__all__ = ["Carrier", "Tower"]


@dataclass(frozen=True)
class Carrier:
    name: str
    image: Poly
    relation: Poly
    provenance: str = "Tower"

    @property
    def degree(self) -> int:
        return self.relation.degree(self.name)

    def to_json(self) -> dict:
        return {"name": self.name, "image": str(self.image), "relation": str(self.relation),
                "provenance": self.provenance}


@dataclass(frozen=True)
class Tower:
    owner: Algebra
    base_vars: Tuple[str, ...]
    carriers: Tuple[Carrier, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "base_vars", tuple(sorted(set(self.base_vars))))
        stray = [v for v in self.base_vars if v not in self.owner.vars]
        if stray:
            raise UnknownVariable(f"tower base variables {stray} are not owner variables")
        seen = list(self.base_vars)
        for c in self.carriers:
            if c.name in seen or c.name in self.owner.vars:
                raise ValueError(f"carrier name {c.name!r} clashes with an existing variable")
            coeffs = c.relation.coeffs_in(c.name)
            if not coeffs or max(coeffs) < 1 or coeffs[max(coeffs)] != 1:
                raise ValueError(f"relation of {c.name} is not monic in {c.name}: {c.relation}")
            extra = [v for v in c.relation.used_vars() if v not in seen and v != c.name]
            if extra:
                raise ValueError(f"relation of {c.name} uses {extra}, outside base and earlier carriers")
            seen.append(c.name)

    # --- structure ------------------------------------------------------------

    @property
    def names(self) -> Tuple[str, ...]:
        return tuple(c.name for c in self.carriers)

    @property
    def vars(self) -> Tuple[str, ...]:
        return unify_vars(self.base_vars, self.names)

    @property
    def rank(self) -> int:
        r = 1
        for c in self.carriers:
            r *= c.degree
        return r

    def carrier(self, name: str) -> Carrier:
        for c in self.carriers:
            if c.name == name:
                return c
        raise KeyError(name)

    def fresh(self, prefix: str) -> str:
        return fresh_var(prefix, set(self.owner.vars) | set(self.names))

    def order(self) -> MonomialOrder:
        return MonomialOrder.block(*[(n,) for n in reversed(self.names)], self.base_vars)

    def gb(self) -> GroebnerBasis:
        return groebner(Ideal(tuple(c.relation for c in self.carriers), self.vars), self.order())

    def poly(self, p: "Poly | Scalar") -> Poly:
        p = as_poly(p)
        stray = [v for v in p.used_vars() if v not in self.vars]
        if stray:
            raise UnknownVariable(f"{p} uses {stray}, which are not tower variables")
        return p.restrict(self.vars)

    def reduce(self, p: "Poly | Scalar") -> Poly:
        p = self.poly(p)
        if not self.carriers:
            return p
        return self.gb().reduce(p)

    def basis(self) -> List[Tuple[int, ...]]:
        """Carrier exponents of the standard monomials, carriers in tower order."""
        return list(itertools.product(*[range(c.degree) for c in self.carriers]))

    def monomial(self, exps: Sequence[int]) -> Poly:
        return Poly.monomial(dict(zip(self.names, exps)), 1, self.vars)

    def coordinates(self, p: "Poly | Scalar") -> Dict[Tuple[int, ...], Poly]:
        p = self.reduce(p).embed(self.vars)
        pos = [p.vars.index(n) for n in self.names]
        buckets: Dict[Tuple[int, ...], Dict] = {}
        for e, c in p.items():
            key = tuple(e[i] for i in pos)
            base_e = list(e)
            for i in pos:
                base_e[i] = 0
            buckets.setdefault(key, {})[tuple(base_e)] = c
        return {k: Poly(p.vars, t).restrict(self.base_vars) for k, t in buckets.items()}

    def mult_matrix(self, p: "Poly | Scalar") -> PolyMatrix:
        basis = self.basis()
        index = {b: i for i, b in enumerate(basis)}
        zero = Poly.const(0, self.base_vars)
        cols = []
        for b in basis:
            coords = self.coordinates(self.poly(p) * self.monomial(b))
            col = [zero] * len(basis)
            for k, v in coords.items():
                col[index[k]] = v
            cols.append(col)
        rows = [[cols[j][i] for j in range(len(basis))] for i in range(len(basis))]
        return PolyMatrix.from_rows(rows)

    # --- sub-towers -----------------------------------------------------------

    def needed(self, exprs: Iterable[Poly]) -> Tuple[str, ...]:
        want = set()
        for e in exprs:
            want.update(v for v in as_poly(e).used_vars() if v in self.names)
        for c in reversed(self.carriers):
            if c.name in want:
                want.update(v for v in c.relation.used_vars() if v in self.names and v != c.name)
        return tuple(n for n in self.names if n in want)

    def restricted(self, exprs: Iterable[Poly]) -> "Tower":
        keep = set(self.needed(exprs))
        return Tower(self.owner, self.base_vars, tuple(c for c in self.carriers if c.name in keep))

    # --- invariants -----------------------------------------------------------

    def char_poly(self, p: "Poly | Scalar", var: str = "T", restrict: bool = True) -> Poly:
        p = self.reduce(p)
        sub = self.restricted([p]) if restrict else self
        if not sub.carriers:
            return Poly.var(var) - p
        return char_poly(sub.mult_matrix(p), var)

    def trace(self, p: "Poly | Scalar") -> Poly:
        return self.mult_matrix(self.reduce(p)).trace()

    def image(self, p: "Poly | Scalar") -> Poly:
        p = self.poly(p)
        if self.carriers:
            p = p.substitute({c.name: c.image for c in self.carriers}, strict=False)
        return self.owner.reduce(self.owner.poly(p))

    def check_carriers(self) -> Optional[str]:
        """Name of the first carrier whose relation fails in the owner, or None."""
        done: Dict[str, Poly] = {}
        for c in self.carriers:
            rel = c.relation.substitute({**done, c.name: c.image}, strict=False)
            if not self.owner.is_zero(self.owner.poly(rel)):
                log.debug("tower: carrier %s fails its relation", c.name)
                return c.name
            done[c.name] = c.image
        return None

    # --- growth ---------------------------------------------------------------

    def adjoin(self, image: Poly, monic: Poly, var: str, prefix: str = "c",
               provenance: str = "Tower") -> Tuple["Tower", str]:
        """Adjoin a carrier for `image`, a root of `monic` (a polynomial in `var`)."""
        name = self.fresh(prefix)
        rel = monic.rename({var: name}) if var in monic.vars else monic
        car = Carrier(name, self.owner.reduce(self.owner.poly(image)), self.reduce_coeffs(rel, name), provenance)
        return Tower(self.owner, self.base_vars, self.carriers + (car,)), name

    def reduce_coeffs(self, rel: Poly, name: str) -> Poly:
        coeffs = rel.coeffs_in(name)
        out = Poly.const(0)
        x = Poly.var(name)
        for k, c in coeffs.items():
            out = out + self.reduce(c) * x ** k
        return out

    def rebase(self, base_vars: Sequence[str]) -> "Tower":
        return Tower(self.owner, tuple(base_vars), self.carriers)

    def certificate(self, expr: "Poly | Scalar", element: Optional[Element] = None, var: str = "T",
                    provenance: Tuple[str, ...] = ("Tower",)) -> IntegralityCertificate:
        if var in self.vars or var in self.owner.vars:
            var = fresh_var(var, set(self.vars) | set(self.owner.vars))
        expr = self.reduce(expr)
        sub = self.restricted([expr])
        if element is None:
            element = self.owner.element(self.image(expr))
        monic = sub.char_poly(expr, var)
        return IntegralityCertificate(element, monic, var, sub.base_vars, None, tuple(provenance), sub, expr)

    def to_json(self) -> dict:
        return {"base": list(self.base_vars), "carriers": [c.to_json() for c in self.carriers]}
