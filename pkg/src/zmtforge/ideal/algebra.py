"""
algebra.py — finitely presented (optionally localized) Q-algebras and their
elements.

Localization is never materialized. An Algebra localized at 1 + J answers
zero-tests with the one-basis criterion u = 0  <=>  u in rel + u*J, so no
auxiliary variables or exponent searches are needed.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from typing import Iterable, Optional, Sequence, Tuple

from ..errors import HypothesisNotSatisfied, UnknownVariable
from ..ring.order import MonomialOrder, DEGREVLEX
from ..ring.poly import Poly, Scalar, as_poly, unify_vars
from .groebner import GroebnerBasis, groebner
from .ideals import Ideal, fresh_var, local_member_poly, member, same_ideal

log = logging.getLogger(__name__)

__all__ = ["LocalAt", "Algebra", "Element", "SubalgebraMembership", "subalg_member", "local_member"]


@dataclass(frozen=True)
class LocalAt:
    kind: str = "none"                  # none | point | one_plus
    gens: Tuple[Poly, ...] = ()

    @classmethod
    def point(cls, names: Sequence[str]) -> "LocalAt":
        return cls("point", tuple(Poly.var(v) for v in names))

    @classmethod
    def one_plus(cls, gens: Sequence[Poly]) -> "LocalAt":
        return cls("one_plus", tuple(gens))

    def ideal(self, vars: Sequence[str] = ()) -> Ideal:
        return Ideal(self.gens if self.kind != "none" else (), tuple(vars))

    def to_json(self) -> dict:
        if self.kind == "none":
            return {"kind": "none"}
        return {"kind": self.kind, "gens": [str(g) for g in self.gens]}


@dataclass(frozen=True)
class Algebra:
    vars: Tuple[str, ...]
    relations: Ideal = field(default_factory=Ideal)
    local_at: LocalAt = field(default_factory=LocalAt)
    base: Tuple[str, ...] = ()

    def __post_init__(self):
        vs = unify_vars(self.vars, self.base)
        object.__setattr__(self, "vars", vs)
        object.__setattr__(self, "base", tuple(sorted(set(self.base))))
        rel = self.relations.embed(vs)
        if any(v not in vs for v in rel.vars):
            extra = sorted(set(rel.vars) - set(vs))
            raise UnknownVariable(f"relations use undeclared variables {extra}")
        object.__setattr__(self, "relations", rel)

    @property
    def gens(self) -> Tuple[str, ...]:
        return tuple(v for v in self.vars if v not in self.base)

    @property
    def is_local(self) -> bool:
        return self.local_at.kind != "none"

    def local_ideal(self) -> Ideal:
        return self.local_at.ideal(self.vars)

    def gb(self, order: MonomialOrder = DEGREVLEX) -> GroebnerBasis:
        return groebner(self.relations, order)

    def reduce(self, p: Poly) -> Poly:
        return self.gb().reduce(p)

    def poly(self, p: "Poly | Scalar") -> Poly:
        return as_poly(p).embed(self.vars)

    def is_zero(self, p: Poly) -> bool:
        if p.is_zero():
            return True
        if self.is_local:
            return local_member_poly(p, self.relations, self.local_ideal())
        return member(p, self.relations).ok

    def equal(self, p: Poly, q: Poly) -> bool:
        return self.is_zero(p - q)

    def in_ideal(self, p: Poly, i: Ideal, local: Optional[Ideal] = None) -> bool:
        """p in i*B (after localizing at 1 + local, or at the algebra's own localization)."""
        full = self.relations + i
        loc = local
        if self.is_local:
            loc = self.local_ideal() if loc is None else loc + self.local_ideal()
        if loc is None or loc.is_zero_ideal():
            return member(p, full).ok
        return local_member_poly(p, full, loc)

    def is_unit(self, p: Poly) -> bool:
        trial = self.relations.with_gens(p)
        if self.is_local:
            trial = trial + self.local_ideal()
        return groebner(trial).is_unit()

    def element(self, num: "Poly | Scalar", den: "Poly | Scalar" = 1) -> "Element":
        return Element(self, self.poly(num), self.poly(den))

    def with_relations(self, *polys: Poly) -> "Algebra":
        return replace(self, relations=self.relations.with_gens(*polys))

    def with_base(self, base: Iterable[str]) -> "Algebra":
        return replace(self, base=tuple(base))

    def adjoin(self, names: Sequence[str], relations: Sequence[Poly] = ()) -> "Algebra":
        vs = unify_vars(self.vars, names)
        return Algebra(vs, self.relations.embed(vs).with_gens(*relations), self.local_at, self.base)

    def same_ring(self, other: "Algebra") -> bool:
        """Same variables, relations and localization; the declared base is not compared."""
        return (set(self.vars) == set(other.vars) and self.local_at.kind == other.local_at.kind
                and same_ideal(self.relations, other.relations)
                and same_ideal(self.local_ideal(), other.local_ideal()))

    def unlocalized(self) -> "Algebra":
        return replace(self, local_at=LocalAt())

    def fresh(self, prefix: str) -> str:
        return fresh_var(prefix, self.vars)

    def evaluate_at(self, poly_in_t: Poly, var: str, value: Poly) -> Poly:
        """poly_in_t(value) by Horner, reducing modulo the relations at each step."""
        gb = self.gb()
        coeffs = poly_in_t.coeffs_in(var)
        if not coeffs:
            return Poly.const(0, self.vars)
        value = gb.reduce(value)
        acc = Poly.const(0, self.vars)
        for k in range(max(coeffs), -1, -1):
            acc = gb.reduce(acc * value + coeffs.get(k, Poly.const(0)).restrict(()))
        return acc

    def to_json(self) -> dict:
        return {
            "vars": list(self.vars),
            "base": list(self.base),
            "relations": [str(g) for g in self.relations.gens],
            "local_at": self.local_at.to_json(),
        }


@dataclass(frozen=True)
class Element:
    owner: Algebra
    numerator: Poly
    denominator: Poly = field(default_factory=lambda: Poly.const(1))

    def __post_init__(self):
        den = self.denominator
        if den.is_zero():
            raise HypothesisNotSatisfied("element denominator is zero")
        if not den.is_constant():
            if not self.owner.is_local:
                raise HypothesisNotSatisfied(f"denominator {den} needs a localized owner")
            if not self.owner.is_unit(den):
                raise HypothesisNotSatisfied(f"denominator {den} is not a unit of the localization")

    @property
    def is_plain(self) -> bool:
        return self.denominator == 1

    def _lift(self, other: "Element | Poly | Scalar") -> "Element":
        if isinstance(other, Element):
            return other
        return self.owner.element(other)

    def __add__(self, other) -> "Element":
        o = self._lift(other)
        if self.denominator == o.denominator:
            return Element(self.owner, self.numerator + o.numerator, self.denominator)
        return Element(self.owner, self.numerator * o.denominator + o.numerator * self.denominator,
                       self.denominator * o.denominator)

    def __neg__(self) -> "Element":
        return Element(self.owner, -self.numerator, self.denominator)

    def __sub__(self, other) -> "Element":
        return self + (-self._lift(other))

    def __mul__(self, other) -> "Element":
        o = self._lift(other)
        return Element(self.owner, self.numerator * o.numerator, self.denominator * o.denominator)

    def __pow__(self, n: int) -> "Element":
        return Element(self.owner, self.numerator ** n, self.denominator ** n)

    def is_zero(self) -> bool:
        return self.owner.is_zero(self.numerator)

    def __str__(self) -> str:
        if self.is_plain:
            return str(self.numerator)
        return f"({self.numerator})/({self.denominator})"


@dataclass(frozen=True)
class SubalgebraMembership:
    ok: bool
    witness: Optional[Poly] = None
    tags: Tuple[str, ...] = ()

    def __bool__(self) -> bool:
        return self.ok


def subalg_member(u: "Element | Poly", gens: Sequence["Element | Poly"], owner: Optional[Algebra] = None
                  ) -> SubalgebraMembership:
    """
    Is u in base[gens] inside the owner? Generators that are plain owner
    variables are used directly; anything else gets a tag variable T_j with
    relation T_j - gen_j. The witness is the elimination normal form, a
    polynomial in the base variables and the generators (or their tags).
    """
    if isinstance(u, Element):
        owner = u.owner
        u = u.numerator
    if owner is None:
        raise ValueError("subalg_member needs an owner algebra")
    polys = [g.numerator if isinstance(g, Element) else owner.poly(g) for g in gens]
    direct = [g.used_vars()[0] for g in polys
              if len(g.terms) == 1 and g.total_degree() == 1 and len(g.used_vars()) == 1
              and next(iter(g.terms.values())) == 1]
    if len(direct) == len(polys):
        allowed = unify_vars(owner.base, direct)
        drop = [v for v in owner.vars if v not in allowed]
        if not drop:
            return SubalgebraMembership(True, owner.poly(u), ())
        gb = groebner(owner.relations, MonomialOrder.elimination(drop, allowed))
        nf = gb.reduce(u)
        return SubalgebraMembership(nf.free_of(drop), nf if nf.free_of(drop) else None, ())

    tags = []
    taken = set(owner.vars)
    for _ in polys:
        t = fresh_var(f"T{len(tags) + 1}", taken)
        taken.add(t)
        tags.append(t)
    ctx = unify_vars(owner.vars, tags)
    ext = Ideal(owner.relations.gens + tuple(Poly.var(t) - g for t, g in zip(tags, polys)), ctx)
    allowed = unify_vars(owner.base, tags)
    drop = [v for v in owner.vars if v not in allowed]
    gb = groebner(ext, MonomialOrder.elimination(drop, allowed))
    nf = gb.reduce(u)
    ok = nf.free_of(drop)
    return SubalgebraMembership(ok, nf if ok else None, tuple(tags))


def local_member(u: "Element | Poly", i: Ideal, monoid: Ideal, owner: Optional[Algebra] = None) -> bool:
    """u in i*B after localizing B at 1 + monoid."""
    if isinstance(u, Element):
        owner = u.owner
        u = u.numerator
    if owner is None:
        raise ValueError("local_member needs an owner algebra")
    loc = monoid + owner.local_ideal() if owner.is_local else monoid
    return local_member_poly(owner.poly(u), owner.relations + i, loc)
