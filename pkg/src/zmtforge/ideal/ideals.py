"""
ideals.py — ideal presentations and the decision procedures built on Groebner
bases: membership (with cofactors), radical membership, saturation,
elimination, and membership in a localization at 1 + J.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence, Tuple

from ..config import current_caps
from ..ring.order import MonomialOrder, DEGREVLEX
from ..ring.poly import Poly, unify_vars
from .groebner import GroebnerBasis, groebner

log = logging.getLogger(__name__)

__all__ = [
    "Ideal", "Membership", "RadicalMembership", "fresh_var",
    "member", "radical_member", "same_ideal", "saturate", "eliminate", "local_member_poly",
]


def fresh_var(prefix: str, taken: Iterable[str]) -> str:
    taken = set(taken)
    if prefix not in taken:
        return prefix
    for k in itertools.count(1):
        name = f"{prefix}{k}"
        if name not in taken:
            return name


@dataclass(frozen=True)
class Ideal:
    gens: Tuple[Poly, ...] = ()
    vars: Tuple[str, ...] = ()

    def __post_init__(self):
        gens = tuple(g for g in self.gens if not g.is_zero())
        ctx = unify_vars(self.vars, *(g.vars for g in gens))
        object.__setattr__(self, "gens", tuple(g.embed(ctx) for g in gens))
        object.__setattr__(self, "vars", ctx)

    @classmethod
    def of(cls, *gens: Poly, vars: Sequence[str] = ()) -> "Ideal":
        return cls(tuple(gens), tuple(vars))

    @classmethod
    def unit(cls, vars: Sequence[str] = ()) -> "Ideal":
        return cls((Poly.const(1, vars),), tuple(vars))

    def is_zero_ideal(self) -> bool:
        return not self.gens

    def __add__(self, other: "Ideal") -> "Ideal":
        return Ideal(self.gens + other.gens, unify_vars(self.vars, other.vars))

    def __mul__(self, other: "Ideal") -> "Ideal":
        return Ideal(tuple(a * b for a in self.gens for b in other.gens), unify_vars(self.vars, other.vars))

    def times(self, p: Poly) -> "Ideal":
        return Ideal(tuple(g * p for g in self.gens), unify_vars(self.vars, p.vars))

    def with_gens(self, *extra: Poly) -> "Ideal":
        return Ideal(self.gens + tuple(extra), self.vars)

    def power(self, m: int) -> "Ideal":
        if m == 0:
            return Ideal.unit(self.vars)
        gens = []
        for combo in itertools.combinations_with_replacement(range(len(self.gens)), m):
            acc = Poly.const(1, self.vars)
            for k in combo:
                acc = acc * self.gens[k]
            gens.append(acc)
        return Ideal(tuple(gens), self.vars)

    def embed(self, vars: Sequence[str]) -> "Ideal":
        return Ideal(self.gens, unify_vars(self.vars, vars))

    def groebner(self, order: MonomialOrder = DEGREVLEX, track: bool = False) -> GroebnerBasis:
        return groebner(self, order, track=track)

    def __str__(self) -> str:
        return "<" + ", ".join(str(g) for g in self.gens) + ">"


@dataclass(frozen=True)
class Membership:
    ok: bool
    remainder: Poly
    cofactors: Optional[Tuple[Poly, ...]] = field(default=None, compare=False)

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class RadicalMembership:
    ok: bool
    exponent: Optional[int] = None

    @property
    def status(self) -> str:
        if not self.ok:
            return "non-member"
        return "member" if self.exponent is not None else "unknown-exponent"

    def __bool__(self) -> bool:
        return self.ok


def member(p: Poly, i: Ideal, trace: bool = False, order: MonomialOrder = DEGREVLEX) -> Membership:
    """p in i, decided by the normal form; trace=True also returns cofactors."""
    if p.is_zero():
        zero = Poly.const(0, i.vars)
        return Membership(True, zero, tuple(zero for _ in i.gens) if trace else None)
    gb = groebner(i, order, track=trace, vars=p.vars)
    rem = gb.reduce(p)
    if rem.is_zero() and trace:
        return Membership(True, rem, gb.lift(p))
    return Membership(rem.is_zero(), rem)


def same_ideal(i: Ideal, j: Ideal) -> bool:
    """i and j generate the same ideal of Q[vars of both]."""
    vs = unify_vars(i.vars, j.vars)
    i, j = i.embed(vs), j.embed(vs)
    return all(member(g, j).ok for g in i.gens) and all(member(g, i).ok for g in j.gens)


def radical_member(p: Poly, i: Ideal) -> RadicalMembership:
    """
    Rabinowitsch test 1 in i + <1 - T*p>; on success the smallest k <= exp_cap
    with p^k in i is searched (None when the cap is hit).
    """
    taken = unify_vars(i.vars, p.vars)
    t = fresh_var("T_rab", taken)
    trial = i.with_gens(Poly.const(1) - Poly.var(t) * p).embed(taken)
    if not groebner(trial, DEGREVLEX).is_unit():
        return RadicalMembership(False)
    gb = groebner(i, DEGREVLEX, vars=p.vars)
    cap = current_caps().exp_cap
    red_p = gb.reduce(p)
    acc = red_p
    for k in range(1, cap + 1):
        if acc.is_zero():
            return RadicalMembership(True, k)
        acc = gb.reduce(acc * red_p)
    log.info("radical_member: %s is in the radical but no exponent <= %d found", p, cap)
    return RadicalMembership(True, None)


def saturate(i: Ideal, f: Poly) -> Ideal:
    """(i : f^inf) by eliminating the Rabinowitsch variable."""
    if f.is_zero():
        raise ValueError("saturate by the zero polynomial")
    ctx = unify_vars(i.vars, f.vars)
    t = fresh_var("T_sat", ctx)
    ext = i.with_gens(Poly.const(1) - Poly.var(t) * f).embed(ctx)
    gb = groebner(ext, MonomialOrder.elimination([t], ctx))
    return Ideal(tuple(g.restrict(ctx) for g in gb.basis if g.free_of([t])), ctx)


def eliminate(i: Ideal, drop: Iterable[str]) -> Ideal:
    """Generators of i intersected with Q[remaining vars]."""
    drop = tuple(sorted(set(drop)))
    keep = tuple(v for v in i.vars if v not in drop)
    gb = groebner(i, MonomialOrder.elimination(drop, keep))
    return Ideal(tuple(g.restrict(keep) for g in gb.basis if g.free_of(drop)), keep)


def local_member_poly(u: Poly, i: Ideal, local: Ideal) -> bool:
    """
    u in i after localizing at 1 + local: some v in 1 + local has v*u in i,
    which holds exactly when u lies in i + u*local.
    """
    if u.is_zero():
        return True
    if local.is_zero_ideal():
        return member(u, i).ok
    trial = i + local.times(u)
    return member(u, trial).ok
