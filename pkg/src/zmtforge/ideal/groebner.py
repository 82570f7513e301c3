"""
groebner.py — Buchberger's algorithm over Q with the normal selection strategy.

Pairs are processed smallest-lcm first, sugar degree breaking ties, then by
index, so the run is deterministic for a fixed order and generator list. The
product and chain criteria discard useless pairs. Output is the reduced, monic
basis sorted by leading monomial (largest first).

Optionally each basis element records how it was obtained from the input
generators; lift() then returns cofactors for any ideal member.
"""

from __future__ import annotations

import heapq
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from operator import add, sub
from typing import Dict, List, Optional, Sequence, Tuple

from ..config import current_caps
from ..errors import DegreeCapExceeded
from ..ring.order import MonomialOrder, DEGREVLEX
from ..ring.poly import Exp, Poly, unify_vars

log = logging.getLogger(__name__)

__all__ = ["GroebnerBasis", "groebner", "normal_form"]

Terms = Dict[Exp, Fraction]


def _divides(a: Exp, b: Exp) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm(a: Exp, b: Exp) -> Exp:
    return tuple(max(x, y) for x, y in zip(a, b))


class _Elt:
    __slots__ = ("terms", "lm", "deg", "sugar", "rep")

    def __init__(self, terms: Terms, lm: Exp, sugar: int, rep: Optional[List[Poly]]):
        self.terms = terms
        self.lm = lm
        self.deg = sum(lm)
        self.sugar = sugar
        self.rep = rep


class _Reducer:
    """Normal forms against a growing list of monic elements."""

    def __init__(self, vars: Tuple[str, ...], order: MonomialOrder):
        self.vars = vars
        self.key = order.key(vars)
        self.elts: List[_Elt] = []

    def lead(self, terms: Terms) -> Exp:
        return max(terms, key=self.key)

    def finder(self, skip: int = -1):
        elts = self.elts

        def find(m: Exp) -> int:
            dm = sum(m)
            for i, g in enumerate(elts):
                if i != skip and g.deg <= dm and _divides(g.lm, m):
                    return i
            return -1
        return find

    def reduce(self, terms: Terms, full: bool = True, skip: int = -1,
               quotients: Optional[Dict[int, Terms]] = None) -> Terms:
        key = self.key
        find = self.finder(skip)
        p = dict(terms)
        heap = [(tuple(-k for k in key(e)), e) for e in p]
        heapq.heapify(heap)
        out: Terms = {}
        while heap:
            _, m = heapq.heappop(heap)
            c = p.get(m)
            if c is None:
                continue
            i = find(m)
            if i < 0:
                out[m] = c
                del p[m]
                if not full:
                    out.update(p)
                    return out
                continue
            g = self.elts[i]
            shift = tuple(map(sub, m, g.lm))
            del p[m]
            for e, gc in g.terms.items():
                if e == g.lm:
                    continue
                t = tuple(map(add, e, shift))
                v = p.get(t, 0) - c * gc
                if v:
                    if t not in p:
                        heapq.heappush(heap, (tuple(-k for k in key(t)), t))
                    p[t] = v
                else:
                    p.pop(t, None)
            if quotients is not None:
                qi = quotients.setdefault(i, {})
                qi[shift] = qi.get(shift, 0) + c
        return out


def _monic(terms: Terms, lm: Exp) -> Tuple[Terms, Fraction]:
    lc = terms[lm]
    if lc == 1:
        return terms, lc
    inv = 1 / lc
    return {e: c * inv for e, c in terms.items()}, lc


def _combine_rep(vars, base: List[Poly], quotients: Dict[int, Terms], elts: List[_Elt]) -> List[Poly]:
    rep = list(base)
    for i, q in quotients.items():
        qp = Poly._raw(vars, {e: c for e, c in q.items() if c})
        for k, r in enumerate(elts[i].rep):
            if r:
                rep[k] = rep[k] - qp * r
    return rep


def _buchberger(gens: Sequence[Poly], vars: Tuple[str, ...], order: MonomialOrder,
                track: bool) -> Tuple[List[_Elt], _Reducer]:
    red = _Reducer(vars, order)
    key = red.key
    cap = current_caps().degree_cap
    ngen = len(gens)
    zero = Poly.const(0, vars)
    pairs: List[tuple] = []
    pending = set()

    def unit_rep(k: int) -> List[Poly]:
        return [Poly.const(1, vars) if j == k else zero for j in range(ngen)]

    def insert(terms: Terms, sugar: int, rep: Optional[List[Poly]]) -> bool:
        lm = red.lead(terms)
        terms, lc = _monic(terms, lm)
        if rep is not None and lc != 1:
            rep = [r * (1 / lc) for r in rep]
        if sum(lm) > cap:
            raise DegreeCapExceeded(f"Groebner basis element of degree {sum(lm)} exceeds degree cap {cap}")
        k = len(red.elts)
        red.elts.append(_Elt(terms, lm, sugar, rep))
        if not any(lm):
            return True
        for i in range(k):
            gi = red.elts[i]
            l = _lcm(gi.lm, lm)
            s = max(gi.sugar + sum(l) - gi.deg, sugar + sum(l) - sum(lm))
            heapq.heappush(pairs, (key(l), s, i, k))
            pending.add((i, k))
        return False

    for k, g in enumerate(gens):
        terms = g.embed(vars).terms
        if not terms:
            continue
        if insert(dict(terms), g.total_degree(), unit_rep(k) if track else None):
            return red.elts[-1:], red

    while pairs:
        _, sugar, i, j = heapq.heappop(pairs)
        pending.discard((i, j))
        gi, gj = red.elts[i], red.elts[j]
        l = _lcm(gi.lm, gj.lm)
        if l == tuple(map(add, gi.lm, gj.lm)):
            continue
        if any(k not in (i, j) and _divides(red.elts[k].lm, l)
               and (min(i, k), max(i, k)) not in pending and (min(j, k), max(j, k)) not in pending
               for k in range(len(red.elts))):
            continue
        si = tuple(map(sub, l, gi.lm))
        sj = tuple(map(sub, l, gj.lm))
        sp: Terms = {}
        for e, c in gi.terms.items():
            sp[tuple(map(add, e, si))] = c
        for e, c in gj.terms.items():
            t = tuple(map(add, e, sj))
            v = sp.get(t, 0) - c
            if v:
                sp[t] = v
            else:
                sp.pop(t, None)
        quotients: Optional[Dict[int, Terms]] = {} if track else None
        h = red.reduce(sp, full=True, quotients=quotients)
        if not h:
            continue
        rep = None
        if track:
            msi = Poly._raw(vars, {si: Fraction(1)})
            msj = Poly._raw(vars, {sj: Fraction(1)})
            base = [msi * a - msj * b for a, b in zip(gi.rep, gj.rep)]
            rep = _combine_rep(vars, base, quotients, red.elts)
        if insert(h, sugar, rep):
            return red.elts[-1:], red
    return red.elts, red


def _finish(elts: List[_Elt], red: _Reducer, track: bool) -> List[_Elt]:
    keep: List[int] = []
    for i, g in enumerate(elts):
        dominated = any(
            j != i and _divides(h.lm, g.lm) and (h.lm != g.lm or j < i)
            for j, h in enumerate(elts))
        if not dominated:
            keep.append(i)
    red.elts = [elts[i] for i in keep]
    out: List[_Elt] = []
    for idx, g in enumerate(red.elts):
        quotients: Optional[Dict[int, Terms]] = {} if track else None
        tail = {e: c for e, c in g.terms.items() if e != g.lm}
        tail = red.reduce(tail, full=True, skip=idx, quotients=quotients)
        terms = dict(tail)
        terms[g.lm] = Fraction(1)
        rep = _combine_rep(red.vars, g.rep, quotients, red.elts) if track else None
        out.append(_Elt(terms, g.lm, g.sugar, rep))
    out.sort(key=lambda g: red.key(g.lm), reverse=True)
    return out


@dataclass(frozen=True)
class GroebnerBasis:
    order: MonomialOrder
    vars: Tuple[str, ...]
    basis: Tuple[Poly, ...]
    source: object = field(default=None, compare=False)
    reps: Optional[Tuple[Tuple[Poly, ...], ...]] = field(default=None, compare=False, repr=False)

    def is_unit(self) -> bool:
        return len(self.basis) == 1 and self.basis[0].is_constant()

    def _reducer(self, ctx: Tuple[str, ...]) -> _Reducer:
        return _reducer_for(self, ctx)

    def reduce(self, p: Poly) -> Poly:
        ctx = unify_vars(self.vars, p.vars)
        red = self._reducer(ctx)
        return Poly._raw(ctx, red.reduce(p.embed(ctx).terms))

    def contains(self, p: Poly) -> bool:
        return self.reduce(p).is_zero()

    def leading_monomials(self) -> List[Exp]:
        key = self.order.key(self.vars)
        return [max(g.terms, key=key) for g in self.basis]

    def lift(self, p: Poly) -> Optional[Tuple[Poly, ...]]:
        """Cofactors c with p = sum c_k * gens_k, or None if p is not in the ideal."""
        if self.reps is None:
            raise ValueError("lift() needs a basis computed with track=True")
        ctx = unify_vars(self.vars, p.vars)
        red = self._reducer(ctx)
        quotients: Dict[int, Terms] = {}
        rem = red.reduce(p.embed(ctx).terms, quotients=quotients)
        if rem:
            return None
        ngen = len(self.reps[0]) if self.reps else 0
        out = [Poly.const(0, ctx) for _ in range(ngen)]
        for i, q in quotients.items():
            qp = Poly._raw(ctx, {e: c for e, c in q.items() if c})
            for k, r in enumerate(self.reps[i]):
                if r:
                    out[k] = out[k] + qp * r
        return tuple(out)

    def __str__(self) -> str:
        return "{" + ", ".join(str(g) for g in self.basis) + "}"


@lru_cache(maxsize=256)
def _reducer_for(gb: GroebnerBasis, ctx: Tuple[str, ...]) -> _Reducer:
    red = _Reducer(ctx, gb.order)
    key = red.key
    for g in gb.basis:
        e = g.embed(ctx)
        lm = max(e.terms, key=key)
        red.elts.append(_Elt(e.terms, lm, sum(lm), None))
    return red


@lru_cache(maxsize=512)
def _groebner_cached(gens: Tuple[Poly, ...], vars: Tuple[str, ...], order: MonomialOrder,
                     track: bool) -> Tuple[Tuple[Poly, ...], Optional[Tuple[Tuple[Poly, ...], ...]]]:
    elts, red = _buchberger(gens, vars, order, track)
    elts = _finish(elts, red, track)
    basis = tuple(Poly._raw(vars, g.terms) for g in elts)
    reps = tuple(tuple(g.rep) for g in elts) if track else None
    log.debug("groebner: %d generators -> %d elements under %s", len(gens), len(basis), order)
    return basis, reps


def groebner(ideal, order: MonomialOrder = DEGREVLEX, track: bool = False,
             vars: Sequence[str] = ()) -> GroebnerBasis:
    """
    Reduced Groebner basis of an Ideal (anything with .gens and .vars).
    `vars` widens the working context.
    """
    ctx = unify_vars(ideal.vars, vars, *(g.vars for g in ideal.gens))
    gens = tuple(g.embed(ctx) for g in ideal.gens)
    basis, reps = _groebner_cached(gens, ctx, order, track)
    return GroebnerBasis(order, ctx, basis, ideal, reps)


def normal_form(p: Poly, ideal, order: MonomialOrder = DEGREVLEX) -> Poly:
    return groebner(ideal, order).reduce(p)
