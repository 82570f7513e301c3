"""
zmt.py — Zariski's Main Theorem, constructively.

Given B = A[x_1, ..., x_n]/rel and an ideal i of A with B/iB finite over A/i
(a monic p_j with p_j(x_j) in iB for every generator), find s in 1 + iB with
s, s x_1, ..., s x_n integral over A.

The induction runs from the last generator down. The base case over
A[x_1, ..., x_{n-1}] comes from an Emmanuel sequence; every descent step
turns "t, t y integral over R[x]" into "u, u x, u y integral over R" through
the conductor search and a glue exponent found by monotone search.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from .config import current_caps
from .crucial import CrucialWitness, crucial_lemma
from .errors import (BranchBlowup, CapExceeded, ExponentCapExceeded, HypothesisNotSatisfied,
                     InvariantRecheckFailed, PNotAnnihilating, SubalgebraWitnessMissing,
                     WitnessSearchExhausted)
from .ideal.algebra import Algebra, Element, subalg_member
from .ideal.groebner import groebner
from .ideal.ideals import Ideal, fresh_var, member
from .integrality.certs import IntegralityCertificate, Verdict, verify_cert
from .integrality.comp import glue
from .integrality.emmanuel import EmmanuelModule, emmanuel
from .integrality.lying_over import elimination_cert, lying_over_unit, solve_combination
from .integrality.tower import Tower
from .ring.order import MonomialOrder
from .ring.poly import Poly, unify_vars

log = logging.getLogger(__name__)

__all__ = [
    "ZmtProblem", "ZmtResult", "StepResult", "QuasiFiniteWitness", "GlobalZmtResult",
    "zmt_base", "zmt_step", "zmt_main", "zmt_accept", "zmt_global", "verify_zmt", "verify_global",
    "find_residual_monic", "quasi_finite_witness", "certify_integral",
]


# --- problem / result types ---------------------------------------------------

@dataclass(frozen=True)
class ZmtProblem:
    algebra: Algebra                        # base = the variables of A
    gens: Tuple[str, ...]                   # x_1, ..., x_n
    ideal: Ideal                            # i, generated in A
    residual: Tuple[Poly, ...] = ()         # p_j, monic in x_j over A

    def __post_init__(self):
        object.__setattr__(self, "gens", tuple(self.gens))
        object.__setattr__(self, "ideal", self.ideal.embed(self.algebra.vars))
        object.__setattr__(self, "residual", tuple(self.residual))

    @property
    def base(self) -> Tuple[str, ...]:
        return self.algebra.base

    @property
    def n(self) -> int:
        return len(self.gens)

    def owner_at(self, k: int) -> Algebra:
        """B seen over A[x_1, ..., x_k]."""
        return self.algebra.with_base(unify_vars(self.base, self.gens[:k]))

    def check(self) -> None:
        missing = [g for g in self.gens if g not in self.algebra.vars]
        if missing:
            raise HypothesisNotSatisfied(f"generators {missing} are not algebra variables")
        stray = [v for g in self.ideal.gens for v in g.used_vars() if v not in self.base]
        if stray:
            raise HypothesisNotSatisfied(f"the ideal must be generated in A; found {sorted(set(stray))}")
        if len(self.residual) != self.n:
            raise HypothesisNotSatisfied(f"{self.n} generators but {len(self.residual)} residual monics")
        full = self.algebra.relations + self.ideal
        for x, p in zip(self.gens, self.residual):
            if p.degree(x) < 1 or p.lc_in(x) != 1:
                raise HypothesisNotSatisfied(f"residual polynomial {p} is not monic in {x}")
            extra = [v for v in p.used_vars() if v != x and v not in self.base]
            if extra:
                raise HypothesisNotSatisfied(f"residual polynomial {p} uses {extra} outside A[{x}]")
            if not member(p, full).ok:
                raise HypothesisNotSatisfied(f"{p} is not in i*B")

    def to_json(self) -> dict:
        return {
            "algebra": self.algebra.to_json(),
            "gens": list(self.gens),
            "ideal": [str(g) for g in self.ideal.gens],
            "residual": [str(p) for p in self.residual],
        }


@dataclass(frozen=True)
class ZmtResult:
    s: Element
    certs: Tuple[IntegralityCertificate, ...]           # s, s x_1, ..., s x_n
    one_minus_s: Tuple[Poly, ...] = field(default=(), compare=False)
    steps: Tuple[dict, ...] = field(default=(), compare=False)

    def to_json(self) -> dict:
        return {
            "s": str(self.s),
            "certs": [c.to_json() for c in self.certs],
            "one_minus_s_cofactors": [str(c) for c in self.one_minus_s],
            "steps": list(self.steps),
        }


@dataclass(frozen=True)
class StepResult:
    route: str                                          # conductor | elimination | collapsed
    bs: Tuple[Poly, ...]
    combination: Tuple[Poly, ...]
    target: Poly
    v: Element
    cert_v: IntegralityCertificate = field(compare=False)
    cert_vx: IntegralityCertificate = field(compare=False)
    crucial: Optional[CrucialWitness] = field(default=None, compare=False)

    def to_json(self) -> dict:
        out = {
            "route": self.route,
            "b": [str(b) for b in self.bs],
            "combination": [str(g) for g in self.combination],
            "target": str(self.target),
            "v": str(self.v),
            "cert_v": self.cert_v.to_json(),
            "cert_vx": self.cert_vx.to_json(),
        }
        if self.crucial is not None:
            out["crucial"] = self.crucial.to_json()
        return out


# --- helpers ------------------------------------------------------------------

def _trivial_cert(owner: Algebra, p: Poly, cv: Sequence[str], var: str = "T") -> IntegralityCertificate:
    """T - p for p already in Q[cv] (including 0 and 1)."""
    return IntegralityCertificate(owner.element(p), Poly.var(var) - p.restrict(cv), var, tuple(cv), None,
                                  ("Trivial",))


def certify_integral(owner: Algebra, p: Poly, cv: Sequence[str]) -> Optional[IntegralityCertificate]:
    """A verified monic over Q[cv] for p, or None when p is not integral over it."""
    p = owner.reduce(owner.poly(p))
    if p.free_of([v for v in owner.vars if v not in cv]):
        return _trivial_cert(owner, p, cv)
    cert = elimination_cert(owner.element(p), owner, cv)
    if cert is None:
        return None
    v = verify_cert(cert)
    if not v:
        raise InvariantRecheckFailed(f"elimination certificate failed: {v.reason} {v.detail}")
    return cert


def _unit_ideal(owner: Algebra, i: Ideal) -> bool:
    return groebner(owner.relations + i.embed(owner.vars)).is_unit()


def _coeff_list(g: Poly, x_var: str, cv: Sequence[str]) -> Optional[List[Poly]]:
    if g.degree(x_var) < 1 or not g.free_of([v for v in g.used_vars() if v not in cv and v != x_var]):
        return None
    coeffs = g.coeffs_in(x_var)
    return [coeffs.get(k, Poly.const(0)).restrict(cv) for k in range(max(coeffs) + 1)]


def _candidate_relations(owner: Algebra, x_var: str, p: Poly, i: Ideal, cv: Sequence[str]) -> Iterator[List[Poly]]:
    """Relations P(x) = 0 over Q[cv]: the presentation, an elimination basis, then p lifted out of i*B."""
    seen = set()
    pool: List[Poly] = list(owner.relations.gens)
    drop = [v for v in owner.vars if v not in cv and v != x_var]
    if drop:
        gb = groebner(owner.relations, MonomialOrder.elimination(drop, unify_vars(cv, (x_var,))))
        pool.extend(g for g in gb.basis if g.free_of(drop))
    nrel = len(owner.relations.gens)
    tracked = groebner(owner.relations + i.embed(owner.vars), track=True)
    cof = tracked.lift(owner.poly(p))
    if cof is not None:
        lifted = owner.poly(p)
        for gen, c in zip(i.embed(owner.vars).gens, cof[nrel:]):
            lifted = lifted - gen * c
        pool.append(lifted)
    for g in pool:
        coeffs = _coeff_list(g, x_var, cv)
        if coeffs is None:
            continue
        key = tuple(coeffs)
        if key in seen:
            continue
        seen.add(key)
        yield coeffs


def _combine(gs: Sequence[Poly], vecs: Sequence[List[Poly]]) -> List[Poly]:
    out = [Poly.const(0)] * len(vecs[0])
    for g, v in zip(gs, vecs):
        if g:
            out = [a + g * b for a, b in zip(out, v)]
    return out


# --- base case ----------------------------------------------------------------

def _base_case(owner: Algebra, x_var: str, p: Poly, i: Ideal, cv: Sequence[str]
               ) -> Tuple[Poly, IntegralityCertificate, IntegralityCertificate, dict]:
    x = Poly.var(x_var)
    i = i.embed(owner.vars)
    if _unit_ideal(owner, i):
        zero = Poly.const(0)
        return zero, _trivial_cert(owner, zero, cv), _trivial_cert(owner, zero, cv), {"base": "unit ideal"}
    seqs = []
    for coeffs in _candidate_relations(owner, x_var, p, i, cv):
        try:
            seq = emmanuel(coeffs, x, owner=owner, coeff_vars=cv)
        except PNotAnnihilating:
            continue
        for j in range(seq.n, -1, -1):
            if owner.in_ideal(seq.u[j] - 1, i):
                log.info("zmt base: u_%d of a degree-%d relation is 1 mod iB", j, seq.n)
                return seq.u[j], seq.u_certs[j], seq.ux_certs[j], {"base": "emmanuel", "degree": seq.n, "j": j}
        seqs.append(seq)
    for seq in seqs:
        if not _unit_ideal(owner, i.with_gens(*seq.u)):
            continue
        try:
            gs = lying_over_unit(seq.u, owner, cv, ideal=i)
        except WitnessSearchExhausted:
            continue
        mod = EmmanuelModule(seq.coeffs)
        s = owner.reduce(sum((g * u for g, u in zip(gs, seq.u)), Poly.const(0)))
        sx = owner.reduce(s * x)
        cs = IntegralityCertificate(owner.element(s),
                                    mod.char_poly(_combine(gs, [mod.u_coords(j) for j in range(seq.n + 1)])),
                                    "T", tuple(cv), None, ("Emmanuel", "LyingOver"))
        csx = IntegralityCertificate(owner.element(sx),
                                     mod.char_poly(_combine(gs, [mod.ux_coords(j) for j in range(seq.n + 1)])),
                                     "T", tuple(cv), None, ("Emmanuel", "LyingOver"))
        log.info("zmt base: combination of %d Emmanuel elements", len(gs))
        return s, cs, csx, {"base": "combination", "degree": seq.n}
    raise WitnessSearchExhausted(f"no relation for {x_var} over {list(cv)} yields an element of 1 + iB")


def zmt_base(problem: ZmtProblem) -> ZmtResult:
    """n = 1: s in 1 + iB with s and s x integral over A."""
    if problem.n != 1:
        raise HypothesisNotSatisfied(f"zmt_base needs one generator, got {problem.n}")
    problem.check()
    owner = problem.owner_at(0)
    s, cs, csx, info = _base_case(owner, problem.gens[0], problem.residual[0], problem.ideal, problem.base)
    return _finish(problem, s, (cs, csx), (info,))


# --- induction step -----------------------------------------------------------

def _conductor_route(owner: Algebra, x_var: str, t: Poly, cert_t: IntegralityCertificate, i: Ideal, p: Poly,
                     cv: Sequence[str]):
    wit = crucial_lemma(owner, x_var, t, cert_t.monic, i, t_var=cert_t.var, p=p, coeff_vars=cv, direct=False)
    if not wit.closure:
        return None
    w_cert = wit.closure[0]
    w = w_cert.element.numerator
    if owner.is_zero(w):
        return None
    ring = owner.with_base(cv)
    x = Poly.var(x_var)
    mem = subalg_member(owner.reduce(w * p), [x], owner=ring)
    if not mem.ok:
        return None
    r1 = mem.witness
    tower, w_name = Tower(owner, cv).adjoin(w, w_cert.monic, w_cert.var, "W", "Comp")
    wp = Poly.var(w_name)
    pc, rc = p.coeffs_in(x_var), r1.coeffs_in(x_var)
    top = max(list(pc) + list(rc))
    zero = Poly.const(0)
    coeffs = [tower.reduce(wp * pc.get(k, zero).restrict(cv) - rc.get(k, zero).restrict(cv)) for k in range(top + 1)]
    images = [owner.reduce(owner.poly(c.substitute({w_name: w}, strict=False))) for c in coeffs]
    us: List[Poly] = [zero] * len(images)
    acc = zero
    for j in range(top, -1, -1):
        acc = owner.reduce(acc * x + images[j])
        us[j] = acc
    if not owner.is_zero(us[0]):
        raise InvariantRecheckFailed(f"w p(x) - r1(x) = {us[0]} is not zero")
    mod = EmmanuelModule(coeffs, reduce=tower.reduce)
    return wit, tower, mod, us, owner.reduce(t ** wit.m)


def _elimination_route(owner: Algebra, x_var: str, t: Poly, i: Ideal, cv: Sequence[str]):
    drop = [v for v in owner.vars if v not in cv and v != x_var]
    gb = groebner(owner.relations, MonomialOrder.elimination(drop, unify_vars(cv, (x_var,))))
    for g in gb.basis:
        if not g.free_of(drop):
            continue
        coeffs = _coeff_list(g, x_var, cv)
        if coeffs is None:
            continue
        seq = emmanuel(coeffs, Poly.var(x_var), owner=owner, coeff_vars=cv)
        yield seq


def _meet(owner: Algebra, bs: Sequence[Poly], target: Poly, i: Ideal, cv: Sequence[str]
          ) -> Optional[Tuple[Poly, ...]]:
    """g over Q[cv] with sum g_j b_j = target mod iB."""
    for j in range(len(bs) - 1, -1, -1):
        if owner.in_ideal(bs[j] - target, i):
            return tuple(Poly.const(1 if k == j else 0) for k in range(len(bs)))
    if not member(owner.poly(target), owner.relations + i.with_gens(*bs)).ok:
        return None
    return solve_combination(target, bs, owner, cv, ideal=i)


def zmt_step(owner: Algebra, x_var: str, t: Poly, cert_t: IntegralityCertificate, i: Ideal, p: Poly,
             coeff_vars: Sequence[str]) -> StepResult:
    """
    B integral over R[x], t with t p(x) in sqrt(iB): elements b_j with b_j and
    b_j x integral over R, and a combination v of them in t^m + iB.
    """
    cv = tuple(coeff_vars)
    i = i.embed(owner.vars)
    x = Poly.var(x_var)
    t = owner.reduce(owner.poly(t))
    if _unit_ideal(owner, i):
        zero = Poly.const(0)
        return StepResult("collapsed", (zero,), (Poly.const(1),), zero, owner.element(zero),
                          _trivial_cert(owner, zero, cv), _trivial_cert(owner, zero, cv))

    try:
        found = _conductor_route(owner, x_var, t, cert_t, i, p, cv)
    except (CapExceeded, HypothesisNotSatisfied, SubalgebraWitnessMissing, InvariantRecheckFailed) as exc:
        log.info("zmt step: conductor route unavailable (%s)", exc)
        found = None
    if found is not None:
        wit, tower, mod, us, target = found
        gs = _meet(owner, us, target, i, cv)
        if gs is not None:
            v = owner.reduce(sum((g * u for g, u in zip(gs, us)), Poly.const(0)))
            n = len(us) - 1
            v_rel = mod.char_poly(_combine(gs, [mod.u_coords(j) for j in range(n + 1)]), "T")
            vx_rel = mod.char_poly(_combine(gs, [mod.ux_coords(j) for j in range(n + 1)]), "T")
            tower, v_name = tower.adjoin(v, v_rel, "T", "V", "Emmanuel")
            tower, vx_name = tower.adjoin(owner.reduce(v * x), vx_rel, "T", "VX", "Emmanuel")
            cert_v = tower.certificate(Poly.var(v_name), owner.element(v), provenance=("Comp", "Emmanuel"))
            cert_vx = tower.certificate(Poly.var(vx_name), owner.element(owner.reduce(v * x)),
                                        provenance=("Comp", "Emmanuel"))
            _require(cert_v, cert_vx)
            log.info("zmt step: conductor route, m=%d", wit.m)
            return StepResult("conductor", tuple(us), gs, target, owner.element(v), cert_v, cert_vx, wit)

    for target in (Poly.const(1), t):
        for seq in _elimination_route(owner, x_var, t, i, cv):
            gs = _meet(owner, list(seq.u), target, i, cv)
            if gs is None:
                continue
            mod = EmmanuelModule(seq.coeffs)
            v = owner.reduce(sum((g * u for g, u in zip(gs, seq.u)), Poly.const(0)))
            cert_v = IntegralityCertificate(owner.element(v),
                                            mod.char_poly(_combine(gs, [mod.u_coords(j) for j in range(seq.n + 1)])),
                                            "T", cv, None, ("Emmanuel",))
            cert_vx = IntegralityCertificate(owner.element(owner.reduce(v * x)),
                                             mod.char_poly(_combine(gs, [mod.ux_coords(j) for j in range(seq.n + 1)])),
                                             "T", cv, None, ("Emmanuel",))
            _require(cert_v, cert_vx)
            log.info("zmt step: elimination route over %s", list(cv))
            return StepResult("elimination", seq.u, gs, target, owner.element(v), cert_v, cert_vx)
    raise WitnessSearchExhausted(f"no family of elements integral over {list(cv)} meets t^N + iB")


def _require(*certs: IntegralityCertificate) -> None:
    for c in certs:
        v = verify_cert(c)
        if not v:
            raise InvariantRecheckFailed(f"certificate for {c.element} failed: {v.reason} {v.detail}")


def _descend(owner: Algebra, x_var: str, ys: Sequence[str], t: Poly, cert_t: IntegralityCertificate,
             cert_tys: Sequence[IntegralityCertificate], step: StepResult, cv: Sequence[str]
             ) -> Tuple[Poly, Tuple[IntegralityCertificate, ...], int]:
    """u = v^N t with u, u x, u y_j integral over Q[cv], N found by monotone search."""
    d = 0
    for c in (cert_t, *cert_tys):
        for coef in c.coefficients().values():
            d = max(d, coef.degree(x_var))
    v = step.v.numerator
    targets = [Poly.var(x_var)] + [Poly.var(y) for y in ys]
    for n in range(1, d + 2):
        u = owner.reduce(v ** n * t)
        certs = []
        for mult in [Poly.const(1)] + targets:
            c = certify_integral(owner, owner.reduce(u * mult), cv)
            if c is None:
                break
            certs.append(c)
        else:
            log.info("zmt descent over %s: N=%d (bound %d)", list(cv), n, d + 1)
            return u, tuple(certs), n
    g = glue(owner.element(t), [Poly.var(y) for y in ys], x_var, step.v, cert_t, cert_tys,
             step.cert_v, step.cert_vx, cv)
    _require(*g.certs)
    return g.w.numerator, g.certs, g.n


def _finish(problem: ZmtProblem, s: Poly, certs: Sequence[IntegralityCertificate], steps) -> ZmtResult:
    owner = problem.algebra
    s = owner.reduce(owner.poly(s))
    m = member(s - 1, owner.relations + problem.ideal, trace=True)
    if not m.ok:
        raise InvariantRecheckFailed(f"s = {s} is not in 1 + iB")
    res = ZmtResult(owner.element(s), tuple(certs), m.cofactors or (), tuple(steps))
    v = verify_zmt(problem, res)
    if not v:
        raise InvariantRecheckFailed(f"zmt result failed re-verification: {v.reason} {v.detail}")
    return res


def zmt_main(problem: ZmtProblem) -> ZmtResult:
    problem.check()
    owner = problem.algebra
    if problem.n == 0:
        return _finish(problem, Poly.const(1), (_trivial_cert(owner, Poly.const(1), problem.base),), ())
    if _unit_ideal(owner, problem.ideal):
        zero = Poly.const(0)
        return _finish(problem, zero, tuple(_trivial_cert(owner, zero, problem.base)
                                            for _ in range(problem.n + 1)), ({"base": "unit ideal"},))

    n = problem.n
    cv = unify_vars(problem.base, problem.gens[:n - 1])
    s, cert_t, cert_sx, info = _base_case(problem.owner_at(n - 1), problem.gens[-1], problem.residual[-1],
                                          problem.ideal, cv)
    steps: List[dict] = [dict(info, level=n)]
    cert_tys = [cert_sx]
    ys = [problem.gens[-1]]
    for k in range(n - 1, 0, -1):
        x_var = problem.gens[k - 1]
        cv = unify_vars(problem.base, problem.gens[:k - 1])
        level = problem.owner_at(k - 1)
        step = zmt_step(level, x_var, s, cert_t, problem.ideal, problem.residual[k - 1], cv)
        s, certs, n_glue = _descend(level, x_var, ys, s, cert_t, cert_tys, step, cv)
        steps.append({"level": k, "route": step.route, "v": str(step.v), "N": n_glue})
        cert_t, cert_tys = certs[0], list(certs[1:])
        ys = [x_var] + ys
    return _finish(problem, s, (cert_t, *cert_tys), steps)


def zmt_accept(problem: ZmtProblem, s: Poly) -> ZmtResult:
    """Check a proposed s: certify s and every s x_j over A and confirm s - 1 in iB."""
    owner = problem.algebra
    s = owner.reduce(owner.poly(s))
    certs = []
    for mult in [Poly.const(1)] + [Poly.var(x) for x in problem.gens]:
        c = certify_integral(owner, owner.reduce(s * mult), problem.base)
        if c is None:
            raise HypothesisNotSatisfied(f"({s})*({mult}) is not integral over {list(problem.base)}")
        certs.append(c)
    return _finish(problem, s, certs, ({"accepted": str(s)},))


def verify_zmt(problem: ZmtProblem, result: ZmtResult) -> Verdict:
    owner = problem.algebra
    s = result.s.numerator
    if not member(s - 1, owner.relations + problem.ideal).ok:
        return Verdict.failed("NotInIdeal", "s - 1 is not in iB")
    if len(result.certs) != problem.n + 1:
        return Verdict.failed("ResidualShape", f"expected {problem.n + 1} certificates")
    for mult, c in zip([Poly.const(1)] + [Poly.var(x) for x in problem.gens], result.certs):
        stray = [v for v in c.coeff_vars if v not in problem.base]
        if stray:
            return Verdict.failed("CoefficientLocation", f"certificate over {stray}, outside A")
        if not c.element.owner.same_ring(owner):
            return Verdict.failed("Annihilation", f"certificate for {c.element} lives outside B")
        if not owner.is_zero(owner.poly(c.element.numerator) - owner.poly(c.element.denominator) * s * mult):
            return Verdict.failed("Annihilation", f"certificate element {c.element} is not s*{mult}")
        v = verify_cert(c)
        if not v:
            return v
    return Verdict.passed()


def find_residual_monic(problem: ZmtProblem, j: int) -> Poly:
    """A monic p with p(x_j) in iB, read off an elimination basis of rel + i."""
    owner = problem.algebra.with_relations(*problem.ideal.gens)
    x = problem.gens[j]
    cert = elimination_cert(owner.element(Poly.var(x)), owner, problem.base)
    if cert is None:
        raise HypothesisNotSatisfied(f"{x} is not integral over A modulo i*B")
    return cert.monic.rename({cert.var: x})


# --- global form --------------------------------------------------------------

@dataclass(frozen=True)
class QuasiFiniteWitness:
    elements: Tuple[Poly, ...]
    data: Tuple[Tuple[Tuple[int, ...], Tuple[IntegralityCertificate, ...]], ...] = field(default=(), compare=False)

    def verify(self, owner: Algebra, gens: Sequence[str]) -> Verdict:
        """Every branch is the zero ring or certifies x_1, ..., x_n over its own base."""
        p = len(self.elements)
        subsets = [inv for r in range(p + 1) for inv in itertools.combinations(range(p), r)]
        if [tuple(inv) for inv, _ in self.data] != subsets:
            return Verdict.failed("ResidualShape", f"branches do not cover the {len(subsets)} subsets")
        for inv, certs in self.data:
            ring, base = _branch(owner, self.elements, inv, owner.base)
            if not certs:
                if not groebner(ring.relations).is_unit():
                    return Verdict.failed("ResidualShape", f"branch {list(inv)} has no certificates but is not zero")
                continue
            if len(certs) != len(gens):
                return Verdict.failed("ResidualShape", f"branch {list(inv)} needs one certificate per generator")
            for x, c in zip(gens, certs):
                if not c.element.owner.same_ring(ring):
                    return Verdict.failed("Annihilation", f"certificate for {c.element} lives outside branch {list(inv)}")
                stray = [v for v in c.coeff_vars if v not in base]
                if stray:
                    return Verdict.failed("CoefficientLocation", f"certificate over {stray}, outside {list(base)}")
                if not ring.is_zero(ring.poly(c.element.numerator) - Poly.var(x) * ring.poly(c.element.denominator)):
                    return Verdict.failed("Annihilation", f"certificate element {c.element} is not {x}")
                v = verify_cert(c)
                if not v:
                    return v
        return Verdict.passed()

    def to_json(self) -> dict:
        return {
            "elements": [str(a) for a in self.elements],
            "data": [{"inverted": list(inv), "certs": [c.to_json() for c in certs]} for inv, certs in self.data],
        }


@dataclass(frozen=True)
class GlobalZmtResult:
    family: Tuple[Element, ...]
    comaximality: Tuple[Poly, ...]
    certs: Tuple[Tuple[IntegralityCertificate, ...], ...] = field(compare=False, default=())

    def to_json(self) -> dict:
        return {
            "family": [str(s) for s in self.family],
            "comaximality": [str(c) for c in self.comaximality],
            "certs": [[c.to_json() for c in cs] for cs in self.certs],
        }


def _gen_certs(owner: Algebra, gens: Sequence[str], base: Sequence[str]) -> Optional[Tuple[IntegralityCertificate, ...]]:
    out = []
    for x in gens:
        c = certify_integral(owner, Poly.var(x), base)
        if c is None:
            return None
        out.append(c)
    return tuple(out)


def _branch(owner: Algebra, elements: Sequence[Poly], inverted: Sequence[int], base: Sequence[str]
            ) -> Tuple[Algebra, Tuple[str, ...]]:
    """B_(a, I): kill a_k for k outside I, invert a_k for k in I."""
    out = owner
    extra = []
    for k, a in enumerate(elements):
        if k in inverted:
            v = fresh_var(f"v{k + 1}", out.vars)
            out = out.adjoin([v], [Poly.var(v) * a - 1])
            extra.append(v)
        else:
            out = out.with_relations(owner.poly(a))
    base = unify_vars(base, extra)
    return out.with_base(base), base


def quasi_finite_witness(owner: Algebra, gens: Sequence[str], elements: Sequence[Poly]) -> QuasiFiniteWitness:
    """Certificates that every B_(a, I) is integral over A_(a, I)."""
    p = len(elements)
    if 2 ** p > current_caps().branch_cap:
        raise BranchBlowup(f"{2 ** p} subsets exceed the branch cap")
    data = []
    for r in range(p + 1):
        for inv in itertools.combinations(range(p), r):
            ring, base = _branch(owner, elements, inv, owner.base)
            if groebner(ring.relations).is_unit():
                data.append((inv, ()))
                continue
            certs = _gen_certs(ring, gens, base)
            if certs is None:
                raise HypothesisNotSatisfied(f"B is not integral over A after inverting {list(inv)}")
            data.append((inv, certs))
    return QuasiFiniteWitness(tuple(owner.poly(a) for a in elements), tuple(data))


def _subring_problem(owner: Algebra, f: Poly, gens: Sequence[str], a: Poly) -> Tuple[ZmtProblem, Dict[str, Poly]]:
    """Presentation of C = A[f, f x_1, ..., f x_n] with i = <a> and residual monics found mod a."""
    images = [f] + [owner.reduce(f * Poly.var(x)) for x in gens]
    taken = set(owner.vars)
    tags = []
    for _ in images:
        y = fresh_var("Y", taken)
        taken.add(y)
        tags.append(y)
    ctx = unify_vars(owner.vars, tags)
    ext = Ideal(owner.relations.gens + tuple(Poly.var(y) - g for y, g in zip(tags, images)), ctx)
    drop = [v for v in owner.vars if v not in owner.base]
    keep = unify_vars(owner.base, tags)
    gb = groebner(ext, MonomialOrder.elimination(drop, keep))
    rel = Ideal(tuple(g.restrict(keep) for g in gb.basis if g.free_of(drop)), keep)
    c_alg = Algebra(keep, rel, base=owner.base)
    ideal = Ideal((owner.poly(a).restrict(owner.base),), keep)
    seed = ZmtProblem(c_alg, tuple(tags), ideal)
    residual = tuple(find_residual_monic(seed, j) for j in range(len(tags)))
    return ZmtProblem(c_alg, tuple(tags), ideal, residual), dict(zip(tags, images))


def _clear_denominator(f: Poly, v: str, a: Poly, n: int) -> Poly:
    """a^n f with a v = 1, written without v."""
    out = Poly.const(0)
    for k, c in f.coeffs_in(v).items():
        out = out + c.restrict([w for w in c.vars if w != v]) * a ** (n - k)
    return out


def _global(owner: Algebra, gens: Sequence[str], base: Sequence[str], elements: Sequence[Poly]) -> List[Poly]:
    if groebner(owner.relations).is_unit():
        return []
    if not elements:
        if _gen_certs(owner, gens, base) is None:
            raise HypothesisNotSatisfied(f"the witness leaves a branch not integral over {list(base)}")
        return [Poly.const(1)]
    a, rest = owner.poly(elements[0]), elements[1:]
    quotient = owner.with_relations(a)
    out: List[Poly] = []
    for f in _global(quotient, gens, base, rest):
        problem, images = _subring_problem(owner, owner.reduce(owner.poly(f)), gens, a)
        res = zmt_main(problem)
        w = owner.reduce(owner.poly(res.s.numerator.substitute(images, strict=False)))
        out.append(owner.reduce(w * owner.poly(f)))

    v = fresh_var("v", owner.vars)
    inverted = owner.adjoin([v], [Poly.var(v) * a - 1]).with_base(unify_vars(base, (v,)))
    cap = current_caps().exp_cap
    for f in _global(inverted, gens, unify_vars(base, (v,)), rest):
        f = inverted.reduce(inverted.poly(f))
        start = max(f.degree(v), 0)
        for n in range(start, start + cap + 1):
            g = owner.reduce(owner.poly(_clear_denominator(f, v, a, n)))
            if _gen_certs_times(owner, g, gens, base) is not None:
                out.append(g)
                break
        else:
            raise ExponentCapExceeded(f"no a^N with N <= {start + cap} clears the denominators of {f}")
    return out


def _gen_certs_times(owner: Algebra, g: Poly, gens: Sequence[str], base: Sequence[str]
                     ) -> Optional[Tuple[IntegralityCertificate, ...]]:
    out = []
    for mult in [Poly.const(1)] + [Poly.var(x) for x in gens]:
        c = certify_integral(owner, owner.reduce(g * mult), base)
        if c is None:
            return None
        out.append(c)
    return tuple(out)


def zmt_global(owner: Algebra, gens: Sequence[str], witness: QuasiFiniteWitness) -> GlobalZmtResult:
    """
    Comaximal s_1, ..., s_m in B with every s_k and s_k x_j integral over A,
    by induction on the witness: the quotient branch B/aB lifted through
    zmt_main with i = <a>, the branch B[1/a] cleared by powers of a.
    """
    v = witness.verify(owner, gens)
    if not v:
        raise HypothesisNotSatisfied(f"quasi-finiteness witness does not verify: {v.reason} {v.detail}")
    if 2 ** len(witness.elements) > current_caps().branch_cap:
        raise BranchBlowup(f"{2 ** len(witness.elements)} branches exceed the branch cap")
    family = []
    for f in _global(owner, gens, owner.base, witness.elements):
        f = owner.reduce(owner.poly(f))
        if f.is_zero() or any(owner.equal(f, g) for g in family):
            continue
        family.append(f)
    certs = tuple(_gen_certs_times(owner, f, gens, owner.base) for f in family)
    if any(c is None for c in certs):
        raise InvariantRecheckFailed("a family member lost its integrality certificate")
    nrel = len(owner.relations.gens)
    gb = groebner(owner.relations + Ideal(tuple(family), owner.vars), track=True)
    cof = gb.lift(Poly.const(1, owner.vars))
    if cof is None:
        raise InvariantRecheckFailed(f"family {[str(f) for f in family]} is not comaximal")
    res = GlobalZmtResult(tuple(owner.element(f) for f in family), tuple(cof[nrel:]), certs)
    log.info("zmt_global: family of %d from %d witness elements", len(family), len(witness.elements))
    v = verify_global(owner, gens, res)
    if not v:
        raise InvariantRecheckFailed(f"global result failed re-verification: {v.reason} {v.detail}")
    return res


def verify_global(owner: Algebra, gens: Sequence[str], res: GlobalZmtResult) -> Verdict:
    if len(res.certs) != len(res.family) or len(res.comaximality) != len(res.family):
        return Verdict.failed("ResidualShape", "one certificate list and one cofactor per family member")
    total = Poly.const(0)
    for s, c in zip(res.family, res.comaximality):
        total = total + s.numerator * c
    if not owner.is_zero(owner.poly(total) - 1):
        return Verdict.failed("Comaximality", f"1 - sum c_k s_k = {owner.reduce(1 - owner.poly(total))}")
    for s, certs in zip(res.family, res.certs):
        if len(certs) != len(gens) + 1:
            return Verdict.failed("ResidualShape", "one certificate per s*x_j is required")
        for mult, c in zip([Poly.const(1)] + [Poly.var(x) for x in gens], certs):
            if not c.element.owner.same_ring(owner):
                return Verdict.failed("Annihilation", f"certificate for {c.element} lives outside B")
            stray = [v for v in c.coeff_vars if v not in owner.base]
            if stray:
                return Verdict.failed("CoefficientLocation", f"certificate over {stray}, outside A")
            if not owner.is_zero(owner.poly(c.element.numerator) - s.numerator * mult):
                return Verdict.failed("Annihilation", f"certificate element {c.element} is not s*{mult}")
            vc = verify_cert(c)
            if not vc:
                return vc
    return Verdict.passed()
