"""
crucial.py — subresultant chains, strong transcendence instances, zero-tests
in the localized quotient D_U, and the conductor witness t^m - y with y in
I*S and (t^m - y) * t^i in R[x] for i < n.

Sr_j is computed as the determinant whose last column holds the polynomials
X^k f and X^k g themselves, so expanding along that column gives the
cofactors U_j, V_j with Sr_j = U_j f + V_j g at no extra cost.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import List, Mapping, Optional, Sequence, Tuple

from .config import current_caps
from .errors import (BranchBlowup, DegreeCapExceeded, ExponentCapExceeded, HypothesisNotSatisfied,
                     InvariantRecheckFailed, SubalgebraWitnessMissing)
from .ideal.algebra import Algebra, Element, subalg_member
from .ideal.ideals import Ideal, fresh_var, member, radical_member
from .integrality.certs import IntegralityCertificate, Verdict, verify_cert
from .integrality.comp import shift_cert
from .integrality.kronecker import kronecker_cert
from .integrality.lying_over import lying_over_root_cert
from .ring.matrix import PolyMatrix, det_ff, pseudo_divide, resultant
from .ring.poly import Poly, unify_vars

log = logging.getLogger(__name__)

__all__ = [
    "SubresultantChain", "subresultant_chain", "StrongTranscendenceReport", "strong_transcendence_check",
    "CrucialWitness", "crucial_lemma", "verify_crucial", "power_relation",
]


@dataclass(frozen=True)
class SubresultantChain:
    f: Poly
    g: Poly
    var: str
    chain: Tuple[Poly, ...]                 # Sr_d, Sr_{d-1}, ..., Sr_0
    principal: Tuple[Poly, ...]             # s_d, ..., s_0
    cofactors: Tuple[Tuple[Poly, Poly], ...] = field(compare=False, default=())

    @property
    def d(self) -> int:
        return len(self.chain) - 1

    def sr(self, j: int) -> Poly:
        return self.chain[self.d - j]

    def s(self, j: int) -> Poly:
        return self.principal[self.d - j]

    def gcd_degree(self) -> int:
        """least j with s_j != 0 (meaningful over a field)."""
        return min(j for j in range(self.d + 1) if not self.s(j).is_zero())

    def check_cofactors(self) -> bool:
        return all(u * self.f + v * self.g == sr for (u, v), sr in zip(self.cofactors, self.chain))

    def to_json(self) -> dict:
        return {"var": self.var, "chain": [str(p) for p in self.chain],
                "principal": [str(p) for p in self.principal]}


def _coeff(p: Poly, var: str, k: int) -> Poly:
    return p.coeffs_in(var).get(k, Poly.const(0)).restrict([v for v in p.vars if v != var])


def subresultant_chain(f: Poly, g: Poly, var: str) -> SubresultantChain:
    d = f.degree(var)
    if d < 1 or f.lc_in(var) != 1:
        raise HypothesisNotSatisfied(f"subresultant_chain needs f monic of positive degree in {var}, got {f}")
    delta = max(g.degree(var), d - 1)
    x = Poly.var(var)
    chain: List[Poly] = [f]
    principal: List[Poly] = [Poly.const(1)]
    cofactors: List[Tuple[Poly, Poly]] = [(Poly.const(1), Poly.const(0))]
    for j in range(d - 1, -1, -1):
        rows: List[Tuple[Poly, str, int]] = []
        rows += [(x ** k * f, "f", k) for k in range(delta - 1 - j, -1, -1)]
        rows += [(x ** k * g, "g", k) for k in range(d - 1 - j, -1, -1)]
        size = len(rows)
        ncoef = size - 1
        top = d + delta - j - 1
        coef_rows = [[_coeff(r, var, top - c) for c in range(ncoef)] for r, _, _ in rows]
        sr = Poly.const(0)
        u = Poly.const(0)
        v = Poly.const(0)
        for i, (r, kind, k) in enumerate(rows):
            minor = PolyMatrix.from_rows([coef_rows[l] for l in range(size) if l != i]) if ncoef else None
            m = det_ff(minor) if minor is not None else Poly.const(1)
            if not m:
                continue
            sign = -1 if (i + size - 1) % 2 else 1
            term = m * sign
            sr = sr + term * r
            if kind == "f":
                u = u + term * x ** k
            else:
                v = v + term * x ** k
        chain.append(sr)
        principal.append(_coeff(sr, var, j))
        cofactors.append((u, v))
    log.debug("subresultant_chain: d=%d, delta=%d", d, delta)
    return SubresultantChain(f, g, var, tuple(chain), tuple(principal), tuple(cofactors))


@dataclass(frozen=True)
class StrongTranscendenceReport:
    u: Poly
    coeffs: Tuple[Poly, ...]
    x: Poly
    verdict: str
    witness: Optional[int] = None

    def to_json(self) -> dict:
        return {"u": str(self.u), "coeffs": [str(c) for c in self.coeffs], "x": str(self.x),
                "verdict": self.verdict, "witness": self.witness}


def strong_transcendence_check(u: Poly, coeffs: Sequence[Poly], x: Poly, owner: Algebra) -> StrongTranscendenceReport:
    """Given u * sum c_j x^j = 0, does u c_j = 0 for every j?"""
    u, x = owner.poly(u), owner.poly(x)
    cs = tuple(owner.poly(c) for c in coeffs)
    total = Poly.const(0)
    for j, c in enumerate(cs):
        total = total + c * x ** j
    if not owner.is_zero(owner.reduce(u * total)):
        raise HypothesisNotSatisfied(f"u * sum c_j x^j = {owner.reduce(u * total)} is not zero")
    for j, c in enumerate(cs):
        if not owner.is_zero(owner.reduce(u * c)):
            return StrongTranscendenceReport(u, cs, x, "fails-with-witness", j)
    return StrongTranscendenceReport(u, cs, x, "holds")


def power_relation(rel: Poly, t_var: str, m: int) -> Poly:
    """Monic satisfied by t^m when rel(t) = 0 (rel monic in t_var)."""
    if m == 1:
        return rel
    s = fresh_var("S", rel.vars)
    out = resultant(rel, Poly.var(s) - Poly.var(t_var) ** m, t_var)
    return out.rename({s: t_var})


@dataclass(frozen=True)
class CrucialWitness:
    m: int
    y: Element
    a: Element
    n: int
    closure: Tuple[IntegralityCertificate, ...] = field(default=(), compare=False)
    conductor_evidence: Tuple[Poly, ...] = ()
    tags: Tuple[str, ...] = ()
    branches: Tuple[dict, ...] = field(default=(), compare=False)
    kronecker: Tuple[IntegralityCertificate, ...] = field(default=(), compare=False)
    chain: Optional[SubresultantChain] = field(default=None, compare=False)

    def to_json(self) -> dict:
        out = {
            "m": self.m, "y": str(self.y), "a": str(self.a), "n": self.n,
            "closure": [c.to_json() for c in self.closure],
            "conductor_evidence": [str(p) for p in self.conductor_evidence],
            "tags": list(self.tags),
            "branches": list(self.branches),
            "kronecker": [c.to_json() for c in self.kronecker],
        }
        if self.chain is not None:
            out["chain"] = self.chain.to_json()
        return out


def _evidence(a: Poly, t: Poly, n: int, gens: Sequence[Poly], ring: Algebra) -> Tuple[Tuple[Poly, ...], Tuple[str, ...]]:
    out, tags = [], ()
    acc = a
    for _ in range(n):
        mem = subalg_member(ring.reduce(acc), gens, owner=ring)
        if not mem.ok:
            raise SubalgebraWitnessMissing(f"{acc} is not in the subring generated by {[str(g) for g in gens]}")
        out.append(mem.witness)
        tags = mem.tags
        acc = acc * t
    return tuple(out), tags


class _LocalizedQuotient:
    """
    Zero-tests in D_U, D = S/sqrt(JS) localized at U = t^N + I*S. A saturation
    test decides u = 0 in S_U exactly (t in sqrt(I*S[1/u])); failing that, u^e
    in the conductor (u^e t^l in R[x] for l < n) shows u = 0 in D.
    """

    def __init__(self, owner: Algebra, ring: Algebra, t: Poly, i_s: Ideal, x: Poly, n: int):
        self.owner, self.ring, self.t, self.i_s, self.x, self.n = owner, ring, t, i_s, x, n
        self.v = fresh_var("V", owner.vars)
        self.ctx = unify_vars(owner.vars, (self.v,))

    def _inverted(self, u: Poly) -> Ideal:
        return Ideal(self.i_s.embed(self.ctx).gens + (Poly.var(self.v) * u - 1,), self.ctx)

    def _conductor(self, u: Poly, e: int) -> bool:
        acc = self.owner.reduce(u ** e)
        for _ in range(self.n):
            if not subalg_member(acc, [self.x], owner=self.ring).ok:
                return False
            acc = self.owner.reduce(acc * self.t)
        return True

    def zero_evidence(self, u: Poly) -> Optional[dict]:
        u = self.owner.reduce(self.owner.poly(u))
        if u.is_zero() or self.owner.is_zero(u):
            return {"kind": "zero"}
        rm = radical_member(self.t.embed(self.ctx), self._inverted(u))
        if rm.ok:
            return {"kind": "saturation", "exponent": rm.exponent}
        caps = current_caps()
        for e in range(1, min(caps.exp_cap, caps.n_search_cap) + 1):
            if self._conductor(u, e):
                return {"kind": "conductor", "exponent": e}
        return None

    def confirms(self, u: Poly, evidence: Mapping) -> bool:
        u = self.owner.reduce(self.owner.poly(u))
        kind = evidence.get("kind")
        if kind == "zero":
            return u.is_zero() or self.owner.is_zero(u)
        if kind == "saturation":
            k = evidence.get("exponent")
            inv = self._inverted(u)
            if k is None:
                return radical_member(self.t.embed(self.ctx), inv).ok
            return member(self.t.embed(self.ctx) ** k, inv).ok
        if kind == "conductor":
            return self._conductor(u, int(evidence["exponent"]))
        return False


def _q_relation(owner: Algebra, t: Poly, p: Poly, i: Ideal, x_var: str, t_var: str, cv: Sequence[str]
                ) -> Tuple[Poly, IntegralityCertificate]:
    """Q(X, T) with Q(x, t) = 0, monic in T up to p(X)^deg, lower coefficients in I C[X]."""
    cvx = unify_vars(cv, (x_var,))
    ring_x = owner.with_base(cvx)
    z = owner.reduce(t * owner.poly(p))
    zvar = fresh_var("Z", unify_vars(owner.vars, (t_var,)))
    _, cert = lying_over_root_cert(ring_x.element(z), i, coeff_vars=cvx, var=zvar)
    q = cert.monic.substitute({zvar: p * Poly.var(t_var)})
    if not owner.is_zero(owner.reduce(owner.poly(q.substitute({t_var: t}, strict=False)))):
        raise InvariantRecheckFailed(f"Q(x, t) does not vanish for Q = {q}")
    return q, cert


def _gcd_collapse(rel: Poly, q_exact: Poly, x_var: str, t_var: str) -> Tuple[int, Tuple[IntegralityCertificate, ...]]:
    """
    T = X^N turns rel | q_exact into a divisibility of polynomials in X, both
    monic once N separates the degrees; Kronecker then places every
    coefficient of rel over the content of q_exact.
    """
    x = Poly.var(x_var)
    n = rel.degree(t_var)
    mu = max((c.degree(x_var) for c in q_exact.coeffs_in(t_var).values()), default=0)
    start = n * (1 + max(mu, 0)) + max(rel.degree(x_var), 0) + 1
    caps = current_caps()
    for big_n in range(start, start + caps.n_search_cap + 1):
        f = rel.substitute({t_var: x ** big_n}, strict=False)
        h = q_exact.substitute({t_var: x ** big_n}, strict=False)
        if f.degree(x_var) > caps.degree_cap or h.degree(x_var) > caps.degree_cap:
            break
        if f.lc_in(x_var) == 1 and h.lc_in(x_var) == 1:
            break
    else:
        raise DegreeCapExceeded(f"no N in {start}..{start + caps.n_search_cap} separates the degrees")
    if f.degree(x_var) > caps.degree_cap or h.degree(x_var) > caps.degree_cap:
        raise DegreeCapExceeded(f"T = X^{big_n} exceeds the degree cap {caps.degree_cap}")
    coeffs = f.coeffs_in(x_var)
    top = max(coeffs)
    certs: List[IntegralityCertificate] = []
    seen: List[Poly] = []
    for k in sorted(coeffs):
        c = coeffs[k]
        if k == top or c.is_zero() or any(c == s for s in seen):
            continue
        seen.append(c)
        certs.append(kronecker_cert(f, h, k, var=x_var).with_provenance("Crucial"))
    log.debug("gcd collapse: N=%d, %d coefficients certified", big_n, len(certs))
    return big_n, tuple(certs)


def crucial_lemma(owner: Algebra, x_var: str, t: Poly, integral_rel: Poly, i: Ideal, t_var: str = "T",
                  p: Optional[Poly] = None, coeff_vars: Optional[Sequence[str]] = None,
                  direct: bool = True) -> CrucialWitness:
    """
    t integral over R[x] by integral_rel (P, monic of degree n in t_var) and
    t p(x) in sqrt(I*S). Proves t in sqrt(I*S) modulo sqrt(JS), J the
    conductor of R[x] in S, and returns a = t^m - y with y in I*S and
    a (t^m)^k in R[x] for k < n, R carried as the certified closure elements.

    Q(X, T) comes from lying over for t p(x). The subresultants of P and Q are
    walked from degree 0 up; each principal coefficient s_j is shown to vanish
    in D_U, so P divides Q there and the substitution T = X^N hands the
    coefficients of P to Kronecker over the content of Q.
    """
    cv = tuple(coeff_vars) if coeff_vars is not None else owner.base
    ring = owner if set(owner.base) == set(cv) else owner.with_base(cv)
    tv = owner.reduce(owner.poly(t))
    n = integral_rel.degree(t_var)
    x = Poly.var(x_var)
    p = x if p is None else p
    if p.lc_in(x_var) != 1:
        raise HypothesisNotSatisfied(f"the conductor search needs p monic in {x_var}, got {p}")
    i_s = owner.relations + i.embed(owner.vars)
    if not radical_member(owner.reduce(tv * owner.poly(p)), i_s).ok:
        raise HypothesisNotSatisfied(f"t*p(x) = ({t})*({p}) is not in the radical of I*S")
    zero = owner.element(0)
    branches: List[dict] = []

    if direct and member(tv, i_s).ok:
        branches.append({"branch": "t in I*S"})
        return CrucialWitness(1, owner.element(tv), zero, n, (), tuple(Poly.const(0) for _ in range(n)), (),
                              tuple(branches))

    if direct and integral_rel.free_of([x_var]):
        cert = IntegralityCertificate(owner.element(tv), integral_rel, t_var, cv, None, ("Crucial",))
        if verify_cert(cert):
            branches.append({"branch": "t integral over R"})
            ev, tags = _evidence(tv, tv, n, [x, tv], ring)
            return CrucialWitness(1, zero, owner.element(tv), n, (cert,), ev, tags, tuple(branches))

    caps = current_caps()
    q, _ = _q_relation(owner, tv, p, i, x_var, t_var, cv)
    if q.degree(t_var) > caps.degree_cap:
        raise DegreeCapExceeded(f"Q has degree {q.degree(t_var)} in {t_var}")
    chain = subresultant_chain(integral_rel, q, t_var)
    du = _LocalizedQuotient(owner, ring, tv, i_s, x, n)

    def record(entry: dict) -> None:
        branches.append(entry)
        if len(branches) > caps.branch_cap:
            raise BranchBlowup(f"more than {caps.branch_cap} branches", branches=branches)

    closed: List[Tuple[Poly, dict]] = []
    for j in range(n):
        s = chain.s(j)
        ev = du.zero_evidence(s)
        if ev is None:
            record({"j": j, "s": str(s), "branch": "undecided"})
            raise ExponentCapExceeded(f"s_{j} = {s} could not be shown to vanish in D_U", branches=branches)
        record({"j": j, "s": str(s), "branch": ev["kind"], "exponent": ev.get("exponent")})
        closed.append((s, ev))

    # P divides Q in D_U[T]; the remainder's C-coefficients vanish one by one
    _, rem, _ = pseudo_divide(q, integral_rel, t_var)
    for c in _c_coefficients(rem, (x_var, t_var)):
        ev = du.zero_evidence(c)
        if ev is None:
            raise ExponentCapExceeded(f"remainder coefficient {c} could not be shown to vanish in D_U",
                                      branches=branches)
        record({"remainder": str(c), "branch": ev["kind"], "exponent": ev.get("exponent")})
        closed.append((c, ev))
    big_n, kron = _gcd_collapse(integral_rel, q - rem, x_var, t_var)
    record({"collapse": big_n, "kronecker": len(kron)})

    if not all(du.confirms(u, ev) for u, ev in closed):
        raise InvariantRecheckFailed("a closed branch failed its membership re-check")
    for c in kron:
        v = verify_cert(c)
        if not v:
            raise InvariantRecheckFailed(f"Kronecker certificate for {c.element} failed: {v.reason}")

    return _assemble(owner, ring, tv, p, integral_rel, i_s, x_var, t_var, n, cv, branches, kron, chain)


def _c_coefficients(poly: Poly, main: Sequence[str]) -> List[Poly]:
    out: List[Poly] = []
    stack = [poly]
    for v in main:
        stack = [c for q in stack for c in q.coeffs_in(v).values()]
    for c in stack:
        if not c.is_zero() and not any(c == o for o in out):
            out.append(c)
    return out


def _assemble(owner: Algebra, ring: Algebra, tv: Poly, p: Poly, integral_rel: Poly, i_s: Ideal, x_var: str,
              t_var: str, n: int, cv: Sequence[str], branches: List[dict],
              kron: Tuple[IntegralityCertificate, ...], chain: SubresultantChain) -> CrucialWitness:
    """a = t^m - y: y = t^m outright when t is in sqrt(I*S), otherwise t^m shifted into R[w][x]."""
    zero = owner.element(0)
    x = Poly.var(x_var)
    rm = radical_member(tv, i_s)
    if rm.ok and rm.exponent is not None:
        m = rm.exponent
        branches.append({"assembly": "t in sqrt(I*S)", "m": m})
        return CrucialWitness(m, owner.element(owner.reduce(tv ** m)), zero, n, (),
                              tuple(Poly.const(0) for _ in range(n)), (), tuple(branches), kron, chain)

    caps = current_caps()
    limit = min(caps.n_search_cap, caps.branch_cap)
    for m in range(1, limit + 1):
        tm = owner.reduce(tv ** m)
        inside = subalg_member(owner.reduce(tm * p), [x], owner=ring)
        branches.append({"m": m, "tp_in_Rx": inside.ok})
        if not inside.ok:
            continue
        rel_m = power_relation(integral_rel, t_var, m)
        sh = shift_cert(owner.element(tm), p, rel_m, x_var, owner=owner, t_var=t_var, coeff_vars=cv)
        w = sh.w.numerator
        ev, tags = _evidence(tm, tm, n, [x, w], ring)
        log.info("crucial_lemma: conductor element at m=%d", m)
        return CrucialWitness(m, zero, owner.element(tm), n, (sh.cert,), ev, tags, tuple(branches), kron, chain)
    raise BranchBlowup(f"no power t^m with m <= {limit} has t^m p(x) in R[x]", branches=branches)


def verify_crucial(w: CrucialWitness, owner: Algebra, x_var: str, t: Poly, i: Ideal,
                   coeff_vars: Optional[Sequence[str]] = None) -> Verdict:
    """Independent re-check of the conductor criterion."""
    cv = tuple(coeff_vars) if coeff_vars is not None else owner.base
    ring = owner if set(owner.base) == set(cv) else owner.with_base(cv)
    tv = owner.poly(t)
    a = w.a.numerator
    if not owner.is_zero(owner.reduce(a - tv ** w.m + w.y.numerator)):
        return Verdict.failed("NotInIdeal", "a differs from t^m - y")
    if not member(w.y.numerator, owner.relations + i.embed(owner.vars)).ok:
        return Verdict.failed("NotInIdeal", f"y = {w.y} is not in I*S")
    for c in w.closure + w.kronecker:
        v = verify_cert(c)
        if not v:
            return v
    gens = [Poly.var(x_var)] + [c.element.numerator for c in w.closure]
    acc = a
    for k in range(w.n):
        mem = subalg_member(owner.reduce(acc), gens, owner=ring)
        if not mem.ok:
            return Verdict.failed("NotInIdeal", f"a*t^({w.m}*{k}) is not in R[x] extended by the certified closure")
        acc = owner.reduce(acc * tv ** w.m)
    return Verdict.passed()
