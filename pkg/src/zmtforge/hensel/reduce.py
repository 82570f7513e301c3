"""
reduce.py — the Multivariate Hensel Lemma: from s in 1 + M*B with s, s x_i
integral over A to one Hensel polynomial h with h(s) = 0 and x_i = nu_i(s)/q(s),
then back to a zero of the original system over A[t]/<h(t)>.

Module route: with m_0 = 1, m_1, ..., m_l monomials in the s x_i and
s^r0 m_j = sum_i mu_ij(s) m_i (mu_ij in M*A[T], deg < r0), put
d(T) = det(T^r0 I - M(T)); Cramer gives d(s) m_j = nu_j(s), so q = T d(T).
Then s^q d(s) (s - 1) = mu(s) in M*A[s] and h = T^q d(T) (T - 1) - mu(T).

Trace route: h is the monic of s itself, each s x_i is a polynomial in s,
and the trace form of A[T]/h gives h'(s) s x_i = nu_i(s), so q = T h'(T).
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field, replace
from typing import Iterator, List, Optional, Sequence, Tuple

from ..config import current_caps
from ..errors import (ExponentCapExceeded, HypothesisNotSatisfied, MhlReductionFailed, ZeroCheckFailed,
                      ZmtforgeError)
from ..ideal.algebra import Algebra, Element, LocalAt, subalg_member
from ..ideal.ideals import Ideal, fresh_var, member
from ..integrality.certs import IntegralityCertificate, Verdict
from ..integrality.lying_over import solve_combination
from ..integrality.tower import Carrier, Tower
from ..ring.matrix import PolyMatrix, det_ff
from ..ring.poly import Poly, as_poly, unify_vars
from ..zmt import ZmtProblem, ZmtResult, zmt_main
from .monic import MonicizationResult, monicize
from .system import HenselSystem, IsolationData, extend_system, isolate_zero

log = logging.getLogger(__name__)

__all__ = [
    "MhlResult", "TransportedZero", "MhlRun",
    "normalize_sign", "residual_shape", "mhl_reduce", "transport_zero", "unique_zero_check",
    "verify_mhl", "verify_hensel_polynomial", "mhl_pipeline",
]


@dataclass(frozen=True)
class MhlResult:
    system: HenselSystem
    s: Element
    s_expr: str
    module_gens: Tuple[Poly, ...]
    r0: int
    q_exp: int
    d: Poly
    h: Poly
    f: Poly                             # h(1 + T)
    nu: Tuple[Poly, ...]
    q_poly: Poly
    route: str                          # module | trace
    var: str = "T"
    zmt: Optional[ZmtResult] = field(default=None, compare=False)
    trace: Tuple[dict, ...] = field(default=(), compare=False)

    @property
    def owner(self) -> Algebra:
        return self.s.owner

    def to_json(self) -> dict:
        out = {
            "route": self.route,
            "s": str(self.s),
            "s_expr": self.s_expr,
            "var": self.var,
            "module_gens": [str(m) for m in self.module_gens],
            "r0": self.r0,
            "q_exp": self.q_exp,
            "d": str(self.d),
            "h": str(self.h),
            "f": str(self.f),
            "nu": [str(v) for v in self.nu],
            "q": str(self.q_poly),
            "x_recovery": [f"{x} = ({v})/({self.q_poly}) at {self.var} = s"
                           for x, v in zip(self.system.vars, self.nu)],
        }
        if self.trace:
            out["trace"] = list(self.trace)
        return out


@dataclass(frozen=True)
class TransportedZero:
    owner: Algebra                      # A[X]/<f(X)> localized at 1 + M + X
    var: str
    zeros: Tuple[Element, ...]

    def to_json(self) -> dict:
        return {"algebra": self.owner.to_json(), "var": self.var, "zeros": [str(z) for z in self.zeros]}


# --- shared checks -------------------------------------------------------------

def normalize_sign(p: Poly, var: str) -> Poly:
    """Negate p when its leading coefficient in var is -1."""
    return -p if p.lc_in(var) == -1 else p


def _point_ideal(system: HenselSystem) -> Ideal:
    return system.base.relations + system.point_ideal.embed(system.base.vars)


def residual_shape(h: Poly, var: str, full: Ideal) -> Optional[str]:
    """None when h = T^(n-1) (T - 1) modulo full, coefficient by coefficient; else the first mismatch."""
    coeffs = h.coeffs_in(var)
    if not coeffs:
        return "zero polynomial"
    n = max(coeffs)
    t = Poly.var(var)
    target = (t ** (n - 1) * (t - 1)).coeffs_in(var) if n >= 1 else {0: Poly.const(1)}
    for k in range(n + 1):
        diff = coeffs.get(k, Poly.const(0)) - target.get(k, Poly.const(0))
        if diff and not member(diff.restrict(diff.used_vars()), full).ok:
            return f"coefficient of {var}^{k} is {coeffs.get(k, 0)}, not {target.get(k, 0)} modulo M"
    return None


def _slope_at_one(h: Poly, var: str, full: Ideal) -> bool:
    slope = h.derivative(var).substitute({var: 1}, strict=False) - 1
    return not slope or member(slope, full).ok


def _at_s(owner: Algebra, p: Poly, var: str, s: Poly) -> Poly:
    return owner.evaluate_at(p, var, owner.poly(s))


# --- module route ---------------------------------------------------------------

def _exponent_sets(bounds: Sequence[int], cap: int) -> Iterator[List[Tuple[int, ...]]]:
    """Monomial exponents in the s x_i graded by total degree, at most cap of them."""
    n = len(bounds)
    chosen = [tuple([0] * n)]
    top = sum(b - 1 for b in bounds)
    for total in range(1, top + 1):
        new = [e for e in itertools.product(*[range(b) for b in bounds]) if sum(e) == total]
        if len(chosen) + len(new) > cap:
            return
        chosen = chosen + sorted(new, reverse=True)
        yield list(chosen)
    if n == 0:
        yield chosen


def _mu(coeffs: Sequence[Poly], labels: Sequence[Tuple[Poly, int]], tv: str) -> Poly:
    acc = Poly.const(0)
    t = Poly.var(tv)
    for c, (g, k) in zip(coeffs, labels):
        if c:
            acc = acc + c * g * t ** k
    return acc


def _module_route(system: HenselSystem, owner: Algebra, s: Poly, certs: Sequence[IntegralityCertificate],
                  tv: str, records: List[dict]) -> Optional[MhlResult]:
    caps = current_caps()
    cv = system.base.vars
    m_gens = [owner.poly(g) for g in system.point_ideal.gens]
    sigmas = [owner.reduce(s * Poly.var(x)) for x in system.vars]
    bounds = [max(c.degree, 2) for c in certs[1:]]
    powers = [Poly.const(1)]

    def s_pow(k: int) -> Poly:
        while len(powers) <= k:
            powers.append(owner.reduce(powers[-1] * s))
        return powers[k]

    for exps in _exponent_sets(bounds, caps.module_route_cap):
        gens = []
        for e in exps:
            m = Poly.const(1)
            for sig, k in zip(sigmas, e):
                if k:
                    m = m * sig ** k
            gens.append(owner.reduce(m))
        size = len(gens) - 1
        unit_pos = [exps.index(tuple(int(i == j) for i in range(len(sigmas)))) for j in range(len(sigmas))]
        for r0 in (range(1, caps.exp_cap + 1) if size else [0]):
            labels = [(g, k, i) for i in range(size + 1) for g in m_gens for k in range(r0)]
            span = [owner.reduce(g * s_pow(k) * gens[i]) for g, k, i in labels]
            mu = [[Poly.const(0)] * (size + 1) for _ in range(size + 1)]
            ok = True
            for j in range(1, size + 1):
                sol = solve_combination(owner.reduce(s_pow(r0) * gens[j]), span, owner, cv)
                if sol is None:
                    ok = False
                    break
                for i in range(size + 1):
                    pick = [(c, (g, k)) for c, (g, k, ii) in zip(sol, labels) if ii == i]
                    mu[i][j] = _mu([c for c, _ in pick], [lab for _, lab in pick], tv)
            if not ok:
                continue
            t = Poly.var(tv)
            a = PolyMatrix.from_rows([[(t ** r0 if i == j else Poly.const(0)) - mu[i][j]
                                       for i in range(1, size + 1)] for j in range(1, size + 1)])
            d = det_ff(a) if size else Poly.const(1)
            rhs = [mu[0][j] for j in range(1, size + 1)]
            nus = []
            for p in unit_pos:
                nus.append(det_ff(a.with_column(p - 1, rhs)))
            q_poly = t * d
            records.append({"stage": "module", "gens": len(gens), "r0": r0,
                            "mu": [[str(x) for x in row] for row in mu], "d": str(d)})
            log.debug("mhl_reduce: r0 = %d over %d module generators", r0, len(gens))
            h, q_exp = _close(owner, s, d, tv, m_gens, cv, s_pow, records)
            return _result(system, owner, s, tuple(gens), r0 if size else 0, q_exp, d, h,
                           tuple(nus), q_poly, "module", tv, records)
    return None


def _close(owner: Algebra, s: Poly, d: Poly, tv: str, m_gens: Sequence[Poly], cv: Sequence[str],
           s_pow, records: List[dict]) -> Tuple[Poly, int]:
    """Least q with s^q d(s) (s - 1) in M*A[s] (degree < deg d + q + 1); returns h and q."""
    t = Poly.var(tv)
    base_val = owner.reduce(_at_s(owner, d, tv, s) * (s - 1))
    n = d.degree(tv)
    for q in range(current_caps().exp_cap + 1):
        target = owner.reduce(s_pow(q) * base_val)
        labels = [(g, k) for g in m_gens for k in range(n + q + 1)]
        span = [owner.reduce(g * s_pow(k)) for g, k in labels]
        sol = solve_combination(target, span, owner, cv) if target else tuple(Poly.const(0) for _ in labels)
        if sol is not None:
            mu = _mu(sol, labels, tv)
            records.append({"stage": "close", "q": q, "mu": str(mu)})
            return t ** q * d * (t - 1) - mu, q
    raise ExponentCapExceeded(f"no q <= {current_caps().exp_cap} puts s^q d(s)(s-1) in M*A[s]")


# --- trace route ------------------------------------------------------------------

def _trace_route(system: HenselSystem, owner: Algebra, s: Poly, cert_s: IntegralityCertificate, tv: str,
                 records: List[dict]) -> MhlResult:
    h = normalize_sign(cert_s.monic.rename({cert_s.var: tv}) if cert_s.var != tv else cert_s.monic, tv)
    shape = residual_shape(h, tv, _point_ideal(system))
    if shape is not None:
        raise MhlReductionFailed(f"trace route: the monic of s is not residually T^N(T-1): {shape}")
    c = fresh_var("c", set(owner.vars) | {tv})
    tower = Tower(owner, system.base.vars, (Carrier(c, s, h.rename({tv: c}), "MhlTrace"),))
    if tower.check_carriers() is not None:
        raise MhlReductionFailed("trace route: s does not satisfy its own monic")
    coeffs = h.coeffs_in(tv)
    n = max(coeffs)
    t = Poly.var(tv)
    nus = []
    for x in system.vars:
        sigma = owner.reduce(s * Poly.var(x))
        mem = subalg_member(sigma, [s], owner)
        if not mem.ok:
            raise MhlReductionFailed(f"trace route: s*{x} is not a polynomial in s over A")
        p = mem.witness.rename({mem.tags[0]: c}) if mem.tags and mem.tags[0] in mem.witness.vars else mem.witness
        traces = [tower.trace(p * Poly.var(c) ** j) for j in range(n)]
        nu = Poly.const(0)
        for j in range(n):
            for k in range(j + 1, n + 1):
                ck = coeffs.get(k)
                if ck is not None and traces[j]:
                    nu = nu + traces[j] * ck * t ** (k - j - 1)
        nus.append(nu)
    d = h.derivative(tv)
    records.append({"stage": "trace", "h": str(h), "nu": [str(v) for v in nus]})
    return _result(system, owner, s, (Poly.const(1), s), 0, 0, d, h, tuple(nus), t * d, "trace", tv, records)


# --- assembly ---------------------------------------------------------------------

def _result(system, owner, s, gens, r0, q_exp, d, h, nus, q_poly, route, tv, records) -> MhlResult:
    f = h.substitute({tv: Poly.var(tv) + 1}, strict=False)
    return MhlResult(system, owner.element(s), f"s = {s}", tuple(gens), r0, q_exp, d, h, f, tuple(nus),
                     q_poly, route, tv, None, tuple(records))


def mhl_reduce(system: HenselSystem, zmt_result: ZmtResult) -> MhlResult:
    """One Hensel polynomial for the system, from a certified s (every x_i must lie in M*B)."""
    owner = zmt_result.s.owner
    full = owner.relations + system.point_ideal.embed(owner.vars)
    for x in system.vars:
        if not member(Poly.var(x), full).ok:
            raise HypothesisNotSatisfied(f"{x} is not in M*B; extend the system first")
    s = owner.reduce(zmt_result.s.numerator)
    tv = fresh_var("T", owner.vars)
    records: List[dict] = []
    res = None
    if len(system.vars) + 1 <= current_caps().module_route_cap:
        res = _module_route(system, owner, s, zmt_result.certs, tv, records)
    if res is None:
        log.info("mhl_reduce: module route unavailable, using the trace route")
        res = _trace_route(system, owner, s, zmt_result.certs[0], tv, records)
    res = replace(res, zmt=zmt_result)
    v = verify_mhl(res)
    if not v.ok:
        raise MhlReductionFailed(f"{res.route} route result failed re-verification: {v.reason} {v.detail}",
                                 reason=v.reason)
    log.info("mhl_reduce: %s route, deg h = %d", res.route, res.h.degree(tv))
    return res


# --- transport --------------------------------------------------------------------

def _cleared(f: Poly, xs: Sequence[str], nums: Sequence[Poly], den: Poly, owner: Algebra) -> Poly:
    """q^D f(nu_1/q, ..., nu_n/q), D the total degree of f in the unknowns."""
    f = f.embed(xs)
    idx = [f.vars.index(x) for x in xs]
    degs = [sum(e[i] for i in idx) for e, _ in f.items()]
    top = max(degs, default=0)
    acc = Poly.const(0)
    for (e, c), k in zip(f.items(), degs):
        rest = {v: e[j] for j, v in enumerate(f.vars) if v not in xs and e[j]}
        term = Poly.monomial(rest, c)
        for num, i in zip(nums, idx):
            if e[i]:
                term = term * num ** e[i]
        acc = acc + term * den ** (top - k)
    return owner.reduce(owner.poly(acc))


def _transport_owner(result: MhlResult) -> Tuple[Algebra, str, Poly]:
    system = result.system
    taken = set(system.base.vars) | set(system.vars)
    xv = fresh_var("X", taken | {result.var})
    f = result.f.rename({result.var: xv})
    local = LocalAt.one_plus(tuple(system.point_ideal.gens) + (Poly.var(xv),))
    vs = unify_vars(system.base.vars, (xv,))
    owner = Algebra(vs, system.base.relations.embed(vs).with_gens(f), local, system.base.vars)
    return owner, xv, Poly.var(xv) + 1


def _zero_residues(result: MhlResult) -> Tuple[TransportedZero, List[Tuple[Poly, Poly]]]:
    owner, xv, t = _transport_owner(result)
    q_t = owner.reduce(result.q_poly.substitute({result.var: t}, strict=False))
    nums = [owner.reduce(v.substitute({result.var: t}, strict=False)) for v in result.nu]
    zeros = tuple(owner.element(nm, q_t) for nm in nums)
    residues = [(f, _cleared(f, result.system.vars, nums, q_t, owner)) for f in result.system.eqs]
    return TransportedZero(owner, xv, zeros), residues


def transport_zero(result: MhlResult) -> TransportedZero:
    """z_i = nu_i(t)/q(t) with t = 1 + X over A[X]/<f(X)>, checked to be a zero of every equation."""
    zero, residues = _zero_residues(result)
    for f, r in residues:
        if not zero.owner.is_zero(r):
            raise ZeroCheckFailed(f"transported point is not a zero of {f}: residue {r}")
    log.info("transport_zero: %d coordinates verified", len(zero.zeros))
    return zero


def unique_zero_check(z: TransportedZero, other: TransportedZero) -> Verdict:
    """Both zeros agree coordinate by coordinate in the localized quotient."""
    if z.owner != other.owner or len(z.zeros) != len(other.zeros):
        return Verdict.failed("ZeroTransport", "zeros live in different algebras")
    for k, (a, b) in enumerate(zip(z.zeros, other.zeros)):
        diff = a.numerator * b.denominator - b.numerator * a.denominator
        if not z.owner.is_zero(z.owner.reduce(diff)):
            return Verdict.failed("ZeroTransport", f"coordinate {k} differs")
    return Verdict.passed()


# --- verification -----------------------------------------------------------------

def verify_hensel_polynomial(system: HenselSystem, s: Poly, h: Poly, var: str = "T") -> Verdict:
    """h (sign-normalized) is monic, residually T^(n-1)(T-1), with h(s) = 0 in the localized B."""
    h = normalize_sign(as_poly(h), var)
    coeffs = h.coeffs_in(var)
    if not coeffs or max(coeffs) < 1 or coeffs[max(coeffs)] != 1:
        return Verdict.failed("NotMonic", f"leading coefficient {h.lc_in(var)}")
    full = _point_ideal(system)
    shape = residual_shape(h, var, full)
    if shape is not None:
        return Verdict.failed("ResidualShape", shape)
    if not _slope_at_one(h, var, full):
        return Verdict.failed("SlopeAtOne", "h'(1) is not in 1 + M")
    b = system.algebra()
    if not b.is_zero(_at_s(b, h, var, s)):
        return Verdict.failed("Annihilation", "h(s) is not zero in B")
    return Verdict.passed()


def verify_mhl(result: MhlResult, zero: Optional[TransportedZero] = None) -> Verdict:
    """Re-check every invariant of an MhlResult and of the transported zero."""
    tv = result.var
    s = result.s.numerator
    v = verify_hensel_polynomial(result.system, s, result.h, tv)
    if not v.ok:
        return v
    if result.f != result.h.substitute({tv: Poly.var(tv) + 1}, strict=False):
        return Verdict.failed("ResidualShape", "f is not h(1 + T)")
    full = _point_ideal(result.system)
    q = result.q_poly
    q_one = q.substitute({tv: 1}, strict=False) - 1
    if q_one and not member(q_one, full).ok:
        return Verdict.failed("ResidualShape", f"q(1) is not in 1 + M for q = {q}")
    b = result.system.algebra()
    q_s = _at_s(b, q, tv, s)
    for x, nu in zip(result.system.vars, result.nu):
        if not b.is_zero(b.reduce(q_s * Poly.var(x) - _at_s(b, nu, tv, s))):
            return Verdict.failed("RecoveryIdentity", f"q(s)*{x} != nu(s) for {x}")
    try:
        found, residues = _zero_residues(result)
    except ZmtforgeError as exc:
        return Verdict.failed("ZeroTransport", str(exc))
    for f, r in residues:
        if not found.owner.is_zero(r):
            return Verdict.failed("ZeroTransport", f"transported point is not a zero of {f}")
    if zero is not None:
        same = unique_zero_check(found, zero)
        if not same.ok:
            return same
    return Verdict.passed()


# --- pipeline ---------------------------------------------------------------------

@dataclass(frozen=True)
class MhlRun:
    system: HenselSystem                # after translation to the origin
    isolation: IsolationData
    extended: bool
    reduced: MhlResult
    zero: TransportedZero
    monicized: Optional[MonicizationResult] = None
    verdict: Verdict = field(default_factory=Verdict.passed)
    point: Tuple = ()

    def to_json(self) -> dict:
        out = {
            "system": self.system.to_json(),
            "isolation": self.isolation.to_json(),
            "extended": self.extended,
            "reduced_system": self.reduced.system.to_json(),
            "zmt": self.reduced.zmt.to_json() if self.reduced.zmt is not None else None,
            "mhl": self.reduced.to_json(),
            "zero": self.zero.to_json(),
            "verdict": self.verdict.to_json(),
            "point": [str(c) for c in self.point],
        }
        if self.monicized is not None:
            out["monicized"] = self.monicized.to_json()
        return out


def mhl_pipeline(system: HenselSystem, point: Optional[Sequence] = None) -> MhlRun:
    """isolate -> extend (when needed) -> ZMT -> reduce -> monicize (n = 1) -> transport -> verify."""
    if point is not None and any(point):
        system = system.translate(point)
    system.check()
    iso = isolate_zero(system)
    plain = system.plain_algebra()
    full = plain.relations + system.point_ideal.embed(plain.vars)
    extended = any(not member(Poly.var(x), full).ok for x in system.vars)
    work = extend_system(system, iso) if extended else system

    problem = ZmtProblem(work.plain_algebra(), work.vars, work.point_ideal,
                         tuple(Poly.var(x) for x in work.vars))
    zres = zmt_main(problem)
    reduced = mhl_reduce(work, zres)

    monic = None
    if system.n == 1 and system.eqs[0].lc_in(system.vars[0]) != 1:
        monic = monicize(system.eqs[0], system.vars[0], system.base, system.point_ideal)

    zero = transport_zero(reduced)
    verdict = verify_mhl(reduced, zero)
    if not verdict.ok:
        raise MhlReductionFailed(f"pipeline result failed re-verification: {verdict.reason} {verdict.detail}",
                                 reason=verdict.reason)
    log.info("mhl_pipeline: %d unknowns%s, h of degree %d", system.n, " (extended)" if extended else "",
             reduced.h.degree(reduced.var))
    return MhlRun(system, iso, extended, reduced, zero, monic, verdict, tuple(point or ()))
