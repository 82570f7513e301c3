"""
tasks.py — one runner and one checker per task.

A runner computes artifacts (JSON-ready) from a ProblemFile. A checker
rebuilds the algebra, system and expected elements from the problem, reads
only the claims from the artifacts, and returns named verdicts. `execute`
always runs the checker on what the runner produced, and `reverify` runs
it on a saved bundle without recomputing anything.
"""

from __future__ import annotations

import logging
import time
from typing import Any, Callable, Dict, List, Mapping, Optional, Sequence, Tuple

from . import __version__
from .config import EngineCaps, current_caps, use_caps
from .contracts import (CertificateBundle, ProblemFile, algebra_from_json, cert_from_json, mhl_result_from_json,
                        parse_field, parse_fields, problem_from_dict, system_from_json)
from .errors import HypothesisNotSatisfied, ProblemError
from .hensel.monic import MonicizationResult, verify_monicization
from .hensel.reduce import mhl_pipeline, verify_mhl
from .hensel.system import HenselSystem, NewtonState, extend_system, isolate_zero, newton_run, verify_newton_state
from .ideal.algebra import Algebra
from .ideal.groebner import GroebnerBasis, groebner
from .ideal.ideals import Ideal, fresh_var, member, radical_member, same_ideal
from .integrality.certs import Verdict, verify_cert
from .integrality.emmanuel import emmanuel
from .integrality.kronecker import coefficient_ring, content_ideal, kronecker_certs
from .integrality.lying_over import elimination_cert, lying_over_root_cert
from .ring.matrix import PolyMatrix
from .ring.order import MonomialOrder
from .ring.poly import Poly, unify_vars
from .zmt import (GlobalZmtResult, QuasiFiniteWitness, ZmtProblem, ZmtResult, quasi_finite_witness, verify_global,
                  verify_zmt, zmt_accept, zmt_global, zmt_main)

log = logging.getLogger(__name__)

__all__ = ["execute", "reverify", "RUNNERS", "CHECKERS"]

Artifacts = Dict[str, Any]
Verdicts = Dict[str, Verdict]


def _strs(polys: Sequence[Poly]) -> List[str]:
    return [str(p) for p in polys]


def _full_ideal(p: ProblemFile) -> Ideal:
    """base relations + relations + ideal, all in the problem's variables."""
    return Ideal(p.base_relations + p.relations + p.ideal, p.vars)


def _order() -> MonomialOrder:
    return MonomialOrder.named(current_caps().order)


# --- Groebner certificates -------------------------------------------------------

def _gb_artifacts(ideal: Ideal, order: MonomialOrder) -> Artifacts:
    gb = groebner(ideal, order, track=True)
    return {
        "vars": list(gb.vars),
        "order": str(order),
        "generators": _strs(ideal.gens),
        "basis": _strs(gb.basis),
        "basis_cofactors": [_strs(r) for r in gb.reps],
    }


def _s_poly(f: Poly, g: Poly, key) -> Optional[Poly]:
    """S(f, g), or None when the leading monomials are coprime."""
    ef, eg = max(f.terms, key=key), max(g.terms, key=key)
    if not any(a and b for a, b in zip(ef, eg)):
        return None
    lcm = tuple(max(a, b) for a, b in zip(ef, eg))
    mf = Poly.monomial({v: l - e for v, l, e in zip(f.vars, lcm, ef)}, 1 / f.terms[ef], f.vars)
    mg = Poly.monomial({v: l - e for v, l, e in zip(g.vars, lcm, eg)}, 1 / g.terms[eg], g.vars)
    return mf * f - mg * g


def _gb_verdict(a: Mapping[str, Any]) -> Tuple[Verdict, Optional[GroebnerBasis]]:
    """The claimed basis generates the input ideal and passes Buchberger's S-pair test."""
    vs = tuple(a["vars"])
    order = MonomialOrder.named(a.get("order", "degrevlex"))
    gens = parse_fields(a["generators"], vs, "generators", strict=False)
    basis = tuple(p.embed(vs) for p in parse_fields(a["basis"], vs, "basis", strict=False))
    cofactors = a["basis_cofactors"]
    if len(cofactors) != len(basis):
        return Verdict.failed("NotInIdeal", "one cofactor list per basis element is required"), None
    for b, row in zip(basis, cofactors):
        cs = parse_fields(row, vs, "basis_cofactors", strict=False)
        if len(cs) != len(gens):
            return Verdict.failed("NotInIdeal", f"cofactors of {b} do not match the generators"), None
        acc = Poly.const(0, vs)
        for c, g in zip(cs, gens):
            acc = acc + c * g
        if acc != b:
            return Verdict.failed("NotInIdeal", f"basis element {b} is not the claimed combination"), None
    gb = GroebnerBasis(order, vs, basis)
    for g in gens:
        if not gb.reduce(g).is_zero():
            return Verdict.failed("NotInIdeal", f"generator {g} does not reduce to zero"), None
    key = order.key(vs)
    for i in range(len(basis)):
        for j in range(i + 1, len(basis)):
            s = _s_poly(basis[i], basis[j], key)
            if s is not None and not gb.reduce(s).is_zero():
                return Verdict.failed("NotInIdeal", f"S({basis[i]}, {basis[j]}) does not reduce to zero"), None
    return Verdict.passed(f"{len(basis)} elements"), gb


def _ideal_mismatch(claimed: Sequence[Poly], vars: Sequence[str], expected: Ideal, what: str
                    ) -> Optional[Verdict]:
    """The claimed generators must span the ideal the problem poses."""
    if not same_ideal(Ideal(tuple(p.embed(tuple(vars)) for p in claimed), tuple(vars)), expected):
        return Verdict.failed("NotInIdeal", f"{what} generate another ideal than the problem's")
    return None


def _gb_mismatch(a: Mapping[str, Any], expected: Ideal) -> Optional[Verdict]:
    vs = tuple(a["vars"])
    return _ideal_mismatch(parse_fields(a["generators"], vs, "generators", strict=False), vs, expected,
                           "the Groebner generators")


def _poly_mismatch(claimed: Poly, expected: Poly) -> Optional[Verdict]:
    if not (claimed - expected).is_zero():
        return Verdict.failed("NotInIdeal", f"the artifacts test {claimed}, the problem poses {expected}")
    return None


def _first_mismatch(*found: Optional[Verdict]) -> Optional[Verdict]:
    return next((v for v in found if v is not None), None)


def _combination_verdict(target: Poly, gens: Sequence[Poly], cofactors: Sequence[Poly]) -> Verdict:
    acc = Poly.const(0)
    for c, g in zip(cofactors, gens):
        acc = acc + c * g
    if len(cofactors) != len(gens) or acc - target:
        return Verdict.failed("NotInIdeal", f"cofactors do not combine to {target}")
    return Verdict.passed()


# --- gb / member / radical --------------------------------------------------------

def run_gb(p: ProblemFile) -> Tuple[Artifacts, list]:
    return _gb_artifacts(_full_ideal(p), _order()), []


def check_gb(p: ProblemFile, a: Artifacts) -> Verdicts:
    off = _gb_mismatch(a, _full_ideal(p))
    if off is not None:
        return {"groebner": off}
    return {"groebner": _gb_verdict(a)[0]}


def run_member(p: ProblemFile) -> Tuple[Artifacts, list]:
    ideal = _full_ideal(p)
    poly = p.poly("poly")
    m = member(poly, ideal, trace=True, order=_order())
    out: Artifacts = {"poly": str(poly), "member": m.ok, "generators": _strs(ideal.gens)}
    if m.ok:
        out["cofactors"] = _strs(m.cofactors)
    else:
        out["remainder"] = str(m.remainder)
        out["groebner"] = _gb_artifacts(ideal, _order())
    return out, []


def check_member(p: ProblemFile, a: Artifacts) -> Verdicts:
    vs = p.vars
    poly = parse_field(a["poly"], vs, "poly", strict=False)
    gens = parse_fields(a["generators"], vs, "generators", strict=False)
    ideal = _full_ideal(p)
    off = _first_mismatch(_poly_mismatch(poly, p.poly("poly")), _ideal_mismatch(gens, vs, ideal, "the generators"),
                          None if a["member"] else _gb_mismatch(a["groebner"], ideal))
    if off is not None:
        return {"membership": off}
    if a["member"]:
        cs = parse_fields(a["cofactors"], vs, "cofactors", strict=False)
        return {"membership": _combination_verdict(poly, gens, cs)}
    v, gb = _gb_verdict(a["groebner"])
    if gb is None:
        return {"membership": v}
    rem = gb.reduce(poly)
    claimed = parse_field(a["remainder"], vs, "remainder", strict=False)
    if rem.is_zero() or rem != claimed:
        return {"membership": Verdict.failed("NotInIdeal", f"normal form is {rem}, claimed {claimed}")}
    return {"membership": Verdict.passed(f"not a member; remainder {rem}")}


def run_radical(p: ProblemFile) -> Tuple[Artifacts, list]:
    ideal = _full_ideal(p)
    poly = p.poly("poly")
    r = radical_member(poly, ideal)
    out: Artifacts = {"poly": str(poly), "member": r.ok, "exponent": r.exponent, "generators": _strs(ideal.gens)}
    if r.exponent is not None:
        out["cofactors"] = _strs(member(poly ** r.exponent, ideal, trace=True).cofactors)
        return out, []
    t = fresh_var("T_rab", unify_vars(ideal.vars, poly.vars))
    trial = ideal.with_gens(Poly.const(1) - Poly.var(t) * poly).embed((t,))
    out["rabinowitsch"] = t
    if r.ok:
        out["rabinowitsch_generators"] = _strs(trial.gens)
        out["rabinowitsch_cofactors"] = _strs(member(Poly.const(1), trial, trace=True).cofactors)
    else:
        out["groebner"] = _gb_artifacts(trial, _order())
    return out, []


def check_radical(p: ProblemFile, a: Artifacts) -> Verdicts:
    vs = p.vars
    poly = parse_field(a["poly"], vs, "poly", strict=False)
    gens = parse_fields(a["generators"], vs, "generators", strict=False)
    ideal = _full_ideal(p)
    off = _first_mismatch(_poly_mismatch(poly, p.poly("poly")), _ideal_mismatch(gens, vs, ideal, "the generators"))
    if off is not None:
        return {"radical": off}
    if a.get("exponent") is not None:
        cs = parse_fields(a["cofactors"], vs, "cofactors", strict=False)
        return {"radical": _combination_verdict(poly ** int(a["exponent"]), gens, cs)}
    ctx = unify_vars(vs, (a["rabinowitsch"],))
    t = a["rabinowitsch"]
    if t in vs:
        return {"radical": Verdict.failed("NotInIdeal", f"the Rabinowitsch variable {t} is a problem variable")}
    rab = ideal.with_gens(Poly.const(1) - Poly.var(t) * poly).embed(ctx)
    if a["member"]:
        trial = parse_fields(a["rabinowitsch_generators"], ctx, "rabinowitsch_generators", strict=False)
        off = _ideal_mismatch(trial, ctx, rab, "the Rabinowitsch generators")
        if off is not None:
            return {"radical": off}
        cs = parse_fields(a["rabinowitsch_cofactors"], ctx, "rabinowitsch_cofactors", strict=False)
        return {"radical": _combination_verdict(Poly.const(1), trial, cs)}
    off = _gb_mismatch(a["groebner"], rab)
    if off is not None:
        return {"radical": off}
    v, gb = _gb_verdict(a["groebner"])
    if gb is None:
        return {"radical": v}
    if gb.is_unit():
        return {"radical": Verdict.failed("NotInIdeal", "the Rabinowitsch ideal is the unit ideal")}
    return {"radical": Verdict.passed("not in the radical")}


# --- integrality certificates -------------------------------------------------------

def run_integral_cert(p: ProblemFile) -> Tuple[Artifacts, list]:
    method = p.params.get("method", "elimination")
    owner = p.algebra()
    cv = tuple(p.params.get("coeff_vars", owner.base))
    out: Artifacts = {"method": method}
    if method == "kronecker":
        var = p.params.get("var", "X")
        ctx = unify_vars(p.vars, (var,))
        f = parse_field(p.params["f"], ctx, "params.f", strict=False)
        h = parse_field(p.params["h"], ctx, "params.h", strict=False)
        base = p.base_algebra() if p.base_vars else None
        certs = kronecker_certs(f, h, var, base)
    elif method == "emmanuel":
        seq = emmanuel(p.polys("coeffs"), owner.element(p.poly("element")), coeff_vars=cv)
        certs = seq.u_certs + seq.ux_certs
        out["sequence"] = {"coeffs": _strs(seq.coeffs), "u": _strs(seq.u)}
    else:
        x = owner.element(p.poly("element"))
        if method == "lying-over":
            _, cert = lying_over_root_cert(x, p.ideal_in(owner.vars), coeff_vars=cv)
        else:
            cert = elimination_cert(x, coeff_vars=cv)
            if cert is None:
                raise HypothesisNotSatisfied(f"{x} is not integral over Q[{', '.join(cv)}]")
        certs = (cert,)
    out["certs"] = [c.to_json() for c in certs]
    log.info("integral-cert: %d certificates by %s", len(certs), method)
    return out, []


def _bound_cert(blob: Mapping[str, Any], owner: Algebra, element: Poly, coeff_vars: Sequence[str],
                ideal: Optional[Ideal] = None) -> Verdict:
    """
    Check one certificate against the problem: its owner must present the
    problem's algebra, its element must be the expected one, and its
    coefficient ring and ideal may not exceed what the problem names.
    """
    claimed = algebra_from_json(blob["owner"])
    if not claimed.same_ring(owner) or claimed.base != owner.base:
        return Verdict.failed("CoefficientLocation", f"certificate owner over {list(claimed.vars)} is not the "
                                                     f"problem's algebra")
    cert = cert_from_json(blob, owner=owner)
    stray = sorted(set(cert.coeff_vars) - set(coeff_vars))
    if stray:
        return Verdict.failed("CoefficientLocation", f"coefficients over {stray}, outside {list(coeff_vars)}")
    if cert.over_ideal is not None:
        if ideal is None:
            return Verdict.failed("CoefficientLocation", "certificate names an ideal the problem does not")
        wider = [g for g in cert.over_ideal.gens if not member(g, ideal).ok]
        if wider:
            return Verdict.failed("CoefficientLocation", f"certificate ideal has {wider[0]}, outside {ideal}")
    x = cert.element
    if not owner.is_zero(x.numerator - owner.poly(element) * x.denominator):
        return Verdict.failed("Annihilation", f"certificate is for {x}, not {element}")
    return verify_cert(cert)


def _emmanuel_u(coeffs: Sequence[Poly], x: Poly, owner: Algebra) -> List[Poly]:
    """u_j = a_n x^(n-j) + ... + a_j by Horner."""
    u = [Poly.const(0)] * len(coeffs)
    acc = owner.poly(0)
    for j in range(len(coeffs) - 1, -1, -1):
        acc = owner.reduce(acc * x + coeffs[j])
        u[j] = acc
    return u


def check_integral_cert(p: ProblemFile, a: Artifacts) -> Verdicts:
    method = p.params.get("method", "elimination")
    blobs = a["certs"]
    out: Verdicts = {}
    if method == "kronecker":
        var = p.params.get("var", "X")
        ctx = unify_vars(p.vars, (var,))
        f = parse_field(p.params["f"], ctx, "params.f", strict=False)
        h = parse_field(p.params["h"], ctx, "params.h", strict=False)
        ring = coefficient_ring(f, h, var, p.base_algebra() if p.base_vars else None)
        c = content_ideal(h, var, drop_leading_one=h.lc_in(var) == 1).embed(ring.vars)
        fc = f.coeffs_in(var)
        expected = [(ring, fc.get(j, Poly.const(0)).restrict(ring.vars), ring.vars, c)
                    for j in range(f.degree(var))]
    else:
        owner = p.algebra()
        cv = tuple(p.params.get("coeff_vars", owner.base))
        x = owner.poly(p.poly("element"))
        if method == "emmanuel":
            coeffs = [owner.poly(q) for q in p.polys("coeffs")]
            claimed = parse_fields(a["sequence"]["coeffs"], owner.vars, "sequence.coeffs", strict=False)
            us = _emmanuel_u(coeffs, x, owner)
            seq_u = parse_fields(a["sequence"]["u"], owner.vars, "sequence.u", strict=False)
            same = (len(claimed) == len(coeffs) and len(seq_u) == len(us)
                    and all(owner.equal(q, r) for q, r in zip(claimed, coeffs))
                    and all(owner.equal(q, r) for q, r in zip(seq_u, us)))
            if not same:
                out["sequence"] = Verdict.failed("NotInIdeal", "sequence is not the one of the problem's P and x")
            ua = owner.relations + Ideal(tuple(coeffs), owner.vars)
            au = owner.relations + Ideal(tuple(us), owner.vars)
            agree = all(member(u, ua).ok for u in us) and all(member(q, au).ok for q in coeffs)
            out["ideals"] = Verdict.passed() if agree else Verdict.failed("NotInIdeal", "<u> and <a> differ")
            targets = us + [owner.reduce(u * x) for u in us]
            expected = [(owner, t, cv, None) for t in targets]
        else:
            ideal = None
            if method == "lying-over":
                ideal = Ideal(tuple(g.restrict(cv) for g in p.ideal_in(owner.vars).gens), cv)
            expected = [(owner, x, cv, ideal)]
    if len(blobs) != len(expected):
        out["certs"] = Verdict.failed("ResidualShape", f"expected {len(expected)} certificates, got {len(blobs)}")
    for k, (blob, (ring, element, cv, ideal)) in enumerate(zip(blobs, expected)):
        out[f"cert[{k}]"] = _bound_cert(blob, ring, element, cv, ideal)
    return out


# --- ZMT -------------------------------------------------------------------------------

def run_zmt(p: ProblemFile) -> Tuple[Artifacts, list]:
    zp = p.zmt_problem()
    zp.check()
    res = zmt_accept(zp, p.poly("s")) if "s" in p.params else zmt_main(zp)
    return {"problem": zp.to_json(), "result": res.to_json()}, list(res.steps)


def _certs(blobs: Sequence[Mapping[str, Any]]) -> tuple:
    return tuple(cert_from_json(b) for b in blobs)


def check_zmt(p: ProblemFile, a: Artifacts) -> Verdicts:
    owner = p.algebra().unlocalized()
    residual = parse_fields(a["problem"]["residual"], owner.vars, "problem.residual", strict=False)
    zp = ZmtProblem(owner, p.gens, p.ideal_in(), residual)
    out: Verdicts = {}
    try:
        zp.check()
        out["hypotheses"] = Verdict.passed()
    except HypothesisNotSatisfied as exc:
        out["hypotheses"] = Verdict.failed("NotInIdeal", str(exc))
    s = parse_field(a["result"]["s"], owner.vars, "result.s", strict=False)
    res = ZmtResult(owner.element(s), _certs(a["result"]["certs"]))
    out["zmt"] = verify_zmt(zp, res)
    return out


def run_zmt_global(p: ProblemFile) -> Tuple[Artifacts, list]:
    owner = p.algebra().unlocalized()
    w = quasi_finite_witness(owner, p.gens, p.polys("witness"))
    res = zmt_global(owner, p.gens, w)
    return {"witness": w.to_json(), "result": res.to_json()}, []


def check_zmt_global(p: ProblemFile, a: Artifacts) -> Verdicts:
    owner = p.algebra().unlocalized()
    vs = owner.vars
    elements = tuple(owner.poly(e) for e in p.polys("witness"))
    claimed = parse_fields(a["witness"]["elements"], vs, "witness.elements", strict=False)
    data = tuple((tuple(d["inverted"]), _certs(d["certs"])) for d in a["witness"]["data"])
    out: Verdicts = {}
    if len(claimed) != len(elements) or any(not (c - e).is_zero() for c, e in zip(claimed, elements)):
        out["witness"] = Verdict.failed("ResidualShape", "witness elements differ from the problem's")
    else:
        out["witness"] = QuasiFiniteWitness(elements, data).verify(owner, p.gens)
    r = a["result"]
    res = GlobalZmtResult(
        tuple(owner.element(f) for f in parse_fields(r["family"], vs, "result.family", strict=False)),
        parse_fields(r["comaximality"], vs, "result.comaximality", strict=False),
        tuple(_certs(cs) for cs in r["certs"]))
    out["global"] = verify_global(owner, p.gens, res)
    return out


# --- Hensel -------------------------------------------------------------------------

def _problem_system(p: ProblemFile) -> HenselSystem:
    """The problem's Hensel system, moved so that the given point becomes the origin."""
    system = p.hensel_system()
    point = p.point()
    if point is not None and any(point):
        system = system.translate(point)
    return system


def _system_mismatch(claimed: HenselSystem, expected: HenselSystem) -> Optional[str]:
    if not claimed.base.same_ring(expected.base):
        return "base algebra differs from the problem's"
    if not same_ideal(claimed.point_ideal, expected.point_ideal):
        return "M differs from the problem's"
    if claimed.vars != expected.vars:
        return f"unknowns {list(claimed.vars)} differ from {list(expected.vars)}"
    if any(not (f - g).is_zero() for f, g in zip(claimed.eqs, expected.eqs)):
        return "equations differ from the problem's"
    return None


def run_newton(p: ProblemFile) -> Tuple[Artifacts, list]:
    system = _problem_system(p)
    system.check()
    steps = int(p.params.get("steps", 1))
    states = newton_run(system, steps)
    log.info("newton: %d steps, residuals in I^%d", steps, 2 ** steps)
    return {"system": system.to_json(), "steps": steps, "states": [s.to_json() for s in states]}, []


def check_newton(p: ProblemFile, a: Artifacts) -> Verdicts:
    system = _problem_system(p)
    out: Verdicts = {}
    off = _system_mismatch(system_from_json(a["system"]), system)
    if off:
        out["system"] = Verdict.failed("NotInIdeal", off)
    vs = system.base.vars
    for blob in a["states"]:
        point = parse_fields(blob["point"], vs, "state.point", strict=False)
        u = PolyMatrix.from_rows([list(parse_fields(row, vs, "state.U", strict=False)) for row in blob["U"]])
        st = NewtonState(tuple(x.embed(vs) for x in point), u, int(blob["k"]))
        out[f"state[{st.k}]"] = verify_newton_state(system, st)
    return out


def run_mhl(p: ProblemFile) -> Tuple[Artifacts, list]:
    run = mhl_pipeline(p.hensel_system(), p.point())
    return run.to_json(), list(run.reduced.trace)


def _monicization_from_json(d: Mapping[str, Any], vs: Sequence[str]) -> MonicizationResult:
    ctx = unify_vars(vs, (d["var"],))

    def q(key: str) -> Poly:
        return parse_field(d[key], ctx, f"monicized.{key}", strict=False)

    return MonicizationResult(q("f"), d["var"], int(d["n"]), q("a0"), q("a1"), q("g_numerator"),
                              q("g_denominator"), q("b0"), q("b1"))


def check_mhl(p: ProblemFile, a: Artifacts) -> Verdicts:
    system = _problem_system(p)
    plain = system.plain_algebra()
    full = plain.relations + system.point_ideal.embed(plain.vars)
    work = system
    if any(not member(Poly.var(x), full).ok for x in system.vars):
        work = extend_system(system, isolate_zero(system))
    out: Verdicts = {}
    for key, want in (("system", system), ("reduced_system", work)):
        off = _system_mismatch(system_from_json(a[key]), want)
        if off:
            out[key] = Verdict.failed("NotInIdeal", off)
    result = mhl_result_from_json(a["mhl"], work)
    out["mhl"] = verify_mhl(result)
    if a.get("zmt"):
        owner = work.plain_algebra()
        zp = ZmtProblem(owner, work.vars, work.point_ideal, tuple(Poly.var(x) for x in work.vars))
        s = parse_field(a["zmt"]["s"], owner.vars, "zmt.s", strict=False)
        out["zmt"] = verify_zmt(zp, ZmtResult(owner.element(s), _certs(a["zmt"]["certs"])))
    if system.n == 1 and system.eqs[0].lc_in(system.vars[0]) != 1:
        if not a.get("monicized"):
            out["monicization"] = Verdict.failed("NotMonic", "the equation is not monic and no monicization was given")
        else:
            r = _monicization_from_json(a["monicized"], system.base.vars)
            if r.var != system.vars[0] or not (r.f - system.eqs[0]).is_zero():
                out["monicization"] = Verdict.failed("RecoveryIdentity", "monicization of a different equation")
            else:
                out["monicization"] = verify_monicization(r, system.base, system.point_ideal)
    return out


RUNNERS: Dict[str, Callable[[ProblemFile], Tuple[Artifacts, list]]] = {
    "gb": run_gb,
    "member": run_member,
    "radical": run_radical,
    "integral-cert": run_integral_cert,
    "zmt": run_zmt,
    "zmt-global": run_zmt_global,
    "newton": run_newton,
    "mhl": run_mhl,
}

CHECKERS: Dict[str, Callable[[ProblemFile, Artifacts], Verdicts]] = {
    "gb": check_gb,
    "member": check_member,
    "radical": check_radical,
    "integral-cert": check_integral_cert,
    "zmt": check_zmt,
    "zmt-global": check_zmt_global,
    "newton": check_newton,
    "mhl": check_mhl,
}


# --- entry points ---------------------------------------------------------------------

def execute(p: ProblemFile, caps: EngineCaps, problem_sha256: str = "") -> CertificateBundle:
    """Run the task, then its checker on the emitted artifacts."""
    with use_caps(caps):
        t0 = time.perf_counter()
        artifacts, trace = RUNNERS[p.task](p)
        t1 = time.perf_counter()
        verdicts = CHECKERS[p.task](p, artifacts)
        t2 = time.perf_counter()
    log.info("%s: computed in %.3fs, verified in %.3fs", p.task, t1 - t0, t2 - t1)
    return CertificateBundle(
        task=p.task,
        engine_version=__version__,
        problem=p.to_dict(),
        problem_sha256=problem_sha256,
        options=caps.as_dict(),
        artifacts=artifacts,
        verdicts={k: v.to_json() for k, v in verdicts.items()},
        timing={"compute_s": round(t1 - t0, 6), "verify_s": round(t2 - t1, 6)},
        trace=trace if caps.trace else [],
    )


def reverify(bundle: CertificateBundle, caps: EngineCaps) -> Verdicts:
    """Re-check a saved bundle's artifacts; nothing is recomputed."""
    if bundle.error is not None:
        raise ProblemError(f"bundle records a failed run ({bundle.error.get('reason')}); nothing to verify")
    p = problem_from_dict(bundle.problem, bundle.task)
    try:
        with use_caps(caps):
            return CHECKERS[p.task](p, bundle.artifacts)
    except (KeyError, TypeError) as exc:
        raise ProblemError(f"bundle artifacts for task {p.task!r} are malformed: {exc!r}") from None
