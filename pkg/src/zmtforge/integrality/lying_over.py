"""
lying_over.py — the concrete Lying Over algorithm and the supporting
degree-bounded linear solves.

If x^n = sum a_k s_k with a_k in I, and 1 = m_0, m_1, ..., m_l generate
R[s_1, ..., s_p] as an R-module, multiplication by x^n has a matrix with
entries in I; its characteristic polynomial is a monic with non-leading
coefficients in I that kills x^n.
"""

from __future__ import annotations

import itertools
import logging
from typing import Dict, List, Optional, Sequence, Tuple

from ..config import current_caps
from ..errors import (ExponentCapExceeded, HypothesisNotSatisfied, ModuleGensInsufficient,
                      WitnessSearchExhausted)
from ..ideal.algebra import Algebra, Element
from ..ideal.groebner import groebner
from ..ideal.ideals import Ideal, fresh_var, radical_member
from ..ring.matrix import PolyMatrix, char_poly
from ..ring.order import MonomialOrder
from ..ring.poly import Poly, as_poly
from ..ring.linsolve import solve_rational
from .certs import IntegralityCertificate

log = logging.getLogger(__name__)

__all__ = [
    "solve_combination", "standard_module_gens", "lying_over_cert", "lying_over_root_cert",
    "lying_over_unit", "elimination_cert",
]


def _degree_schedule(cap: int) -> List[int]:
    out, d = [0, 1], 2
    while d < cap:
        out.append(d)
        d *= 2
    out.append(cap)
    return sorted(set(x for x in out if x <= cap))


def _monomials(vars: Sequence[str], degree: int) -> List[Poly]:
    out = []
    for total in range(degree + 1):
        for combo in itertools.combinations_with_replacement(vars, total):
            powers: Dict[str, int] = {}
            for v in combo:
                powers[v] = powers.get(v, 0) + 1
            out.append(Poly.monomial(powers))
    return out


def solve_combination(target: Poly, gens: Sequence[Poly], owner: Algebra, coeff_vars: Sequence[str],
                      ideal: Optional[Ideal] = None, max_degree: Optional[int] = None
                      ) -> Optional[Tuple[Poly, ...]]:
    """
    Coefficients c_j in Q[coeff_vars] with target - sum c_j gens_j in rel (+ ideal),
    searching coefficient degrees 0, 1, 2, 4, ... up to the solve cap.
    """
    full = owner.relations if ideal is None else owner.relations + ideal
    gb = groebner(full)
    cap = current_caps().solve_degree_cap if max_degree is None else max_degree
    rhs_nf = gb.reduce(owner.poly(target))
    for deg in _degree_schedule(cap):
        monos = _monomials(tuple(coeff_vars), deg)
        unknowns = [(j, k) for j in range(len(gens)) for k in range(len(monos))]
        columns = {}
        for j, g in enumerate(gens):
            for k, m in enumerate(monos):
                columns[(j, k)] = gb.reduce(owner.poly(g) * m)
        rows: Dict[Tuple[int, ...], Dict] = {}
        for u, nf in columns.items():
            for e, c in nf.embed(owner.vars).items():
                rows.setdefault(e, {})[u] = c
        rhs_terms = dict(rhs_nf.embed(owner.vars).items())
        keys = sorted(set(rows) | set(rhs_terms))
        sol = solve_rational([rows.get(e, {}) for e in keys], [rhs_terms.get(e, 0) for e in keys], unknowns)
        if sol is not None:
            out = []
            for j in range(len(gens)):
                acc = Poly.const(0)
                for k, m in enumerate(monos):
                    if sol[(j, k)]:
                        acc = acc + m * sol[(j, k)]
                out.append(acc)
            log.debug("solve_combination: solved at coefficient degree %d", deg)
            return tuple(out)
    return None


def standard_module_gens(owner: Algebra) -> Tuple[Poly, ...]:
    """
    Standard monomials in the generator variables, a module basis of the owner
    over its base when every generator has a pure-power leading term.
    """
    gens = owner.gens
    if not gens:
        return (Poly.const(1, owner.vars),)
    gb = groebner(owner.relations, MonomialOrder.elimination(gens, owner.base))
    if gb.is_unit():
        return (Poly.const(1, owner.vars),)
    pos = [owner.vars.index(v) for v in gens]
    base_pos = [i for i in range(len(owner.vars)) if i not in pos]
    lms = [lm for lm in gb.leading_monomials() if all(lm[i] == 0 for i in base_pos)]
    bounds = []
    for i in pos:
        pure = [lm[i] for lm in lms if all(lm[j] == 0 for j in pos if j != i) and lm[i] > 0]
        if not pure:
            raise ModuleGensInsufficient(
                f"{owner.vars[i]} has no monic relation over the base; pass module generators explicitly")
        bounds.append(min(pure))
    out = []
    for exps in itertools.product(*[range(b) for b in bounds]):
        e = [0] * len(owner.vars)
        for i, k in zip(pos, exps):
            e[i] = k
        if any(all(e[j] >= lm[j] for j in range(len(e))) for lm in lms):
            continue
        out.append(Poly(owner.vars, {tuple(e): 1}))
    return tuple(out)


def _radical_exponent(x: Poly, full: Ideal) -> Tuple[int, Tuple[Poly, ...]]:
    gb = groebner(full, track=True)
    cap = current_caps().exp_cap
    acc = Poly.const(1)
    for k in range(1, cap + 1):
        acc = gb.reduce(acc * x)
        if acc.is_zero():
            cof = gb.lift(x ** k)
            return k, cof
    if radical_member(x, full).ok:
        raise ExponentCapExceeded(f"{x} is in the radical but no exponent <= {cap} was found")
    raise HypothesisNotSatisfied(f"{x} is not in the radical of {full}")


def lying_over_cert(x: "Element | Poly", i: Ideal, module_gens: Optional[Sequence[Poly]] = None,
                    owner: Optional[Algebra] = None, coeff_vars: Optional[Sequence[str]] = None,
                    var: str = "T") -> IntegralityCertificate:
    """Certificate for x^n (n the least exponent with x^n in i*S) over the ideal i."""
    return _lying_over(x, i, module_gens, owner, coeff_vars, var)[1]


def _lying_over(x, i, module_gens, owner, coeff_vars, var) -> Tuple[int, IntegralityCertificate]:
    if isinstance(x, Element):
        owner = x.owner
        x = x.numerator
    if owner is None:
        raise ValueError("lying_over_cert needs an owner algebra")
    cv = tuple(coeff_vars) if coeff_vars is not None else owner.base
    i = i.embed(owner.vars)
    nrel = len(owner.relations.gens)
    full = Ideal(owner.relations.gens + i.gens, owner.vars)
    n, cof = _radical_exponent(owner.poly(x), full)
    ideal_cof = cof[nrel:]
    gens = tuple(owner.poly(g) for g in (module_gens if module_gens is not None else standard_module_gens(owner)))
    if not any(g == 1 for g in gens):
        gens = (Poly.const(1, owner.vars),) + gens
    size = len(gens)
    zero = Poly.const(0)
    m = [[zero] * size for _ in range(size)]
    for a_k, s_k in zip(i.gens, ideal_cof):
        if owner.reduce(s_k).is_zero():
            continue
        for j, g in enumerate(gens):
            coeffs = solve_combination(s_k * g, gens, owner, cv)
            if coeffs is None:
                raise ModuleGensInsufficient(f"cannot express ({s_k})*({g}) on the module generators")
            for l, c in enumerate(coeffs):
                if c:
                    m[l][j] = m[l][j] + a_k * c
    monic = char_poly(PolyMatrix.from_rows(m), var) if size else Poly.var(var)
    log.info("lying_over_cert: exponent %d, %d module generators", n, size)
    ideal_cv = Ideal(tuple(g.restrict(cv) for g in i.gens), cv)
    return n, IntegralityCertificate(owner.element(owner.reduce(owner.poly(x) ** n)), monic, var, cv, ideal_cv,
                                     ("LyingOver",))


def lying_over_root_cert(x: "Element | Poly", i: Ideal, module_gens: Optional[Sequence[Poly]] = None,
                         owner: Optional[Algebra] = None, coeff_vars: Optional[Sequence[str]] = None,
                         var: str = "T") -> Tuple[int, IntegralityCertificate]:
    """P(T^n) for x itself, together with n."""
    if isinstance(x, Element):
        owner, x = x.owner, x.numerator
    n, cert = _lying_over(x, i, module_gens, owner, coeff_vars, var)
    monic = cert.monic.substitute({var: Poly.var(var) ** n})
    return n, IntegralityCertificate(owner.element(x), monic, var, cert.coeff_vars, cert.over_ideal,
                                     ("LyingOver",))


def lying_over_unit(bs: Sequence["Element | Poly"], owner: Optional[Algebra] = None,
                    coeff_vars: Optional[Sequence[str]] = None, ideal: Optional[Ideal] = None
                    ) -> Tuple[Poly, ...]:
    """g_j over the coefficient ring with 1 = sum g_j b_j (modulo ideal, when given)."""
    polys = []
    for b in bs:
        if isinstance(b, Element):
            owner = b.owner
            b = b.numerator
        polys.append(b)
    if owner is None:
        raise ValueError("lying_over_unit needs an owner algebra")
    cv = tuple(coeff_vars) if coeff_vars is not None else owner.base
    gs = solve_combination(Poly.const(1), [owner.poly(b) for b in polys], owner, cv, ideal)
    if gs is None:
        raise WitnessSearchExhausted(
            f"no combination of degree <= {current_caps().solve_degree_cap} gives 1 from {len(polys)} elements")
    return gs


def elimination_cert(u: "Element | Poly", owner: Optional[Algebra] = None,
                     coeff_vars: Optional[Sequence[str]] = None, var: str = "T"
                     ) -> Optional[IntegralityCertificate]:
    """A monic for u over Q[coeff_vars] read off an elimination basis of rel + <T - u>, if one exists."""
    if isinstance(u, Element):
        owner, u = u.owner, u.numerator
    cv = tuple(coeff_vars) if coeff_vars is not None else owner.base
    t = fresh_var(var, owner.vars)
    drop = [v for v in owner.vars if v not in cv]
    ext = owner.relations.with_gens(Poly.var(t) - owner.poly(u)).embed((t,))
    gb = groebner(ext, MonomialOrder.block(tuple(drop), (t,), cv))
    best = None
    for g in gb.basis:
        if not g.free_of(drop) or g.degree(t) < 1:
            continue
        lc = g.lc_in(t)
        if not lc.is_constant():
            continue
        if best is None or g.degree(t) < best.degree(t):
            best = g / lc.const_value()
    if best is None:
        return None
    return IntegralityCertificate(owner.element(u), best.trim(), t, cv, None, ("Elimination",))
