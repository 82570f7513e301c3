"""
system.py — Hensel systems f_1 = ... = f_n = 0 over a local base A with a
residually simple zero at the origin: isolation of that zero by an
idempotent, extension of the system so every x_i lies in M*B, and the
Newton process.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from ..errors import HypothesisNotSatisfied, InvariantRecheckFailed, JacobianNotUnit
from ..ideal.algebra import Algebra, LocalAt
from ..ideal.groebner import groebner
from ..ideal.ideals import Ideal, fresh_var, member
from ..integrality.certs import Verdict
from ..ring.linsolve import solve_rational
from ..ring.matrix import PolyMatrix, det_ff
from ..ring.poly import Poly, Scalar, as_poly, unify_vars

log = logging.getLogger(__name__)

__all__ = [
    "HenselSystem", "IsolationData", "isolate_zero", "extend_system",
    "NewtonState", "newton_step", "newton_run", "rational_inverse", "verify_newton_state",
]


@dataclass(frozen=True)
class HenselSystem:
    base: Algebra                   # A; its base variables are all of its variables
    point_ideal: Ideal              # M
    vars: Tuple[str, ...]           # X_1, ..., X_n
    eqs: Tuple[Poly, ...]

    def __post_init__(self):
        object.__setattr__(self, "vars", tuple(self.vars))
        object.__setattr__(self, "eqs", tuple(as_poly(f) for f in self.eqs))
        clash = [v for v in self.vars if v in self.base.vars]
        if clash:
            raise HypothesisNotSatisfied(f"unknowns {clash} collide with base variables")
        if len(self.eqs) != len(self.vars):
            raise HypothesisNotSatisfied(f"{len(self.eqs)} equations in {len(self.vars)} unknowns")

    @property
    def n(self) -> int:
        return len(self.vars)

    @property
    def base_vars(self) -> Tuple[str, ...]:
        return self.base.vars

    def plain_algebra(self) -> Algebra:
        """B = A[X]/<f>, not localized."""
        vs = unify_vars(self.base.vars, self.vars)
        return Algebra(vs, self.base.relations.embed(vs).with_gens(*self.eqs), base=self.base.vars)

    def algebra(self) -> Algebra:
        """B localized at 1 + <M, x_1, ..., x_n>."""
        local = LocalAt.one_plus(tuple(self.point_ideal.gens) + tuple(Poly.var(v) for v in self.vars))
        b = self.plain_algebra()
        return Algebra(b.vars, b.relations, local, b.base)

    def at_zero(self, p: Poly) -> Poly:
        return as_poly(p).substitute({v: 0 for v in self.vars}, strict=False).restrict(self.base.vars)

    def translate(self, point: Sequence[Scalar]) -> "HenselSystem":
        """The same system with X_i replaced by X_i + c_i, moving the zero at c to the origin."""
        shift = {v: Poly.var(v) + Fraction(c) for v, c in zip(self.vars, point)}
        return HenselSystem(self.base, self.point_ideal, self.vars,
                            tuple(f.substitute(shift, strict=False) for f in self.eqs))

    def jacobian(self) -> PolyMatrix:
        return PolyMatrix.from_rows([[f.derivative(v) for v in self.vars] for f in self.eqs])

    def jacobian_at_zero(self) -> PolyMatrix:
        return self.jacobian().map(self.at_zero)

    def residual(self, p: Poly) -> Poly:
        """p modulo M, which must leave rational coefficients."""
        gb = groebner(self.base.relations + self.point_ideal.embed(self.base.vars), vars=self.base.vars)
        r = gb.reduce(as_poly(p))
        if not r.free_of(self.base.vars):
            raise HypothesisNotSatisfied(f"residue of {p} modulo M is not over Q: {r}")
        return r.restrict(self.vars)

    def check(self) -> None:
        full = self.base.relations + self.point_ideal.embed(self.base.vars)
        for f in self.eqs:
            if not member(self.at_zero(f), full).ok:
                raise HypothesisNotSatisfied(f"{f} does not vanish at the origin modulo M")
        det0 = det_ff(self.jacobian_at_zero())
        if not groebner(full.with_gens(det0)).is_unit():
            raise JacobianNotUnit(f"Jacobian determinant {det0} at the origin lies in M")

    def to_json(self) -> dict:
        return {
            "base": self.base.to_json(),
            "point_ideal": [str(g) for g in self.point_ideal.gens],
            "vars": list(self.vars),
            "eqs": [str(f) for f in self.eqs],
        }


def rational_inverse(m: PolyMatrix) -> PolyMatrix:
    """Inverse of a matrix with rational entries."""
    n = m.rows
    if not m.is_square() or any(not e.is_constant() for e in m.entries):
        raise JacobianNotUnit("residual Jacobian is not a square rational matrix")
    rows = [{j: m[i, j].const_value() for j in range(n) if m[i, j]} for i in range(n)]
    cols = []
    for k in range(n):
        sol = solve_rational(rows, [Fraction(int(i == k)) for i in range(n)], list(range(n)))
        if sol is None:
            raise JacobianNotUnit("residual Jacobian is singular")
        cols.append([sol[j] for j in range(n)])
    check = m @ PolyMatrix.from_rows([[cols[j][i] for j in range(n)] for i in range(n)])
    if check != PolyMatrix.identity(n):
        raise JacobianNotUnit("residual Jacobian has no inverse over Q")
    return PolyMatrix.from_rows([[cols[j][i] for j in range(n)] for i in range(n)])


@dataclass(frozen=True)
class IsolationData:
    m_matrix: PolyMatrix
    e: Poly
    translated: bool
    jacobian_normalizer: PolyMatrix
    point: Tuple[Fraction, ...] = ()
    residual_eqs: Tuple[Poly, ...] = field(default=(), compare=False)

    def to_json(self) -> dict:
        return {
            "M": [[str(x) for x in row] for row in self.m_matrix.to_rows()],
            "e": str(self.e),
            "translated": self.translated,
            "jacobian_normalizer": [[str(x) for x in row] for row in self.jacobian_normalizer.to_rows()],
            "point": [str(c) for c in self.point],
        }


def _split_lowest(g: Poly, vars: Sequence[str]) -> List[Poly]:
    """g = sum_j m_j X_j, each monomial charged to its lowest-index variable."""
    out = [Poly.const(0)] * len(vars)
    g = g.embed(vars)
    for e, c in g.items():
        pos = [i for i in range(len(vars)) if e[g.vars.index(vars[i])] > 0]
        if not pos:
            raise InvariantRecheckFailed(f"{g} has a constant term")
        j = pos[0]
        powers = {v: e[g.vars.index(v)] for v in g.vars}
        powers[vars[j]] -= 1
        out[j] = out[j] + Poly.monomial(powers, c)
    return out


def isolate_zero(system: HenselSystem, point: Optional[Sequence[Scalar]] = None) -> IsolationData:
    """
    The idempotent e = det(I - M) of the residual system, with e^2 = e and
    e x_i = 0 there, so that e is 1 exactly on the simple zero.
    """
    xs = system.vars
    eqs = [system.residual(f) for f in system.eqs]
    translated = point is not None and any(Fraction(c) for c in point)
    pt = tuple(Fraction(c) for c in point) if point is not None else tuple(Fraction(0) for _ in xs)
    if translated:
        shift = {v: Poly.var(v) + c for v, c in zip(xs, pt)}
        eqs = [f.substitute(shift, strict=False) for f in eqs]
    for f in eqs:
        if f.substitute({v: 0 for v in xs}, strict=False):
            raise HypothesisNotSatisfied(f"the point is not a residual zero of {f}")
    j0 = PolyMatrix.from_rows([[f.derivative(v).substitute({w: 0 for w in xs}, strict=False) for v in xs]
                               for f in eqs])
    inv = rational_inverse(j0)
    normalized = [sum((inv[i, k] * eqs[k] for k in range(len(xs))), Poly.const(0)) for i in range(len(xs))]
    rows = []
    for i, f in enumerate(normalized):
        g = Poly.var(xs[i]) - f
        rows.append(_split_lowest(g, xs) if g else [Poly.const(0)] * len(xs))
    m = PolyMatrix.from_rows(rows) if rows else PolyMatrix(0, 0, ())
    e = det_ff(PolyMatrix.identity(len(xs)) - m) if rows else Poly.const(1)
    residual_ideal = Ideal(tuple(eqs), xs)
    if not member(e * e - e, residual_ideal).ok:
        raise InvariantRecheckFailed(f"e = {e} is not idempotent modulo the residual system")
    for v in xs:
        if not member(e * Poly.var(v), residual_ideal).ok:
            raise InvariantRecheckFailed(f"e * {v} does not vanish modulo the residual system")
    if translated:
        back = {v: Poly.var(v) - c for v, c in zip(xs, pt)}
        e = e.substitute(back, strict=False)
    log.info("isolate_zero: e = %s", e)
    return IsolationData(m, e, translated, inv, pt, tuple(eqs))


def extend_system(system: HenselSystem, iso: IsolationData) -> HenselSystem:
    """Adjoin X_{n+1} with 1 - (1 - X_{n+1}) e(X_1, ..., X_n)."""
    name = fresh_var(f"X{system.n + 1}", set(system.vars) | set(system.base.vars))
    new_eq = 1 - (1 - Poly.var(name)) * iso.e
    out = HenselSystem(system.base, system.point_ideal, system.vars + (name,), system.eqs + (new_eq,))
    full = out.plain_algebra().relations + out.point_ideal.embed(out.plain_algebra().vars)
    centre = dict(zip(system.vars, iso.point))
    for v in out.vars:
        if not member(Poly.var(v) - centre.get(v, 0), full).ok:
            raise InvariantRecheckFailed(f"{v} - {centre.get(v, 0)} is not in M*B after extension")
    log.info("extend_system: added %s", name)
    return out


# --- Newton -------------------------------------------------------------------

@dataclass(frozen=True)
class NewtonState:
    point: Tuple[Poly, ...]
    u: PolyMatrix
    k: int                          # valid modulo I^(2^k)

    def to_json(self) -> dict:
        return {
            "point": [str(p) for p in self.point],
            "U": [[str(x) for x in row] for row in self.u.to_rows()],
            "k": self.k,
        }


def _at(system: HenselSystem, p: Poly, point: Sequence[Poly]) -> Poly:
    return system.base.reduce(as_poly(p).substitute(dict(zip(system.vars, point)), strict=False)
                              .restrict(system.base.vars))


def verify_newton_state(system: HenselSystem, st: NewtonState, ideal: Optional[Ideal] = None) -> Verdict:
    """f(a) in I^(2^k) and Jac(a) U = Id modulo I^(2^k), in the (localized) base."""
    ideal = system.point_ideal if ideal is None else ideal
    bound = ideal.power(2 ** st.k).embed(system.base.vars)
    for f in system.eqs:
        r = _at(system, f, st.point)
        if not system.base.in_ideal(r, bound):
            return Verdict.failed("NotInIdeal", f"f({[str(p) for p in st.point]}) = {r} is not in I^{2 ** st.k}")
    jac = system.jacobian().map(lambda p: _at(system, p, st.point))
    err = jac @ st.u - PolyMatrix.identity(system.n)
    for e in err.entries:
        if not system.base.in_ideal(system.base.poly(e), bound):
            return Verdict.failed("NotInIdeal", f"Jac(a) U differs from Id by {e}, not in I^{2 ** st.k}")
    return Verdict.passed()


def _check_state(system: HenselSystem, st: NewtonState, ideal: Ideal) -> None:
    v = verify_newton_state(system, st, ideal)
    if not v.ok:
        raise InvariantRecheckFailed(v.detail)


def newton_step(state: NewtonState, system: HenselSystem, ideal: Optional[Ideal] = None) -> NewtonState:
    """b = a - U f(a), U' = U (2I - Jac(b) U); re-verified modulo I^(2^(k+1))."""
    ideal = system.point_ideal if ideal is None else ideal
    fa = PolyMatrix.from_rows([[_at(system, f, state.point)] for f in system.eqs])
    step = state.u @ fa
    b = tuple(system.base.reduce(a - step[i, 0]) for i, a in enumerate(state.point))
    jac_b = system.jacobian().map(lambda p: _at(system, p, b))
    eye = PolyMatrix.identity(system.n)
    u = (state.u @ (eye.scale(2) - jac_b @ state.u)).map(system.base.reduce)
    out = NewtonState(b, u, state.k + 1)
    _check_state(system, out, ideal)
    log.debug("newton_step: k=%d", out.k)
    return out


def newton_run(system: HenselSystem, steps: int, ideal: Optional[Ideal] = None,
               u0: Optional[PolyMatrix] = None) -> List[NewtonState]:
    """Iterate from the origin with U = J(0)^-1 over Q (the identity when J(0) = I residually)."""
    ideal = system.point_ideal if ideal is None else ideal
    if u0 is None:
        j0 = system.jacobian_at_zero().map(system.residual)
        u0 = rational_inverse(j0)
    st = NewtonState(tuple(Poly.const(0) for _ in system.vars), u0, 0)
    _check_state(system, st, ideal)
    out = [st]
    for _ in range(steps):
        st = newton_step(st, system, ideal)
        out.append(st)
    return out
