"""
emmanuel.py — the Emmanuel sequence of a polynomial relation a_n x^n + ... + a_0 = 0.

u_n = a_n, u_j = u_{j+1} x + a_j. Writing w_k = sum_{l<k} a_{n-l} x^{k-l} we have
u_j = w_{n-j} + a_j and u_j x = w_{n-j+1}, with w_n = -a_0. The module
R + R w_1 + ... + R w_{n-1} is closed under multiplication:

    w_i w_j = w_{i-1} w_{j+1} + a_{n-i+1} w_{j+1} - a_{n-j} w_i

so every u_j and u_j x has a characteristic polynomial over R.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from ..errors import PNotAnnihilating
from ..ideal.algebra import Algebra, Element
from ..ideal.ideals import Ideal, member
from ..ring.matrix import PolyMatrix, char_poly
from ..ring.poly import Poly, as_poly
from .certs import IntegralityCertificate

log = logging.getLogger(__name__)

__all__ = ["EmmanuelModule", "EmmanuelSequence", "emmanuel"]

Vec = List[Poly]


class EmmanuelModule:
    """Structure constants of R[w_1, ..., w_{n-1}] on the generators 1, w_1, ..., w_{n-1}."""

    def __init__(self, coeffs: Sequence[Poly], reduce: Optional[Callable[[Poly], Poly]] = None):
        self.a = [as_poly(c) for c in coeffs]
        self.n = len(self.a) - 1
        self._reduce = reduce or (lambda p: p)
        self._products: Dict[Tuple[int, int], Vec] = {}

    def zero(self) -> Vec:
        return [Poly.const(0)] * max(self.n, 1)

    def omega(self, k: int) -> Vec:
        v = self.zero()
        if k == 0 or k > self.n:
            return v
        if k == self.n:
            v[0] = -self.a[0]
            return v
        v[k] = Poly.const(1)
        return v

    def _axpy(self, acc: Vec, c: Poly, v: Vec) -> Vec:
        return [self._reduce(x + c * y) if y else x for x, y in zip(acc, v)]

    def product(self, i: int, j: int) -> Vec:
        """coordinates of w_i * w_j."""
        if i > j:
            i, j = j, i
        if i == 0:
            return self.zero()
        if j == self.n:
            return [self._reduce(-self.a[0] * c) for c in self.omega(i)]
        key = (i, j)
        if key not in self._products:
            acc = self.product(i - 1, j + 1)
            acc = self._axpy(acc, self.a[self.n - i + 1], self.omega(j + 1))
            acc = self._axpy(acc, -self.a[self.n - j], self.omega(i))
            self._products[key] = acc
        return self._products[key]

    def u_coords(self, j: int) -> Vec:
        v = self.omega(self.n - j)
        v[0] = v[0] + self.a[j]
        return v

    def ux_coords(self, j: int) -> Vec:
        return self.omega(self.n - j + 1)

    def mult_matrix(self, coords: Vec) -> PolyMatrix:
        size = max(self.n, 1)
        cols = [list(coords)]
        for m in range(1, size):
            col = [Poly.const(0)] * size
            col[m] = coords[0]
            for k in range(1, size):
                if coords[k]:
                    col = self._axpy(col, coords[k], self.product(k, m))
            cols.append(col)
        return PolyMatrix.from_rows([[cols[j][i] for j in range(size)] for i in range(size)])

    def char_poly(self, coords: Vec, var: str = "T") -> Poly:
        if all(not c for c in coords[1:]):
            return Poly.var(var) - coords[0]
        return char_poly(self.mult_matrix(coords), var)


@dataclass(frozen=True)
class EmmanuelSequence:
    coeffs: Tuple[Poly, ...]
    x: Element
    u: Tuple[Poly, ...]
    ux: Tuple[Poly, ...]
    u_certs: Tuple[IntegralityCertificate, ...] = field(default=(), compare=False)
    ux_certs: Tuple[IntegralityCertificate, ...] = field(default=(), compare=False)

    @property
    def n(self) -> int:
        return len(self.coeffs) - 1

    def ideal_u(self) -> Ideal:
        return Ideal(self.u, self.x.owner.vars)

    def ideal_a(self) -> Ideal:
        return Ideal(self.coeffs, self.x.owner.vars)

    def ideals_agree(self) -> bool:
        """<u_0..u_n> = <a_0..a_n> in R[x], both inclusions checked by membership."""
        owner = self.x.owner
        ua = owner.relations + self.ideal_a()
        au = owner.relations + self.ideal_u()
        return (all(member(owner.poly(p), ua).ok for p in self.u)
                and all(member(owner.poly(p), au).ok for p in self.coeffs))

    def to_json(self) -> dict:
        return {
            "coeffs": [str(c) for c in self.coeffs],
            "x": str(self.x),
            "u": [str(p) for p in self.u],
            "ux": [str(p) for p in self.ux],
            "u_certs": [c.to_json() for c in self.u_certs],
            "ux_certs": [c.to_json() for c in self.ux_certs],
        }


def emmanuel(coeffs: Sequence["Poly | int"], x: "Element | Poly", owner: Optional[Algebra] = None,
             coeff_vars: Optional[Sequence[str]] = None, var: str = "T") -> EmmanuelSequence:
    """
    Emmanuel sequence for sum coeffs[j] * x^j = 0 with coefficients in Q[coeff_vars]
    (default: the owner's base). Certificates for every u_j and u_j x are the
    characteristic polynomials of their multiplication matrices.
    """
    if isinstance(x, Element):
        owner = x.owner
    elif owner is None:
        raise ValueError("emmanuel needs an owner algebra when x is a plain polynomial")
    else:
        x = owner.element(x)
    if not x.is_plain:
        raise ValueError("emmanuel expects an element without denominator")
    a = [owner.poly(c) for c in coeffs]
    cv = tuple(coeff_vars) if coeff_vars is not None else owner.base
    for c in a:
        stray = [v for v in c.used_vars() if v not in cv]
        if stray:
            raise ValueError(f"coefficient {c} uses {stray}, outside {list(cv)}")

    xv = x.numerator
    u: List[Poly] = [Poly.const(0)] * len(a)
    n = len(a) - 1
    acc = Poly.const(0, owner.vars)
    for j in range(n, -1, -1):
        acc = owner.reduce(acc * xv + a[j]) if j < n else a[n]
        u[j] = acc
    if not owner.is_zero(u[0]):
        raise PNotAnnihilating(f"P(x) = {u[0]} is not zero in the owner algebra")
    ux = [owner.reduce(p * xv) for p in u]

    mod = EmmanuelModule(a)
    u_certs, ux_certs = [], []
    for j in range(n + 1):
        u_certs.append(IntegralityCertificate(owner.element(u[j]), mod.char_poly(mod.u_coords(j), var), var,
                                              cv, None, ("Emmanuel",)))
        ux_certs.append(IntegralityCertificate(owner.element(ux[j]), mod.char_poly(mod.ux_coords(j), var), var,
                                               cv, None, ("Emmanuel",)))
    log.debug("emmanuel: n=%d over %s", n, list(cv))
    return EmmanuelSequence(tuple(a), x, tuple(u), tuple(ux), tuple(u_certs), tuple(ux_certs))
