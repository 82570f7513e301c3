"""
poly.py — exact sparse multivariate polynomials over Q.

A Poly is immutable: a sorted tuple of variable names (its context) and a map
from exponent tuples to nonzero Fractions. Mixed-context arithmetic embeds both
operands into the sorted union of their contexts, so results never depend on
operand order or insertion order.
"""

from __future__ import annotations

from fractions import Fraction
from operator import add
from typing import Dict, Iterable, Iterator, Mapping, Optional, Sequence, Tuple, Union

from ..config import current_caps
from ..errors import DegreeCapExceeded, UnknownVariable

Exp = Tuple[int, ...]
Scalar = Union[int, Fraction]

__all__ = ["Poly", "Exp", "Scalar", "arith", "as_poly", "unify_vars"]


def _frac(c: Scalar) -> Fraction:
    return c if isinstance(c, Fraction) else Fraction(c)


def unify_vars(*contexts: Iterable[str]) -> Tuple[str, ...]:
    out = set()
    for c in contexts:
        out.update(c)
    return tuple(sorted(out))


def _embedder(src: Sequence[str], dst: Sequence[str]):
    if tuple(src) == tuple(dst):
        return None
    where = {v: i for i, v in enumerate(dst)}
    try:
        slots = [where[v] for v in src]
    except KeyError as e:
        raise UnknownVariable(f"variable {e.args[0]!r} is not in context {tuple(dst)}") from None
    width = len(dst)

    def move(e: Exp) -> Exp:
        out = [0] * width
        for i, k in zip(slots, e):
            out[i] = k
        return tuple(out)

    return move


class Poly:
    __slots__ = ("vars", "terms", "_hash", "_deg")

    def __init__(self, vars: Sequence[str] = (), terms: Optional[Mapping[Exp, Scalar]] = None):
        vs = tuple(vars)
        ordered = tuple(sorted(set(vs)))
        if len(ordered) != len(vs):
            raise ValueError(f"duplicate variable names in context {vs}")
        move = _embedder(vs, ordered)
        clean: Dict[Exp, Fraction] = {}
        for e, c in (terms or {}).items():
            e = tuple(e)
            if len(e) != len(vs):
                raise ValueError(f"exponent {e} does not match context {vs}")
            c = _frac(c)
            if c:
                clean[move(e) if move else e] = c
        self.vars = ordered
        self.terms = clean
        self._hash = None
        self._deg = None

    @classmethod
    def _raw(cls, vars: Tuple[str, ...], terms: Dict[Exp, Fraction]) -> "Poly":
        p = object.__new__(cls)
        p.vars = vars
        p.terms = terms
        p._hash = None
        p._deg = None
        return p

    # --- constructors ---------------------------------------------------------

    @classmethod
    def const(cls, c: Scalar, vars: Sequence[str] = ()) -> "Poly":
        vs = tuple(sorted(set(vars)))
        c = _frac(c)
        return cls._raw(vs, {(0,) * len(vs): c} if c else {})

    @classmethod
    def var(cls, name: str, vars: Optional[Sequence[str]] = None) -> "Poly":
        vs = tuple(sorted(set(vars or ()) | {name}))
        e = tuple(1 if v == name else 0 for v in vs)
        return cls._raw(vs, {e: Fraction(1)})

    @classmethod
    def monomial(cls, powers: Mapping[str, int], coeff: Scalar = 1, vars: Sequence[str] = ()) -> "Poly":
        vs = unify_vars(vars, powers)
        e = tuple(int(powers.get(v, 0)) for v in vs)
        c = _frac(coeff)
        return cls._raw(vs, {e: c} if c else {})

    @classmethod
    def from_coeffs(cls, v: str, coeffs: Mapping[int, "Poly | Scalar"], vars: Sequence[str] = ()) -> "Poly":
        """sum of coeffs[k] * v**k"""
        acc = cls.const(0, tuple(vars) + (v,))
        x = cls.var(v)
        for k, c in coeffs.items():
            acc = acc + as_poly(c) * x ** k
        return acc

    # --- structure ------------------------------------------------------------

    def embed(self, vars: Iterable[str]) -> "Poly":
        vs = unify_vars(vars, self.vars)
        move = _embedder(self.vars, vs)
        if move is None:
            return self
        return Poly._raw(vs, {move(e): c for e, c in self.terms.items()})

    def trim(self) -> "Poly":
        """Drop context variables that do not occur."""
        return self.embed(()) if not self.vars else self.restrict(self.used_vars())

    def restrict(self, vars: Iterable[str]) -> "Poly":
        vs = unify_vars(vars, self.used_vars())
        keep = [self.vars.index(v) if v in self.vars else None for v in vs]
        out = {}
        for e, c in self.terms.items():
            out[tuple(e[i] if i is not None else 0 for i in keep)] = c
        return Poly._raw(vs, out)

    def used_vars(self) -> Tuple[str, ...]:
        seen = [False] * len(self.vars)
        for e in self.terms:
            for i, k in enumerate(e):
                if k:
                    seen[i] = True
        return tuple(v for v, s in zip(self.vars, seen) if s)

    def rename(self, mapping: Mapping[str, str]) -> "Poly":
        names = [mapping.get(v, v) for v in self.vars]
        return Poly(names, self.terms)

    # --- predicates -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * len(self.vars), Fraction(0))

    def const_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not a constant")
        return self.constant_term()

    def total_degree(self) -> int:
        if self._deg is None:
            self._deg = max((sum(e) for e in self.terms), default=-1)
        return self._deg

    def degree(self, v: str) -> int:
        if not self.terms:
            return -1
        if v not in self.vars:
            return 0
        i = self.vars.index(v)
        return max(e[i] for e in self.terms)

    def free_of(self, names: Iterable[str]) -> bool:
        idx = [i for i, v in enumerate(self.vars) if v in set(names)]
        return all(not e[i] for e in self.terms for i in idx)

    def __len__(self) -> int:
        return len(self.terms)

    def items(self) -> Iterator[Tuple[Exp, Fraction]]:
        return iter(self.terms.items())

    # --- arithmetic -----------------------------------------------------------

    def _pair(self, other: "Poly | Scalar") -> Tuple[Tuple[str, ...], Dict[Exp, Fraction], Dict[Exp, Fraction]]:
        if not isinstance(other, Poly):
            other = Poly.const(other, self.vars)
        if other.vars == self.vars:
            return self.vars, self.terms, other.terms
        vs = unify_vars(self.vars, other.vars)
        return vs, self.embed(vs).terms, other.embed(vs).terms

    def __add__(self, other: "Poly | Scalar") -> "Poly":
        vs, a, b = self._pair(other)
        out = dict(a)
        for e, c in b.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return Poly._raw(vs, out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly._raw(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "Poly | Scalar") -> "Poly":
        return self + (-other if isinstance(other, Poly) else -_frac(other))

    def __rsub__(self, other: "Poly | Scalar") -> "Poly":
        return (-self) + other

    def scale(self, c: Scalar) -> "Poly":
        c = _frac(c)
        if not c:
            return Poly._raw(self.vars, {})
        return Poly._raw(self.vars, {e: v * c for e, v in self.terms.items()})

    def __mul__(self, other: "Poly | Scalar") -> "Poly":
        if not isinstance(other, Poly):
            return self.scale(other)
        vs, a, b = self._pair(other)
        if not a or not b:
            return Poly._raw(vs, {})
        cap = current_caps().degree_cap
        if self.total_degree() + other.total_degree() > cap:
            raise DegreeCapExceeded(
                f"product degree {self.total_degree() + other.total_degree()} exceeds degree cap {cap}")
        if len(a) < len(b):
            a, b = b, a
        out: Dict[Exp, Fraction] = {}
        get = out.get
        for eb, cb in b.items():
            for ea, ca in a.items():
                e = tuple(map(add, ea, eb))
                out[e] = get(e, 0) + ca * cb
        return Poly._raw(vs, {e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __truediv__(self, c: Scalar) -> "Poly":
        if isinstance(c, Poly):
            return self.scale(1 / c.const_value())
        return self.scale(1 / _frac(c))

    def __pow__(self, n: int) -> "Poly":
        if not isinstance(n, int) or n < 0:
            raise ValueError(f"exponent must be a nonnegative int, got {n!r}")
        if n == 0:
            return Poly.const(1, self.vars)
        cap = current_caps().degree_cap
        if self.total_degree() * n > cap:
            raise DegreeCapExceeded(f"power degree {self.total_degree() * n} exceeds degree cap {cap}")
        result, base = None, self
        while n:
            if n & 1:
                result = base if result is None else result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Poly.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        if other.vars == self.vars:
            return self.terms == other.terms
        _, a, b = self._pair(other)
        return a == b

    def __hash__(self) -> int:
        if self._hash is None:
            named = frozenset(
                (tuple((v, k) for v, k in zip(self.vars, e) if k), c) for e, c in self.terms.items())
            self._hash = hash(named)
        return self._hash

    # --- calculus and substitution -------------------------------------------

    def derivative(self, v: str) -> "Poly":
        if v not in self.vars:
            return Poly._raw(self.vars, {})
        i = self.vars.index(v)
        out = {}
        for e, c in self.terms.items():
            k = e[i]
            if k:
                out[e[:i] + (k - 1,) + e[i + 1:]] = c * k
        return Poly._raw(self.vars, out)

    def substitute(self, bindings: Mapping[str, "Poly | Scalar"], strict: bool = True) -> "Poly":
        bind: Dict[str, Poly] = {}
        for k, val in bindings.items():
            if k not in self.vars:
                if strict:
                    raise UnknownVariable(f"cannot substitute {k!r}: not in context {self.vars}")
                continue
            bind[k] = as_poly(val)
        if not bind:
            return self
        keep = [v for v in self.vars if v not in bind]
        ctx = unify_vars(keep, *(p.vars for p in bind.values()))
        for k in bind:
            bind[k] = bind[k].embed(ctx)
        kpos = [(i, ctx.index(v)) for i, v in enumerate(self.vars) if v not in bind]
        bpos = [(i, v) for i, v in enumerate(self.vars) if v in bind]

        powers: Dict[str, list] = {v: [Poly.const(1, ctx)] for v in bind}

        def power(v: str, k: int) -> Poly:
            lst = powers[v]
            while len(lst) <= k:
                lst.append(lst[-1] * bind[v])
            return lst[k]

        groups: Dict[Tuple[int, ...], Dict[Exp, Fraction]] = {}
        width = len(ctx)
        for e, c in self.terms.items():
            be = tuple(e[i] for i, _ in bpos)
            ke = [0] * width
            for i, j in kpos:
                ke[j] = e[i]
            groups.setdefault(be, {})[tuple(ke)] = c

        out: Dict[Exp, Fraction] = {}
        for be, rest in groups.items():
            factor = None
            for (_, v), k in zip(bpos, be):
                if k:
                    factor = power(v, k) if factor is None else factor * power(v, k)
            if factor is None:
                factor = Poly.const(1, ctx)
            for ke, c in rest.items():
                for fe, fc in factor.terms.items():
                    e = tuple(map(add, ke, fe))
                    out[e] = out.get(e, 0) + c * fc
        return Poly._raw(ctx, {e: c for e, c in out.items() if c})

    def evaluate(self, values: Mapping[str, Scalar], strict: bool = False) -> "Poly":
        return self.substitute({k: Poly.const(v) for k, v in values.items()}, strict=strict)

    # --- univariate views -----------------------------------------------------

    def coeffs_in(self, v: str) -> Dict[int, "Poly"]:
        """Coefficients as polynomials free of v, keyed by the power of v."""
        if v not in self.vars:
            return {0: self} if self.terms else {}
        i = self.vars.index(v)
        buckets: Dict[int, Dict[Exp, Fraction]] = {}
        for e, c in self.terms.items():
            buckets.setdefault(e[i], {})[e[:i] + (0,) + e[i + 1:]] = c
        return {k: Poly._raw(self.vars, t) for k, t in sorted(buckets.items())}

    def lc_in(self, v: str) -> "Poly":
        cs = self.coeffs_in(v)
        return cs[max(cs)] if cs else Poly.const(0, self.vars)

    def exact_div(self, other: "Poly") -> "Poly":
        """Quotient of an exact division; raises ValueError when other does not divide self."""
        if not other.terms:
            raise ZeroDivisionError("exact_div by zero polynomial")
        vs, rem, d = self._pair(other)
        rem = dict(rem)
        dm = max(d)
        dc = d[dm]
        q: Dict[Exp, Fraction] = {}
        while rem:
            m = max(rem)
            if any(a < b for a, b in zip(m, dm)):
                raise ValueError("exact_div: divisor does not divide dividend")
            s = tuple(a - b for a, b in zip(m, dm))
            c = rem[m] / dc
            q[s] = c
            for e, dcoef in d.items():
                t = tuple(map(add, e, s))
                val = rem.get(t, 0) - c * dcoef
                if val:
                    rem[t] = val
                else:
                    rem.pop(t, None)
        return Poly._raw(vs, q)

    # --- printing -------------------------------------------------------------

    def _term_key(self, e: Exp):
        return (sum(e), tuple(-k for k in e))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, key=self._term_key):
            c = self.terms[e]
            mono = "*".join(v if k == 1 else f"{v}^{k}" for v, k in zip(self.vars, e) if k)
            if not mono:
                s = str(c)
            elif c == 1:
                s = mono
            elif c == -1:
                s = "-" + mono
            else:
                s = f"{c}*{mono}"
            parts.append(s)
        out = parts[0]
        for s in parts[1:]:
            out += f" - {s[1:]}" if s.startswith("-") else f" + {s}"
        return out

    def __repr__(self) -> str:
        return f"Poly({str(self)!r}, vars={self.vars})"


def as_poly(x: "Poly | Scalar", vars: Sequence[str] = ()) -> Poly:
    if isinstance(x, Poly):
        return x.embed(vars) if vars else x
    return Poly.const(x, vars)


def arith(op: str, p: Poly, q: "Poly | int") -> Poly:
    """Dispatch for the four ring operations by name."""
    if op == "add":
        return p + q
    if op == "sub":
        return p - q
    if op == "mul":
        return p * q
    if op == "pow":
        return p ** int(q)
    raise ValueError(f"unknown op {op!r}; expected add, sub, mul or pow")
