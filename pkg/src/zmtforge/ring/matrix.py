"""
matrix.py — polynomial matrices and the kernels built on them:
fraction-free determinant, characteristic polynomial, Sylvester resultant,
pseudo-division.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, List, Sequence, Tuple

from ..errors import DegenerateResultant, ShapeError
from .poly import Poly, Scalar, as_poly

__all__ = [
    "PolyMatrix", "det_ff", "det_cofactor", "char_poly", "sylvester", "resultant",
    "pseudo_divide",
]


@dataclass(frozen=True)
class PolyMatrix:
    rows: int
    cols: int
    entries: Tuple[Poly, ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0 or len(self.entries) != self.rows * self.cols:
            raise ShapeError(f"{self.rows}x{self.cols} matrix needs {self.rows * self.cols} entries, "
                             f"got {len(self.entries)}")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence["Poly | Scalar"]]) -> "PolyMatrix":
        r = len(rows)
        c = len(rows[0]) if r else 0
        if any(len(row) != c for row in rows):
            raise ShapeError("ragged rows")
        return cls(r, c, tuple(as_poly(x) for row in rows for x in row))

    @classmethod
    def identity(cls, n: int) -> "PolyMatrix":
        return cls(n, n, tuple(Poly.const(1 if i == j else 0) for i in range(n) for j in range(n)))

    @classmethod
    def zeros(cls, r: int, c: int) -> "PolyMatrix":
        return cls(r, c, tuple(Poly.const(0) for _ in range(r * c)))

    def __getitem__(self, ij: Tuple[int, int]) -> Poly:
        i, j = ij
        return self.entries[i * self.cols + j]

    def to_rows(self) -> List[List[Poly]]:
        return [list(self.entries[i * self.cols:(i + 1) * self.cols]) for i in range(self.rows)]

    def is_square(self) -> bool:
        return self.rows == self.cols

    def map(self, fn: Callable[[Poly], Poly]) -> "PolyMatrix":
        return PolyMatrix(self.rows, self.cols, tuple(fn(e) for e in self.entries))

    def __add__(self, other: "PolyMatrix") -> "PolyMatrix":
        self._same_shape(other)
        return PolyMatrix(self.rows, self.cols, tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "PolyMatrix") -> "PolyMatrix":
        self._same_shape(other)
        return PolyMatrix(self.rows, self.cols, tuple(a - b for a, b in zip(self.entries, other.entries)))

    def scale(self, c: "Poly | Scalar") -> "PolyMatrix":
        return self.map(lambda e: e * c)

    def __matmul__(self, other: "PolyMatrix") -> "PolyMatrix":
        if self.cols != other.rows:
            raise ShapeError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        a = self.to_rows()
        out = []
        for i in range(self.rows):
            for j in range(other.cols):
                acc = Poly.const(0)
                for k in range(self.cols):
                    x = a[i][k]
                    if x:
                        y = other[k, j]
                        if y:
                            acc = acc + x * y
                out.append(acc)
        return PolyMatrix(self.rows, other.cols, tuple(out))

    def trace(self) -> Poly:
        if not self.is_square():
            raise ShapeError("trace of a non-square matrix")
        acc = Poly.const(0)
        for i in range(self.rows):
            acc = acc + self[i, i]
        return acc

    def with_column(self, j: int, col: Sequence[Poly]) -> "PolyMatrix":
        rows = self.to_rows()
        for i, v in enumerate(col):
            rows[i][j] = v
        return PolyMatrix.from_rows(rows) if rows else self

    def _same_shape(self, other: "PolyMatrix") -> None:
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ShapeError(f"shape mismatch {self.rows}x{self.cols} vs {other.rows}x{other.cols}")


def _divide(p: Poly, d: Poly) -> Poly:
    if d.is_constant():
        return p / d.const_value()
    return p.exact_div(d)


def det_ff(m: PolyMatrix) -> Poly:
    """Bareiss fraction-free elimination; every division is exact."""
    if not m.is_square():
        raise ShapeError(f"determinant of a non-square {m.rows}x{m.cols} matrix")
    n = m.rows
    if n == 0:
        return Poly.const(1)
    a = m.to_rows()
    sign = 1
    prev = Poly.const(1)
    for k in range(n - 1):
        candidates = [i for i in range(k, n) if a[i][k]]
        if not candidates:
            return Poly.const(0)
        piv = min(candidates, key=lambda i: (len(a[i][k]), a[i][k].total_degree(), i))
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            sign = -sign
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            for j in range(k + 1, n):
                num = a[i][j] * akk - aik * a[k][j]
                a[i][j] = _divide(num, prev)
        prev = akk
    return a[n - 1][n - 1] if sign > 0 else -a[n - 1][n - 1]


def det_cofactor(m: PolyMatrix) -> Poly:
    """Laplace expansion along the first row. Only for small cross-checks."""
    if not m.is_square():
        raise ShapeError("determinant of a non-square matrix")
    rows = m.to_rows()

    def rec(rs: List[List[Poly]]) -> Poly:
        n = len(rs)
        if n == 0:
            return Poly.const(1)
        acc = Poly.const(0)
        for j in range(n):
            if not rs[0][j]:
                continue
            minor = [row[:j] + row[j + 1:] for row in rs[1:]]
            term = rs[0][j] * rec(minor)
            acc = acc + term if j % 2 == 0 else acc - term
        return acc

    return rec(rows)


def char_poly(m: PolyMatrix, var: str = "T") -> Poly:
    """det(var*I - m) by the Faddeev-LeVerrier recurrence."""
    if not m.is_square():
        raise ShapeError(f"characteristic polynomial of a non-square {m.rows}x{m.cols} matrix")
    n = m.rows
    coeffs: List[Poly] = [Poly.const(0)] * (n + 1)
    coeffs[n] = Poly.const(1)
    eye = PolyMatrix.identity(n)
    am = PolyMatrix.zeros(n, n)
    for k in range(1, n + 1):
        mk = am + eye.scale(coeffs[n - k + 1])
        am = m @ mk
        coeffs[n - k] = am.trace() * Fraction(-1, k)
    return Poly.from_coeffs(var, {k: c for k, c in enumerate(coeffs) if c})


def sylvester(f: Poly, g: Poly, var: str) -> PolyMatrix:
    m, n = f.degree(var), g.degree(var)
    fc, gc = f.coeffs_in(var), g.coeffs_in(var)
    size = m + n
    zero = Poly.const(0)
    rows = []
    for i in range(n):
        row = [zero] * size
        for k in range(m + 1):
            row[i + (m - k)] = fc.get(k, zero)
        rows.append(row)
    for i in range(m):
        row = [zero] * size
        for k in range(n + 1):
            row[i + (n - k)] = gc.get(k, zero)
        rows.append(row)
    return PolyMatrix.from_rows(rows) if rows else PolyMatrix(0, 0, ())


def resultant(f: Poly, g: Poly, var: str) -> Poly:
    if f.is_zero() or g.is_zero():
        return Poly.const(0)
    if f.degree(var) <= 0 and g.degree(var) <= 0:
        raise DegenerateResultant(f"both {f} and {g} are constant in {var}")
    return det_ff(sylvester(f, g, var))


def pseudo_divide(f: Poly, g: Poly, var: str) -> Tuple[Poly, Poly, int]:
    """
    (q, r, e) with lc(g)^e * f = q*g + r and deg_var r < deg_var g.
    e = 0 when g is monic in var (plain Euclidean division).
    """
    dg = g.degree(var)
    if g.is_zero() or dg < 0:
        raise ZeroDivisionError("pseudo_divide by zero polynomial")
    df = f.degree(var)
    x = Poly.var(var)
    if df < dg:
        return Poly.const(0), f, 0
    lc = g.lc_in(var)
    monic = lc == 1
    q = Poly.const(0)
    r = f
    e = df - dg + 1
    while not r.is_zero() and r.degree(var) >= dg:
        t = r.lc_in(var) * x ** (r.degree(var) - dg)
        if monic:
            q = q + t
            r = r - t * g
        else:
            q = q * lc + t
            r = r * lc - t * g
            e -= 1
    if monic:
        return q, r, 0
    if e:
        s = lc ** e
        q, r = q * s, r * s
    return q, r, df - dg + 1
