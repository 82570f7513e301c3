"""
linsolve.py — exact linear solves over Q, used wherever an expression has to
be found as an unknown combination (module coefficients, unit witnesses).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Hashable, List, Optional, Sequence

__all__ = ["solve_rational"]


def solve_rational(rows: Sequence[Dict[Hashable, Fraction]], rhs: Sequence[Fraction],
                   unknowns: Sequence[Hashable]) -> Optional[Dict[Hashable, Fraction]]:
    """
    Solve sum_u rows[i][u]*X_u = rhs[i] over Q by Gauss-Jordan elimination.
    Returns one solution (free unknowns set to 0) or None when inconsistent.
    """
    cols = list(unknowns)
    index = {u: j for j, u in enumerate(cols)}
    m = [[Fraction(0)] * (len(cols) + 1) for _ in rows]
    for i, row in enumerate(rows):
        for u, c in row.items():
            m[i][index[u]] = Fraction(c)
        m[i][-1] = Fraction(rhs[i])

    pivots: List[int] = []
    r = 0
    for j in range(len(cols)):
        piv = next((i for i in range(r, len(m)) if m[i][j]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][j]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][j]:
                f = m[i][j]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(j)
        r += 1
        if r == len(m):
            break
    for i in range(r, len(m)):
        if m[i][-1]:
            return None
    sol = {u: Fraction(0) for u in cols}
    for i, j in enumerate(pivots):
        sol[cols[j]] = m[i][-1]
    return sol
