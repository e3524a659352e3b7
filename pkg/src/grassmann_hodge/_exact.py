"""Exact linear algebra over the rationals.

Rank uses sparse integer row elimination with gcd normalization, so entries
stay small on incidence-type matrices.  Nullspaces and linear solves use a
dense Fraction reduced row echelon form; they are only called on small
matrices.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Sequence

__all__ = ["rank", "rref", "nullspace", "solve", "InconsistentSystem"]


class InconsistentSystem(ValueError):
    pass


def _integer_rows(matrix) -> list[dict[int, int]]:
    rows = []
    for row in matrix:
        vals = [Fraction(v) if not isinstance(v, int) else v for v in _py(row)]
        den = reduce(lcm, (v.denominator for v in vals if isinstance(v, Fraction)), 1)
        r = {j: int(v * den) for j, v in enumerate(vals) if v}
        if r:
            rows.append(r)
    return rows


def _py(row):
    # numpy scalars -> python numbers, without importing numpy here
    return [v.item() if hasattr(v, "item") else v for v in row]


def _normalize(r: dict[int, int]) -> dict[int, int]:
    g = reduce(gcd, r.values(), 0)
    if g > 1:
        return {j: v // g for j, v in r.items()}
    return r


def rank(matrix) -> int:
    """Rank over Q of an integer or rational matrix (any row iterable)."""
    pivots: dict[int, dict[int, int]] = {}
    for r in _integer_rows(matrix):
        while r:
            c = min(r)
            p = pivots.get(c)
            if p is None:
                pivots[c] = _normalize(r)
                break
            a, b = p[c], r[c]
            out = {}
            for j in set(r) | set(p):
                v = a * r.get(j, 0) - b * p.get(j, 0)
                if v:
                    out[j] = v
            r = _normalize(out)
    return len(pivots)


def rref(matrix) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form with Fraction entries, and the pivot columns."""
    A = [[Fraction(v) for v in _py(row)] for row in matrix]
    if not A:
        return [], []
    m, n = len(A), len(A[0])
    pivots = []
    r = 0
    for c in range(n):
        pr = next((i for i in range(r, m) if A[i][c]), None)
        if pr is None:
            continue
        A[r], A[pr] = A[pr], A[r]
        inv = 1 / A[r][c]
        A[r] = [v * inv for v in A[r]]
        for i in range(m):
            if i != r and A[i][c]:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return A, pivots


def nullspace(matrix, ncols: int | None = None) -> list[list[Fraction]]:
    """Basis of {x : A x = 0} over Q; ``ncols`` is needed when A has no rows."""
    rows = [list(_py(row)) for row in matrix]
    n = len(rows[0]) if rows else ncols
    if n is None:
        raise ValueError("cannot infer the column count of an empty matrix")
    R, pivots = rref(rows)
    free = [c for c in range(n) if c not in set(pivots)]
    basis = []
    for f in free:
        x = [Fraction(0)] * n
        x[f] = Fraction(1)
        for i, pc in enumerate(pivots):
            x[pc] = -R[i][f]
        basis.append(x)
    return basis


def solve(matrix, rhs: Sequence) -> list[Fraction]:
    """One exact solution of A x = b (free variables set to 0)."""
    rows = [list(_py(row)) for row in matrix]
    b = [Fraction(v) for v in _py(rhs)]
    if not rows:
        if any(b):
            raise InconsistentSystem("nonzero right-hand side for an empty system")
        return []
    n = len(rows[0])
    R, pivots = rref([row + [bi] for row, bi in zip(rows, b)])
    if n in pivots:
        raise InconsistentSystem("the linear system has no solution")
    x = [Fraction(0)] * n
    for i, pc in enumerate(pivots):
        x[pc] = R[i][n]
    return x
