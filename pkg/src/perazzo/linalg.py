"""Exact linear algebra over the rationals, plus symbolic determinants.

Ranks and nullspaces use fraction-free (Bareiss-style) elimination on integer
rows obtained by clearing denominators, so no rounding can occur and the
intermediate entries stay single integers rather than fractions.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Dict, Hashable, Iterable, List, Sequence

from .poly import Polynomial


def _int_rows(rows: Iterable[Sequence]) -> List[List[int]]:
    out = []
    for row in rows:
        fracs = [Fraction(x) for x in row]
        den = 1
        for f in fracs:
            den = den * f.denominator // gcd(den, f.denominator)
        ints = [int(f * den) for f in fracs]
        g = 0
        for v in ints:
            g = gcd(g, abs(v))
        if g > 1:
            ints = [v // g for v in ints]
        out.append(ints)
    return out


def rank(rows: Iterable[Sequence]) -> int:
    """Exact rank of a dense matrix given as an iterable of rows."""
    m = _int_rows(rows)
    if not m:
        return 0
    ncols = len(m[0])
    r = 0
    for col in range(ncols):
        piv = None
        for i in range(r, len(m)):
            if m[i][col]:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        pv = m[r][col]
        for i in range(r + 1, len(m)):
            v = m[i][col]
            if not v:
                continue
            g = gcd(abs(v), abs(pv))
            a, b = pv // g, v // g
            row = m[i]
            prow = m[r]
            for j in range(col, ncols):
                row[j] = row[j] * a - prow[j] * b
            g2 = 0
            for x in row:
                g2 = gcd(g2, abs(x))
            if g2 > 1:
                m[i] = [x // g2 for x in row]
        r += 1
        if r == len(m):
            break
    return r


def nullspace(rows: Sequence[Sequence]) -> List[List[Fraction]]:
    """Basis of the right nullspace of a dense matrix, exact."""
    m = [[Fraction(x) for x in row] for row in rows]
    if not m:
        return []
    ncols = len(m[0])
    pivots = {}
    r = 0
    for col in range(ncols):
        piv = None
        for i in range(r, len(m)):
            if m[i][col]:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        pv = m[r][col]
        m[r] = [x / pv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][col]:
                f = m[i][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots[col] = r
        r += 1
        if r == len(m):
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [Fraction(0)] * ncols
        vec[fc] = Fraction(1)
        for col, row in pivots.items():
            vec[col] = -m[row][fc]
        basis.append(vec)
    return basis


def sparse_rank(columns: Iterable[Dict[Hashable, Fraction]]) -> int:
    """Rank of a matrix given as sparse columns keyed by arbitrary row labels."""
    pivots: Dict[Hashable, Dict[Hashable, Fraction]] = {}
    r = 0
    for col in columns:
        vec = dict(col)
        while vec:
            lead = max(vec)
            if lead in pivots:
                prow = pivots[lead]
                factor = vec[lead] / prow[lead]
                for k, v in prow.items():
                    nv = vec.get(k, Fraction(0)) - factor * v
                    if nv:
                        vec[k] = nv
                    else:
                        vec.pop(k, None)
            else:
                pivots[lead] = vec
                r += 1
                break
    return r


def det_polynomial_matrix(matrix: Sequence[Sequence[Polynomial]]) -> Polynomial:
    """Exact determinant of a square matrix of polynomials.

    Expansion proceeds row by row over subsets of used columns, memoised so the
    cost is one polynomial multiplication per (row, column-subset) transition.
    Zero entries prune branches, which makes structurally singular matrices
    (e.g. with a large zero block) cheap to detect.
    """
    n = len(matrix)
    if n == 0:
        raise ValueError("empty matrix")
    nv = matrix[0][0].num_vars
    for row in matrix:
        if len(row) != n:
            raise ValueError("matrix is not square")
    memo: Dict[int, Polynomial] = {}
    full = (1 << n) - 1

    def rec(i: int, used: int) -> Polynomial:
        if i == n:
            return Polynomial.constant(nv, 1)
        cached = memo.get(used)
        if cached is not None:
            return cached
        acc = Polynomial.zero(nv)
        sign = 1
        for j in range(n):
            bit = 1 << j
            if used & bit:
                continue
            entry = matrix[i][j]
            if entry:
                sub = rec(i + 1, used | bit)
                if sub:
                    acc = acc + entry * sub * sign
            sign = -sign
        memo[used] = acc
        return acc

    return rec(0, 0)


def cofactor(matrix: Sequence[Sequence[Polynomial]], i: int, j: int) -> Polynomial:
    """Signed cofactor: (-1)^(i+j) times the (i,j) minor."""
    sub = [[matrix[r][c] for c in range(len(matrix)) if c != j]
           for r in range(len(matrix)) if r != i]
    if not sub:
        return Polynomial.constant(matrix[0][0].num_vars, 1)
    d = det_polynomial_matrix(sub)
    return d if (i + j) % 2 == 0 else -d
