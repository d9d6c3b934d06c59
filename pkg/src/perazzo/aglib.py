"""Invariants of the graded Artinian Gorenstein algebra attached to a form.

For a homogeneous ``f`` the algebra is the quotient of the operator ring by
the annihilator of ``f`` under the differentiation action.  The functions here
compute the standard battery of invariants for the socle-degree-3 case: cone
detection, Hessians and their determinants, Hilbert functions via catalecticant
ranks, higher Hessians, Jordan types, and Hessian rank statistics on linear
subspaces.  Everything is exact; symbolic determinant vanishing is decided
symbolically, never by sampling alone.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from random import Random
from typing import List, Sequence, Tuple

from . import linalg
from .poly import Polynomial, apply_operator, linear_form, monomials_of_degree

Partition = Tuple[int, ...]


@dataclass(frozen=True)
class CubicReport:
    """Summary invariants of a single cubic form.

    ``slp`` is None when the form is a cone: the Lefschetz question is posed
    for the full-codimension algebra only.
    """

    f: Polynomial
    is_cone: bool
    hess_zero: bool
    hilbert: Tuple[int, ...]
    slp: bool | None


def _require_homogeneous(f: Polynomial, context: str) -> int:
    if f.is_zero():
        raise ValueError(f"{context}: zero polynomial")
    if not f.is_homogeneous():
        raise ValueError(f"{context}: polynomial is not homogeneous")
    return f.homogeneous_degree()


def is_cone(f: Polynomial) -> bool:
    """True when the partial derivatives of ``f`` are linearly dependent."""
    _require_homogeneous(f, "is_cone")
    cols = sorted({m for i in range(f.num_vars) for m in f.partial(i).terms})
    col_index = {m: j for j, m in enumerate(cols)}
    rows = []
    for i in range(f.num_vars):
        row = [Fraction(0)] * len(cols)
        for m, c in f.partial(i).terms.items():
            row[col_index[m]] = c
        rows.append(row)
    return linalg.rank(rows) < f.num_vars


def hessian(f: Polynomial) -> List[List[Polynomial]]:
    """Symmetric matrix of second partials of ``f``."""
    d = _require_homogeneous(f, "hessian")
    if d < 2:
        raise ValueError("hessian: degree must be at least 2")
    n = f.num_vars
    firsts = [f.partial(i) for i in range(n)]
    mat = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            entry = firsts[i].partial(j)
            mat[i][j] = entry
            mat[j][i] = entry
    return mat


def hess_det(f: Polynomial) -> Polynomial:
    """Exact symbolic determinant of the Hessian matrix of ``f``."""
    return linalg.det_polynomial_matrix(hessian(f))


def hessian_at(f: Polynomial, point: Sequence) -> List[List[Fraction]]:
    return [[entry.evaluate(point) for entry in row] for row in hessian(f)]


def hessian_rank_at(f: Polynomial, point: Sequence) -> int:
    """Exact rank of the Hessian matrix evaluated at a rational point."""
    return linalg.rank(hessian_at(f, point))


def catalecticant_matrix(f: Polynomial, k: int) -> Tuple[List[Tuple[int, ...]], List[List[Fraction]]]:
    """Matrix of the degree-k operator monomials acting on ``f``.

    Rows are indexed by the degree-k operator monomials (graded-lex order),
    columns by the monomials of degree d-k.  Returns (row monomials, matrix).
    """
    d = _require_homogeneous(f, "catalecticant")
    if not 0 <= k <= d:
        raise ValueError(f"catalecticant: k={k} out of range for degree {d}")
    ops = list(monomials_of_degree(f.num_vars, k))
    cols = list(monomials_of_degree(f.num_vars, d - k))
    col_index = {m: j for j, m in enumerate(cols)}
    rows = []
    for op in ops:
        image = apply_operator(Polynomial.monomial(op), f)
        row = [Fraction(0)] * len(cols)
        for m, c in image.terms.items():
            row[col_index[m]] = c
        rows.append(row)
    return ops, rows


def hilbert_function(f: Polynomial) -> Tuple[int, ...]:
    """Hilbert function of the quotient algebra of ``f``, one entry per degree.

    Entry k is the rank of the degree-k catalecticant matrix, i.e. the number
    of independent degree-k operator images of ``f``.
    """
    d = _require_homogeneous(f, "hilbert_function")
    return tuple(linalg.rank(catalecticant_matrix(f, k)[1]) for k in range(d + 1))


def algebra_basis(f: Polynomial, k: int) -> List[Tuple[int, ...]]:
    """Degree-k monomial basis of the quotient algebra, chosen deterministically.

    Greedy over graded-lex order: keep each operator monomial whose image of
    ``f`` increases the rank of the rows kept so far.
    """
    ops, rows = catalecticant_matrix(f, k)
    kept: List[Tuple[int, ...]] = []
    kept_rows: List[List[Fraction]] = []
    current = 0
    for op, row in zip(ops, rows):
        candidate = kept_rows + [row]
        r = linalg.rank(candidate)
        if r > current:
            kept.append(op)
            kept_rows.append(row)
            current = r
    return kept


def hessian_k(f: Polynomial, k: int) -> List[List[Polynomial]]:
    """Higher Hessian of order k: images of basis-pair products acting on ``f``."""
    d = _require_homogeneous(f, "hessian_k")
    if not 0 <= 2 * k <= d:
        raise ValueError(f"hessian_k: k={k} out of range for degree {d}")
    basis = algebra_basis(f, k)
    mat = []
    for a in basis:
        row = []
        for b in basis:
            prod = tuple(x + y for x, y in zip(a, b))
            row.append(apply_operator(Polynomial.monomial(prod), f))
        mat.append(row)
    return mat


def slp_socle3(f: Polynomial) -> CubicReport:
    """Full report for a cubic: cone flag, Hessian vanishing, Hilbert, SLP.

    SLP for socle degree 3 holds exactly when the Hessian determinant is not
    identically zero; for cones the flag is reported as None.
    """
    d = _require_homogeneous(f, "slp_socle3")
    if d != 3:
        raise ValueError(f"slp_socle3: expected a cubic, got degree {d}")
    cone = is_cone(f)
    hz = hess_det(f).is_zero()
    hilb = hilbert_function(f)
    slp = None if cone else not hz
    return CubicReport(f=f, is_cone=cone, hess_zero=hz, hilbert=hilb, slp=slp)


def jordan_type(f: Polynomial, L_coeffs: Sequence) -> Partition:
    """Jordan partition of multiplication by the linear operator with the
    given coefficients, for a non-cone cubic.

    The partition depends only on r, the rank of the Hessian at the point with
    those coordinates: one block of size 4, r-1 blocks of size 2, and size-1
    blocks filling up to the algebra dimension 2 + 2(N+1).
    """
    d = _require_homogeneous(f, "jordan_type")
    if d != 3:
        raise ValueError(f"jordan_type: expected a cubic, got degree {d}")
    point = [Fraction(c) for c in L_coeffs]
    if len(point) != f.num_vars:
        raise ValueError("jordan_type: coefficient vector has wrong length")
    if not any(point):
        raise ValueError("jordan_type: zero linear form")
    if is_cone(f):
        raise ValueError("jordan_type: input is a cone")
    r = hessian_rank_at(f, point)
    N = f.num_vars - 1
    return (4,) + (2,) * (r - 1) + (1,) * (2 * (N + 1 - r))


def rank_profile(f: Polynomial, subspace_basis: Sequence[Sequence], samples: int,
                 seed: int) -> Counter:
    """Multiset of exact Hessian ranks at seeded random points of a subspace.

    Points are random small-integer combinations of the basis vectors; the
    zero combination is rejected and redrawn.
    """
    if not subspace_basis:
        raise ValueError("rank_profile: empty basis")
    basis = [[Fraction(c) for c in b] for b in subspace_basis]
    if linalg.rank(basis) < len(basis):
        raise ValueError("rank_profile: basis points are linearly dependent")
    rng = Random(seed)
    profile: Counter = Counter()
    for _ in range(samples):
        while True:
            weights = [rng.randint(-9, 9) for _ in basis]
            if any(weights):
                break
        point = [sum(w * b[i] for w, b in zip(weights, basis)) for i in range(f.num_vars)]
        profile[hessian_rank_at(f, point)] += 1
    return profile


def is_nilpotent_index3(f: Polynomial, L_coeffs: Sequence) -> bool:
    """Whether the cube of the given linear operator annihilates the cubic ``f``."""
    d = _require_homogeneous(f, "is_nilpotent_index3")
    if d != 3:
        raise ValueError(f"is_nilpotent_index3: expected a cubic, got degree {d}")
    point = [Fraction(c) for c in L_coeffs]
    if len(point) != f.num_vars:
        raise ValueError("is_nilpotent_index3: coefficient vector has wrong length")
    if not any(point):
        raise ValueError("is_nilpotent_index3: zero linear form")
    L = linear_form(point)
    return apply_operator(L ** 3, f).is_zero()
