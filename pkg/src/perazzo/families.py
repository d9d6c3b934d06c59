"""Constructors and samplers for the two extremal families of vanishing-Hessian
cubics and their cone strata.

A minimal-family cubic in N+1 variables is ``x0*g0 + x1*g1 + x2*g2 + h`` with
the ``gi`` quadrics in the last two variables and ``h`` a cubic in ``x3..xN``;
the three quadrics live in a 3-dimensional space, forcing the Hessian
determinant to vanish while a generic member is not a cone.  A maximal-family
cubic needs N = 2k and has the form ``x0*g0 + ... + xk*gk + h`` with all of
``gi``, ``h`` in the last k variables; equivalently, it lies in the square of
the ideal of the k-plane spanned by the first k+1 coordinates.

Samplers draw small integer coefficients and verify the defining rank
conditions exactly, deterministically retrying with the next seed on a
degenerate draw, so every returned member is certified rather than assumed
generic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from random import Random
from typing import List, Sequence

from . import aglib, linalg
from .poly import Polynomial, monomials_of_degree

KINDS = (
    "minimal",
    "maximal",
    "minimal_cone_1",
    "minimal_cone_2",
    "minimal_cone_3",
    "maximal_cone_1",
    "maximal_cone_2",
    "perazzo_p4",
    "specialization_t",
)


@dataclass(frozen=True)
class FamilySpec:
    """A family identifier plus its ambient projective dimension N.

    ``expected_dim_zstar`` is declared metadata: 1 for the minimal family and
    its strata, k-1 for the maximal family at N = 2k.
    """

    kind: str
    N: int

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown family kind {self.kind!r}")
        if self.kind == "perazzo_p4":
            if self.N != 4:
                raise ValueError("perazzo_p4 lives in projective dimension 4")
        elif self.kind == "specialization_t":
            if self.N != 6:
                raise ValueError("the specialization family lives in projective dimension 6")
        elif self.kind.startswith("minimal"):
            if self.N < 4:
                raise ValueError("minimal family needs N >= 4")
        else:
            if self.N < 4 or self.N % 2:
                raise ValueError("maximal family needs even N = 2k with k >= 2")

    @property
    def k(self) -> int:
        return self.N // 2

    @property
    def expected_dim_zstar(self) -> int:
        if self.kind.startswith("maximal"):
            return self.k - 1
        return 1


def _random_quadric(rng: Random, num_vars: int, var_indices: Sequence[int]) -> Polynomial:
    terms = {}
    for m in monomials_of_degree(len(var_indices), 2):
        c = rng.randint(-9, 9)
        if c:
            exps = [0] * num_vars
            for vi, e in zip(var_indices, m):
                exps[vi] = e
            terms[tuple(exps)] = Fraction(c)
    return Polynomial(num_vars, terms)


def _random_cubic_in(rng: Random, num_vars: int, var_indices: Sequence[int]) -> Polynomial:
    terms = {}
    for m in monomials_of_degree(len(var_indices), 3):
        c = rng.randint(-9, 9)
        if c:
            exps = [0] * num_vars
            for vi, e in zip(var_indices, m):
                exps[vi] = e
            terms[tuple(exps)] = Fraction(c)
    return Polynomial(num_vars, terms)


def _quadrics_independent(quadrics: List[Polynomial]) -> bool:
    cols = sorted({m for q in quadrics for m in q.terms})
    idx = {m: j for j, m in enumerate(cols)}
    rows = []
    for q in quadrics:
        row = [Fraction(0)] * len(cols)
        for m, c in q.terms.items():
            row[idx[m]] = c
        rows.append(row)
    return linalg.rank(rows) == len(quadrics)


def perazzo_p4() -> Polynomial:
    """The classical quintic-free witness: x0*x3^2 + x1*x3*x4 + x2*x4^2."""
    x = [Polynomial.variable(5, i) for i in range(5)]
    return x[0] * x[3] * x[3] + x[1] * x[3] * x[4] + x[2] * x[4] * x[4]


def specialization_member(t) -> Polynomial:
    """The one-parameter pencil connecting the two families in 7 variables.

    At t = 0 the member degenerates to x0*x4^2 + x1*x4*x5 + x2*x5^2 + x3*x6^2;
    for t != 0 it is a maximal-family member.  Every member has vanishing
    Hessian determinant.
    """
    t = Fraction(t)
    x = [Polynomial.variable(7, i) for i in range(7)]
    return (x[0] * x[4] * x[4] + x[1] * x[4] * x[5]
            + x[2] * (x[5] * x[5] + t * x[6] * x[6]) + x[3] * x[6] * x[6])


def sample(spec: FamilySpec, seed: int = 0) -> Polynomial:
    """Draw a verified member of the family in canonical coordinates.

    Generic-membership conditions (quadric independence, non-cone for the two
    base families, cone for the cone strata) are checked exactly; a failing
    draw deterministically retries with seed+1.
    """
    for attempt in range(seed, seed + 64):
        f = _sample_once(spec, attempt)
        if f is None:
            continue
        if spec.kind in ("minimal", "maximal"):
            if aglib.is_cone(f):
                continue
        elif spec.kind.endswith(("cone_1", "cone_2", "cone_3")):
            if not aglib.is_cone(f):
                continue
        return f
    raise RuntimeError(f"could not draw a valid {spec.kind} member after 64 attempts")


def _sample_once(spec: FamilySpec, seed: int) -> Polynomial | None:
    rng = Random((spec.kind, spec.N, seed).__repr__())
    N = spec.N
    n = N + 1
    x = [Polynomial.variable(n, i) for i in range(n)]
    kind = spec.kind

    if kind == "perazzo_p4":
        return perazzo_p4()

    if kind == "specialization_t":
        return specialization_member(rng.randint(-9, 9))

    if kind == "minimal":
        gs = [_random_quadric(rng, n, [N - 1, N]) for _ in range(3)]
        if not _quadrics_independent(gs):
            return None
        h = _random_cubic_in(rng, n, list(range(3, n)))
        return x[0] * gs[0] + x[1] * gs[1] + x[2] * gs[2] + h

    if kind == "maximal":
        k = spec.k
        high = list(range(k + 1, n))
        gs = [_random_quadric(rng, n, high) for _ in range(k + 1)]
        if not _quadrics_independent(gs):
            return None
        h = _random_cubic_in(rng, n, high)
        f = h
        for i, g in enumerate(gs):
            f = f + x[i] * g
        return f

    if kind == "minimal_cone_1":
        h = _random_cubic_in(rng, n, list(range(3, N)))
        return x[0] * x[N - 1] * x[N - 1] + h

    if kind == "minimal_cone_2":
        h = _random_cubic_in(rng, n, list(range(4, n)))
        return (x[0] * x[N - 1] * x[N - 1] + x[1] * x[N - 1] * x[N]
                + x[2] * x[N] * x[N] + h)

    if kind == "minimal_cone_3":
        h = _random_cubic_in(rng, n, list(range(3, n)))
        return x[1] * x[N - 1] * x[N] + x[2] * x[N] * x[N] + h

    if kind == "maximal_cone_1":
        k = spec.k
        high = list(range(k + 1, N))
        gs = [_random_quadric(rng, n, high) for _ in range(k + 1)]
        h = _random_cubic_in(rng, n, high)
        f = h
        for i, g in enumerate(gs):
            f = f + x[i] * g
        return f

    if kind == "maximal_cone_2":
        k = spec.k
        high = list(range(k + 1, n))
        gs = [_random_quadric(rng, n, high) for _ in range(k)]
        h = _random_cubic_in(rng, n, high)
        f = h
        for i, g in enumerate(gs):
            f = f + x[i + 1] * g
        return f

    raise AssertionError(kind)


def in_ideal_square(f: Polynomial, plane_vars: Sequence[int]) -> bool:
    """True when every monomial of ``f`` has degree >= 2 in the listed variables."""
    if not plane_vars:
        raise ValueError("in_ideal_square: empty variable list")
    aglib._require_homogeneous(f, "in_ideal_square")
    vs = set(plane_vars)
    for m in f.terms:
        if sum(e for i, e in enumerate(m) if i in vs) < 2:
            return False
    return True


def family_dimension(kind: str, N: int) -> int:
    """Dimension of the family closure inside the space of cubics.

    Closed forms: 5(N-2) + C(N,3) + 4 for the minimal family and one lower for
    its deepest cone stratum; for even N = 2k the maximal family has dimension
    (4k^3 + 15k^2 + 11k - 6)/6 and its cone stratum drops by C(k,2).
    """
    if kind == "minimal":
        if N < 4:
            raise ValueError("minimal family needs N >= 4")
        return 5 * (N - 2) + comb(N, 3) + 4
    if kind == "minimal_cone_3":
        if N < 4:
            raise ValueError("minimal family needs N >= 4")
        return 5 * (N - 2) + comb(N, 3) + 3
    if kind == "maximal":
        if N < 4 or N % 2:
            raise ValueError("maximal family needs even N = 2k with k >= 2")
        k = N // 2
        val, rem = divmod(4 * k**3 + 15 * k**2 + 11 * k - 6, 6)
        assert rem == 0
        return val
    if kind == "maximal_cone_2":
        if N < 4 or N % 2:
            raise ValueError("maximal family needs even N = 2k with k >= 2")
        k = N // 2
        return 2 * k * comb(k + 1, 2) + comb(k, 3) - k * comb(k, 2) + k * k + 2 * k - 1
    raise ValueError(f"no dimension formula for kind {kind!r}")
