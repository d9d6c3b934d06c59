"""Graded intersection rings of flag-bundle towers over a point.

A ``Tower`` is built one two-step flag bundle at a time: each level fixes a
subbundle/quotient pair of an ambient bundle already living on the tower.  The
ring is presented on tautological Chern-class generators with the Whitney
relation imposed as a truncated power-series identity; each graded piece is
reduced by exact Gaussian elimination to a deterministic monomial basis, and
the resulting per-degree normal-form tables drive all ring arithmetic.

Bundles are ``Sheaf`` values: an integer rank (negative ranks and formal
differences are allowed) plus a total Chern class.  Tensor, symmetric and
exterior powers go through the Chern character and Adams operations, so they
are valid for arbitrary ranks.  Segre classes are the componentwise inverse of
the total Chern class.

Integration against the fundamental class is normalised through the Euler
characteristic: the tangent bundle of the tower is the sum of the relative
Hom bundles, whose top Chern class must integrate to the total number of
coordinate flags.  This pins the integral functional from the tower data
alone and makes every pipeline self-checking.

All coefficients are exact rationals throughout; completed towers are
immutable and safe for concurrent read-only use.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb, factorial, gcd
from typing import Dict, List, Sequence, Tuple

Mono = Tuple[int, ...]
Comp = Dict[Mono, Fraction]

_ZERO = Fraction(0)
_ONE = Fraction(1)


def _mono_mul(a: Mono, b: Mono) -> Mono:
    if len(a) != len(b):
        n = max(len(a), len(b))
        a = a + (0,) * (n - len(a))
        b = b + (0,) * (n - len(b))
    return tuple(x + y for x, y in zip(a, b))


def _free_addmul(acc: Comp, p: Comp, q: Comp, scale: Fraction) -> None:
    for m1, v1 in p.items():
        for m2, v2 in q.items():
            key = _mono_mul(m1, m2)
            nv = acc.get(key, _ZERO) + scale * v1 * v2
            if nv:
                acc[key] = nv
            else:
                acc.pop(key, None)


class Tower:
    """A flag-bundle tower over a point with its graded intersection ring."""

    def __init__(self):
        self.gen_degrees: List[int] = []
        self.levels: List[dict] = []
        self.dimension = 0
        self._relations: List[Tuple[int, Comp]] = []
        self._mono: Dict[int, List[Mono]] = {}
        self._std: Dict[int, List[Mono]] = {}
        self._nf: Dict[int, Dict[Mono, Comp]] = {}
        self._pivot_nf: Dict[int, Dict[Mono, Comp]] = {}
        self._point_value: Fraction | None = None

    # -- construction --------------------------------------------------

    def flag_bundle(self, ranks: Tuple[int, int], ambient: "Sheaf | None" = None) -> Tuple["Sheaf", "Sheaf"]:
        """Extend the tower by the flag bundle of subbundles of the ambient.

        ``ranks = (a, b)`` asks for a tautological subbundle S of rank a and
        quotient Q of rank b; the ambient must have rank a + b (a trivial
        bundle of that rank when omitted).  Returns (S, Q).
        """
        a, b = ranks
        if a < 1 or b < 1:
            raise ValueError(f"flag ranks must be positive, got {ranks}")
        if ambient is None:
            ambient = Sheaf(self, a + b, RingElement.unit(self))
        if ambient.tower is not self:
            raise ValueError("ambient sheaf lives on a different tower")
        if ambient.rank != a + b:
            raise ValueError(f"ambient rank {ambient.rank} != {a} + {b}")
        amb = [dict(ambient.chern.component(d)) for d in range(a + b + 1)]

        # Generators are the Chern classes of the smaller side; the other
        # side's classes come out of the Whitney series.  Both bundles are
        # returned either way, so callers never see the choice.
        gen_is_sub = a <= b
        g = a if gen_is_sub else b
        other = b if gen_is_sub else a
        old_n = len(self.gen_degrees)
        self.gen_degrees.extend(range(1, g + 1))
        n = len(self.gen_degrees)
        self.dimension += a * b

        gen_cls: List[Comp] = [{(0,) * n: _ONE}]
        for i in range(1, g + 1):
            e = [0] * n
            e[old_n + i - 1] = 1
            gen_cls.append({tuple(e): _ONE})

        top = a + b
        inv: List[Comp] = [{(0,) * n: _ONE}]
        for m in range(1, top + 1):
            acc: Comp = {}
            for i in range(1, min(g, m) + 1):
                _free_addmul(acc, gen_cls[i], inv[m - i], -_ONE)
            inv.append(acc)
        series: List[Comp] = []
        for j in range(top + 1):
            acc = {}
            for i in range(min(j, len(amb) - 1) + 1):
                if amb[i]:
                    _free_addmul(acc, amb[i], inv[j - i], _ONE)
            series.append(acc)

        for j in range(other + 1, top + 1):
            if series[j]:
                self._relations.append((j, series[j]))
        self._mono.clear()
        self._std.clear()
        self._nf.clear()
        self._pivot_nf.clear()
        self._point_value = None

        gen_total = [gen_cls[i] for i in range(g + 1)]
        other_total = [series[j] for j in range(other + 1)]
        if gen_is_sub:
            s_comps, q_comps = gen_total, other_total
        else:
            s_comps, q_comps = other_total, gen_total
        S = Sheaf(self, a, RingElement(self, {d: c for d, c in enumerate(s_comps) if c}))
        Q = Sheaf(self, b, RingElement(self, {d: c for d, c in enumerate(q_comps) if c}))
        self.levels.append({"sub_rank": a, "quot_rank": b, "sub": S.chern, "quot": Q.chern})
        return S, Q

    # -- graded structure ------------------------------------------------

    def _pad(self, m: Mono) -> Mono:
        n = len(self.gen_degrees)
        return m if len(m) == n else m + (0,) * (n - len(m))

    def monomials(self, d: int) -> List[Mono]:
        got = self._mono.get(d)
        if got is None:
            degs = self.gen_degrees
            out: List[Mono] = []

            def rec(i, rem, cur):
                if i == len(degs) - 1:
                    if rem % degs[i] == 0:
                        out.append(tuple(cur + [rem // degs[i]]))
                    return
                for e in range(rem // degs[i], -1, -1):
                    rec(i + 1, rem - e * degs[i], cur + [e])

            if degs:
                rec(0, d, [])
            elif d == 0:
                out.append(())
            got = sorted(out, reverse=True)
            self._mono[d] = got
        return got

    def basis(self, d: int) -> List[Mono]:
        """Monomial basis of the degree-d graded piece."""
        self._tables(d)
        return self._std[d]

    def normal_forms(self, d: int) -> Dict[Mono, Comp]:
        self._tables(d)
        return self._nf[d]

    def _tables(self, d: int) -> None:
        if d in self._nf:
            return
        if d > self.dimension or d < 0:
            self._std[d] = []
            self._nf[d] = {}
            self._pivot_nf[d] = {}
            return
        for gd in sorted(set(self.gen_degrees)):
            if d - gd >= 0:
                self._tables(d - gd)

        monos = self.monomials(d)
        index = {m: i for i, m in enumerate(monos)}
        rows: List[Dict[int, int]] = []

        def add_row(poly: Comp) -> None:
            den = 1
            for v in poly.values():
                den = den * v.denominator // gcd(den, v.denominator)
            row = {index[self._pad(m)]: int(v * den) for m, v in poly.items()}
            if row:
                rows.append(row)

        for rel_deg, rel in self._relations:
            if rel_deg == d:
                add_row(rel)
        for gi, gd in enumerate(self.gen_degrees):
            lower = d - gd
            if lower < 0:
                continue
            shift = [0] * len(self.gen_degrees)
            shift[gi] = 1
            shift = tuple(shift)
            for lead, nf in self._pivot_nf.get(lower, {}).items():
                poly: Comp = {_mono_mul(lead, shift): _ONE}
                for m, v in nf.items():
                    poly[_mono_mul(m, shift)] = -v
                add_row(poly)

        # sparse echelon: pivot on the smallest column index (largest monomial)
        pivots: Dict[int, Dict[int, int]] = {}
        for row in rows:
            while row:
                lead = min(row)
                prow = pivots.get(lead)
                if prow is None:
                    g = 0
                    for v in row.values():
                        g = gcd(g, abs(v))
                    if g > 1:
                        row = {k: v // g for k, v in row.items()}
                    pivots[lead] = row
                    break
                a, b = row[lead], prow[lead]
                g = gcd(abs(a), abs(b))
                ma, mb = b // g, a // g
                new = {k: v * ma for k, v in row.items()}
                for k, v in prow.items():
                    nv = new.get(k, 0) - v * mb
                    if nv:
                        new[k] = nv
                    else:
                        new.pop(k, None)
                row = new

        std_idx = [i for i in range(len(monos)) if i not in pivots]
        stdset = set(std_idx)
        nf_idx: Dict[int, Dict[int, Fraction]] = {}
        for lead in sorted(pivots, reverse=True):
            row = pivots[lead]
            lc = row[lead]
            expr: Dict[int, Fraction] = {}
            for k, v in row.items():
                if k == lead:
                    continue
                c = Fraction(-v, lc)
                if k in stdset:
                    nv = expr.get(k, _ZERO) + c
                else:
                    for k2, v2 in nf_idx[k].items():
                        nv2 = expr.get(k2, _ZERO) + c * v2
                        if nv2:
                            expr[k2] = nv2
                        else:
                            expr.pop(k2, None)
                    continue
                if nv:
                    expr[k] = nv
                else:
                    expr.pop(k, None)
            nf_idx[lead] = expr

        std = [monos[i] for i in std_idx]
        nfmap: Dict[Mono, Comp] = {}
        pivot_nf: Dict[Mono, Comp] = {}
        for i, m in enumerate(monos):
            if i in stdset:
                nfmap[m] = {m: _ONE}
            else:
                val = {monos[k]: v for k, v in nf_idx[i].items()}
                nfmap[m] = val
                pivot_nf[m] = val
        self._std[d] = std
        self._nf[d] = nfmap
        self._pivot_nf[d] = pivot_nf

    # -- integration ------------------------------------------------------

    def euler_characteristic(self) -> int:
        chi = 1
        for lvl in self.levels:
            chi *= comb(lvl["sub_rank"] + lvl["quot_rank"], lvl["sub_rank"])
        return chi

    def _point_class_value(self) -> Fraction:
        """Integral of the unique top-degree basis monomial."""
        if self._point_value is None:
            D = self.dimension
            std = self.basis(D)
            if len(std) != 1:
                raise RuntimeError(
                    f"relation reduction failed: top degree has dimension {len(std)}")
            tangent = None
            for lvl in self.levels:
                s = Sheaf(self, lvl["sub_rank"], lvl["sub"])
                q = Sheaf(self, lvl["quot_rank"], lvl["quot"])
                h = s.dual() * q
                tangent = h if tangent is None else tangent + h
            ctop = tangent.chern.component(D).get(std[0], _ZERO)
            if not ctop:
                raise RuntimeError("degenerate tower: top Chern class of the tangent vanishes")
            self._point_value = Fraction(self.euler_characteristic()) / ctop
        return self._point_value

    def integral(self, x: "RingElement") -> Fraction:
        """Integrate the top-degree component against the fundamental class."""
        if x.tower is not self:
            raise ValueError("element lives on a different tower")
        D = self.dimension
        comp = x.component(D)
        if not comp:
            return Fraction(0)
        std = self.basis(D)
        return comp.get(std[0], _ZERO) * self._point_class_value()


class RingElement:
    """An element of the tower's graded ring, reduced degreewise."""

    __slots__ = ("tower", "comps")

    def __init__(self, tower: Tower, comps: Dict[int, Comp]):
        self.tower = tower
        self.comps = {d: c for d, c in comps.items() if c and d <= tower.dimension}

    @classmethod
    def unit(cls, tower: Tower) -> "RingElement":
        return cls(tower, {0: {(0,) * len(tower.gen_degrees): _ONE}})

    @classmethod
    def zero(cls, tower: Tower) -> "RingElement":
        return cls(tower, {})

    def component(self, d: int) -> Comp:
        """Degree-d part over the degree-d monomial basis."""
        raw = self.comps.get(d)
        if not raw:
            return {}
        nfmap = self.tower.normal_forms(d)
        out: Comp = {}
        for m, v in raw.items():
            for ms, vs in nfmap[self.tower._pad(m)].items():
                nv = out.get(ms, _ZERO) + v * vs
                if nv:
                    out[ms] = nv
                else:
                    out.pop(ms, None)
        return out

    def graded(self) -> Dict[int, Comp]:
        return {d: self.component(d) for d in sorted(self.comps)}

    def is_zero(self) -> bool:
        return all(not self.component(d) for d in self.comps)

    def __eq__(self, other):
        if not isinstance(other, RingElement) or other.tower is not self.tower:
            return NotImplemented
        for d in set(self.comps) | set(other.comps):
            if self.component(d) != other.component(d):
                return False
        return True

    def __hash__(self):  # pragma: no cover
        return id(self)

    def __add__(self, other: "RingElement") -> "RingElement":
        out = {d: dict(c) for d, c in self.comps.items()}
        for d, c in other.comps.items():
            acc = out.setdefault(d, {})
            for m, v in c.items():
                nv = acc.get(m, _ZERO) + v
                if nv:
                    acc[m] = nv
                else:
                    acc.pop(m, None)
        return RingElement(self.tower, out)

    def __sub__(self, other: "RingElement") -> "RingElement":
        return self + other.scale(-1)

    def scale(self, c) -> "RingElement":
        c = Fraction(c)
        if not c:
            return RingElement.zero(self.tower)
        return RingElement(self.tower, {d: {m: v * c for m, v in comp.items()}
                                        for d, comp in self.comps.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if other.tower is not self.tower:
            raise ValueError("elements live on different towers")
        t = self.tower
        D = t.dimension
        out: Dict[int, Comp] = {}
        for d1, c1 in self.comps.items():
            for d2, c2 in other.comps.items():
                d = d1 + d2
                if d > D:
                    continue
                nfmap = t.normal_forms(d)
                acc = out.setdefault(d, {})
                for m1, v1 in c1.items():
                    for m2, v2 in c2.items():
                        v = v1 * v2
                        for ms, vs in nfmap[t._pad(_mono_mul(m1, m2))].items():
                            nv = acc.get(ms, _ZERO) + v * vs
                            if nv:
                                acc[ms] = nv
                            else:
                                acc.pop(ms, None)
        return RingElement(self.tower, out)

    __rmul__ = __mul__

    def inverse(self) -> "RingElement":
        """Inverse of a power series with unit constant term, truncated."""
        t = self.tower
        c0 = self.component(0)
        unit = (0,) * len(t.gen_degrees)
        if c0.get(unit, _ZERO) != 1 or len(c0) != 1:
            raise ValueError("series inverse needs constant term 1")
        D = t.dimension
        parts = [RingElement(t, {d: self.component(d)}) for d in range(D + 1)]
        inv = [RingElement.unit(t)]
        for m in range(1, D + 1):
            acc = RingElement.zero(t)
            for i in range(1, m + 1):
                if parts[i].comps:
                    acc = acc + parts[i] * inv[m - i]
            inv.append(acc.scale(-1))
        total: Dict[int, Comp] = {}
        for m, elt in enumerate(inv):
            comp = elt.component(m)
            if comp:
                total[m] = comp
        return RingElement(t, total)

    def __repr__(self):
        degs = {d: len(self.component(d)) for d in sorted(self.comps)}
        return f"RingElement(degrees {degs})"


class Sheaf:
    """A (possibly virtual) sheaf on a tower: rank plus total Chern class."""

    __slots__ = ("tower", "rank", "chern", "_character")

    def __init__(self, tower: Tower, rank: int, chern: RingElement):
        self.tower = tower
        self.rank = rank
        self.chern = chern
        self._character = None

    def chern_class(self, i: int) -> RingElement:
        return RingElement(self.tower, {i: self.chern.component(i)})

    # -- additive structure -------------------------------------------

    def _check(self, other: "Sheaf"):
        if other.tower is not self.tower:
            raise ValueError("sheaves live on different towers")

    def __add__(self, other: "Sheaf") -> "Sheaf":
        self._check(other)
        return Sheaf(self.tower, self.rank + other.rank, self.chern * other.chern)

    def __sub__(self, other: "Sheaf") -> "Sheaf":
        self._check(other)
        return Sheaf(self.tower, self.rank - other.rank, self.chern * other.chern.inverse())

    def direct_sum_power(self, n: int) -> "Sheaf":
        """Direct sum of n copies."""
        if n < 0:
            raise ValueError("negative multiplicity")
        result = Sheaf(self.tower, 0, RingElement.unit(self.tower))
        base = self
        while n:
            if n & 1:
                result = result + base
            base = base + base
            n >>= 1
        return result

    def dual(self) -> "Sheaf":
        comps = {d: {m: (v if d % 2 == 0 else -v) for m, v in self.chern.comps[d].items()}
                 for d in self.chern.comps}
        return Sheaf(self.tower, self.rank, RingElement(self.tower, comps))

    # -- Chern character and lambda operations --------------------------

    def character(self) -> RingElement:
        """Chern character, degree m component in the degree-m graded piece."""
        if self._character is None:
            t = self.tower
            D = t.dimension
            c = [RingElement(t, {d: self.chern.component(d)}) for d in range(D + 1)]
            p: List[RingElement] = [RingElement.zero(t)]
            for m in range(1, D + 1):
                acc = c[m].scale(Fraction((-1) ** (m - 1) * m))
                for i in range(1, m):
                    if c[i].comps and p[m - i].comps:
                        acc = acc + (c[i] * p[m - i]).scale(Fraction((-1) ** (i - 1)))
                p.append(acc)
            total: Dict[int, Comp] = {0: {(0,) * len(t.gen_degrees): Fraction(self.rank)}}
            for m in range(1, D + 1):
                comp = p[m].scale(Fraction(1, factorial(m))).component(m)
                if comp:
                    total[m] = comp
            self._character = RingElement(t, total)
        return self._character

    @staticmethod
    def from_character(tower: Tower, rank: int, ch: RingElement) -> "Sheaf":
        D = tower.dimension
        p = [RingElement(tower, {m: ch.component(m)}).scale(Fraction(factorial(m)))
             for m in range(D + 1)]
        e: List[RingElement] = [RingElement.unit(tower)]
        for m in range(1, D + 1):
            acc = RingElement.zero(tower)
            for i in range(1, m + 1):
                if p[i].comps and e[m - i].comps:
                    acc = acc + (e[m - i] * p[i]).scale(Fraction((-1) ** (i - 1)))
            e.append(acc.scale(Fraction(1, m)))
        total: Dict[int, Comp] = {}
        for m in range(D + 1):
            comp = e[m].component(m)
            if comp:
                total[m] = comp
        sheaf = Sheaf(tower, rank, RingElement(tower, total))
        sheaf._character = ch
        return sheaf

    def adams(self, j: int) -> RingElement:
        """Character of the j-th Adams operation: degree m scaled by j^m."""
        ch = self.character()
        return RingElement(self.tower, {d: {m: v * j ** d for m, v in c.items()}
                                        for d, c in ch.comps.items()})

    def __mul__(self, other: "Sheaf") -> "Sheaf":
        self._check(other)
        return Sheaf.from_character(self.tower, self.rank * other.rank,
                                    self.character() * other.character())

    def sym2(self) -> "Sheaf":
        ch = self.character()
        out = (ch * ch + self.adams(2)).scale(Fraction(1, 2))
        return Sheaf.from_character(self.tower, self.rank * (self.rank + 1) // 2, out)

    def wedge2(self) -> "Sheaf":
        ch = self.character()
        out = (ch * ch - self.adams(2)).scale(Fraction(1, 2))
        return Sheaf.from_character(self.tower, self.rank * (self.rank - 1) // 2, out)

    def sym3(self) -> "Sheaf":
        ch = self.character()
        out = (ch * ch * ch + (ch * self.adams(2)).scale(3) + self.adams(3).scale(2))
        r = self.rank
        return Sheaf.from_character(self.tower, r * (r + 1) * (r + 2) // 6,
                                    out.scale(Fraction(1, 6)))

    def wedge3(self) -> "Sheaf":
        ch = self.character()
        out = (ch * ch * ch - (ch * self.adams(2)).scale(3) + self.adams(3).scale(2))
        r = self.rank
        return Sheaf.from_character(self.tower, r * (r - 1) * (r - 2) // 6,
                                    out.scale(Fraction(1, 6)))

    # -- Segre classes ---------------------------------------------------

    def total_segre(self) -> RingElement:
        """Inverse of the total Chern class, truncated at the tower dimension."""
        return self.chern.inverse()

    def segre(self, m: int) -> RingElement:
        if not 0 <= m <= self.tower.dimension:
            raise ValueError(f"Segre degree {m} out of range")
        return RingElement(self.tower, {m: self.total_segre().component(m)})

    def __repr__(self):
        return f"Sheaf(rank {self.rank} on {len(self.tower.levels)}-level tower)"


def segre(E: Sheaf, m: int) -> RingElement:
    return E.segre(m)


def integral(x: RingElement) -> Fraction:
    return x.tower.integral(x)
