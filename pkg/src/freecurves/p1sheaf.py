"""Vector bundles on P^1 presented by maps between sums of line bundles.

Global sections of ``O(D)`` use the monomial basis ``s^(D-j) t^j``
(``j = 0..D``); ``H^1(O(D))`` for ``D <= -2`` uses the Laurent monomials
``s^(D+j) t^(-j)`` (``j = 1..-D-1``) of the cover ``{s != 0}, {t != 0}``.

Cohomology of the middle sheaf of a complex ``C^0 -> C^1 [-> C^2]`` is
computed as hypercohomology.  Instead of the full (infinite) Cech
bicomplex we use the complex transferred to the cohomology of the terms:
its differential has the induced maps on ``H^0`` and ``H^1`` plus, for
three-term complexes, one secondary component ``H^1(C^0) -> H^0(C^2)``
obtained by lifting through the Cech homotopy of ``C^1``.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field as dc_field
from typing import Sequence

from . import linalg
from .algebra import BinaryForm, FieldSpec, _check_same_field, _uadd, _udivmod, _umul, _usub, _uxgcd
from .errors import (
    InvalidComplexError,
    RankDeficientError,
    SplittingInconsistencyError,
)

__all__ = [
    "FreeSum",
    "SheafMap",
    "FreeComplex",
    "SkyscraperConstraint",
    "PointTransform",
    "SplittingType",
    "fiber_surjective",
    "subbundle_inclusion",
    "cech_cohomology",
    "splitting_type",
    "elementary_transform",
    "kernel_complex",
]


@dataclass(frozen=True)
class FreeSum:
    """The bundle ``O(a_1) + ... + O(a_r)``; order is significant."""

    twists: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "twists", tuple(int(a) for a in self.twists))

    @property
    def rank(self) -> int:
        return len(self.twists)

    @property
    def degree(self) -> int:
        return sum(self.twists)

    def twisted(self, m: int) -> "FreeSum":
        return FreeSum(tuple(a + m for a in self.twists))

    def __add__(self, other: "FreeSum") -> "FreeSum":
        return FreeSum(self.twists + other.twists)

    def h0(self, m: int = 0) -> int:
        return sum(max(0, a + m + 1) for a in self.twists)

    def h1(self, m: int = 0) -> int:
        return sum(max(0, -a - m - 1) for a in self.twists)

    def h0_offsets(self, m: int = 0) -> list:
        """Start index of each summand's block inside ``H^0(self(m))``."""
        out, k = [], 0
        for a in self.twists:
            out.append(k)
            k += max(0, a + m + 1)
        return out

    def __repr__(self):
        return f"FreeSum{self.twists}"


class SheafMap:
    """A map ``source -> target`` given by a matrix of binary forms.

    ``entries[j][i]`` maps ``O(source[i])`` to ``O(target[j])`` and is a form
    of degree ``target[j] - source[i]`` (or the zero form).
    """

    __slots__ = ("field", "source", "target", "entries")

    def __init__(self, field: FieldSpec, source: FreeSum, target: FreeSum, entries):
        rows = tuple(tuple(row) for row in entries)
        if len(rows) != target.rank or any(len(row) != source.rank for row in rows):
            raise ValueError(
                f"matrix shape must be {target.rank}x{source.rank}, got "
                f"{len(rows)}x{len(rows[0]) if rows else 0}"
            )
        for j, row in enumerate(rows):
            for i, f in enumerate(row):
                _check_same_field(field, f.field)
                if not f.is_zero() and f.degree != target.twists[j] - source.twists[i]:
                    raise ValueError(
                        f"entry ({j},{i}) has degree {f.degree}, expected "
                        f"{target.twists[j] - source.twists[i]}"
                    )
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "source", source)
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "entries", rows)

    def __setattr__(self, name, value):
        raise AttributeError("SheafMap is immutable")

    @classmethod
    def from_rows(cls, field: FieldSpec, source: Sequence[int], target: Sequence[int], rows):
        return cls(field, FreeSum(tuple(source)), FreeSum(tuple(target)), rows)

    def is_zero(self) -> bool:
        return all(f.is_zero() for row in self.entries for f in row)

    def compose(self, first: "SheafMap") -> "SheafMap":
        """``self o first``."""
        if first.target != self.source:
            raise ValueError("maps are not composable")
        K = self.field
        rows = []
        for j in range(self.target.rank):
            row = []
            for i in range(first.source.rank):
                acc = BinaryForm.zero(K)
                for k in range(self.source.rank):
                    acc = acc + self.entries[j][k] * first.entries[k][i]
                row.append(acc)
            rows.append(row)
        return SheafMap(K, first.source, self.target, rows)

    def dual(self) -> "SheafMap":
        """Transpose map ``target^v -> source^v``."""
        src = FreeSum(tuple(-b for b in self.target.twists))
        tgt = FreeSum(tuple(-a for a in self.source.twists))
        rows = [[self.entries[j][i] for j in range(self.target.rank)] for i in range(self.source.rank)]
        return SheafMap(self.field, src, tgt, rows)

    def fiber_matrix(self, point) -> list:
        return [[f.evaluate(point) for f in row] for row in self.entries]

    def h0_matrix(self, m: int) -> list:
        """Matrix of ``H^0(source(m)) -> H^0(target(m))``."""
        src_off = self.source.h0_offsets(m)
        tgt_off = self.target.h0_offsets(m)
        ncols = self.source.h0(m)
        nrows = self.target.h0(m)
        M = [[0] * ncols for _ in range(nrows)]
        for j, row in enumerate(self.entries):
            for i, f in enumerate(row):
                Di = self.source.twists[i] + m
                if f.is_zero() or Di < 0:
                    continue
                for u in range(Di + 1):
                    col = src_off[i] + u
                    for w, c in enumerate(f.coeffs):
                        if c:
                            M[tgt_off[j] + u + w][col] += c
        K = self.field
        return [[K.reduce(x) for x in row] for row in M]

    def h1_matrix(self, m: int) -> list:
        """Matrix of ``H^1(source(m)) -> H^1(target(m))`` in Laurent bases."""
        src_off = _h1_offsets(self.source, m)
        tgt_off = _h1_offsets(self.target, m)
        ncols = self.source.h1(m)
        nrows = self.target.h1(m)
        M = [[0] * ncols for _ in range(nrows)]
        for jj, row in enumerate(self.entries):
            Dj = self.target.twists[jj] + m
            if Dj > -2:
                continue
            for i, f in enumerate(row):
                Di = self.source.twists[i] + m
                if f.is_zero() or Di > -2:
                    continue
                for j in range(1, -Di):
                    col = src_off[i] + j - 1
                    for w, c in enumerate(f.coeffs):
                        jp = j - w
                        if c and 1 <= jp <= -Dj - 1:
                            M[tgt_off[jj] + jp - 1][col] += c
        K = self.field
        return [[K.reduce(x) for x in row] for row in M]

    def __eq__(self, other):
        if not isinstance(other, SheafMap):
            return NotImplemented
        return (self.field, self.source, self.target, self.entries) == (
            other.field,
            other.source,
            other.target,
            other.entries,
        )

    def __repr__(self):
        return f"SheafMap({self.source} -> {self.target}, {[list(r) for r in self.entries]})"

    def to_json(self) -> dict:
        return {
            "char": self.field.characteristic,
            "source": list(self.source.twists),
            "target": list(self.target.twists),
            "entries": [[f.to_json() for f in row] for row in self.entries],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "SheafMap":
        K = FieldSpec(int(obj["char"]))
        rows = [[BinaryForm.from_json(f) for f in row] for row in obj["entries"]]
        return cls(K, FreeSum(tuple(obj["source"])), FreeSum(tuple(obj["target"])), rows)


def _h1_offsets(V: FreeSum, m: int) -> list:
    out, k = [], 0
    for a in V.twists:
        out.append(k)
        k += max(0, -(a + m) - 1)
    return out


# ---------------------------------------------------------------------------
# fiberwise rank tests


def _full_row_rank_everywhere(K: FieldSpec, rows: list, ncols: int) -> bool:
    """True iff the matrix of binary forms has rank ``len(rows)`` at every
    point of P^1 over the algebraic closure."""
    q = len(rows)
    if q == 0:
        return True
    if q > ncols:
        return False
    at_infinity = [[f.evaluate((1, 0)) for f in row] for row in rows]
    if linalg.rank(K, at_infinity, ncols) < q:
        return False
    # affine chart t = 1: column Hermite reduction over K[x]; the product of
    # the pivots is the gcd of the maximal minors
    A = [[f.dehomogenize() for f in row] for row in rows]
    for i in range(q):
        nz = [j for j in range(i, ncols) if A[i][j]]
        if not nz:
            return False
        j0 = min(nz, key=lambda j: len(A[i][j]))
        if j0 != i:
            for row in A:
                row[i], row[j0] = row[j0], row[i]
        for j in range(i + 1, ncols):
            b = A[i][j]
            if not b:
                continue
            a = A[i][i]
            g, u, v = _uxgcd(K, a, b)
            a1, _ = _udivmod(K, a, g)
            b1, _ = _udivmod(K, b, g)
            for row in A[i:]:
                ci, cj = row[i], row[j]
                row[i] = _uadd(K, _umul(K, u, ci), _umul(K, v, cj))
                row[j] = _usub(K, _umul(K, a1, cj), _umul(K, b1, ci))
        if len(A[i][i]) != 1:
            return False
    return True


def fiber_surjective(M: SheafMap) -> bool:
    """True iff ``M`` is surjective on the fibre over every closed point."""
    return _full_row_rank_everywhere(M.field, [list(r) for r in M.entries], M.source.rank)


def subbundle_inclusion(M: SheafMap) -> bool:
    """True iff ``M`` is injective on every fibre (a subbundle inclusion)."""
    if M.source.rank == 0:
        return True
    return fiber_surjective(M.dual())


# ---------------------------------------------------------------------------


class FreeComplex:
    """A complex ``terms[0] -> terms[1] (-> terms[2])`` of free sums.

    ``position`` indexes the term whose cohomology sheaf is of interest:
    0 for a two-term kernel presentation, 1 for a three-term presentation.
    """

    def __init__(self, terms: Sequence[FreeSum], maps: Sequence[SheafMap], position: int):
        terms = tuple(terms)
        maps = tuple(maps)
        if len(terms) not in (2, 3) or len(maps) != len(terms) - 1:
            raise ValueError("complex must have 2 or 3 terms and one map fewer")
        for k, f in enumerate(maps):
            if f.source != terms[k] or f.target != terms[k + 1]:
                raise ValueError(f"map {k} does not match the terms")
        if not 0 <= position < len(terms):
            raise ValueError("position out of range")
        self.field = maps[0].field
        self.terms = terms
        self.maps = maps
        self.position = position
        self._checked = False

    def validate(self) -> None:
        """Raise :class:`InvalidComplexError` unless the cohomology at
        ``position`` is a vector bundle and all other cohomology vanishes."""
        if self._checked:
            return
        for k in range(len(self.maps) - 1):
            if not self.maps[k + 1].compose(self.maps[k]).is_zero():
                raise InvalidComplexError("composite_nonzero", f"maps {k},{k + 1}")
        if self.position == 1 and not subbundle_inclusion(self.maps[0]):
            raise InvalidComplexError("not_subbundle", "first map is not a subbundle inclusion")
        if not fiber_surjective(self.maps[-1]):
            raise InvalidComplexError("not_fiber_surjective", "last map is not fibrewise onto")
        self._checked = True

    @property
    def rank(self) -> int:
        """Rank of the cohomology sheaf at ``position``."""
        return sum((-1) ** abs(k - self.position) * T.rank for k, T in enumerate(self.terms))

    @property
    def degree(self) -> int:
        return sum((-1) ** abs(k - self.position) * T.degree for k, T in enumerate(self.terms))

    def euler_characteristic(self, m: int) -> int:
        return self.degree + self.rank * (m + 1)

    def window(self) -> int:
        return 1 + sum(abs(a) + 1 for T in self.terms for a in T.twists)

    def to_json(self) -> dict:
        return {
            "char": self.field.characteristic,
            "terms": [list(T.twists) for T in self.terms],
            "maps": [f.to_json() for f in self.maps],
            "position": self.position,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "FreeComplex":
        maps = [SheafMap.from_json(f) for f in obj["maps"]]
        terms = [FreeSum(tuple(t)) for t in obj["terms"]]
        return cls(terms, maps, int(obj["position"]))

    def __repr__(self):
        arrows = " -> ".join(repr(T) for T in self.terms)
        return f"FreeComplex({arrows}, position={self.position})"


def kernel_complex(M: SheafMap) -> FreeComplex:
    return FreeComplex([M.source, M.target], [M], 0)


def _secondary_matrix(f: SheafMap, g: SheafMap, m: int) -> list:
    """The component ``H^1(C^0(m)) -> H^0(C^2(m))`` of the transferred
    differential for ``C^0 -f-> C^1 -g-> C^2``.

    A Laurent class ``c`` is pushed through ``f``, lifted to the chart
    ``{s != 0}`` by the Cech homotopy (monomials with negative s-exponent and
    non-negative t-exponent), pushed through ``g`` and projected to the
    monomials that are global sections.
    """
    K = f.field
    src_off = _h1_offsets(f.source, m)
    tgt_off = g.target.h0_offsets(m)
    ncols = f.source.h1(m)
    nrows = g.target.h0(m)
    M = [[0] * ncols for _ in range(nrows)]
    for a, Da0 in enumerate(f.source.twists):
        Da = Da0 + m
        if Da > -2:
            continue
        for j in range(1, -Da):
            col = src_off[a] + j - 1
            for b in range(f.target.rank):
                fe = f.entries[b][a]
                if fe.is_zero():
                    continue
                delta = fe.degree
                for w, cf in enumerate(fe.coeffs):
                    if not cf:
                        continue
                    x = Da + j + delta - w
                    y = w - j
                    if x >= 0 or y < 0:
                        continue
                    for c in range(g.target.rank):
                        ge = g.entries[c][b]
                        if ge.is_zero():
                            continue
                        delta2 = ge.degree
                        for w2, cg in enumerate(ge.coeffs):
                            if cg and x + delta2 - w2 >= 0:
                                M[tgt_off[c] + y + w2][col] -= cf * cg
    return [[K.reduce(v) for v in row] for row in M]


def _hypercohomology(cx: FreeComplex, m: int) -> dict:
    """Dimensions of hypercohomology of ``cx(m)`` indexed by degree, where
    degree 0 is the position of interest."""
    K = cx.field
    L = len(cx.terms)
    pos = cx.position
    dims = {(p, q): (T.h0(m) if q == 0 else T.h1(m)) for p, T in enumerate(cx.terms) for q in (0, 1)}
    blocks: dict = {}
    for (p, q) in dims:
        blocks.setdefault(p - pos + q, []).append((p, q))
    cache: dict = {}

    def component(src, dst):
        key = (src, dst)
        if key in cache:
            return cache[key]
        (p, q), (p2, q2) = src, dst
        mat = None
        if p2 == p + 1 and q2 == q:
            mat = cx.maps[p].h0_matrix(m) if q == 0 else cx.maps[p].h1_matrix(m)
        elif p2 == p + 2 and q == 1 and q2 == 0:
            mat = _secondary_matrix(cx.maps[p], cx.maps[p + 1], m)
        cache[key] = mat
        return mat

    def differential_rank(t):
        srcs = [b for b in blocks.get(t, []) if dims[b]]
        dsts = [b for b in blocks.get(t + 1, []) if dims[b]]
        if not srcs or not dsts:
            return 0
        ncols = sum(dims[b] for b in srcs)
        rows = []
        for d in dsts:
            block_rows = [[0] * ncols for _ in range(dims[d])]
            off = 0
            for s in srcs:
                mat = component(s, d)
                if mat is not None:
                    for r_i, row in enumerate(mat):
                        block_rows[r_i][off : off + dims[s]] = row
                off += dims[s]
            rows.extend(block_rows)
        return linalg.rank(K, rows, ncols)

    degrees = range(min(blocks) - 1, max(blocks) + 2)
    ranks = {t: differential_rank(t) for t in degrees}
    out = {}
    for t in range(min(blocks), max(blocks) + 1):
        dim_t = sum(dims[b] for b in blocks.get(t, []))
        out[t] = dim_t - ranks[t] - ranks.get(t - 1, 0)
    return out


def cech_cohomology(cx: FreeComplex, m: int) -> tuple:
    """``(h^0, h^1)`` of the cohomology sheaf of ``cx`` twisted by ``O(m)``."""
    cx.validate()
    hyper = _hypercohomology(cx, m)
    stray = {t: v for t, v in hyper.items() if t not in (0, 1) and v}
    if stray:
        raise InvalidComplexError("stray_cohomology", f"nonzero hypercohomology in degrees {stray}")
    return hyper.get(0, 0), hyper.get(1, 0)


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SplittingType:
    """Multiset ``{e_1 >= ... >= e_r}`` with ``E = O(e_1) + ... + O(e_r)``."""

    degrees: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "degrees", tuple(sorted((int(e) for e in self.degrees), reverse=True)))

    @property
    def rank(self) -> int:
        return len(self.degrees)

    @property
    def degree(self) -> int:
        return sum(self.degrees)

    def h0(self, m: int = 0) -> int:
        return sum(max(0, e + m + 1) for e in self.degrees)

    def h1(self, m: int = 0) -> int:
        return sum(max(0, -e - m - 1) for e in self.degrees)

    def min_degree(self):
        return min(self.degrees) if self.degrees else None

    def is_ample(self) -> bool:
        return all(e >= 1 for e in self.degrees)

    def is_semipositive(self) -> bool:
        return all(e >= 0 for e in self.degrees)

    def render(self) -> str:
        if not self.degrees:
            return "0"
        parts = []
        for e, k in sorted(Counter(self.degrees).items(), reverse=True):
            base = "O" if e == 0 else f"O({e})"
            parts.append(base if k == 1 else f"{base}^{k}")
        return " + ".join(parts)

    def __str__(self):
        return self.render()

    def to_json(self) -> dict:
        return {"degrees": list(self.degrees), "rendered": self.render()}

    @classmethod
    def from_json(cls, obj) -> "SplittingType":
        if isinstance(obj, dict):
            obj = obj["degrees"]
        return cls(tuple(obj))


def _recover(values: dict, W: int) -> list:
    degrees = []
    prev_count = 0
    for m in range(-W, W + 1):
        count = values[m] - values.get(m - 1, 0)
        degrees.extend([-m] * (count - prev_count))
        prev_count = count
    return degrees


def _scan(h, chi, W: int, exhaustive: bool, start: int):
    """Collect (h0, h1) on [-W, W]; non-exhaustive scans stop once h^1
    (going up) or h^0 (going down) vanishes, since both are monotone."""
    h0s, h1s, computed = {}, {}, set()
    start = max(-W, min(W, start))
    if exhaustive:
        for m in range(-W, W + 1):
            h0s[m], h1s[m] = h(m)
            computed.add(m)
        return h0s, h1s, computed
    m = start
    while m <= W:
        h0s[m], h1s[m] = h(m)
        computed.add(m)
        if h1s[m] == 0:
            for m2 in range(m + 1, W + 1):
                h0s[m2], h1s[m2] = chi(m2), 0
            break
        m += 1
    m = start - 1
    while m >= -W:
        h0s[m], h1s[m] = h(m)
        computed.add(m)
        if h0s[m] == 0:
            for m2 in range(-W, m):
                h0s[m2], h1s[m2] = 0, -chi(m2)
            break
        m -= 1
    return h0s, h1s, computed


def _splitting_from_cohomology(h, rank: int, degree: int, W: int, exhaustive: bool) -> SplittingType:
    def chi(m):
        return degree + rank * (m + 1)

    for attempt in range(2):
        h0s, h1s, _ = _scan(h, chi, W, exhaustive or attempt > 0, start=-1)
        degs = _recover(h0s, W)
        st = SplittingType(tuple(degs))
        ok = (
            st.rank == rank
            and st.degree == degree
            and all(st.h0(m) == h0s[m] and st.h1(m) == h1s[m] for m in h0s)
        )
        if ok:
            return st
        W *= 2
    raise SplittingInconsistencyError(
        f"recovered {st.degrees} (rank {st.rank}, degree {st.degree}) disagrees with "
        f"cohomology of a rank {rank}, degree {degree} bundle"
    )


def splitting_type(cx: FreeComplex, exhaustive: bool = False) -> SplittingType:
    """Splitting type of the cohomology sheaf of ``cx``.

    ``h^0`` is scanned over the twists ``[-W, W]`` with ``W = cx.window()``
    and the degrees are read off from ``#{e >= -m} = h0(m) - h0(m-1)``.  With
    ``exhaustive=False`` only the twists where neither ``h^0`` nor ``h^1``
    is forced to vanish are computed; the rest follow by monotonicity.
    """
    cx.validate()
    return _splitting_from_cohomology(
        lambda m: cech_cohomology(cx, m), cx.rank, cx.degree, cx.window(), exhaustive
    )


# ---------------------------------------------------------------------------
# point-supported modifications


def _point(field: FieldSpec, pt) -> tuple:
    pt = (field(pt[0]), field(pt[1]))
    if pt[0] == 0 and pt[1] == 0:
        raise ValueError("(0:0) is not a point of P^1")
    return pt


def evaluation_matrix(field: FieldSpec, V: FreeSum, m: int, point) -> list:
    """``r x h^0(V(m))`` matrix of evaluation at ``point``."""
    s0, t0 = _point(field, point)
    offs = V.h0_offsets(m)
    ncols = V.h0(m)
    rows = []
    for i, a in enumerate(V.twists):
        D = a + m
        row = [field.zero] * ncols
        for j in range(D + 1):
            row[offs[i] + j] = field.reduce(s0 ** (D - j) * t0**j)
        rows.append(row)
    return rows


def derivative_matrix(field: FieldSpec, V: FreeSum, m: int, point, direction) -> list:
    """``r x h^0(V(m))`` matrix of ``d/du sigma(point + u*direction)|_{u=0}``."""
    s0, t0 = _point(field, point)
    ys, yt = field(direction[0]), field(direction[1])
    offs = V.h0_offsets(m)
    ncols = V.h0(m)
    rows = []
    for i, a in enumerate(V.twists):
        D = a + m
        row = [field.zero] * ncols
        for j in range(D + 1):
            val = 0
            if D - j >= 1:
                val += (D - j) * s0 ** (D - j - 1) * t0**j * ys
            if j >= 1:
                val += j * s0 ** (D - j) * t0 ** (j - 1) * yt
            row[offs[i] + j] = field.reduce(val)
        rows.append(row)
    return rows


@dataclass(frozen=True)
class SkyscraperConstraint:
    """A ``q x r`` scalar functional applied to the fibre at ``point``."""

    field: FieldSpec
    point: tuple
    functional: tuple = dc_field(default=())

    def __post_init__(self):
        K = self.field
        object.__setattr__(self, "point", _point(K, self.point))
        rows = tuple(tuple(K(x) for x in row) for row in self.functional)
        object.__setattr__(self, "functional", rows)
        if rows:
            width = len(rows[0])
            if any(len(r) != width for r in rows):
                raise ValueError("ragged functional")
            if linalg.rank(K, [list(r) for r in rows], width) < len(rows):
                raise RankDeficientError("functional does not have full row rank")

    @property
    def q(self) -> int:
        return len(self.functional)

    @classmethod
    def vanishing(cls, field: FieldSpec, point, r: int) -> "SkyscraperConstraint":
        """Full evaluation: sections vanishing at ``point`` (twist by ``-point``)."""
        return cls(field, point, tuple(tuple(1 if i == j else 0 for j in range(r)) for i in range(r)))

    def same_point(self, other_point) -> bool:
        s0, t0 = self.point
        s1, t1 = _point(self.field, other_point)
        return self.field.reduce(s0 * t1 - t0 * s1) == 0

    def to_json(self) -> dict:
        K = self.field
        return {
            "char": K.characteristic,
            "point": [K.to_text(x) for x in self.point],
            "functional": [[K.to_text(x) for x in row] for row in self.functional],
        }


class PointTransform:
    """Subsheaf of ``base`` cut out by point constraints at distinct points.

    Sections are the sections ``sigma`` of ``base`` with
    ``functional . sigma(point) = 0`` for every constraint.
    """

    def __init__(self, field: FieldSpec, base: FreeSum, constraints: Sequence[SkyscraperConstraint] = ()):
        constraints = tuple(constraints)
        for c in constraints:
            if c.q and len(c.functional[0]) != base.rank:
                raise ValueError("constraint width does not match the bundle rank")
            if c.q > base.rank:
                raise RankDeficientError("more conditions than the rank")
        for i, c in enumerate(constraints):
            for c2 in constraints[i + 1 :]:
                if c.same_point(c2.point):
                    raise ValueError("constraints must sit at distinct points")
        self.field = field
        self.base = base
        self.constraints = constraints

    @property
    def rank(self) -> int:
        return self.base.rank

    @property
    def degree(self) -> int:
        return self.base.degree - sum(c.q for c in self.constraints)

    def with_constraint(self, c: SkyscraperConstraint) -> "PointTransform":
        return PointTransform(self.field, self.base, self.constraints + (c,))

    def twisted(self, m: int) -> "PointTransform":
        return PointTransform(self.field, self.base.twisted(m), self.constraints)

    def condition_matrix(self, m: int) -> list:
        rows = []
        for c in self.constraints:
            if c.q == 0:
                continue
            ev = evaluation_matrix(self.field, self.base, m, c.point)
            rows.extend(linalg.matmul(self.field, [list(r) for r in c.functional], ev))
        return rows

    def h0_basis(self, m: int = 0) -> list:
        ncols = self.base.h0(m)
        if ncols == 0:
            return []
        return linalg.nullspace(self.field, self.condition_matrix(m), ncols)

    def cohomology(self, m: int = 0) -> tuple:
        """``(h^0, h^1)`` via ``0 -> E -> base -> skyscrapers -> 0``."""
        ncols = self.base.h0(m)
        rows = self.condition_matrix(m)
        rk = linalg.rank(self.field, rows, ncols) if rows and ncols else 0
        q = sum(c.q for c in self.constraints)
        return ncols - rk, self.base.h1(m) + q - rk

    def constraint_at(self, point) -> SkyscraperConstraint | None:
        for c in self.constraints:
            if c.same_point(point):
                return c
        return None

    def fiber_matrix(self, point, m: int = 0, complement=None) -> list:
        """``r x h^0(base(m))`` matrix taking a section to fibre coordinates
        of this sheaf at ``point``.

        Away from the constraint points this is plain evaluation.  At a
        constraint ``Phi`` the coordinates are ``(Psi s(x), Phi s'(x))``
        where ``Psi`` is ``complement`` (default: coordinate rows completing
        ``Phi``) and ``s'`` is the derivative transverse to ``x``.
        """
        K = self.field
        ev = evaluation_matrix(K, self.base, m, point)
        c = self.constraint_at(point)
        if c is None or c.q == 0:
            return ev
        phi = [list(r) for r in c.functional]
        if complement is None:
            _, piv = linalg.rref(K, phi, self.rank)
            complement = [[K.one if j == i else K.zero for j in range(self.rank)] for i in range(self.rank) if i not in piv]
        psi = [list(r) for r in complement]
        if len(psi) + len(phi) != self.rank or not linalg.is_invertible(K, psi + phi):
            raise RankDeficientError("complement does not complete the constraint to a basis")
        # any direction not proportional to the point works
        direction = (1, 0) if c.point[1] != 0 else (0, 1)
        der = derivative_matrix(K, self.base, m, c.point, direction)
        return linalg.matmul(K, psi, ev) + linalg.matmul(K, phi, der)

    def window(self) -> int:
        return 1 + sum(abs(a) + 1 for a in self.base.twists) + sum(c.q for c in self.constraints)

    def splitting_type(self, exhaustive: bool = False) -> SplittingType:
        return _splitting_from_cohomology(self.cohomology, self.rank, self.degree, self.window(), exhaustive)

    def to_json(self) -> dict:
        return {
            "base": list(self.base.twists),
            "constraints": [c.to_json() for c in self.constraints],
        }

    def __repr__(self):
        return f"PointTransform({self.base}, {len(self.constraints)} constraints)"


def elementary_transform(E: FreeSum, c: SkyscraperConstraint):
    """Sections of ``E`` whose value at ``c.point`` lies in ``ker c.functional``.

    Returns ``(presentation, splitting_type)``; the degree drops by ``c.q``.
    """
    if c.q and len(c.functional[0]) != E.rank:
        raise ValueError("functional width does not match rank")
    if c.q > E.rank:
        raise RankDeficientError("functional has more rows than the rank")
    pt = PointTransform(c.field, E, (c,))
    return pt, pt.splitting_type()
