"""Bundles on two copies of P^1 glued at a node, and the elementary
transform ``K`` of a bundle ``E`` along the ``T``-part of its right side.

Gluing convention: a fibre vector ``v`` on the right is identified with
``glue . v`` on the left.  Cohomology comes from the Mayer-Vietoris
sequence ``0 -> H^0(C) -> H^0(C_1) + H^0(C_2) -> E_node -> H^1(C) -> ...``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

from . import linalg
from .algebra import FieldSpec
from .errors import RankDeficientError, SpanFailureError
from .p1sheaf import FreeSum, PointTransform, SkyscraperConstraint, SplittingType

__all__ = [
    "NodalBundle",
    "TransformInstance",
    "VanishingReport",
    "nodal_cohomology",
    "random_instance",
    "seeded_instance",
    "construct_K",
    "verify_vanishings",
]


def _as_transform(field: FieldSpec, side) -> PointTransform:
    if isinstance(side, PointTransform):
        return side
    if isinstance(side, FreeSum):
        return PointTransform(field, side)
    return PointTransform(field, FreeSum(tuple(side)))


class NodalBundle:
    """``left`` on ``C_1`` and ``right`` on ``C_2`` glued at the node.

    ``left_complement`` / ``right_complement`` choose the fibre frame when a
    constraint sits at the node (see :meth:`PointTransform.fiber_matrix`).
    """

    def __init__(
        self,
        field: FieldSpec,
        left,
        right,
        node_left,
        node_right,
        glue: Sequence[Sequence],
        left_complement=None,
        right_complement=None,
    ):
        self.field = field
        self.left = _as_transform(field, left)
        self.right = _as_transform(field, right)
        if self.left.rank != self.right.rank:
            raise ValueError("left and right ranks differ")
        self.glue = [[field(x) for x in row] for row in glue]
        r = self.left.rank
        if len(self.glue) != r or not linalg.is_invertible(field, self.glue):
            raise RankDeficientError("gluing matrix must be invertible of size rank")
        self.node_left = tuple(field(x) for x in node_left)
        self.node_right = tuple(field(x) for x in node_right)
        self.left_complement = left_complement
        self.right_complement = right_complement

    @property
    def rank(self) -> int:
        return self.left.rank

    @property
    def degree(self) -> int:
        return self.left.degree + self.right.degree


def _twist_side(side: PointTransform, node, twist) -> PointTransform:
    if isinstance(twist, int):
        return side.twisted(twist)
    K = side.field
    for pt in twist:
        c = SkyscraperConstraint.vanishing(K, pt, side.rank)
        if c.same_point(node):
            raise ValueError("point twists must avoid the node")
        side = side.with_constraint(c)
    return side


def _node_images(side: PointTransform, node, complement) -> tuple:
    """(fibre images of a basis of H^0, h^0, h^1)."""
    h0, h1 = side.cohomology()
    basis = side.h0_basis()
    if not basis:
        return [[] for _ in range(side.rank)], h0, h1
    fm = side.fiber_matrix(node, 0, complement)
    cols = linalg.matmul(side.field, fm, [list(col) for col in zip(*basis)])
    return cols, h0, h1


def nodal_cohomology(nb: NodalBundle, twist_left=0, twist_right=0) -> tuple:
    """``(h^0, h^1)`` of the glued bundle.

    A twist is either an integer (tensor by ``O(m)`` on that component) or a
    sequence of points away from the node (sections must vanish there).
    """
    K = nb.field
    left = _twist_side(nb.left, nb.node_left, twist_left)
    right = _twist_side(nb.right, nb.node_right, twist_right)
    evL, h0L, h1L = _node_images(left, nb.node_left, nb.left_complement)
    evR, h0R, h1R = _node_images(right, nb.node_right, nb.right_complement)
    r = nb.rank
    if h0R:
        gR = linalg.matmul(K, nb.glue, evR)
        gR = [[K.reduce(-x) for x in row] for row in gR]
    else:
        gR = [[] for _ in range(r)]
    M = [list(a) + list(b) for a, b in zip(evL, gR)]
    rho = linalg.rank(K, M, h0L + h0R) if h0L + h0R else 0
    return h0L + h0R - rho, h1L + h1R + r - rho


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TransformInstance:
    """Data for the transform: ``E|C_1 = O + F``, ``E|C_2 = T + O^(r-k)``.

    ``glue`` identifies right fibre coordinates (``T`` first) with left
    ones (the ``O`` summand first).
    """

    field: FieldSpec
    r: int
    k: int
    F: SplittingType
    T: SplittingType
    glue: tuple
    node_left: tuple
    node_right: tuple
    y1: tuple
    y2: tuple
    seed: int | None = None

    def __post_init__(self):
        K = self.field
        object.__setattr__(self, "glue", tuple(tuple(K(x) for x in row) for row in self.glue))
        for name in ("node_left", "node_right", "y1", "y2"):
            object.__setattr__(self, name, tuple(K(x) for x in getattr(self, name)))
        if not 1 <= self.k <= self.r:
            raise ValueError("need 1 <= k <= r")
        if self.F.rank != self.r - 1 or self.T.rank != self.k:
            raise ValueError("F must have rank r-1 and T rank k")
        if not self.F.is_ample() or not self.T.is_ample():
            raise ValueError("F and T must have all degrees >= 1")
        if not linalg.is_invertible(K, [list(r) for r in self.glue]) or len(self.glue) != self.r:
            raise RankDeficientError("gluing matrix must be invertible")
        pts = [self.node_left, self.y1, self.y2]
        for i in range(3):
            for j in range(i + 1, 3):
                a, b = pts[i], pts[j]
                if K.reduce(a[0] * b[1] - a[1] * b[0]) == 0:
                    raise ValueError("node, y1 and y2 must be distinct points of C_1")

    def e_left(self) -> FreeSum:
        return FreeSum((0,) + self.F.degrees)

    def e_right(self) -> FreeSum:
        return FreeSum(self.T.degrees + (0,) * (self.r - self.k))

    def spans(self) -> bool:
        """E' (first k right directions) is not inside E (left directions 1..r-1)."""
        return any(self.glue[0][j] != 0 for j in range(self.k))

    def to_json(self) -> dict:
        K = self.field
        pt = lambda p: [K.to_text(x) for x in p]
        return {
            "char": K.characteristic,
            "seed": self.seed,
            "r": self.r,
            "k": self.k,
            "F": list(self.F.degrees),
            "T": list(self.T.degrees),
            "glue": [[K.to_text(x) for x in row] for row in self.glue],
            "node_left": pt(self.node_left),
            "node_right": pt(self.node_right),
            "y1": pt(self.y1),
            "y2": pt(self.y2),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "TransformInstance":
        K = FieldSpec(int(obj["char"]))
        return cls(
            K,
            int(obj["r"]),
            int(obj["k"]),
            SplittingType(tuple(obj["F"])),
            SplittingType(tuple(obj["T"])),
            tuple(tuple(K(x) for x in row) for row in obj["glue"]),
            tuple(K(x) for x in obj["node_left"]),
            tuple(K(x) for x in obj["node_right"]),
            tuple(K(x) for x in obj["y1"]),
            tuple(K(x) for x in obj["y2"]),
            obj.get("seed"),
        )


def _random_point(K: FieldSpec, rng: random.Random, idx: int) -> tuple:
    p = K.characteristic
    if p and idx == p:
        return (0, 1)
    return (1, idx)


def seeded_instance(
    r: int,
    k: int,
    F: Sequence[int],
    T: Sequence[int],
    seed: int,
    field: FieldSpec | None = None,
    max_tries: int = 100,
    rng: random.Random | None = None,
) -> TransformInstance:
    """Instance with the given shape; points and gluing drawn from ``seed``.

    Gluing matrices are resampled until invertible and spanning.
    """
    K = field or FieldSpec(101)
    rng = rng or random.Random(seed)
    npts = K.characteristic + 1 if K.characteristic else 1000
    node_i, y1_i, y2_i = rng.sample(range(npts), 3)
    node_right = _random_point(K, rng, rng.randrange(npts))
    for _ in range(max_tries):
        g = [[K.random_element(rng) for _ in range(r)] for _ in range(r)]
        if linalg.is_invertible(K, g) and any(g[0][j] for j in range(k)):
            break
    else:
        raise RuntimeError("could not sample a spanning gluing matrix")
    return TransformInstance(
        K,
        r,
        k,
        SplittingType(tuple(F)),
        SplittingType(tuple(T)),
        tuple(tuple(row) for row in g),
        _random_point(K, rng, node_i),
        node_right,
        _random_point(K, rng, y1_i),
        _random_point(K, rng, y2_i),
        seed,
    )


def random_instance(
    seed: int,
    rmax: int = 6,
    field: FieldSpec | None = None,
    degree_range: tuple = (1, 3),
) -> TransformInstance:
    """Seeded instance with ``r <= rmax`` and all degrees in ``degree_range``."""
    rng = random.Random(seed)
    r = rng.randint(1, rmax)
    k = rng.randint(1, r)
    lo, hi = degree_range
    F = [rng.randint(lo, hi) for _ in range(r - 1)]
    T = [rng.randint(lo, hi) for _ in range(k)]
    return seeded_instance(r, k, F, T, seed, field, rng=rng)


def construct_K(inst: TransformInstance) -> NodalBundle:
    """The transform ``K`` on the nodal curve.

    On ``C_1``, ``K`` is the sheaf of sections of ``E(node)`` whose value at
    the node lies in ``E'``; on ``C_2`` it is ``T(-node) + O^(r-k)``.
    """
    K = inst.field
    r, k = inst.r, inst.k
    if not inst.spans():
        deficient = [[inst.glue[i][j] for i in range(r)] for j in range(k)]
        raise SpanFailureError("E' lies inside E at the node", deficient_subspace=deficient)
    ginv = linalg.inverse(K, [list(row) for row in inst.glue])
    psi, phi = ginv[:k], ginv[k:]
    base = inst.e_left().twisted(1)
    right = PointTransform(K, FreeSum(tuple(t - 1 for t in inst.T.degrees) + (0,) * (r - k)))
    if phi:
        left = PointTransform(K, base, (SkyscraperConstraint(K, inst.node_left, tuple(map(tuple, phi))),))
        ident = [[1 if i == j else 0 for j in range(r)] for i in range(r)]
        return NodalBundle(K, left, right, inst.node_left, inst.node_right, ident, left_complement=psi)
    left = PointTransform(K, base)
    return NodalBundle(K, left, right, inst.node_left, inst.node_right, inst.glue)


@dataclass
class VanishingReport:
    instance: TransformInstance
    h1_right: int
    h1_left: int
    h1_total: int
    left_type: SplittingType
    right_type: SplittingType
    left_ample: bool
    degree_left_ok: bool
    degree_right_ok: bool
    chi_additive: bool

    @property
    def passed(self) -> bool:
        return self.h1_right == 0 and self.h1_left == 0 and self.h1_total == 0

    def to_json(self) -> dict:
        return {
            "instance": self.instance.to_json(),
            "h1_right_minus_node": self.h1_right,
            "h1_left_minus_y1_y2": self.h1_left,
            "h1_total_minus_y1_y2": self.h1_total,
            "left_type": self.left_type.to_json(),
            "right_type": self.right_type.to_json(),
            "left_ample": self.left_ample,
            "degree_left_ok": self.degree_left_ok,
            "degree_right_ok": self.degree_right_ok,
            "chi_additive": self.chi_additive,
            "passed": self.passed,
        }


def verify_vanishings(inst: TransformInstance) -> VanishingReport:
    K = inst.field
    nb = construct_K(inst)
    r = inst.r
    right_p = nb.right.with_constraint(SkyscraperConstraint.vanishing(K, inst.node_right, r))
    h1_right = right_p.cohomology()[1]
    left_y = nb.left
    for y in (inst.y1, inst.y2):
        left_y = left_y.with_constraint(SkyscraperConstraint.vanishing(K, y, r))
    h1_left = left_y.cohomology()[1]
    h0_tot, h1_tot = nodal_cohomology(nb, [inst.y1, inst.y2], 0)
    left_type = nb.left.splitting_type()
    right_type = nb.right.splitting_type()
    chi_left = left_y.degree + r
    chi_right = nb.right.degree + r
    return VanishingReport(
        inst,
        h1_right,
        h1_left,
        h1_tot,
        left_type,
        right_type,
        left_type.is_ample(),
        nb.left.degree == inst.e_left().degree + inst.k,
        nb.right.degree == inst.T.degree - inst.k,
        h0_tot - h1_tot == chi_left + chi_right - r,
    )
