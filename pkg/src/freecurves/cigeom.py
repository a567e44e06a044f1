"""Complete intersections with boundary divisors, restricted to rational curves.

A :class:`CIModel` is ``X = {F_1 = ... = F_l = 0}`` in ``P^n`` together with
boundary components ``D_j = {G_j = 0}``.  Along a curve ``phi`` of degree
``d`` the log tangent bundle is the middle cohomology of

    O --A--> O(d)^(n+1) + O^k --B--> sum O(d d_i) + sum O(d d'_j)

with ``A = (phi_0, ..., phi_n, d'_1, ..., d'_k)`` and

    B = [ JacF(phi)        0         ]
        [ JacG(phi)   -diag(G(phi))  ]

The minus sign makes ``B A = 0`` by the Euler relation.  When no ``d'_j`` is
divisible by the characteristic, dropping the last ``O`` gives a kernel
presentation ``B'`` with the same kernel.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Sequence

from .algebra import (
    BinaryForm,
    FieldSpec,
    MultiForm,
    RationalCurveMap,
    _check_same_field,
    contact_factors,
    jacobian,
    substitute,
)
from .errors import (
    ContainmentError,
    DimensionMismatchError,
    InvalidComplexError,
    WildBoundaryError,
)
from .p1sheaf import (
    FreeComplex,
    FreeSum,
    SheafMap,
    SplittingType,
    fiber_surjective,
    kernel_complex,
    splitting_type,
)

__all__ = [
    "CIModel",
    "ContactRecord",
    "FreenessVerdict",
    "lies_on",
    "smooth_along",
    "log_smooth_along",
    "boundary_contacts",
    "restrict_log_tangent_complex",
    "restrict_log_tangent_kernel",
    "freeness_verdict",
    "induced_boundary_model",
    "log_tangent_degree",
]


class CIModel:
    """Equations ``F_i`` and boundary forms ``G_j`` in ``n + 1`` variables."""

    def __init__(self, field: FieldSpec, n: int, equations: Sequence[MultiForm] = (), boundaries: Sequence[MultiForm] = ()):
        equations = tuple(equations)
        boundaries = tuple(boundaries)
        if n < 1:
            raise ValueError("n must be at least 1")
        for F in equations + boundaries:
            _check_same_field(field, F.field)
            if F.n != n:
                raise DimensionMismatchError(f"form in {F.n + 1} variables, expected {n + 1}")
            if F.degree < 1:
                raise ValueError("every equation and boundary form needs degree >= 1")
        if len(equations) + len(boundaries) > n:
            raise ValueError(f"l + k = {len(equations) + len(boundaries)} exceeds n = {n}")
        self.field = field
        self.n = n
        self.equations = equations
        self.boundaries = boundaries

    @property
    def l(self) -> int:
        return len(self.equations)

    @property
    def k(self) -> int:
        return len(self.boundaries)

    @property
    def degrees(self) -> tuple:
        return tuple(F.degree for F in self.equations)

    @property
    def boundary_degrees(self) -> tuple:
        return tuple(G.degree for G in self.boundaries)

    def is_tame(self) -> bool:
        p = self.field.characteristic
        return not p or all(dp % p for dp in self.boundary_degrees)

    def __eq__(self, other):
        if not isinstance(other, CIModel):
            return NotImplemented
        return (self.field, self.n, self.equations, self.boundaries) == (
            other.field,
            other.n,
            other.equations,
            other.boundaries,
        )

    def __repr__(self):
        return f"CIModel(P^{self.n}, F={list(self.equations)}, G={list(self.boundaries)})"

    def to_json(self) -> dict:
        return {
            "char": self.field.characteristic,
            "n": self.n,
            "F": [F.to_json() for F in self.equations],
            "G": [G.to_json() for G in self.boundaries],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "CIModel":
        K = FieldSpec(int(obj["char"]))
        n = int(obj["n"])
        F = [MultiForm.from_json(f) for f in obj.get("F", [])]
        G = [MultiForm.from_json(g) for g in obj.get("G", [])]
        return cls(K, n, F, G)


@dataclass(frozen=True)
class ContactRecord:
    """Factorisation of ``G o phi``.  A curve inside the boundary has
    ``in_boundary=True``, no factors and ``total=None``."""

    factors: tuple = ()
    total: int | None = 0
    in_boundary: bool = False

    def multiplicity_at(self, point) -> int:
        """Order of vanishing of ``G o phi`` at a rational point."""
        if self.in_boundary:
            raise ValueError("curve lies inside this boundary component")
        return sum(m for g, m in self.factors if g.degree == 1 and g.evaluate(point) == 0)

    def to_json(self) -> dict:
        return {
            "in_boundary": self.in_boundary,
            "total": self.total,
            "factors": [[g.to_json(), m] for g, m in self.factors],
        }


@dataclass
class FreenessVerdict:
    status: str
    splitting: SplittingType | None
    contacts: list
    a1_qualified: bool
    checks: dict = dc_field(default_factory=dict)
    presentation: str | None = None

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "splitting": None if self.splitting is None else self.splitting.to_json(),
            "contacts": [c.to_json() for c in self.contacts],
            "a1_qualified": self.a1_qualified,
            "checks": dict(self.checks),
            "presentation": self.presentation,
        }


# ---------------------------------------------------------------------------


def _check_pair(phi: RationalCurveMap, X: CIModel):
    _check_same_field(X.field, phi.field)
    if phi.n != X.n:
        raise DimensionMismatchError(f"curve in P^{phi.n}, model in P^{X.n}")


def lies_on(phi: RationalCurveMap, X: CIModel) -> bool:
    _check_pair(phi, X)
    return all(substitute(F, phi).is_zero() for F in X.equations)


def _require_on(phi, X):
    if not lies_on(phi, X):
        raise ContainmentError("the curve does not lie on the model")


def _jac_rows(forms, phi) -> list:
    return [[substitute(dF, phi) for dF in jacobian(F)] for F in forms]


def _tangent_target(X: CIModel, d: int) -> tuple:
    return tuple(d * di for di in X.degrees) + tuple(d * dj for dj in X.boundary_degrees)


def smooth_along(phi: RationalCurveMap, X: CIModel) -> bool:
    """Jacobian criterion for ``X`` at every point of the curve."""
    _require_on(phi, X)
    if X.l == 0:
        return True
    d = phi.degree
    M = SheafMap.from_rows(X.field, (d,) * (X.n + 1), tuple(d * di for di in X.degrees), _jac_rows(X.equations, phi))
    return fiber_surjective(M)


def _full_B(X: CIModel, phi: RationalCurveMap) -> SheafMap:
    K, n, k, d = X.field, X.n, X.k, phi.degree
    zero = BinaryForm.zero(K)
    rows = [r + [zero] * k for r in _jac_rows(X.equations, phi)]
    for j, G in enumerate(X.boundaries):
        Gphi = substitute(G, phi)
        extra = [-Gphi if jj == j else zero for jj in range(k)]
        rows.append([substitute(dG, phi) for dG in jacobian(G)] + extra)
    return SheafMap.from_rows(K, (d,) * (n + 1) + (0,) * k, _tangent_target(X, d), rows)


def log_smooth_along(phi: RationalCurveMap, X: CIModel) -> bool:
    """Fibrewise surjectivity of the full matrix ``B`` along the curve."""
    _require_on(phi, X)
    if X.k == 0:
        return smooth_along(phi, X)
    return fiber_surjective(_full_B(X, phi))


def boundary_contacts(phi: RationalCurveMap, X: CIModel) -> list:
    _check_pair(phi, X)
    out = []
    for G in X.boundaries:
        Gphi = substitute(G, phi)
        if Gphi.is_zero():
            out.append(ContactRecord((), None, True))
        else:
            out.append(ContactRecord(tuple(contact_factors(Gphi)), Gphi.degree, False))
    return out


def restrict_log_tangent_complex(X: CIModel, phi: RationalCurveMap, validate: bool = True) -> FreeComplex:
    _require_on(phi, X)
    K, n, d = X.field, X.n, phi.degree
    B = _full_B(X, phi)
    a_rows = [[c] for c in phi.components] + [[BinaryForm.constant(K, dj)] for dj in X.boundary_degrees]
    A = SheafMap.from_rows(K, (0,), B.source.twists, a_rows)
    cx = FreeComplex([A.source, A.target, B.target], [A, B], 1)
    if validate:
        cx.validate()
    return cx


def restrict_log_tangent_kernel(X: CIModel, phi: RationalCurveMap) -> SheafMap:
    """The map ``B'`` whose kernel is the log tangent bundle (tame case)."""
    if X.k < 1:
        raise ValueError("the kernel presentation needs at least one boundary component")
    p = X.field.characteristic
    for dj in X.boundary_degrees:
        if p and dj % p == 0:
            raise WildBoundaryError(p, dj)
    _require_on(phi, X)
    K, n, k, d = X.field, X.n, X.k, phi.degree
    zero = BinaryForm.zero(K)
    rows = [r + [zero] * (k - 1) for r in _jac_rows(X.equations, phi)]
    for j, G in enumerate(X.boundaries):
        Gphi = substitute(G, phi)
        extra = [-Gphi if jj == j else zero for jj in range(k - 1)]
        rows.append([substitute(dG, phi) for dG in jacobian(G)] + extra)
    return SheafMap.from_rows(K, (d,) * (n + 1) + (0,) * (k - 1), _tangent_target(X, d), rows)


def log_tangent_degree(X: CIModel, d: int) -> int:
    """Degree of the log tangent bundle on a degree-``d`` curve."""
    return d * (X.n + 1 - sum(X.degrees) - sum(X.boundary_degrees))


def _status(st: SplittingType) -> str:
    if st.is_ample():
        return "very_free"
    if st.is_semipositive():
        return "free"
    return "not_free"


def freeness_verdict(X: CIModel, phi: RationalCurveMap) -> FreenessVerdict:
    """Freeness of ``phi`` for the pair ``(X, D)``.

    Raises :class:`ContainmentError` if the curve is not on ``X``.
    """
    _require_on(phi, X)
    contacts = boundary_contacts(phi, X)
    a1 = any(not c.in_boundary and c.total > 0 for c in contacts)
    smooth = smooth_along(phi, X)
    log_smooth = smooth and log_smooth_along(phi, X)
    checks = {
        "lies_on": True,
        "smooth": smooth,
        "log_smooth": log_smooth,
        "tame": X.is_tame(),
        "in_boundary": any(c.in_boundary for c in contacts),
    }
    if not log_smooth:
        return FreenessVerdict("not_log_smooth", None, contacts, a1, checks, None)
    try:
        if X.k >= 1 and X.is_tame():
            st = splitting_type(kernel_complex(restrict_log_tangent_kernel(X, phi)))
            presentation = "kernel"
        else:
            st = splitting_type(restrict_log_tangent_complex(X, phi))
            presentation = "complex"
    except InvalidComplexError:
        checks["log_smooth"] = False
        return FreenessVerdict("not_log_smooth", None, contacts, a1, checks, None)
    return FreenessVerdict(_status(st), st, contacts, a1, checks, presentation)


def induced_boundary_model(X: CIModel, j: int) -> CIModel:
    """The boundary component ``D_j`` (0-based) as a model of its own, with
    the remaining components as its boundary."""
    if not 0 <= j < X.k:
        raise IndexError(f"boundary index {j} out of range for k = {X.k}")
    rest = X.boundaries[:j] + X.boundaries[j + 1 :]
    return CIModel(X.field, X.n, X.equations + (X.boundaries[j],), rest)
