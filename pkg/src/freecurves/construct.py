"""Explicit models: degree profiles, the line witness, covers, random models
and a brute-force line enumerator over small prime fields."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Sequence

from .algebra import BinaryForm, FieldSpec, MultiForm, RationalCurveMap, all_monomials
from .cigeom import CIModel, freeness_verdict, lies_on, log_smooth_along
from .errors import ProfileError, WildCoverError
from .p1sheaf import SplittingType

__all__ = [
    "DegreeProfile",
    "LineInstance",
    "validate_profile",
    "prop_line_instance",
    "standard_line",
    "cover_compose",
    "random_model",
    "random_model_through_line",
    "iter_lines",
    "enumerate_lines",
    "gaussian_binomial",
    "iter_profiles",
    "LineCheck",
    "verify_line_instance",
]


@dataclass(frozen=True)
class DegreeProfile:
    n: int
    d: tuple
    d_b: int = 0
    characteristic: int = 0

    @property
    def l(self) -> int:
        return len(self.d)

    @property
    def e(self) -> int:
        return self.d_b + sum(self.d)

    def m(self, j: int) -> int:
        """Partial sums ``m_0 = 0``, ``m_j = d_1 + ... + d_j``, ``m_(l+1) = e``."""
        if j == self.l + 1:
            return self.e
        return sum(self.d[:j])

    @property
    def tame(self) -> bool:
        p = self.characteristic
        return self.d_b == 0 or not p or self.d_b % p != 0

    def expected_type(self) -> SplittingType | None:
        """``{1^(n+1-e), 0^(e-l-1)}`` for a line witness with a boundary."""
        if self.d_b < 1:
            return None
        return SplittingType((1,) * (self.n + 1 - self.e) + (0,) * (self.e - self.l - 1))

    def to_json(self) -> dict:
        return {"n": self.n, "d": list(self.d), "d_b": self.d_b, "char": self.characteristic, "tame": self.tame}


def validate_profile(n: int, d: Sequence[int], d_b: int = 0, p: int = 0) -> DegreeProfile:
    d = tuple(int(x) for x in d)
    if n < 1:
        raise ProfileError("n must be at least 1")
    if any(x < 1 for x in d):
        raise ProfileError(f"equation degrees must be positive, got {d}")
    if d_b < 0:
        raise ProfileError("boundary degree must be non-negative")
    prof = DegreeProfile(int(n), d, int(d_b), int(p))
    if prof.e > n:
        raise ProfileError(f"e = {prof.e} exceeds n = {n}")
    return prof


@dataclass(frozen=True)
class LineInstance:
    model: CIModel
    line: RationalCurveMap
    expected: SplittingType | None
    profile: DegreeProfile


def standard_line(field: FieldSpec, n: int) -> RationalCurveMap:
    """The line ``x_2 = ... = x_n = 0`` as ``(s, t, 0, ..., 0)``."""
    p = [1, 0] + [0] * (n - 1)
    q = [0, 1] + [0] * (n - 1)
    return RationalCurveMap.line(field, p, q)


def _mono(field, n, exps: dict) -> MultiForm:
    e = [0] * (n + 1)
    for i, k in exps.items():
        e[i] += k
    return MultiForm.monomial(field, e)


def prop_line_instance(profile: DegreeProfile, field: FieldSpec) -> LineInstance:
    """Explicit equations that contain the standard line and meet the
    boundary along it only at ``(1:0)``."""
    n = profile.n
    if profile.e > n:
        raise ProfileError(f"e = {profile.e} exceeds n = {n}")
    eqs = []
    for i, di in enumerate(profile.d, start=1):
        top = profile.m(i - 1) + 1 + di
        if top > n:
            raise ProfileError(f"equation {i} needs x_{top} but n = {n}")
        F = MultiForm(field, n, di)
        for j in range(di):
            F = F + _mono(field, n, {profile.m(i - 1) + 2 + j: 1, 1: j, 0: di - 1 - j})
        eqs.append(F)
    bnd = []
    db = profile.d_b
    if db >= 1:
        ml = profile.m(profile.l)
        if ml + db > n:
            raise ProfileError(f"boundary needs x_{ml + db} but n = {n}")
        G = _mono(field, n, {1: db})
        for j in range(1, db):
            G = G + _mono(field, n, {ml + 1 + j: 1, 1: db - 1 - j, 0: j})
        bnd.append(G)
    X = CIModel(field, n, eqs, bnd)
    return LineInstance(X, standard_line(field, n), profile.expected_type(), profile)


def cover_compose(phi: RationalCurveMap, m: int, sigma=(1, 0)) -> RationalCurveMap:
    """Precompose with a degree-``m`` cover of P^1 totally ramified at ``sigma``
    (and at one other point), fixing ``sigma``."""
    if m < 1:
        raise ValueError("cover degree must be at least 1")
    K = phi.field
    p = K.characteristic
    if p and m % p == 0:
        raise WildCoverError(p, m)
    if m == 1:
        return phi
    a, b = K(sigma[0]), K(sigma[1])
    if a == 0 and b == 0:
        raise ValueError("(0:0) is not a point")
    # g = [[a, c], [b, d]] sends (1:0) to sigma
    c, d = (0, 1) if a != 0 else (1, 0)
    s, t = BinaryForm.s(K), BinaryForm.t(K)
    u = (s * d - t * c) ** m
    v = (s * (-b) + t * a) ** m
    return phi.precompose(u * a + v * c, u * b + v * d)


def _random_form(field: FieldSpec, n: int, degree: int, rng: random.Random, monomials=None) -> MultiForm:
    monos = list(all_monomials(n, degree)) if monomials is None else monomials
    while True:
        terms = {}
        for e in monos:
            c = field.random_element(rng)
            if c:
                terms[e] = c
        if terms or not monos:
            return MultiForm(field, n, degree, terms)


def random_model(profile: DegreeProfile, field: FieldSpec, seed: int) -> CIModel:
    """Model with uniformly random coefficients; deterministic in ``seed``."""
    validate_profile(profile.n, profile.d, profile.d_b, field.characteristic)
    rng = random.Random(seed)
    n = profile.n
    eqs = [_random_form(field, n, di, rng) for di in profile.d]
    bnd = [_random_form(field, n, profile.d_b, rng)] if profile.d_b >= 1 else []
    return CIModel(field, n, eqs, bnd)


def random_model_through_line(
    field: FieldSpec,
    n: int,
    degrees: Sequence[int],
    boundary_degrees: Sequence[int],
    rng: random.Random,
    inside: Sequence[int] = (),
    max_tries: int = 200,
):
    """Random model containing the standard line and log smooth along it.

    Boundary components listed in ``inside`` also contain the line.  Returns
    ``(model, line)`` or raises ``RuntimeError`` after ``max_tries``.
    """
    L = standard_line(field, n)
    on_line = lambda e: any(e[2:])
    for _ in range(max_tries):
        eqs = [_random_form(field, n, di, rng, [e for e in all_monomials(n, di) if on_line(e)]) for di in degrees]
        bnd = []
        for j, dj in enumerate(boundary_degrees):
            monos = list(all_monomials(n, dj))
            if j in inside:
                monos = [e for e in monos if on_line(e)]
            bnd.append(_random_form(field, n, dj, rng, monos))
        X = CIModel(field, n, eqs, bnd)
        if log_smooth_along(L, X):
            return X, L
    raise RuntimeError("no log smooth model through the line found")


def gaussian_binomial(n: int, k: int, q: int) -> int:
    """Number of ``k``-dimensional subspaces of ``F_q^n``."""
    if k < 0 or k > n:
        return 0
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def iter_lines(field: FieldSpec, n: int):
    """Every line of ``P^n(F_p)`` once, from the reduced echelon form of a
    ``2 x (n+1)`` matrix spanning it."""
    p = field.characteristic
    if not p:
        raise ValueError("line enumeration needs a finite field")
    for i, j in itertools.combinations(range(n + 1), 2):
        free1 = [c for c in range(i + 1, n + 1) if c != j]
        free2 = list(range(j + 1, n + 1))
        for vals in itertools.product(range(p), repeat=len(free1) + len(free2)):
            r1 = [0] * (n + 1)
            r2 = [0] * (n + 1)
            r1[i] = 1
            r2[j] = 1
            for c, v in zip(free1, vals):
                r1[c] = v
            for c, v in zip(free2, vals[len(free1) :]):
                r2[c] = v
            yield RationalCurveMap.line(field, r1, r2)


def enumerate_lines(X: CIModel, max_count: int | None = None) -> list:
    """``(line, verdict)`` for lines of ``X`` defined over the prime field."""
    out = []
    if max_count is not None and max_count <= 0:
        return out
    for L in iter_lines(X.field, X.n):
        if lies_on(L, X):
            out.append((L, freeness_verdict(X, L)))
            if max_count is not None and len(out) >= max_count:
                break
    return out


def iter_profiles(n_values, l_max: int, db_min: int = 1):
    """All ordered profiles ``(n, (d_1..d_l), d_b)`` with ``e <= n``."""
    for n in n_values:
        for l in range(l_max + 1):
            for d in itertools.product(range(1, n + 1), repeat=l):
                rest = n - sum(d)
                for db in range(db_min, rest + 1):
                    yield n, d, db


@dataclass
class LineCheck:
    profile: DegreeProfile
    lies_on: bool
    smooth: bool
    log_smooth: bool
    contact_ok: bool
    splitting: SplittingType | None
    expected: SplittingType | None
    h1_minus1: int | None
    presentation: str | None

    @property
    def splitting_ok(self) -> bool:
        return self.splitting is not None and self.splitting == self.expected

    @property
    def status(self) -> str:
        if not self.profile.tame:
            return "wild"
        ok = self.lies_on and self.smooth and self.log_smooth and self.contact_ok and self.splitting_ok
        return "pass" if ok else "fail"

    def to_json(self) -> dict:
        return {
            "profile": self.profile.to_json(),
            "status": self.status,
            "checks": {
                "lies_on": self.lies_on,
                "smooth": self.smooth,
                "log_smooth": self.log_smooth,
                "contact": self.contact_ok,
                "splitting": self.splitting_ok,
            },
            "splitting": None if self.splitting is None else self.splitting.render(),
            "expected": None if self.expected is None else self.expected.render(),
            "h1_minus1": self.h1_minus1,
            "presentation": self.presentation,
        }


def verify_line_instance(profile: DegreeProfile, field: FieldSpec) -> LineCheck:
    """Run every check on the explicit line witness of ``profile``.

    Tame profiles use the kernel presentation; wild ones fall back to the
    three-term complex and make no claim about the expected type.
    """
    from .cigeom import boundary_contacts, restrict_log_tangent_complex, restrict_log_tangent_kernel, smooth_along
    from .p1sheaf import cech_cohomology, kernel_complex, splitting_type

    inst = prop_line_instance(profile, field)
    X, L = inst.model, inst.line
    on = lies_on(L, X)
    smooth = on and smooth_along(L, X)
    log_smooth = smooth and log_smooth_along(L, X)
    contacts = boundary_contacts(L, X)
    t = BinaryForm.t(field)
    contact_ok = len(contacts) == 1 and contacts[0].factors == ((t, profile.d_b),)
    st = h1 = pres = None
    if log_smooth:
        if profile.tame and X.k >= 1:
            cx = kernel_complex(restrict_log_tangent_kernel(X, L))
            pres = "kernel"
        else:
            cx = restrict_log_tangent_complex(X, L)
            pres = "complex"
        st = splitting_type(cx)
        h1 = cech_cohomology(cx, -1)[1]
    return LineCheck(profile, on, smooth, log_smooth, contact_ok, st, inst.expected, h1, pres)
