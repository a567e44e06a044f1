"""Exact scalars and homogeneous polynomials.

Scalars live in a prime field ``F_p`` (stored as Python ints in ``[0, p)``)
or in ``Q`` (stored as :class:`fractions.Fraction`).  Two polynomial types
are provided:

* :class:`BinaryForm` -- a dense homogeneous polynomial in ``s, t``; the
  coefficient list ``c_0..c_d`` stands for ``sum c_i s^(d-i) t^i``.
* :class:`MultiForm` -- a sparse homogeneous polynomial in ``x_0..x_n``.

A :class:`RationalCurveMap` is an (n+1)-tuple of binary forms of a common
degree without common zero, i.e. a morphism ``P^1 -> P^n``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DimensionMismatchError, FieldMismatchError

__all__ = [
    "FieldSpec",
    "BinaryForm",
    "MultiForm",
    "RationalCurveMap",
    "bf_gcd",
    "substitute",
    "jacobian",
    "squarefree_decomposition",
    "contact_factors",
]


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class FieldSpec:
    """The prime field ``F_p``, or ``Q`` when ``characteristic == 0``."""

    characteristic: int = 0

    def __post_init__(self):
        p = self.characteristic
        if not isinstance(p, int) or isinstance(p, bool):
            raise TypeError("characteristic must be an int")
        if p != 0 and not (_is_prime(p) and p < 2**31):
            raise ValueError(f"characteristic must be 0 or a prime below 2^31, got {p}")

    @property
    def p(self) -> int:
        return self.characteristic

    @property
    def zero(self):
        return 0 if self.characteristic else Fraction(0)

    @property
    def one(self):
        return 1 if self.characteristic else Fraction(1)

    def __call__(self, value):
        """Coerce an int, Fraction or decimal/rational text into the field."""
        p = self.characteristic
        if isinstance(value, str):
            value = Fraction(value.strip())
        if p == 0:
            return Fraction(value)
        if isinstance(value, Fraction):
            if value.denominator % p == 0:
                raise ZeroDivisionError(f"{value} has no image in F_{p}")
            return value.numerator * pow(value.denominator, -1, p) % p
        return int(value) % p

    def reduce(self, x):
        p = self.characteristic
        if p:
            return x % p
        return x if isinstance(x, Fraction) else Fraction(x)

    def inv(self, x):
        p = self.characteristic
        if p:
            if x % p == 0:
                raise ZeroDivisionError("inverse of zero")
            return pow(x, -1, p)
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / Fraction(x)

    def to_text(self, x) -> str:
        return str(x)

    def random_element(self, rng, bound: int = 5):
        """Uniform element of F_p, or a small random integer over Q."""
        if self.characteristic:
            return rng.randrange(self.characteristic)
        return Fraction(rng.randint(-bound, bound))

    def elements(self) -> Iterable:
        if not self.characteristic:
            raise ValueError("Q is infinite")
        return range(self.characteristic)

    def __repr__(self):
        return f"F_{self.characteristic}" if self.characteristic else "Q"


def _check_same_field(a: FieldSpec, b: FieldSpec):
    if a != b:
        raise FieldMismatchError(f"field mismatch: {a!r} vs {b!r}")


# ---------------------------------------------------------------------------
# univariate helpers: coefficient lists low -> high, no trailing zeros


def _utrim(u: list) -> list:
    while u and u[-1] == 0:
        u.pop()
    return u


def _umul(K: FieldSpec, a: list, b: list) -> list:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return _utrim([K.reduce(c) for c in out])


def _usub(K: FieldSpec, a: list, b: list) -> list:
    n = max(len(a), len(b))
    out = [K.reduce((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) for i in range(n)]
    return _utrim(out)


def _uadd(K: FieldSpec, a: list, b: list) -> list:
    n = max(len(a), len(b))
    out = [K.reduce((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)) for i in range(n)]
    return _utrim(out)


def _udivmod(K: FieldSpec, a: list, b: list):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(a)
    db = len(b) - 1
    inv_lead = K.inv(b[-1])
    q = [K.zero] * max(0, len(r) - db)
    while len(r) - 1 >= db and r:
        shift = len(r) - 1 - db
        c = K.reduce(r[-1] * inv_lead)
        q[shift] = c
        for i, y in enumerate(b):
            r[shift + i] = K.reduce(r[shift + i] - c * y)
        _utrim(r)
    return _utrim(q), r


def _umonic(K: FieldSpec, a: list) -> list:
    if not a:
        return []
    inv = K.inv(a[-1])
    return [K.reduce(c * inv) for c in a]


def _ugcd(K: FieldSpec, a: list, b: list) -> list:
    a, b = _utrim(list(a)), _utrim(list(b))
    while b:
        _, r = _udivmod(K, a, b)
        a, b = b, _umonic(K, r) if r else []
    return _umonic(K, a)


def _uxgcd(K: FieldSpec, a: list, b: list):
    """Return (g, u, v) with u*a + v*b = g, g monic (or zero)."""
    r0, r1 = _utrim(list(a)), _utrim(list(b))
    s0, s1 = [K.one], []
    t0, t1 = [], [K.one]
    while r1:
        q, r = _udivmod(K, r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _usub(K, s0, _umul(K, q, s1))
        t0, t1 = t1, _usub(K, t0, _umul(K, q, t1))
    if not r0:
        return [], [], []
    inv = K.inv(r0[-1])
    sc = [inv]
    return _umul(K, r0, sc), _umul(K, s0, sc), _umul(K, t0, sc)


def _uderiv(K: FieldSpec, a: list) -> list:
    return _utrim([K.reduce(i * a[i]) for i in range(1, len(a))])


def _ueval(K: FieldSpec, a: list, x):
    acc = K.zero
    for c in reversed(a):
        acc = K.reduce(acc * x + c)
    return acc


# ---------------------------------------------------------------------------


class BinaryForm:
    """Homogeneous polynomial ``sum c_i s^(d-i) t^i`` in two variables.

    The zero form is canonical: ``coeffs == ()`` and ``degree is None``.
    Instances are immutable and hashable.
    """

    __slots__ = ("field", "coeffs")

    def __init__(self, field: FieldSpec, coeffs: Sequence):
        if field.characteristic:
            cs = tuple(c % field.characteristic if type(c) is int else field(c) for c in coeffs)
        else:
            cs = tuple(field(c) for c in coeffs)
        if all(c == 0 for c in cs):
            cs = ()
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "coeffs", cs)

    def __setattr__(self, name, value):
        raise AttributeError("BinaryForm is immutable")

    # constructors -----------------------------------------------------
    @classmethod
    def zero(cls, field: FieldSpec) -> "BinaryForm":
        return cls(field, ())

    @classmethod
    def constant(cls, field: FieldSpec, c) -> "BinaryForm":
        return cls(field, (field(c),))

    @classmethod
    def monomial(cls, field: FieldSpec, i: int, j: int, c=1) -> "BinaryForm":
        """``c * s^i * t^j``."""
        cs = [0] * (i + j + 1)
        cs[j] = field(c)
        return cls(field, cs)

    @classmethod
    def s(cls, field: FieldSpec) -> "BinaryForm":
        return cls(field, (1, 0))

    @classmethod
    def t(cls, field: FieldSpec) -> "BinaryForm":
        return cls(field, (0, 1))

    @classmethod
    def linear(cls, field: FieldSpec, a, b) -> "BinaryForm":
        """``a*s + b*t``."""
        return cls(field, (field(a), field(b)))

    # basic properties -------------------------------------------------
    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else None

    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, j: int):
        """Coefficient of ``s^(d-j) t^j``."""
        if 0 <= j < len(self.coeffs):
            return self.coeffs[j]
        return self.field.zero

    def __eq__(self, other):
        if not isinstance(other, BinaryForm):
            return NotImplemented
        return self.field == other.field and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def __repr__(self):
        if not self.coeffs:
            return "0"
        d = self.degree
        parts = []
        for j, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = "*".join(
                x for x in (_pw("s", d - j), _pw("t", j)) if x
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts)

    # arithmetic -------------------------------------------------------
    def _coerce(self, other) -> "BinaryForm":
        if isinstance(other, BinaryForm):
            _check_same_field(self.field, other.field)
            return other
        return BinaryForm.constant(self.field, other)

    def __add__(self, other):
        other = self._coerce(other)
        if not other.coeffs:
            return self
        if not self.coeffs:
            return other
        if self.degree != other.degree:
            raise ValueError(f"cannot add forms of degree {self.degree} and {other.degree}")
        return BinaryForm(self.field, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return BinaryForm(self.field, [-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, BinaryForm):
            c = self.field(other)
            return BinaryForm(self.field, [c * x for x in self.coeffs])
        _check_same_field(self.field, other.field)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return BinaryForm.zero(self.field)
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x == 0:
                continue
            for j, y in enumerate(b):
                out[i + j] += x * y
        return BinaryForm(self.field, out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative power")
        result = BinaryForm.constant(self.field, 1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def scaled_monic(self) -> "BinaryForm":
        """Scale so that the first nonzero coefficient is 1."""
        if not self.coeffs:
            return self
        lead = next(c for c in self.coeffs if c != 0)
        inv = self.field.inv(lead)
        return BinaryForm(self.field, [c * inv for c in self.coeffs])

    # evaluation and calculus -----------------------------------------
    def evaluate(self, point):
        """Value at the homogeneous vector ``point = (s0, t0)``."""
        if not self.coeffs:
            return self.field.zero
        K = self.field
        s0, t0 = K(point[0]), K(point[1])
        d = self.degree
        acc = 0
        for j, c in enumerate(self.coeffs):
            if c:
                acc += c * s0 ** (d - j) * t0**j
        return K.reduce(acc)

    def ds(self) -> "BinaryForm":
        d = self.degree
        if d is None or d == 0:
            return BinaryForm.zero(self.field)
        return BinaryForm(self.field, [(d - j) * c for j, c in enumerate(self.coeffs[:-1])])

    def dt(self) -> "BinaryForm":
        d = self.degree
        if d is None or d == 0:
            return BinaryForm.zero(self.field)
        return BinaryForm(self.field, [j * self.coeffs[j] for j in range(1, d + 1)])

    def directional_derivative(self, point, direction):
        """``d/du f(point + u*direction)`` at ``u = 0``."""
        K = self.field
        return K.reduce(
            K(direction[0]) * self.ds().evaluate(point) + K(direction[1]) * self.dt().evaluate(point)
        )

    def compose(self, u: "BinaryForm", v: "BinaryForm") -> "BinaryForm":
        """``f(u(s,t), v(s,t))`` for forms ``u, v`` of a common degree."""
        if not self.coeffs:
            return self
        d = self.degree
        upow = [BinaryForm.constant(self.field, 1)]
        vpow = [BinaryForm.constant(self.field, 1)]
        for _ in range(d):
            upow.append(upow[-1] * u)
            vpow.append(vpow[-1] * v)
        out = BinaryForm.zero(self.field)
        for j, c in enumerate(self.coeffs):
            if c:
                out = out + upow[d - j] * vpow[j] * c
        return out

    # dehomogenisation -------------------------------------------------
    def t_valuation(self) -> int:
        """Multiplicity of the factor ``t`` (the point ``(1:0)``)."""
        for j, c in enumerate(self.coeffs):
            if c != 0:
                return j
        raise ValueError("valuation of the zero form")

    def dehomogenize(self) -> list:
        """``f(x, 1)`` as a low-to-high coefficient list."""
        return _utrim(list(reversed(self.coeffs)))

    @classmethod
    def homogenize(cls, field: FieldSpec, u: list, degree: int) -> "BinaryForm":
        if u and len(u) - 1 > degree:
            raise ValueError("degree too small to homogenize")
        cs = [field.zero] * (degree + 1)
        for k, c in enumerate(u):
            cs[degree - k] = c
        return cls(field, cs)

    def exact_div(self, other: "BinaryForm") -> "BinaryForm":
        """Quotient ``self / other``; raises ValueError if not exact."""
        _check_same_field(self.field, other.field)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero form")
        if self.is_zero():
            return self
        K = self.field
        D = self.degree - other.degree
        if D < 0 or self.t_valuation() < other.t_valuation():
            raise ValueError("not divisible")
        q, r = _udivmod(K, self.dehomogenize(), other.dehomogenize())
        if r:
            raise ValueError("not divisible")
        return BinaryForm.homogenize(K, q, D)

    def divides(self, other: "BinaryForm") -> bool:
        try:
            other.exact_div(self)
        except ValueError:
            return False
        return True

    # serialisation ----------------------------------------------------
    def to_json(self) -> dict:
        return {
            "char": self.field.characteristic,
            "degree": self.degree,
            "coeffs": [self.field.to_text(c) for c in self.coeffs],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "BinaryForm":
        K = FieldSpec(int(obj["char"]))
        coeffs = [K(c) for c in obj["coeffs"]]
        f = cls(K, coeffs)
        deg = obj.get("degree")
        if coeffs and deg is not None and len(coeffs) != deg + 1:
            raise ValueError("coeffs length does not match degree")
        return f


def _pw(name: str, e: int) -> str:
    if e == 0:
        return ""
    return name if e == 1 else f"{name}^{e}"


def bf_gcd(f: BinaryForm, g: BinaryForm) -> BinaryForm:
    """Monic gcd of two binary forms.

    The result is normalised so that its first nonzero coefficient (in the
    order ``s^d, s^(d-1) t, ...``) equals 1.  ``gcd(0, g)`` is ``g`` made
    monic, ``gcd(0, 0)`` is the zero form.
    """
    _check_same_field(f.field, g.field)
    if f.is_zero():
        return g.scaled_monic()
    if g.is_zero():
        return f.scaled_monic()
    K = f.field
    vt = min(f.t_valuation(), g.t_valuation())
    h = _ugcd(K, f.dehomogenize(), g.dehomogenize())
    return BinaryForm.homogenize(K, h, len(h) - 1 + vt)


def gcd_many(forms: Iterable[BinaryForm], field: FieldSpec) -> BinaryForm:
    g = BinaryForm.zero(field)
    for f in forms:
        g = bf_gcd(g, f)
        if g.degree == 0:
            break
    return g


# ---------------------------------------------------------------------------
# squarefree decomposition


def _upth_root(K: FieldSpec, a: list) -> list:
    # a is a polynomial in x^p over F_p; Frobenius is the identity on F_p
    p = K.characteristic
    return [a[i] for i in range(0, len(a), p)]


def _usqf(K: FieldSpec, f: list) -> list:
    """Squarefree decomposition of a monic univariate polynomial."""
    out = []
    if len(f) <= 1:
        return out
    fp = _uderiv(K, f)
    if not fp:
        for g, j in _usqf(K, _upth_root(K, f)):
            out.append((g, j * K.characteristic))
        return out
    c = _ugcd(K, f, fp)
    w, _ = _udivmod(K, f, c)
    i = 1
    while len(w) > 1:
        y = _ugcd(K, w, c)
        fac, _ = _udivmod(K, w, y)
        if len(fac) > 1:
            out.append((_umonic(K, fac), i))
        w = y
        c, _ = _udivmod(K, c, y)
        i += 1
    if len(c) > 1:
        for g, j in _usqf(K, _upth_root(K, _umonic(K, c))):
            out.append((g, j * K.characteristic))
    return out


def squarefree_decomposition(f: BinaryForm) -> list:
    """Pairs ``(g, m)`` with ``f = const * prod g^m`` and each ``g`` squarefree.

    Factors with equal multiplicity are grouped; the factor ``t`` (the point
    ``(1:0)``) is always split off on its own.
    """
    if f.is_zero():
        raise ValueError("squarefree decomposition of the zero form")
    K = f.field
    out = []
    vt = f.t_valuation()
    if vt:
        out.append((BinaryForm.t(K), vt))
    u = _umonic(K, f.dehomogenize())
    for g, m in _usqf(K, u):
        out.append((BinaryForm.homogenize(K, g, len(g) - 1), m))
    return out


def contact_factors(f: BinaryForm) -> list:
    """Factor ``f`` as far as squarefree decomposition plus root splitting allow.

    Over ``F_p`` every linear factor is split off by root search, so each
    returned factor is either linear or has no ``F_p``-rational zero.  Over
    ``Q`` only the squarefree parts are returned.
    """
    K = f.field
    out = []
    for g, m in squarefree_decomposition(f):
        p = K.characteristic
        if g.degree <= 1 or not p or p > 10_000:
            out.append((g, m))
            continue
        u = g.dehomogenize()
        for a in range(p):
            if len(u) <= 2:
                break
            if _ueval(K, u, a) == 0:
                out.append((BinaryForm.linear(K, 1, -a), m))
                u, _ = _udivmod(K, u, [K.reduce(-a), 1])
        if len(u) > 1:
            out.append((BinaryForm.homogenize(K, _umonic(K, u), len(u) - 1), m))
    out.sort(key=lambda fm: (fm[0].degree, fm[0].coeffs, fm[1]))
    return out


# ---------------------------------------------------------------------------


class MultiForm:
    """Sparse homogeneous polynomial in ``x_0..x_n``.

    ``terms`` maps exponent tuples (length n+1, summing to ``degree``) to
    nonzero coefficients.  The zero polynomial keeps its nominal degree.
    """

    __slots__ = ("field", "n", "degree", "terms")

    def __init__(self, field: FieldSpec, n: int, degree: int, terms=None):
        clean = {}
        for exps, c in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != n + 1 or sum(exps) != degree or min(exps) < 0:
                raise ValueError(f"exponent {exps} invalid for n={n}, degree={degree}")
            c = field(c)
            if c != 0:
                clean[exps] = field.reduce(clean.get(exps, 0) + c)
                if clean[exps] == 0:
                    del clean[exps]
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "degree", degree)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("MultiForm is immutable")

    @classmethod
    def variable(cls, field: FieldSpec, n: int, i: int) -> "MultiForm":
        e = [0] * (n + 1)
        e[i] = 1
        return cls(field, n, 1, {tuple(e): 1})

    @classmethod
    def monomial(cls, field: FieldSpec, exps: Sequence[int], c=1) -> "MultiForm":
        exps = tuple(exps)
        return cls(field, len(exps) - 1, sum(exps), {exps: field(c)})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, MultiForm):
            return NotImplemented
        return (
            self.field == other.field
            and self.n == other.n
            and (self.degree == other.degree or (self.is_zero() and other.is_zero()))
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.field, self.n, frozenset(self.terms.items())))

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for exps, c in sorted(self.terms.items(), reverse=True):
            mono = "*".join(_pw(f"x{i}", e) for i, e in enumerate(exps) if e)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts)

    def _check(self, other: "MultiForm"):
        _check_same_field(self.field, other.field)
        if self.n != other.n:
            raise DimensionMismatchError(f"n mismatch: {self.n} vs {other.n}")

    def __add__(self, other: "MultiForm") -> "MultiForm":
        self._check(other)
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        if self.degree != other.degree:
            raise ValueError("cannot add forms of different degree")
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, 0) + c
        return MultiForm(self.field, self.n, self.degree, terms)

    def __neg__(self):
        return MultiForm(self.field, self.n, self.degree, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, MultiForm):
            c = self.field(other)
            return MultiForm(self.field, self.n, self.degree, {e: c * v for e, v in self.terms.items()})
        self._check(other)
        terms: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = terms.get(e, 0) + c1 * c2
        return MultiForm(self.field, self.n, self.degree + other.degree, terms)

    __rmul__ = __mul__

    def partial(self, i: int) -> "MultiForm":
        """Formal derivative in ``x_i``; coefficients are reduced in the field."""
        terms = {}
        for exps, c in self.terms.items():
            k = exps[i]
            if k == 0:
                continue
            e = list(exps)
            e[i] -= 1
            terms[tuple(e)] = c * k
        return MultiForm(self.field, self.n, max(self.degree - 1, 0), terms)

    def to_json(self) -> dict:
        return {
            "char": self.field.characteristic,
            "n": self.n,
            "degree": self.degree,
            "terms": [[list(e), self.field.to_text(c)] for e, c in sorted(self.terms.items())],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "MultiForm":
        K = FieldSpec(int(obj["char"]))
        terms: dict = {}
        for exps, c in obj["terms"]:
            terms[tuple(exps)] = K.reduce(terms.get(tuple(exps), 0) + K(c))
        return cls(K, int(obj["n"]), int(obj["degree"]), terms)


def jacobian(F: MultiForm) -> list:
    """``[dF/dx_0, ..., dF/dx_n]``."""
    return [F.partial(i) for i in range(F.n + 1)]


class RationalCurveMap:
    """A morphism ``P^1 -> P^n`` given by n+1 binary forms of degree ``d``."""

    __slots__ = ("field", "n", "degree", "components")

    def __init__(self, components: Sequence[BinaryForm], field: FieldSpec | None = None):
        comps = tuple(components)
        if not comps:
            raise ValueError("a curve needs at least one component")
        field = field or comps[0].field
        degs = {c.degree for c in comps if not c.is_zero()}
        if not degs:
            raise ValueError("all components vanish")
        if len(degs) > 1:
            raise ValueError(f"components have different degrees {sorted(degs)}")
        for c in comps:
            _check_same_field(field, c.field)
        (d,) = degs
        if d < 1:
            raise ValueError("curve degree must be at least 1")
        if gcd_many(comps, field).degree != 0:
            raise ValueError("components share a common zero")
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "n", len(comps) - 1)
        object.__setattr__(self, "degree", d)
        object.__setattr__(self, "components", comps)

    def __setattr__(self, name, value):
        raise AttributeError("RationalCurveMap is immutable")

    @classmethod
    def line(cls, field: FieldSpec, p: Sequence, q: Sequence) -> "RationalCurveMap":
        """The line ``(s:t) -> s*p + t*q`` through two distinct points."""
        if len(p) != len(q):
            raise DimensionMismatchError("points of different dimension")
        return cls([BinaryForm.linear(field, a, b) for a, b in zip(p, q)], field)

    def evaluate(self, point) -> tuple:
        return tuple(c.evaluate(point) for c in self.components)

    def precompose(self, u: BinaryForm, v: BinaryForm) -> "RationalCurveMap":
        return RationalCurveMap([c.compose(u, v) for c in self.components], self.field)

    def __eq__(self, other):
        if not isinstance(other, RationalCurveMap):
            return NotImplemented
        return self.components == other.components

    def __hash__(self):
        return hash(self.components)

    def __repr__(self):
        return "(" + ", ".join(map(repr, self.components)) + ")"

    def to_json(self) -> dict:
        return {
            "char": self.field.characteristic,
            "n": self.n,
            "components": [c.to_json() for c in self.components],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "RationalCurveMap":
        K = FieldSpec(int(obj["char"]))
        comps = [BinaryForm.from_json(c) for c in obj["components"]]
        if len(comps) != int(obj["n"]) + 1:
            raise DimensionMismatchError("number of components must be n+1")
        return cls(comps, K)


def substitute(F: MultiForm, phi: RationalCurveMap) -> BinaryForm:
    """Pull ``F`` back along ``phi``: ``F(phi_0(s,t), ..., phi_n(s,t))``."""
    _check_same_field(F.field, phi.field)
    if F.n != phi.n:
        raise DimensionMismatchError(f"form in {F.n + 1} variables, curve in P^{phi.n}")
    K = F.field
    comps = phi.components
    cache: dict = {}

    def power(i, e):
        key = (i, e)
        if key not in cache:
            cache[key] = comps[i] ** e
        return cache[key]

    total = [0] * (F.degree * phi.degree + 1)
    nonzero = False
    for exps, c in F.terms.items():
        if any(e and comps[i].is_zero() for i, e in enumerate(exps)):
            continue
        prod = BinaryForm.constant(K, c)
        for i, e in enumerate(exps):
            if e:
                prod = prod * power(i, e)
        for j, v in enumerate(prod.coeffs):
            total[j] += v
        nonzero = nonzero or not prod.is_zero()
    if not nonzero:
        return BinaryForm.zero(K)
    return BinaryForm(K, total)


def all_monomials(n: int, degree: int):
    """Exponent tuples of all degree-``degree`` monomials in ``x_0..x_n``."""
    for combo in itertools.combinations_with_replacement(range(n + 1), degree):
        e = [0] * (n + 1)
        for i in combo:
            e[i] += 1
        yield tuple(e)
