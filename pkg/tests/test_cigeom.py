from __future__ import annotations

import random

import pytest

from freecurves.algebra import BinaryForm, FieldSpec, MultiForm
from freecurves.cigeom import (
    CIModel,
    boundary_contacts,
    freeness_verdict,
    induced_boundary_model,
    lies_on,
    log_smooth_along,
    log_tangent_degree,
    restrict_log_tangent_complex,
    restrict_log_tangent_kernel,
    smooth_along,
)
from freecurves.construct import cover_compose, random_model_through_line, standard_line
from freecurves.errors import ContainmentError, DimensionMismatchError, WildBoundaryError
from freecurves.p1sheaf import SplittingType, kernel_complex, splitting_type

F2, F3, F5, Q = FieldSpec(2), FieldSpec(3), FieldSpec(5), FieldSpec(0)


def x(K, n, i):
    return MultiForm.variable(K, n, i)


def quadric(K, n=3):
    return x(K, n, 0) * x(K, n, 2) + x(K, n, 1) * x(K, n, 3)


def prop_model(K):
    """n=3, (2;1): F = x2 x0 + x3 x1, G = x1."""
    return CIModel(K, 3, [quadric(K)], [x(K, 3, 1)])


def st(K):
    return BinaryForm.s(K), BinaryForm.t(K)


def entries(M):
    return [list(row) for row in M.entries]


# -- predicates ---------------------------------------------------------------


def test_lies_on_examples():
    K = F5
    L = standard_line(K, 3)
    assert lies_on(L, CIModel(K, 3, [quadric(K)]))
    assert not lies_on(L, CIModel(K, 3, [x(K, 3, 0) * x(K, 3, 0)]))
    assert lies_on(L, CIModel(K, 3))


def test_lies_on_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        lies_on(standard_line(F5, 4), CIModel(F5, 3))


def test_smooth_along_examples():
    K = F5
    assert smooth_along(standard_line(K, 3), CIModel(K, 3, [quadric(K)]))
    assert not smooth_along(standard_line(K, 4), CIModel(K, 4, [x(K, 4, 2) * x(K, 4, 3)]))
    assert smooth_along(standard_line(K, 3), CIModel(K, 3))
    with pytest.raises(ContainmentError):
        smooth_along(standard_line(K, 3), CIModel(K, 3, [x(K, 3, 0)]))


def test_log_smooth_along_examples():
    K = F5
    L = standard_line(K, 3)
    assert log_smooth_along(L, prop_model(K))
    sq = CIModel(K, 3, [quadric(K)], [x(K, 3, 1) * x(K, 3, 1)])
    assert not log_smooth_along(L, sq)
    for X in (CIModel(K, 3, [quadric(K)]), CIModel(K, 4, [x(K, 4, 2) * x(K, 4, 3)])):
        line = standard_line(K, X.n)
        assert log_smooth_along(line, X) == smooth_along(line, X)


def test_boundary_contacts_examples():
    K = F5
    s, t = st(K)
    L = standard_line(K, 3)
    X = prop_model(K)
    (c,) = boundary_contacts(L, X)
    assert c.factors == ((t, 1),) and c.total == 1
    (c3,) = boundary_contacts(cover_compose(L, 3), X)
    assert c3.factors == ((t, 3),) and c3.total == 3
    assert c3.multiplicity_at((1, 0)) == 3
    Y = CIModel(K, 4, [], [x(K, 4, 0) + x(K, 4, 1)])
    (c2,) = boundary_contacts(standard_line(K, 4), Y)
    assert c2.factors == ((s + t, 1),)


def test_in_boundary_contact_is_distinguished():
    K = F5
    X = CIModel(K, 3, [], [x(K, 3, 2)])
    (c,) = boundary_contacts(standard_line(K, 3), X)
    assert c.in_boundary and c.total is None
    with pytest.raises(ValueError):
        c.multiplicity_at((1, 0))


# -- presentations ---------------------------------------------------------------


def test_complex_shapes_prop_instance():
    K = F5
    s, t = st(K)
    z, one = BinaryForm.zero(K), BinaryForm.constant(K, 1)
    cx = restrict_log_tangent_complex(prop_model(K), standard_line(K, 3))
    assert [T.twists for T in cx.terms] == [(0,), (1, 1, 1, 1, 0), (2, 1)]
    A, B = cx.maps
    assert entries(A) == [[s], [t], [z], [z], [one]]
    # the boundary row carries -G o phi so that B o A = 0
    assert entries(B) == [[z, z, s, t, z], [z, one, z, z, -t]]
    assert splitting_type(cx) == SplittingType((1, 0))


def test_complex_shapes_without_boundary():
    K = F5
    cx = restrict_log_tangent_complex(CIModel(K, 3, [quadric(K)]), standard_line(K, 3))
    assert [T.twists for T in cx.terms] == [(0,), (1, 1, 1, 1), (2,)]
    assert splitting_type(cx) == SplittingType((2, 0))
    for n in range(1, 5):
        cx = restrict_log_tangent_complex(CIModel(K, n), standard_line(K, n))
        assert [T.twists for T in cx.terms] == [(0,), (1,) * (n + 1), ()]
        assert splitting_type(cx) == SplittingType((2,) + (1,) * (n - 1))


def test_kernel_examples():
    K = F5
    s, t = st(K)
    z, one = BinaryForm.zero(K), BinaryForm.constant(K, 1)
    Bp = restrict_log_tangent_kernel(prop_model(K), standard_line(K, 3))
    assert Bp.source.twists == (1, 1, 1, 1)
    assert entries(Bp) == [[z, z, s, t], [z, one, z, z]]
    assert splitting_type(kernel_complex(Bp)) == SplittingType((1, 0))
    P1 = CIModel(K, 1, [], [x(K, 1, 1)])
    Bp1 = restrict_log_tangent_kernel(P1, standard_line(K, 1))
    assert Bp1.source.twists == (1, 1) and entries(Bp1) == [[z, one]]
    assert splitting_type(kernel_complex(Bp1)) == SplittingType((1,))


def test_kernel_wild_boundary():
    K = F2
    X = CIModel(K, 4, [quadric(K, 4)], [x(K, 4, 1) * x(K, 4, 1) + x(K, 4, 4) * x(K, 4, 0)])
    with pytest.raises(WildBoundaryError) as e:
        restrict_log_tangent_kernel(X, standard_line(K, 4))
    assert e.value.characteristic == 2 and e.value.degree == 2


def test_log_tangent_degree():
    assert log_tangent_degree(prop_model(F5), 1) == 1
    assert log_tangent_degree(CIModel(F5, 3, [quadric(F5)]), 1) == 2
    assert log_tangent_degree(CIModel(F5, 3), 3) == 12


# -- verdicts ---------------------------------------------------------------


def test_verdict_examples():
    K = F5
    v = freeness_verdict(prop_model(K), standard_line(K, 3))
    assert v.status == "free" and v.splitting == SplittingType((1, 0))
    assert v.a1_qualified and v.presentation == "kernel"
    for n in range(1, 6):
        w = freeness_verdict(CIModel(K, n), standard_line(K, n))
        assert w.status == "very_free" and w.splitting == SplittingType((2,) + (1,) * (n - 1))
        assert not w.a1_qualified
    q = freeness_verdict(CIModel(K, 3, [quadric(K)]), standard_line(K, 3))
    assert q.status == "free" and q.splitting == SplittingType((2, 0))


def test_verdict_not_log_smooth_is_a_value():
    K = F5
    X = CIModel(K, 3, [quadric(K)], [x(K, 3, 1) * x(K, 3, 1)])
    v = freeness_verdict(X, standard_line(K, 3))
    assert v.status == "not_log_smooth" and v.splitting is None
    assert v.checks["smooth"] and not v.checks["log_smooth"]
    with pytest.raises(ContainmentError):
        freeness_verdict(CIModel(K, 3, [x(K, 3, 0)]), standard_line(K, 3))


def test_verdict_json_shape():
    v = freeness_verdict(prop_model(F5), standard_line(F5, 3)).to_json()
    assert set(v) >= {"status", "splitting", "contacts", "checks"}
    assert v["splitting"]["degrees"] == [1, 0]
    assert v["contacts"][0]["total"] == 1


def test_model_json_roundtrip():
    X = prop_model(Q)
    obj = X.to_json()
    assert set(obj) == {"char", "n", "F", "G"}
    assert CIModel.from_json(obj) == X


def test_induced_boundary_model():
    K = F5
    X = prop_model(K)
    D = induced_boundary_model(X, 0)
    assert D.degrees == (2, 1) and D.boundary_degrees == () and D.k == 0
    Y = CIModel(K, 4, [quadric(K, 4)], [x(K, 4, 1), x(K, 4, 4)])
    D2 = induced_boundary_model(Y, 1)
    assert D2.degrees == (2, 1) and D2.boundaries == (x(K, 4, 1),)
    with pytest.raises(IndexError):
        induced_boundary_model(X, 1)


def test_model_validation():
    with pytest.raises(ValueError):
        CIModel(F5, 2, [x(F5, 2, 0) * x(F5, 2, 1)], [x(F5, 2, 0), x(F5, 2, 1)])
    with pytest.raises(DimensionMismatchError):
        CIModel(F5, 3, [quadric(F5, 4)])


# -- invariants on seeded random instances ------------------------------------------------


def _random_instances(K, count, seed):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        n = rng.randint(2, 5)
        l = rng.randint(0, 2)
        k = rng.randint(0, min(2, n - l))
        degrees = [rng.randint(1, 2) for _ in range(l)]
        bdeg = [rng.randint(1, 2) for _ in range(k)]
        # a smooth model can only contain the line when sum(d_i) <= n - 1
        if sum(degrees) > n - 1 or sum(degrees) + sum(bdeg) > n + 1:
            continue
        X, L = random_model_through_line(K, n, degrees, bdeg, rng)
        m = rng.choice([1, 1, 2, 3])
        if K.characteristic and m % K.characteristic == 0:
            m = 1
        out.append((X, cover_compose(L, m, (1, K.random_element(rng)))))
    return out


@pytest.mark.parametrize("K", [F3, F5, FieldSpec(7), Q], ids=str)
def test_euler_relation_and_degree(K):
    for X, phi in _random_instances(K, 40, 17 + K.characteristic):
        cx = restrict_log_tangent_complex(X, phi, validate=False)
        A, B = cx.maps
        assert B.compose(A).is_zero()
        cx.validate()
        st_ = splitting_type(cx)
        assert st_.degree == log_tangent_degree(X, phi.degree)
        assert st_.rank == X.n - X.l


@pytest.mark.parametrize("K", [F3, F5, FieldSpec(7), Q], ids=str)
def test_kernel_and_complex_agree(K):
    for X, phi in _random_instances(K, 40, 99 + K.characteristic):
        if X.k == 0 or not X.is_tame():
            continue
        a = splitting_type(kernel_complex(restrict_log_tangent_kernel(X, phi)))
        b = splitting_type(restrict_log_tangent_complex(X, phi))
        assert a == b


@pytest.mark.parametrize("K", [F2, F3, F5, Q], ids=str)
def test_contact_totals(K):
    for X, phi in _random_instances(K, 40, 5 + K.characteristic):
        cs = boundary_contacts(phi, X)
        if any(c.in_boundary for c in cs):
            continue
        assert sum(c.total for c in cs) == phi.degree * sum(X.boundary_degrees)
        for c in cs:
            assert sum(g.degree * m for g, m in c.factors) == c.total


def test_cover_scales_contact_at_sigma():
    rng = random.Random(3)
    K = FieldSpec(7)
    for _ in range(30):
        X, L = random_model_through_line(K, 3, [2], [1], rng)
        (c,) = boundary_contacts(L, X)
        sigma = next(((1, a) for a in range(7) if c.multiplicity_at((1, a))), (0, 1))
        if c.multiplicity_at(sigma) == 0:
            continue
        for m in (2, 3, 4):
            phi = cover_compose(L, m, sigma)
            assert lies_on(phi, X)
            (cm,) = boundary_contacts(phi, X)
            assert cm.multiplicity_at(sigma) == m * c.multiplicity_at(sigma)
