"""Independent reference computations used only by the tests.

None of these share code paths with the package's fast routines: ranks are
taken by plain Python elimination, cohomology by the full (truncated) two-
chart Cech bicomplex, fibrewise rank by the gcd of all maximal minors.
"""

from __future__ import annotations

import itertools
import random

from freecurves.algebra import BinaryForm, FieldSpec, bf_gcd
from freecurves.p1sheaf import FreeComplex, FreeSum, SheafMap, fiber_surjective, subbundle_inclusion


def rank_python(K: FieldSpec, rows, ncols=None) -> int:
    A = [[K(x) for x in row] for row in rows]
    if not A:
        return 0
    ncols = len(A[0]) if ncols is None else ncols
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(A)) if A[i][c] != 0), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = K.inv(A[r][c])
        for i in range(len(A)):
            if i != r and A[i][c] != 0:
                f = K.reduce(A[i][c] * inv)
                A[i] = [K.reduce(x - f * y) for x, y in zip(A[i], A[r])]
        r += 1
    return r


def det_forms(K: FieldSpec, M) -> BinaryForm:
    n = len(M)
    if n == 0:
        return BinaryForm.constant(K, 1)
    if n == 1:
        return M[0][0]
    total = BinaryForm.zero(K)
    for j in range(n):
        if M[0][j].is_zero():
            continue
        minor = [row[:j] + row[j + 1 :] for row in M[1:]]
        term = M[0][j] * det_forms(K, minor)
        total = total + term if j % 2 == 0 else total - term
    return total


def maximal_minors_gcd(M: SheafMap) -> BinaryForm:
    """gcd of all maximal minors of a (wide) matrix of forms."""
    K = M.field
    rows = [list(r) for r in M.entries]
    q, r = len(rows), M.source.rank
    g = BinaryForm.zero(K)
    for cols in itertools.combinations(range(r), q):
        g = bf_gcd(g, det_forms(K, [[row[c] for c in cols] for row in rows]))
    return g


def fiber_surjective_by_minors(M: SheafMap) -> bool:
    if M.target.rank == 0:
        return True
    if M.target.rank > M.source.rank:
        return False
    g = maximal_minors_gcd(M)
    return not g.is_zero() and g.degree == 0


# ---------------------------------------------------------------------------


def _chart_ranges(D: int, N: int):
    """t-exponent ranges for the charts U_s, U_t, U_st of O(D) truncated at -N."""
    us = range(0, D + N + 1)
    ut = range(-N, D + 1)
    ust = range(-N, D + N + 1)
    return us, ut, ust


def cech_bicomplex(cx: FreeComplex, m: int) -> dict:
    """Hypercohomology dimensions of ``cx(m)`` from the full Cech bicomplex.

    Laurent monomials are truncated at exponent ``-N`` with ``N`` large
    enough that the discarded quotient is acyclic.
    """
    K = cx.field
    terms = [T.twisted(m) for T in cx.terms]
    N = max([0] + [-D - 1 for T in terms for D in T.twists])
    # index spaces: for each (p, q) a dict (summand, chart, j) -> index
    spaces = {}
    for p, T in enumerate(terms):
        idx0, idx1 = {}, {}
        for a, D in enumerate(T.twists):
            us, ut, ust = _chart_ranges(D, N)
            for j in us:
                idx0[(a, "s", j)] = len(idx0)
            for j in ut:
                idx0[(a, "t", j)] = len(idx0)
            for j in ust:
                idx1[(a, "st", j)] = len(idx1)
        spaces[(p, 0)] = idx0
        spaces[(p, 1)] = idx1
    pos = cx.position
    by_degree = {}
    for (p, q) in spaces:
        by_degree.setdefault(p - pos + q, []).append((p, q))

    def differential(t):
        srcs = by_degree.get(t, [])
        dsts = by_degree.get(t + 1, [])
        col_off, ncols = {}, 0
        for b in srcs:
            col_off[b] = ncols
            ncols += len(spaces[b])
        row_off, nrows = {}, 0
        for b in dsts:
            row_off[b] = nrows
            nrows += len(spaces[b])
        M = [[0] * ncols for _ in range(nrows)]
        for (p, q) in srcs:
            src = spaces[(p, q)]
            # horizontal part
            if p + 1 < len(terms) and (p + 1, q) in row_off:
                f = cx.maps[p]
                dst = spaces[(p + 1, q)]
                for (a, chart, j), ci in src.items():
                    for b in range(f.target.rank):
                        e = f.entries[b][a]
                        for w, c in enumerate(e.coeffs):
                            key = (b, chart, j + w)
                            if c and key in dst:
                                M[row_off[(p + 1, q)] + dst[key]][col_off[(p, q)] + ci] += c
            # vertical part with sign (-1)^p
            if q == 0 and (p, 1) in row_off:
                sign = -1 if p % 2 else 1
                dst = spaces[(p, 1)]
                for (a, chart, j), ci in src.items():
                    # delta(f_s, f_t) = f_t - f_s
                    val = sign if chart == "t" else -sign
                    M[row_off[(p, 1)] + dst[(a, "st", j)]][col_off[(p, q)] + ci] += val
        M = [[K.reduce(x) for x in row] for row in M]
        return M, nrows, ncols

    degrees = sorted(by_degree)
    ranks = {}
    for t in range(degrees[0] - 1, degrees[-1] + 1):
        M, nr, nc = differential(t)
        ranks[t] = rank_python(K, M, nc) if nr and nc else 0
    out = {}
    for t in degrees:
        dim = sum(len(spaces[b]) for b in by_degree[t])
        out[t] = dim - ranks.get(t, 0) - ranks.get(t - 1, 0)
    return out


def h0_kernel_bruteforce(M: SheafMap, m: int) -> int:
    """dim ker H^0(M(m)) by plain elimination of the multiplication matrix."""
    mat = M.h0_matrix(m)
    ncols = M.source.h0(m)
    return ncols - (rank_python(M.field, mat, ncols) if mat else 0)


# ---------------------------------------------------------------------------
# random generators for valid complexes


def random_form(K: FieldSpec, rng: random.Random, degree: int) -> BinaryForm:
    if degree < 0:
        return BinaryForm.zero(K)
    return BinaryForm(K, [K.random_element(rng) for _ in range(degree + 1)])


def random_kernel_map(K: FieldSpec, rng: random.Random, max_tries: int = 200) -> SheafMap:
    """Random fibrewise-surjective map between small free sums."""
    for _ in range(max_tries):
        r = rng.randint(1, 4)
        q = rng.randint(0, r - 1)
        src = [rng.randint(-1, 2) for _ in range(r)]
        tgt = [rng.randint(max(src) if src else 0, max(src) + 2) for _ in range(q)]
        rows = [[random_form(K, rng, b - a) for a in src] for b in tgt]
        M = SheafMap.from_rows(K, src, tgt, rows)
        if fiber_surjective(M):
            return M
    raise RuntimeError("could not sample a surjective map")


def random_three_term(K: FieldSpec, rng: random.Random, max_tries: int = 500) -> FreeComplex:
    """Random valid complex O -> sum O(a_i) -> sum O(b_k) built from Koszul
    relations, so that the composite vanishes identically."""
    for _ in range(max_tries):
        r = rng.randint(2, 4)
        a = [rng.randint(0, 2) for _ in range(r)]
        f = [random_form(K, rng, ai) for ai in a]
        A = SheafMap.from_rows(K, [0], a, [[fi] for fi in f])
        q = rng.randint(0, r - 2)
        tgt = []
        rows = []
        for _k in range(q):
            b = rng.randint(max(a) + min(a), max(a) + min(a) + 2)
            row = [BinaryForm.zero(K) for _ in range(r)]
            for i, j in itertools.combinations(range(r), 2):
                dg = b - a[i] - a[j]
                if dg < 0:
                    continue
                g = random_form(K, rng, dg)
                row[i] = row[i] + g * f[j]
                row[j] = row[j] - g * f[i]
            tgt.append(b)
            rows.append(row)
        # drop entries that are zero but nominally of negative degree
        B = SheafMap.from_rows(K, a, tgt, rows)
        if not subbundle_inclusion(A) or not fiber_surjective(B):
            continue
        return FreeComplex([FreeSum((0,)), FreeSum(tuple(a)), FreeSum(tuple(tgt))], [A, B], 1)
    raise RuntimeError("could not sample a valid complex")
