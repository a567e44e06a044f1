"""Exact dense linear algebra over ``F_p`` and ``Q``.

Matrices are lists of rows.  Over ``F_p`` elimination is vectorised with
numpy int64 (products stay below 2^62 because p < 2^31); over ``Q`` it runs
on :class:`fractions.Fraction`.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .algebra import FieldSpec


def _rref_modp(rows, ncols: int, p: int):
    if not rows or ncols == 0:
        return np.zeros((len(rows), ncols), dtype=np.int64), []
    A = np.array(rows, dtype=np.int64) % p
    nrows = A.shape[0]
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.nonzero(A[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            A[[r, k]] = A[[k, r]]
        inv = pow(int(A[r, c]), -1, p)
        A[r] = (A[r] * inv) % p
        col = A[:, c].copy()
        col[r] = 0
        mask = np.nonzero(col)[0]
        if mask.size:
            A[mask] = (A[mask] - np.outer(col[mask], A[r])) % p
        pivots.append(c)
        r += 1
    return A, pivots


def _rref_q(rows, ncols: int):
    A = [[Fraction(x) for x in row] for row in rows]
    nrows = len(A)
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        k = next((i for i in range(r, nrows) if A[i][c] != 0), None)
        if k is None:
            continue
        A[r], A[k] = A[k], A[r]
        inv = 1 / A[r][c]
        A[r] = [x * inv for x in A[r]]
        for i in range(nrows):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
    return A, pivots


def _int_row(row) -> list:
    """Clear denominators and divide out the content."""
    row = [Fraction(x) for x in row]
    den = math.lcm(*(x.denominator for x in row)) if row else 1
    ints = [int(x * den) for x in row]
    g = math.gcd(*ints)
    return [v // g for v in ints] if g > 1 else ints


def _rank_q(rows, ncols: int) -> int:
    # forward elimination on integer rows, keeping each row primitive
    A = [r for r in (_int_row(row) for row in rows) if any(r)]
    rank = 0
    for c in range(ncols):
        k = next((i for i in range(rank, len(A)) if A[i][c]), None)
        if k is None:
            continue
        A[rank], A[k] = A[k], A[rank]
        piv = A[rank]
        pc = piv[c]
        for i in range(rank + 1, len(A)):
            ac = A[i][c]
            if ac:
                new = [pc * x - ac * y for x, y in zip(A[i], piv)]
                g = math.gcd(*new)
                A[i] = [v // g for v in new] if g > 1 else new
        rank += 1
        if rank == len(A):
            break
    return rank


def rref(field: FieldSpec, rows, ncols: int | None = None):
    """Reduced row echelon form; returns ``(matrix_rows, pivot_columns)``."""
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    if field.characteristic:
        A, piv = _rref_modp(rows, ncols, field.characteristic)
        return [[int(x) for x in row] for row in A], piv
    return _rref_q(rows, ncols)


def rank(field: FieldSpec, rows, ncols: int | None = None) -> int:
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    if not rows or ncols == 0:
        return 0
    if field.characteristic:
        return len(_rref_modp(rows, ncols, field.characteristic)[1])
    return _rank_q(rows, ncols)


def nullspace(field: FieldSpec, rows, ncols: int) -> list:
    """Basis of ``{x : rows . x = 0}`` as a list of length-``ncols`` vectors."""
    if not rows:
        return [[field.one if i == j else field.zero for i in range(ncols)] for j in range(ncols)]
    R, piv = rref(field, rows, ncols)
    pivset = set(piv)
    free = [c for c in range(ncols) if c not in pivset]
    basis = []
    for f in free:
        v = [field.zero] * ncols
        v[f] = field.one
        for i, pc in enumerate(piv):
            v[pc] = field.reduce(-R[i][f])
        basis.append(v)
    return basis


def matmul(field: FieldSpec, a, b):
    inner = len(b)
    ncols = len(b[0]) if b else 0
    return [
        [field.reduce(sum(row[k] * b[k][j] for k in range(inner))) for j in range(ncols)]
        for row in a
    ]


def inverse(field: FieldSpec, a):
    """Inverse of a square matrix; raises ZeroDivisionError if singular."""
    n = len(a)
    aug = [list(row) + [field.one if i == j else field.zero for j in range(n)] for i, row in enumerate(a)]
    R, piv = rref(field, aug, 2 * n)
    if sum(1 for c in piv if c < n) < n:
        raise ZeroDivisionError("singular matrix")
    return [[field.reduce(x) for x in R[i][n:]] for i in range(n)]


def is_invertible(field: FieldSpec, a) -> bool:
    return len(a) == (len(a[0]) if a else 0) and rank(field, a) == len(a)
