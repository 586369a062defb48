"""Dense exact linear algebra over a FiniteField.

Matrices are nested sequences of integer element codes, row major; vectors
are flat sequences.  Everything here is plain Gaussian elimination with the
first nonzero entry as pivot: over exact fields there is no conditioning to
worry about and the fixed pivot rule keeps results reproducible.
"""

from __future__ import annotations

import random
from typing import Sequence

from .gf import FiniteField

Matrix = Sequence[Sequence[int]]
Vector = Sequence[int]


def _rows(m: Matrix) -> list[list[int]]:
    return [list(r) for r in m]


def dims(m: Matrix) -> tuple[int, int]:
    r = len(m)
    c = len(m[0]) if r else 0
    if any(len(row) != c for row in m):
        raise ValueError("ragged matrix")
    return r, c


def identity(n: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def transpose(m: Matrix) -> list[list[int]]:
    r, c = dims(m)
    return [[m[i][j] for i in range(r)] for j in range(c)]


def matmul(field: FiniteField, a: Matrix, b: Matrix) -> list[list[int]]:
    ra, ca = dims(a)
    rb, cb = dims(b)
    if ca != rb:
        raise ValueError("matmul dimension mismatch")
    out = [[0] * cb for _ in range(ra)]
    for i in range(ra):
        for k in range(ca):
            aik = a[i][k]
            if aik == 0:
                continue
            for j in range(cb):
                if b[k][j]:
                    out[i][j] = field.add(out[i][j], field.mul(aik, b[k][j]))
    return out


def matvec(field: FiniteField, a: Matrix, v: Vector) -> list[int]:
    return [row[0] for row in matmul(field, a, [[x] for x in v])]


def scale(field: FiniteField, c: int, m: Matrix) -> list[list[int]]:
    return [[field.mul(c, x) for x in row] for row in m]


def _rref(field: FiniteField, m: list[list[int]]) -> tuple[list[list[int]], list[int]]:
    """Reduced row echelon form in place; returns (matrix, pivot columns)."""
    rows, cols = dims(m)
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        pivot = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = field.inv(m[r][c])
        m[r] = [field.mul(inv, x) for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [field.sub(x, field.mul(f, y)) for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return m, pivots


def rank(field: FiniteField, m: Matrix) -> int:
    if not m:
        return 0
    _, pivots = _rref(field, _rows(m))
    return len(pivots)


def kernel(field: FiniteField, m: Matrix) -> list[list[int]]:
    """Basis of the right kernel {v : Mv = 0}, one vector per free column,
    in reduced echelon convention (deterministic)."""
    rows, cols = dims(m)
    red, pivots = _rref(field, _rows(m))
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for fc in free:
        v = [0] * cols
        v[fc] = 1
        for r, pc in enumerate(pivots):
            v[pc] = field.neg(red[r][fc])
        basis.append(v)
    return basis


def solve(field: FiniteField, m: Matrix, b: Vector) -> list[int] | None:
    """One solution of Mx = b with free variables set to zero, or None."""
    rows, cols = dims(m)
    if len(b) != rows:
        raise ValueError("solve dimension mismatch")
    aug = [list(row) + [b[i]] for i, row in enumerate(m)]
    red, pivots = _rref(field, aug)
    pivots = [c for c in pivots if c < cols]
    for row in red:
        if row[-1] != 0 and all(x == 0 for x in row[:-1]):
            return None
    x = [0] * cols
    for r, pc in enumerate(pivots):
        x[pc] = red[r][-1]
    return x


def apply_automorphism(field: FiniteField, m: Matrix, k: int) -> list[list[int]]:
    """Entrywise x -> x**(p**k)."""
    return [[field.frobenius(x, k) for x in row] for row in m]


def is_invertible(field: FiniteField, m: Matrix) -> bool:
    r, c = dims(m)
    return r == c and rank(field, m) == r


def inverse(field: FiniteField, m: Matrix) -> list[list[int]]:
    r, c = dims(m)
    if r != c:
        raise ValueError("inverse of a non-square matrix")
    aug = [list(row) + ident for row, ident in zip(_rows(m), identity(r))]
    red, pivots = _rref(field, aug)
    if len(pivots) < r or any(p >= r for p in pivots):
        raise ValueError("matrix is singular")
    return [row[r:] for row in red]


def random_matrix(field: FiniteField, n: int, rng: random.Random) -> list[list[int]]:
    return [[rng.randrange(field.order) for _ in range(n)] for _ in range(n)]


def random_invertible(field: FiniteField, n: int, rng: random.Random) -> list[list[int]]:
    while True:
        m = random_matrix(field, n, rng)
        if is_invertible(field, m):
            return m
