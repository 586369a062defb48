"""Quadratic and sigma-sesquilinear forms over a finite field.

This module is the independent oracle of the package: everything here is
classified by direct computation (Gaussian elimination for radicals,
exhaustive vector enumeration for singular counts and Witt indices), never
by the prediction tables.  Enumerations are vectorised with numpy over
integer element codes and guarded by an explicit budget.

Conventions, fixed once to avoid transpose drift:
  * sesquilinear evaluation  beta(u, v) = sum_i sum_j u_i M[i][j] sigma(v_j),
    linear in the first argument, sigma-semilinear in the second;
  * quadratic forms are stored upper triangular, Q(v) = v^T U v, and the
    polar form has Gram U + U^T (no division by 2 anywhere except the
    discriminant, which requires odd characteristic).
"""

from __future__ import annotations

import dataclasses
import enum
import functools
import math
from typing import Sequence

import numpy as np

from . import linalg
from .gf import FiniteField, SquareClass

DEFAULT_BUDGET = 10 ** 6
_ADJACENCY_CAP = 8192  # max singular projective points for the graph stage


class BudgetExceededError(RuntimeError):
    """An exhaustive enumeration would exceed the configured budget."""


class OracleInconsistencyError(RuntimeError):
    """Witt index and singular count disagree; indicates an internal bug."""


class FormType(enum.Enum):
    ALTERNATING = "alternating"
    SYMMETRIC = "symmetric"
    SYMMETRIC_NOT_ALTERNATING = "symmetric-not-alternating"
    HERMITIAN = "hermitian"
    ATYPICAL = "atypical"


class OrthogonalClass(enum.Enum):
    PLUS = "O+"
    MINUS = "O-"
    ODD = "O"
    DEGENERATE = "degenerate"


def _check_budget(count: int, budget: int) -> None:
    if count > budget:
        raise BudgetExceededError(f"enumeration of {count} vectors exceeds budget {budget}")


# ---------------------------------------------------------------------------
# Form containers
# ---------------------------------------------------------------------------

def _freeze(matrix: Sequence[Sequence[int]], field: FiniteField) -> tuple[tuple[int, ...], ...]:
    rows = tuple(tuple(field.check_element(x) for x in row) for row in matrix)
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ValueError("form matrix must be square")
    return rows


@dataclasses.dataclass(frozen=True)
class QuadraticForm:
    """Q(v) = v^T U v with U upper triangular over the field."""

    field: FiniteField
    upper: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "upper", _freeze(self.upper, self.field))
        for i, row in enumerate(self.upper):
            if any(row[j] != 0 for j in range(i)):
                raise ValueError("quadratic form matrix must be upper triangular")

    @property
    def dim(self) -> int:
        return len(self.upper)

    def evaluate(self, v: Sequence[int]) -> int:
        if len(v) != self.dim:
            raise ValueError("vector dimension mismatch")
        f = self.field
        acc = 0
        for i in range(self.dim):
            vi = v[i]
            if vi == 0:
                continue
            for j in range(i, self.dim):
                c = self.upper[i][j]
                if c and v[j]:
                    acc = f.add(acc, f.mul(f.mul(vi, v[j]), c))
        return acc


@dataclasses.dataclass(frozen=True)
class SesquilinearForm:
    """beta(u, v) = u^T M sigma(v) where sigma = Frobenius**sigma_power."""

    field: FiniteField
    gram: tuple[tuple[int, ...], ...]
    sigma_power: int = 0

    def __post_init__(self):
        object.__setattr__(self, "gram", _freeze(self.gram, self.field))
        object.__setattr__(self, "sigma_power", self.sigma_power % self.field.degree)

    @property
    def dim(self) -> int:
        return len(self.gram)

    @property
    def sigma_order(self) -> int:
        k = self.sigma_power
        if k == 0:
            return 1
        return self.field.degree // math.gcd(self.field.degree, k)

    def sigma(self, x: int) -> int:
        return self.field.frobenius(x, self.sigma_power)

    def evaluate(self, u: Sequence[int], v: Sequence[int]) -> int:
        if len(u) != self.dim or len(v) != self.dim:
            raise ValueError("vector dimension mismatch")
        f = self.field
        acc = 0
        for i in range(self.dim):
            if u[i] == 0:
                continue
            row = 0
            for j in range(self.dim):
                c = self.gram[i][j]
                if c and v[j]:
                    row = f.add(row, f.mul(c, self.sigma(v[j])))
            acc = f.add(acc, f.mul(u[i], row))
        return acc


def eval_quadratic(q: QuadraticForm, v: Sequence[int]) -> int:
    return q.evaluate(v)


def polar_form(q: QuadraticForm) -> SesquilinearForm:
    """Bilinear form with Gram U + U^T; f(u,v) = Q(u+v) - Q(u) - Q(v)."""
    f = q.field
    n = q.dim
    gram = [
        [f.add(q.upper[i][j] if j >= i else 0, q.upper[j][i] if i >= j else 0) for j in range(n)]
        for i in range(n)
    ]
    return SesquilinearForm(f, gram, 0)


def radical(beta: SesquilinearForm) -> list[list[int]]:
    """Basis of {u : beta(u, v) = 0 for all v}; since sigma is bijective this
    is the left kernel of the Gram matrix."""
    return linalg.kernel(beta.field, linalg.transpose(beta.gram))


def radical_dim(beta: SesquilinearForm) -> int:
    return beta.dim - linalg.rank(beta.field, beta.gram)


def is_degenerate_sesquilinear(beta: SesquilinearForm) -> bool:
    return radical_dim(beta) > 0


# ---------------------------------------------------------------------------
# Vectorised enumeration engine
# ---------------------------------------------------------------------------

class _Ops:
    """Elementwise field arithmetic on numpy arrays of element codes."""

    def __init__(self, field: FiniteField):
        self.field = field
        self.p = field.p
        self.order = field.order
        self.prime = field.degree == 1
        self.char2 = field.p == 2
        if not self.prime:
            self._exp = field.np_exp()
            self._log = field.np_log()
            if not self.char2:
                self._digits = field.np_digits()
                self._pvec = self.p ** np.arange(field.degree, dtype=np.int64)

    def mul(self, x, y):
        if self.prime:
            return (x * y) % self.p
        r = self._exp[(self._log[x] + self._log[y]) % (self.order - 1)]
        return np.where((x == 0) | (y == 0), 0, r)

    def add(self, x, y):
        if self.prime:
            return (x + y) % self.p
        if self.char2:
            return x ^ y
        d = (self._digits[x] + self._digits[y]) % self.p
        return d @ self._pvec

    def frob(self, x, k: int):
        if self.prime or k % self.field.degree == 0:
            return x
        return self.field.np_frobenius_map(k)[x]


@functools.lru_cache(maxsize=4)
def _space_cached(field: FiniteField, dim: int) -> np.ndarray:
    if dim == 0:
        return np.zeros((1, 0), dtype=np.int64)
    n = field.order ** dim
    idx = np.arange(n)
    return np.stack(np.unravel_index(idx, (field.order,) * dim), axis=1).astype(np.int64)


def vector_space(field: FiniteField, dim: int, budget: int = DEFAULT_BUDGET) -> np.ndarray:
    """All order**dim coded vectors, row 0 the origin, deterministic order."""
    _check_budget(field.order ** dim, budget)
    return _space_cached(field, dim)


def _quad_values(q: QuadraticForm, vectors: np.ndarray) -> np.ndarray:
    ops = _Ops(q.field)
    if ops.prime:
        u = np.asarray(q.upper, dtype=np.int64)
        return ((vectors @ u % ops.p) * vectors).sum(axis=1) % ops.p
    acc = np.zeros(len(vectors), dtype=np.int64)
    for i in range(q.dim):
        for j in range(i, q.dim):
            c = q.upper[i][j]
            if c == 0:
                continue
            term = ops.mul(ops.mul(vectors[:, i], vectors[:, j]), c)
            acc = ops.add(acc, term)
    return acc


def _sesq_diag_values(beta: SesquilinearForm, vectors: np.ndarray) -> np.ndarray:
    ops = _Ops(beta.field)
    w = ops.frob(vectors, beta.sigma_power)
    if ops.prime:
        m = np.asarray(beta.gram, dtype=np.int64)
        return ((vectors @ m % ops.p) * w).sum(axis=1) % ops.p
    acc = np.zeros(len(vectors), dtype=np.int64)
    for i in range(beta.dim):
        for j in range(beta.dim):
            c = beta.gram[i][j]
            if c == 0:
                continue
            acc = ops.add(acc, ops.mul(ops.mul(vectors[:, i], c), w[:, j]))
    return acc


def _pair_products(
    field: FiniteField,
    left: np.ndarray,
    gram: Sequence[Sequence[int]],
    right: np.ndarray,
    sigma_power: int = 0,
) -> np.ndarray:
    """Matrix X with X[a, b] = beta(left[a], right[b])."""
    ops = _Ops(field)
    w = ops.frob(right, sigma_power)
    if ops.prime:
        m = np.asarray(gram, dtype=np.float64)
        lm = np.asarray(left, dtype=np.float64) @ m % ops.p
        return (lm @ np.asarray(w, dtype=np.float64).T % ops.p).astype(np.int64)
    acc = np.zeros((len(left), len(right)), dtype=np.int64)
    for i in range(len(gram)):
        for j in range(len(gram)):
            c = gram[i][j]
            if c == 0:
                continue
            acc = ops.add(acc, ops.mul(ops.mul(left[:, i], c)[:, None], w[:, j][None, :]))
    return acc


def _transform_vectors(field: FiniteField, t: Sequence[Sequence[int]], vectors: np.ndarray) -> np.ndarray:
    """Apply the matrix t to every row vector (columns convention: (Tv)_i)."""
    ops = _Ops(field)
    if ops.prime:
        return vectors @ np.asarray(t, dtype=np.int64).T % ops.p
    n = len(t)
    out = np.zeros((len(vectors), n), dtype=np.int64)
    for i in range(n):
        col = np.zeros(len(vectors), dtype=np.int64)
        for j in range(n):
            if t[i][j]:
                col = ops.add(col, ops.mul(vectors[:, j], t[i][j]))
        out[:, i] = col
    return out


def _projective_reps(vectors: np.ndarray) -> np.ndarray:
    """Rows whose first nonzero coordinate is 1: one per projective point."""
    nz = vectors != 0
    has = nz.any(axis=1)
    first = nz.argmax(axis=1)
    lead = vectors[np.arange(len(vectors)), first]
    return vectors[has & (lead == 1)]


# ---------------------------------------------------------------------------
# Degeneracy, classification, counting
# ---------------------------------------------------------------------------

def _subspace_vectors(field: FiniteField, basis: Sequence[Sequence[int]], budget: int) -> np.ndarray:
    """All field-linear combinations of the basis, as coded rows."""
    r = len(basis)
    dim = len(basis[0])
    coeffs = vector_space(field, r, budget)
    ops = _Ops(field)
    out = np.zeros((len(coeffs), dim), dtype=np.int64)
    for col in range(dim):
        acc = np.zeros(len(coeffs), dtype=np.int64)
        for k in range(r):
            if basis[k][col]:
                acc = ops.add(acc, ops.mul(coeffs[:, k], basis[k][col]))
        out[:, col] = acc
    return out


def is_degenerate_quadratic(q: QuadraticForm, budget: int = DEFAULT_BUDGET) -> bool:
    """True iff some nonzero u in the radical of the polar form has Q(u) = 0."""
    rad = radical(polar_form(q))
    if not rad:
        return False
    vecs = _subspace_vectors(q.field, rad, budget)
    vals = _quad_values(q, vecs)
    return bool((vals[1:] == 0).any())


def classify_reflexive(beta: SesquilinearForm) -> FormType:
    """Sort a sesquilinear form into alternating / symmetric (not alternating)
    / hermitian, or atypical when none of the symmetry patterns hold."""
    f = beta.field
    m = beta.gram
    n = beta.dim
    if beta.sigma_power == 0:
        skew = all(m[j][i] == f.neg(m[i][j]) for i in range(n) for j in range(n))
        diag0 = all(m[i][i] == 0 for i in range(n))
        if skew and diag0:
            return FormType.ALTERNATING
        if all(m[j][i] == m[i][j] for i in range(n) for j in range(n)):
            if f.p == 2 and any(m[i][i] != 0 for i in range(n)):
                # in char 2 a symmetric Gram gives beta(x,x) = sum x_i^2 m_ii,
                # nonzero somewhere iff some diagonal entry is nonzero
                return FormType.SYMMETRIC_NOT_ALTERNATING
            return FormType.SYMMETRIC
        return FormType.ATYPICAL
    if beta.sigma_order == 2:
        if all(beta.sigma(m[j][i]) == m[i][j] for i in range(n) for j in range(n)):
            return FormType.HERMITIAN
    return FormType.ATYPICAL


def count_singular(q: QuadraticForm, budget: int = DEFAULT_BUDGET) -> int:
    """Number of nonzero vectors with Q(v) = 0, by full enumeration."""
    vecs = vector_space(q.field, q.dim, budget)
    vals = _quad_values(q, vecs)
    return int((vals[1:] == 0).sum())


# ---------------------------------------------------------------------------
# Witt index
# ---------------------------------------------------------------------------

def _singular_radical_dim(form, rad: list[list[int]], budget: int) -> int:
    """Dimension of {u in rad : u singular}; a subspace in every case."""
    if not rad:
        return 0
    field = form.field
    vecs = _subspace_vectors(field, rad, budget)
    if isinstance(form, QuadraticForm):
        vals = _quad_values(form, vecs)
    else:
        vals = _sesq_diag_values(form, vecs)
    count = int((vals == 0).sum())  # includes the origin
    r0 = round(np.log(count) / np.log(field.order)) if count > 1 else 0
    if field.order ** r0 != count:
        raise OracleInconsistencyError("singular radical is not a subspace")
    return r0


def _witt_dfs(field: FiniteField, pts: np.ndarray, adj: np.ndarray, ceiling: int, start_best: int) -> int:
    order = field.order
    weights = order ** np.arange(pts.shape[1], dtype=np.int64)
    codes = pts @ weights
    f = field
    best = start_best

    def vec_scale_add(base: tuple, a: int, v: np.ndarray) -> tuple:
        return tuple(f.add(b, f.mul(a, int(x))) for b, x in zip(base, v))

    def encode(vec: tuple) -> int:
        return int(sum(x * w for x, w in zip(vec, weights)))

    def extend(chosen: list[int], span_vecs: list[tuple], span_codes: set, cand: np.ndarray) -> None:
        nonlocal best
        best = max(best, len(chosen))
        if best >= ceiling:
            return
        for pos in range(len(cand)):
            t = int(cand[pos])
            if codes[t] in span_codes:
                continue
            vt = pts[t]
            new_vecs = list(span_vecs)
            new_codes = set(span_codes)
            for a in range(1, order):
                for s in span_vecs:
                    nv = vec_scale_add(s, a, vt)
                    new_vecs.append(nv)
                    new_codes.add(encode(nv))
            rest = cand[pos + 1:]
            extend(chosen + [t], new_vecs, new_codes, rest[adj[t, rest]])
            if best >= ceiling:
                return

    zero = tuple([0] * pts.shape[1])
    extend([], [zero], {0}, np.arange(len(pts)))
    return best


def witt_index(form, budget: int = DEFAULT_BUDGET) -> int:
    """Dimension of a maximal totally singular (quadratic) or totally
    isotropic (sesquilinear) subspace, by exhaustive search.

    The search enumerates singular vectors, reduces to projective
    representatives, and walks increasing chains of pairwise-orthogonal
    independent points.  Depth 2 reduces to edge existence in the
    orthogonality graph and depth 3 to a common-neighbour count (a
    totally singular plane through an orthogonal pair contributes exactly
    order + 1 common neighbours, anything beyond that is an extension
    point), so non-degenerate spaces of dimension <= 7 never recurse.
    """
    field = form.field
    d = form.dim
    vecs = vector_space(field, d, budget)
    quad = isinstance(form, QuadraticForm)
    if quad:
        vals = _quad_values(form, vecs)
        base = polar_form(form)
        gram, sig = base.gram, 0
        rad = radical(base)
    else:
        vals = _sesq_diag_values(form, vecs)
        gram, sig = form.gram, form.sigma_power
        rad = radical(form)

    sing = vecs[vals == 0]
    if len(sing) <= 1:
        return 0

    r = len(rad)
    r0 = _singular_radical_dim(form, rad, budget)
    ceiling = r0 + (d - r) // 2
    if not quad and classify_reflexive(form) is FormType.ATYPICAL:
        # the isotropic-dimension bound is proved for reflexive forms only;
        # fall back to the trivial bound so early exits cannot clip the search
        ceiling = d

    pts = _projective_reps(sing)
    n = len(pts)
    if n == 0:
        return 0
    if ceiling <= 1:
        return 1
    if n > _ADJACENCY_CAP:
        raise BudgetExceededError(f"{n} singular points exceed the adjacency cap")

    x = _pair_products(field, pts, gram, pts, sig)
    adj = x == 0
    adj &= adj.T  # orthogonality in both directions (no-op for reflexive forms)

    pairs_i, pairs_j = np.nonzero(np.triu(adj, 1))
    if len(pairs_i) == 0:
        return 1
    if ceiling == 2:
        return 2

    packed = np.packbits(adj, axis=1)
    common = np.bitwise_count(packed[pairs_i] & packed[pairs_j]).sum(axis=1, dtype=np.int64)
    if not (common > field.order + 1).any():
        return 2
    if ceiling == 3:
        return 3
    return _witt_dfs(field, pts, adj, ceiling, 3)


# ---------------------------------------------------------------------------
# Orthogonal classification
# ---------------------------------------------------------------------------

def expected_singular_count(kind: OrthogonalClass, dim: int, q: int) -> int:
    """Closed-form count of nonzero singular vectors for each class."""
    if kind is OrthogonalClass.ODD:
        return q ** (dim - 1) - 1
    m = dim // 2
    if kind is OrthogonalClass.PLUS:
        return (q ** m - 1) * (q ** (m - 1) + 1)
    if kind is OrthogonalClass.MINUS:
        return (q ** m + 1) * (q ** (m - 1) - 1)
    raise ValueError(f"no singular count for {kind}")


def orthogonal_report(q: QuadraticForm, budget: int = DEFAULT_BUDGET) -> dict:
    """Full oracle record: degeneracy, class, Witt index, singular count and
    polar radical dimension, each computed once.  The class is decided by the
    Witt index and cross-checked against the closed-form singular counts; a
    mismatch raises OracleInconsistencyError."""
    rdim = radical_dim(polar_form(q))
    if is_degenerate_quadratic(q, budget):
        return {
            "degenerate": True,
            "class": OrthogonalClass.DEGENERATE,
            "witt_index": None,
            "singular_count": None,
            "radical_dim": rdim,
        }
    d = q.dim
    size = q.field.order
    w = witt_index(q, budget)
    cnt = count_singular(q, budget)
    if d % 2 == 1:
        verdict = OrthogonalClass.ODD
        if w != (d - 1) // 2:
            raise OracleInconsistencyError(f"odd dim {d} has witt {w}")
    else:
        m = d // 2
        if w == m:
            verdict = OrthogonalClass.PLUS
        elif w == m - 1:
            verdict = OrthogonalClass.MINUS
        else:
            raise OracleInconsistencyError(f"even dim {d} has witt {w}")
    if cnt != expected_singular_count(verdict, d, size):
        raise OracleInconsistencyError(
            f"singular count {cnt} does not match {verdict.value} in dim {d} over GF({size})"
        )
    return {
        "degenerate": False,
        "class": verdict,
        "witt_index": w,
        "singular_count": cnt,
        "radical_dim": rdim,
    }


def orthogonal_class(q: QuadraticForm, budget: int = DEFAULT_BUDGET) -> OrthogonalClass:
    return orthogonal_report(q, budget)["class"]


def discriminant_class(q: QuadraticForm) -> SquareClass:
    """Square class of det((U + U^T) / 2); odd characteristic, even dimension,
    non-degenerate only.  The plus-type predicate is
    class(det B) == class((-1)**(dim/2))."""
    f = q.field
    if f.p == 2:
        raise ValueError("discriminant classes require odd characteristic")
    if q.dim % 2 != 0:
        raise ValueError("discriminant classification applies to even dimension")
    gram = polar_form(q).gram
    half = f.inv(f.add(1, 1))
    b = [[f.mul(half, x) for x in row] for row in gram]
    det = _determinant(f, b)
    if det == 0:
        raise ValueError("form is degenerate")
    return f.square_class(det, f.degree)


def discriminant_predicts_plus(q: QuadraticForm) -> bool:
    f = q.field
    n = q.dim // 2
    target = f.power(f.neg(1), n)
    return discriminant_class(q) == f.square_class(target, f.degree)


def _determinant(field: FiniteField, m: Sequence[Sequence[int]]) -> int:
    rows = [list(r) for r in m]
    n = len(rows)
    det = 1
    for c in range(n):
        pivot = next((i for i in range(c, n) if rows[i][c] != 0), None)
        if pivot is None:
            return 0
        if pivot != c:
            rows[c], rows[pivot] = rows[pivot], rows[c]
            det = field.neg(det)
        det = field.mul(det, rows[c][c])
        inv = field.inv(rows[c][c])
        for i in range(c + 1, n):
            if rows[i][c]:
                factor = field.mul(inv, rows[i][c])
                rows[i] = [field.sub(x, field.mul(factor, y)) for x, y in zip(rows[i], rows[c])]
    return det


# ---------------------------------------------------------------------------
# Hyperbolic splitting
# ---------------------------------------------------------------------------

@dataclasses.dataclass(frozen=True)
class HyperbolicDecomposition:
    lines: int
    germ: QuadraticForm
    basis: tuple[tuple[int, ...], ...]  # hyperbolic pairs u1,v1,... then germ basis

    @property
    def germ_coefficient(self) -> int:
        if self.germ.dim != 1:
            raise ValueError("germ coefficient is defined for one-dimensional germs")
        return self.germ.upper[0][0]


def _restrict_quadratic(q: QuadraticForm, basis: Sequence[Sequence[int]]) -> QuadraticForm:
    f = q.field
    pol = polar_form(q)
    k = len(basis)
    upper = [[0] * k for _ in range(k)]
    for i in range(k):
        upper[i][i] = q.evaluate(basis[i])
        for j in range(i + 1, k):
            upper[i][j] = pol.evaluate(basis[i], basis[j])
    return QuadraticForm(f, upper)


def decompose_hyperbolic_germ(q: QuadraticForm, budget: int = DEFAULT_BUDGET) -> HyperbolicDecomposition:
    """Split off hyperbolic lines until the rest is anisotropic.

    Repeatedly finds the first singular vector in enumeration order, pairs it
    with a partner of unit polar product, and restricts to the orthogonal
    complement.  The leftover germ has dimension 0, 1 or 2 over a finite
    field; its number of lines equals the Witt index.
    """
    if is_degenerate_quadratic(q, budget):
        raise ValueError("hyperbolic decomposition requires a non-degenerate form")
    f = q.field
    pol = polar_form(q)
    comp = [list(row) for row in linalg.identity(q.dim)]
    pairs: list[tuple[list[int], list[int]]] = []
    while comp:
        cur = _restrict_quadratic(q, comp)
        vecs = vector_space(f, cur.dim, budget)
        vals = _quad_values(cur, vecs)
        idx = np.nonzero(vals == 0)[0]
        idx = idx[idx != 0]
        if len(idx) == 0:
            break
        coeffs = vecs[idx[0]]
        u = [0] * q.dim
        for k, c in enumerate(coeffs):
            if c:
                u = [f.add(x, f.mul(int(c), y)) for x, y in zip(u, comp[k])]
        rho = [pol.evaluate(u, b) for b in comp]
        jpart = next(i for i, x in enumerate(rho) if x != 0)
        v1 = [f.div(x, rho[jpart]) for x in comp[jpart]]
        qv = q.evaluate(v1)
        v = [f.sub(x, f.mul(qv, y)) for x, y in zip(v1, u)]
        pairs.append((u, v))
        rows = [[pol.evaluate(u, b) for b in comp], [pol.evaluate(v, b) for b in comp]]
        kern = linalg.kernel(f, rows)
        comp = [
            [functools.reduce(f.add, (f.mul(c[k], comp[k][col]) for k in range(len(comp))), 0)
             for col in range(q.dim)]
            for c in kern
        ]
    germ = _restrict_quadratic(q, comp) if comp else QuadraticForm(f, [])
    basis = [x for pair in pairs for x in pair] + [list(b) for b in comp]
    return HyperbolicDecomposition(len(pairs), germ, tuple(tuple(b) for b in basis))


def hyperbolic_standard(field: FiniteField, lines: int, germ: QuadraticForm | None = None) -> QuadraticForm:
    """Orthogonal sum of `lines` hyperbolic planes x*y, then the germ block."""
    g = germ.dim if germ is not None else 0
    n = 2 * lines + g
    upper = [[0] * n for _ in range(n)]
    for t in range(lines):
        upper[2 * t][2 * t + 1] = 1
    if germ is not None:
        for i in range(g):
            for j in range(i, g):
                upper[2 * lines + i][2 * lines + j] = germ.upper[i][j]
    return QuadraticForm(field, upper)


# ---------------------------------------------------------------------------
# Isometries and change of variables
# ---------------------------------------------------------------------------

def is_isometry(t: Sequence[Sequence[int]], form, budget: int = DEFAULT_BUDGET) -> bool:
    """Quadratic: Q(Tv) = Q(v) for every v (exhaustive, the ground truth);
    sesquilinear: the matrix identity T^T M sigma(T) = M."""
    field = form.field
    n = form.dim
    r, c = linalg.dims(t)
    if r != n or c != n:
        raise ValueError("isometry candidate has wrong dimensions")
    if isinstance(form, SesquilinearForm):
        lhs = linalg.matmul(
            field,
            linalg.matmul(field, linalg.transpose(t), form.gram),
            linalg.apply_automorphism(field, t, form.sigma_power),
        )
        return all(tuple(row) == grow for row, grow in zip(lhs, form.gram))
    vecs = vector_space(field, n, budget)
    moved = _transform_vectors(field, t, vecs)
    return bool((_quad_values(form, moved) == _quad_values(form, vecs)).all())


def quadratic_congruence(q: QuadraticForm, p_mat: Sequence[Sequence[int]]) -> QuadraticForm:
    """The form v -> Q(Pv), rebuilt upper triangular from evaluations."""
    cols = linalg.transpose(p_mat)
    return _restrict_quadratic(q, cols)


def sesquilinear_congruence(beta: SesquilinearForm, p_mat: Sequence[Sequence[int]]) -> SesquilinearForm:
    f = beta.field
    m = linalg.matmul(
        f,
        linalg.matmul(f, linalg.transpose(p_mat), beta.gram),
        linalg.apply_automorphism(f, p_mat, beta.sigma_power),
    )
    return SesquilinearForm(f, m, beta.sigma_power)


def quadratic_from_symmetric(beta: SesquilinearForm) -> QuadraticForm:
    """Q(v) = beta(v, v) / 2 for a symmetric bilinear form, odd characteristic."""
    f = beta.field
    if f.p == 2:
        raise ValueError("no half-Gram quadratic form in characteristic 2")
    if beta.sigma_power != 0:
        raise ValueError("form must be bilinear")
    half = f.inv(f.add(1, 1))
    n = beta.dim
    upper = [[0] * n for _ in range(n)]
    for i in range(n):
        upper[i][i] = f.mul(half, beta.gram[i][i])
        for j in range(i + 1, n):
            if beta.gram[i][j] != beta.gram[j][i]:
                raise ValueError("form is not symmetric")
            upper[i][j] = beta.gram[i][j]
    return QuadraticForm(f, upper)


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------

def form_to_dict(form) -> dict:
    field = form.field
    if isinstance(form, QuadraticForm):
        return {
            "kind": "quadratic",
            "matrix": [[list(field.coeffs(x)) for x in row] for row in form.upper],
        }
    return {
        "kind": "sesquilinear",
        "matrix": [[list(field.coeffs(x)) for x in row] for row in form.gram],
        "sigma_power": form.sigma_power,
    }


def form_from_dict(field: FiniteField, data: dict):
    matrix = [[field.from_coeffs(entry) for entry in row] for row in data["matrix"]]
    if data["kind"] == "quadratic":
        return QuadraticForm(field, matrix)
    if data["kind"] == "sesquilinear":
        return SesquilinearForm(field, matrix, int(data.get("sigma_power", 0)))
    raise ValueError(f"unknown form kind {data.get('kind')!r}")
