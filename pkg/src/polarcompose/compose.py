"""Restriction of scalars: push forms over K = GF(q^w) down to F = GF(q).

The functional is always stored through its trace parameter: L(x) equals the
relative trace of alpha * x, which covers every F-linear map K -> F.  With
the power basis b_0 .. b_{w-1} of K over F fixed, a K-space of dimension A
becomes an F-space of dimension A*w; the F-coordinate of K-coordinate i and
basis slot s sits at index i*w + s.

F is materialised as its own absolute field GF(p^m).  The embedding of F
into K sends the canonical root of F's polynomial to its smallest root
inside K, which keeps every composed Gram matrix bit-reproducible.  When
m = N the context reuses K itself and the embedding is the identity.
"""

from __future__ import annotations

import dataclasses
from typing import Sequence

from . import linalg
from .forms import QuadraticForm, SesquilinearForm, polar_form
from .gf import FiniteField, canonical_field


def _find_root(K: FiniteField, poly: Sequence[int]) -> int:
    """Smallest element of K at which the polynomial vanishes."""
    for x in K.elements():
        acc = 0
        for c in reversed(poly):
            acc = K.add(K.mul(acc, x), c % K.p)
        if acc == 0:
            return x
    raise ValueError("polynomial has no root in the field")


class RestrictionContext:
    """A tower GF(q) = GF(p^m) inside K = GF(p^N) with q^w = p^N, together
    with the basis data needed to restrict A-dimensional K-spaces."""

    def __init__(self, K: FiniteField, m: int, A: int, F: FiniteField | None = None):
        K.check_subfield(m)
        if A < 1:
            raise ValueError("K-dimension must be >= 1")
        self.K = K
        self.m = m
        self.A = A
        self.w = K.tower_degree(m)
        self.q = K.p ** m
        if m == K.degree:
            self.F = K if F is None else F
            if self.F != K:
                raise ValueError("for m = N the subfield must be the field itself")
            self._root = K.canonical_root
            self._identity = True
        else:
            self.F = canonical_field(K.p, m) if F is None else F
            if self.F.p != K.p or self.F.degree != m:
                raise ValueError("subfield instance does not match the tower")
            self._root = _find_root(K, self.F.poly)
            self._identity = False
        self.basis = K.subfield_power_basis(m)
        self._lift_cache: dict[int, int] = {}
        self._drop_cache: dict[int, int] = {}
        self.dual_basis = self._trace_dual_basis()

    # -- scalar transport ------------------------------------------------------

    def lift_scalar(self, c: int) -> int:
        """Image in K of an F element."""
        if self._identity:
            return self.F.check_element(c)
        cached = self._lift_cache.get(c)
        if cached is not None:
            return cached
        acc = 0
        K = self.K
        for coef in reversed(self.F.coeffs(self.F.check_element(c))):
            acc = K.add(K.mul(acc, self._root), coef)
        self._lift_cache[c] = acc
        self._drop_cache[acc] = c
        return acc

    def drop_scalar(self, x: int) -> int:
        """Preimage in F of a K element lying in the subfield."""
        if self._identity:
            return self.K.check_element(x)
        cached = self._drop_cache.get(x)
        if cached is not None:
            return cached
        for c in self.F.elements():
            if self.lift_scalar(c) == x:
                return c
        raise ValueError("element does not lie in the embedded subfield")

    def _trace_dual_basis(self) -> tuple[int, ...]:
        """d_0..d_{w-1} with Tr(d_s * b_t) = delta_st; exists and is unique
        because the trace pairing of a separable extension is non-degenerate."""
        K, m, w = self.K, self.m, self.w
        pairing = [[K.relative_trace(K.mul(bi, bj), m) for bj in self.basis] for bi in self.basis]
        dual = []
        for s in range(w):
            rhs = [1 if t == s else 0 for t in range(w)]
            coeffs = linalg.solve(K, pairing, rhs)
            if coeffs is None:
                raise ArithmeticError("trace pairing is degenerate")
            acc = 0
            for c, b in zip(coeffs, self.basis):
                acc = K.add(acc, K.mul(c, b))
            dual.append(acc)
        return tuple(dual)

    def coordinates(self, x: int) -> list[int]:
        """F-coordinates of a K element over the power basis, via the dual."""
        K, m = self.K, self.m
        return [self.drop_scalar(K.relative_trace(K.mul(d, x), m)) for d in self.dual_basis]

    def trace_to_F(self, x: int) -> int:
        return self.drop_scalar(self.K.relative_trace(x, self.m))

    def functional(self, alpha: int) -> "LinearFunctional":
        return LinearFunctional(self.K, self.m, alpha)

    def __repr__(self) -> str:
        return f"RestrictionContext(GF({self.K.order})/GF({self.q}), A={self.A})"


@dataclasses.dataclass(frozen=True)
class LinearFunctional:
    """L(x) = Tr(alpha * x) down to GF(p^m); L = 0 exactly when alpha = 0."""

    K: FiniteField
    m: int
    alpha: int

    def __post_init__(self):
        self.K.check_subfield(self.m)
        self.K.check_element(self.alpha)

    def __call__(self, x: int) -> int:
        """Value as a subfield element of K (not dropped to F)."""
        return self.K.relative_trace(self.K.mul(self.alpha, x), self.m)


def functional_to_alpha(ctx: RestrictionContext, values: Sequence[int]) -> int:
    """The unique alpha whose trace functional takes the given subfield values
    on the power basis; with the dual basis in hand, alpha = sum values[s] d_s."""
    if len(values) != ctx.w:
        raise ValueError("need one value per basis element")
    K = ctx.K
    acc = 0
    for v, d in zip(values, ctx.dual_basis):
        K.check_element(v)
        if not K.is_in_subfield(v, ctx.m):
            raise ValueError("functional values must lie in the subfield")
        acc = K.add(acc, K.mul(v, d))
    return acc


def alpha_to_values(ctx: RestrictionContext, alpha: int) -> list[int]:
    L = ctx.functional(alpha)
    return [L(b) for b in ctx.basis]


# ---------------------------------------------------------------------------
# Vector transport
# ---------------------------------------------------------------------------

def restrict_vector(ctx: RestrictionContext, v: Sequence[int]) -> list[int]:
    if len(v) != ctx.A:
        raise ValueError("vector has wrong K-dimension")
    out: list[int] = []
    for x in v:
        out.extend(ctx.coordinates(ctx.K.check_element(x)))
    return out


def lift_vector(ctx: RestrictionContext, v: Sequence[int]) -> list[int]:
    if len(v) != ctx.A * ctx.w:
        raise ValueError("vector has wrong F-dimension")
    K = ctx.K
    out = []
    for i in range(ctx.A):
        acc = 0
        for s in range(ctx.w):
            acc = K.add(acc, K.mul(ctx.lift_scalar(v[i * ctx.w + s]), ctx.basis[s]))
        out.append(acc)
    return out


def _basis_vector(ctx: RestrictionContext, i: int, s: int) -> list[int]:
    v = [0] * ctx.A
    v[i] = ctx.basis[s]
    return v


# ---------------------------------------------------------------------------
# Form composition
# ---------------------------------------------------------------------------

def compose_sesquilinear(
    beta: SesquilinearForm, L: LinearFunctional, ctx: RestrictionContext
) -> SesquilinearForm:
    """Gram of L(beta) over F on the restricted basis.  The result carries
    sigma reduced to F: the zero power when F is fixed by sigma (w even for
    an order-2 sigma), the order-2 restriction otherwise."""
    _check_compat(beta.field, beta.dim, L, ctx)
    K = ctx.K
    n = ctx.A * ctx.w
    gram = [[0] * n for _ in range(n)]
    sig = beta.sigma_power
    for i in range(ctx.A):
        for s in range(ctx.w):
            for j in range(ctx.A):
                if beta.gram[i][j] == 0:
                    continue
                for t in range(ctx.w):
                    val = K.mul(K.mul(ctx.basis[s], beta.gram[i][j]), K.frobenius(ctx.basis[t], sig))
                    gram[i * ctx.w + s][j * ctx.w + t] = ctx.drop_scalar(L(val))
    return SesquilinearForm(ctx.F, gram, sig % ctx.m)


def compose_quadratic(
    q: QuadraticForm, L: LinearFunctional, ctx: RestrictionContext
) -> QuadraticForm:
    """Upper-triangular matrix of L(Q) over F: diagonal entries from Q on the
    restricted basis vectors, off-diagonal entries from the polar form, so
    that polar(compose(Q)) = compose(polar(Q)) holds exactly."""
    _check_compat(q.field, q.dim, L, ctx)
    pol = polar_form(q)
    n = ctx.A * ctx.w
    upper = [[0] * n for _ in range(n)]
    vecs = [_basis_vector(ctx, idx // ctx.w, idx % ctx.w) for idx in range(n)]
    for a in range(n):
        upper[a][a] = ctx.drop_scalar(L(q.evaluate(vecs[a])))
        for b in range(a + 1, n):
            upper[a][b] = ctx.drop_scalar(L(pol.evaluate(vecs[a], vecs[b])))
    return QuadraticForm(ctx.F, upper)


def embed_isometry(ctx: RestrictionContext, t: Sequence[Sequence[int]]) -> list[list[int]]:
    """The Aw x Aw matrix of a K-linear map on the F-coordinates; an injective
    multiplicative homomorphism, and Q-isometries land in LQ-isometries."""
    rows, cols = linalg.dims(t)
    if rows != ctx.A or cols != ctx.A:
        raise ValueError("matrix has wrong K-dimension")
    K = ctx.K
    n = ctx.A * ctx.w
    out = [[0] * n for _ in range(n)]
    for j in range(ctx.A):
        for tt in range(ctx.w):
            for i in range(ctx.A):
                if t[i][j] == 0:
                    continue
                coords = ctx.coordinates(K.mul(t[i][j], ctx.basis[tt]))
                for s in range(ctx.w):
                    out[i * ctx.w + s][j * ctx.w + tt] = coords[s]
    return out


def _check_compat(field: FiniteField, dim: int, L: LinearFunctional, ctx: RestrictionContext) -> None:
    if field != ctx.K:
        raise ValueError("form does not live over the context's big field")
    if L.K != ctx.K or L.m != ctx.m:
        raise ValueError("functional does not match the tower")
    if dim != ctx.A:
        raise ValueError("form dimension does not match the context")


# ---------------------------------------------------------------------------
# Serialization with provenance
# ---------------------------------------------------------------------------

def composed_form_record(form, ctx: RestrictionContext, alpha: int) -> dict:
    from .forms import form_to_dict

    return {
        "form": form_to_dict(form),
        "provenance": {
            "alpha": list(ctx.K.coeffs(alpha)),
            "basis": [list(ctx.K.coeffs(b)) for b in ctx.basis],
            "tower": {
                "p": ctx.K.p,
                "N": ctx.K.degree,
                "m": ctx.m,
                "poly": list(ctx.K.poly),
                "subfield_poly": list(ctx.F.poly),
            },
        },
    }
