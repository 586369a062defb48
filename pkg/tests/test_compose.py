"""Restriction of scalars: worked examples, then the structural identities."""

import itertools
import random

import pytest

from polarcompose import forms, linalg
from polarcompose.compose import (
    RestrictionContext,
    alpha_to_values,
    composed_form_record,
    compose_quadratic,
    compose_sesquilinear,
    embed_isometry,
    functional_to_alpha,
    lift_vector,
    restrict_vector,
)
from polarcompose.forms import QuadraticForm, SesquilinearForm, is_isometry, polar_form
from polarcompose.gf import canonical_field

K9 = canonical_field(3, 2)
I9 = K9.canonical_root
K4 = canonical_field(2, 2)


def ctx9(A=1):
    return RestrictionContext(K9, 1, A)


# ---------------------------------------------------------------------------
# functionals
# ---------------------------------------------------------------------------

def test_functional_to_alpha_examples():
    ctx = ctx9()
    assert functional_to_alpha(ctx, [0, 0]) == 0
    trace_values = [K9.relative_trace(b, 1) for b in ctx.basis]
    assert functional_to_alpha(ctx, trace_values) == 1
    assert functional_to_alpha(ctx, [0, 1]) == I9


def test_functional_value_validation():
    ctx = ctx9()
    with pytest.raises(ValueError):
        functional_to_alpha(ctx, [I9, 0])  # value outside the subfield
    with pytest.raises(ValueError):
        functional_to_alpha(ctx, [0])


@pytest.mark.parametrize("p,n,m", [(2, 2, 1), (3, 2, 1), (2, 4, 1), (2, 4, 2),
                                   (3, 4, 1), (3, 4, 2), (5, 2, 1), (2, 6, 2), (2, 6, 3)])
def test_alpha_functional_roundtrip_all_alphas(p, n, m):
    K = canonical_field(p, n)
    ctx = RestrictionContext(K, m, 1)
    for alpha in K.elements():
        assert functional_to_alpha(ctx, alpha_to_values(ctx, alpha)) == alpha


# ---------------------------------------------------------------------------
# vector transport
# ---------------------------------------------------------------------------

def test_restrict_examples():
    ctx = ctx9()
    assert restrict_vector(ctx, [0]) == [0, 0]
    assert restrict_vector(ctx, [I9]) == [0, 1]
    trivial = RestrictionContext(K9, 2, 1)
    assert trivial.F is K9
    assert restrict_vector(trivial, [7]) == [7]


def test_lift_restrict_roundtrip():
    for A in (1, 2):
        ctx = RestrictionContext(K9, 1, A)
        for v in itertools.product(range(9), repeat=A):
            assert lift_vector(ctx, restrict_vector(ctx, list(v))) == list(v)


# ---------------------------------------------------------------------------
# composition examples
# ---------------------------------------------------------------------------

def test_compose_sesquilinear_examples():
    ctx = ctx9()
    beta = SesquilinearForm(K9, [[1]], 1)
    c1 = compose_sesquilinear(beta, ctx.functional(1), ctx)
    assert c1.gram == ((2, 0), (0, 2)) and c1.sigma_power == 0
    ci = compose_sesquilinear(beta, ctx.functional(I9), ctx)
    assert ci.gram == ((0, 2), (1, 0))
    assert forms.classify_reflexive(ci) is forms.FormType.ALTERNATING
    # w = 1: plain scaling
    trivial = RestrictionContext(K9, 2, 1)
    scaled = compose_sesquilinear(beta, trivial.functional(I9), trivial)
    assert scaled.gram == ((I9,),)


def test_compose_quadratic_examples():
    ctx = ctx9()
    q = QuadraticForm(K9, [[1]])
    assert compose_quadratic(q, ctx.functional(1), ctx).upper == ((2, 0), (0, 1))
    assert compose_quadratic(q, ctx.functional(I9), ctx).upper == ((0, 2), (0, 0))
    trivial = RestrictionContext(K9, 2, 1)
    assert compose_quadratic(q, trivial.functional(1), trivial).upper == ((1,),)


def test_embed_isometry_examples():
    ctx = ctx9()
    assert embed_isometry(ctx, [[1]]) == [[1, 0], [0, 1]]
    assert embed_isometry(ctx, [[I9]]) == [[0, 2], [1, 0]]
    neg = embed_isometry(ctx, [[K9.neg(1)]])
    assert neg == [[2, 0], [0, 2]]
    q = QuadraticForm(K9, [[1]])
    composed = compose_quadratic(q, ctx.functional(1), ctx)
    assert is_isometry(neg, composed)


# ---------------------------------------------------------------------------
# structural identities
# ---------------------------------------------------------------------------

def _random_upper(K, dim, rng):
    return [[rng.randrange(K.order) if j >= i else 0 for j in range(dim)] for i in range(dim)]


@pytest.mark.parametrize("p,n,m,A", [(3, 2, 1, 1), (3, 2, 1, 2), (2, 2, 1, 1), (2, 2, 1, 2)])
def test_polar_commutes_with_composition(p, n, m, A):
    K = canonical_field(p, n)
    ctx = RestrictionContext(K, m, A)
    rng = random.Random(11)
    for alpha in K.elements():
        q = QuadraticForm(K, _random_upper(K, A, rng))
        left = polar_form(compose_quadratic(q, ctx.functional(alpha), ctx))
        right = compose_sesquilinear(polar_form(q), ctx.functional(alpha), ctx)
        assert left.gram == right.gram and left.sigma_power == right.sigma_power


@pytest.mark.parametrize("p,n,m,A,sig", [(3, 2, 1, 2, 0), (3, 2, 1, 2, 1), (2, 2, 1, 2, 1),
                                         (3, 4, 2, 1, 2)])
def test_pointwise_consistency_full_enumeration(p, n, m, A, sig):
    K = canonical_field(p, n)
    ctx = RestrictionContext(K, m, A)
    rng = random.Random(5)
    gram = [[rng.randrange(K.order) for _ in range(A)] for _ in range(A)]
    beta = SesquilinearForm(K, gram, sig)
    alpha = rng.randrange(1, K.order)
    L = ctx.functional(alpha)
    comp = compose_sesquilinear(beta, L, ctx)
    vectors = list(itertools.product(range(K.order), repeat=A))
    for u in vectors:
        for v in vectors:
            expected = ctx.drop_scalar(L(beta.evaluate(u, v)))
            assert comp.evaluate(restrict_vector(ctx, u), restrict_vector(ctx, v)) == expected


@pytest.mark.parametrize("p,n,m,A", [(3, 2, 1, 1), (3, 2, 1, 2), (2, 2, 1, 2)])
def test_pointwise_quadratic_consistency(p, n, m, A):
    K = canonical_field(p, n)
    ctx = RestrictionContext(K, m, A)
    rng = random.Random(9)
    q = QuadraticForm(K, _random_upper(K, A, rng))
    for alpha in K.elements():
        L = ctx.functional(alpha)
        comp = compose_quadratic(q, L, ctx)
        for v in itertools.product(range(K.order), repeat=A):
            assert comp.evaluate(restrict_vector(ctx, v)) == ctx.drop_scalar(L(q.evaluate(v)))


@pytest.mark.parametrize("p,n,m,A", [(3, 2, 1, 1), (3, 2, 1, 2), (2, 2, 1, 2), (2, 3, 1, 2)])
def test_sesquilinear_degeneracy_iff_zero_functional(p, n, m, A):
    K = canonical_field(p, n)
    ctx = RestrictionContext(K, m, A)
    gram = linalg.identity(A)
    sig = K.degree // 2 if K.degree % 2 == 0 else 0
    beta = SesquilinearForm(K, gram, sig)
    assert not forms.is_degenerate_sesquilinear(beta)
    for alpha in K.elements():
        comp = compose_sesquilinear(beta, ctx.functional(alpha), ctx)
        assert forms.is_degenerate_sesquilinear(comp) == (alpha == 0)


def test_embed_is_multiplicative_and_injective():
    ctx = RestrictionContext(K9, 1, 2)
    rng = random.Random(23)
    mats = [linalg.random_invertible(K9, 2, rng) for _ in range(12)]
    images = set()
    for s in mats:
        images.add(tuple(map(tuple, embed_isometry(ctx, s))))
        for t in mats:
            st_embed = embed_isometry(ctx, linalg.matmul(K9, s, t))
            assert st_embed == linalg.matmul(
                ctx.F, embed_isometry(ctx, s), embed_isometry(ctx, t)
            )
    assert len(images) == len(mats)


def test_embedded_base_isometries_preserve_composed_forms():
    ctx = RestrictionContext(K9, 1, 2)
    q = forms.hyperbolic_standard(K9, 1)
    swap = [[0, 1], [1, 0]]
    assert is_isometry(swap, q)
    for alpha in K9.units():
        composed = compose_quadratic(q, ctx.functional(alpha), ctx)
        assert is_isometry(embed_isometry(ctx, swap), composed)


def test_composed_record_provenance():
    ctx = ctx9()
    q = QuadraticForm(K9, [[1]])
    comp = compose_quadratic(q, ctx.functional(I9), ctx)
    rec = composed_form_record(comp, ctx, I9)
    assert rec["provenance"]["alpha"] == [0, 1]
    assert rec["provenance"]["tower"]["m"] == 1
    assert rec["form"]["kind"] == "quadratic"


def test_context_validation():
    with pytest.raises(ValueError):
        RestrictionContext(K9, 3, 1)
    with pytest.raises(ValueError):
        RestrictionContext(K9, 1, 0)
    ctx = ctx9(1)
    beta4 = SesquilinearForm(K4, [[1]], 1)
    with pytest.raises(ValueError):
        compose_sesquilinear(beta4, ctx.functional(1), ctx)
