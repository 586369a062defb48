"""Closed-form prediction tables for composed forms.

Given only the descriptor of a composition (base form class, tower sizes,
alpha, and for odd orthogonal dimension the germ coefficient gamma), these
functions return the expected degeneracy, type and isometry class of the
composed form together with the induced classical-group embedding, without
ever enumerating vectors.  The exhaustive machinery in `forms` acts as the
independent check; `sweep.run_cell` compares the two.

One deliberate qualifier: in characteristic 2 with odd K-dimension the
composed quadratic form degenerates only for a proper subfield (w > 1).
For w = 1 the functional is x -> alpha*x, so the composed form is a nonzero
scalar multiple of the base and inherits its non-degeneracy; the sweeps
confirm this boundary case.

The germ rule for odd-dimensional orthogonal bases over GF(q^w), w even,
uses the relative norm to the half-way field GF(q^(w/2)), i.e. the exponent
q^(w/2) + 1.  For w = 2 this is the familiar q + 1; for larger even w the
literal exponent q + 1 does not even land in the half-way field for most
inputs, and the oracle sweep at (q, w) = (3, 4) confirms the norm reading
(see README).
"""

from __future__ import annotations

import dataclasses
import enum
import math
from typing import Optional

from .forms import FormType, OrthogonalClass
from .gf import FiniteField, SquareClass


class BaseKind(enum.Enum):
    O_PLUS = "O+"
    O_MINUS = "O-"
    O_ODD = "O"
    SYMMETRIC = "symmetric"
    HERMITIAN = "hermitian"
    ALTERNATING = "alternating"
    SYMMETRIC_NOT_ALTERNATING = "symmetric-not-alternating"


QUADRATIC_KINDS = {BaseKind.O_PLUS, BaseKind.O_MINUS, BaseKind.O_ODD}
SESQUILINEAR_KINDS = {
    BaseKind.HERMITIAN,
    BaseKind.ALTERNATING,
    BaseKind.SYMMETRIC_NOT_ALTERNATING,
    BaseKind.SYMMETRIC,
}


class LSigmaRelation(enum.Enum):
    COMMUTES = "commutes"      # L o sigma = sigma o L (the w-odd condition)
    EQUAL = "equal"            # L o sigma = L
    NEGATED = "negated"        # L o sigma = -L
    NEITHER = "neither"


@dataclasses.dataclass(frozen=True)
class CompositionDescriptor:
    """Everything the tables need to know about one composition cell."""

    K: FiniteField
    m: int
    A: int
    base: BaseKind
    alpha: int
    gamma: Optional[int] = None
    sigma_power: Optional[int] = None

    def __post_init__(self):
        self.K.check_subfield(self.m)
        self.K.check_element(self.alpha)
        if self.A < 1:
            raise ValueError("K-dimension must be >= 1")
        if self.base in (BaseKind.O_PLUS, BaseKind.O_MINUS) and self.A % 2:
            raise ValueError("plus/minus type bases have even dimension")
        if self.base is BaseKind.O_ODD:
            if self.A % 2 == 0:
                raise ValueError("parabolic bases have odd dimension")
            if self.gamma is not None and self.gamma == 0:
                raise ValueError("germ coefficient must be nonzero")
        if self.base is BaseKind.HERMITIAN:
            k = self.effective_sigma
            if self.K.degree % 2 or k != self.K.degree // 2:
                raise ValueError("hermitian bases need an order-2 field automorphism")

    @property
    def q(self) -> int:
        return self.K.p ** self.m

    @property
    def w(self) -> int:
        return self.K.degree // self.m

    @property
    def p(self) -> int:
        return self.K.p

    @property
    def effective_sigma(self) -> int:
        if self.sigma_power is not None:
            return self.sigma_power % self.K.degree
        return self.K.degree // 2 if self.K.degree % 2 == 0 else 0


@dataclasses.dataclass(frozen=True)
class Prediction:
    degenerate: bool
    verdict: str                      # FormType / OrthogonalClass value or "degenerate"
    embedding: Optional[str]
    rules: tuple[str, ...]

    def to_dict(self) -> dict:
        return {
            "degenerate": self.degenerate,
            "type": self.verdict,
            "embedding": self.embedding if self.embedding else "-",
            "conditions_fired": list(self.rules),
        }


def _emb(base_group: str, d: CompositionDescriptor, target_group: str) -> str:
    return f"{base_group}({d.A},{d.q ** d.w}) <= {target_group}({d.A * d.w},{d.q})"


DEGENERATE = "degenerate"


# ---------------------------------------------------------------------------
# Degeneracy
# ---------------------------------------------------------------------------

def predict_degeneracy(d: CompositionDescriptor) -> bool:
    """Non-degenerate base assumed.  Sesquilinear compositions degenerate only
    for the zero functional; quadratic ones additionally in characteristic 2
    with odd K-dimension over a proper subfield."""
    if d.alpha == 0:
        return True
    if d.base in QUADRATIC_KINDS:
        return d.p == 2 and d.A % 2 == 1 and d.w > 1
    return False


# ---------------------------------------------------------------------------
# L-sigma bookkeeping
# ---------------------------------------------------------------------------

def lsigma_relation(K: FiniteField, m: int, alpha: int, sigma_power: int) -> LSigmaRelation:
    """How the trace functional interacts with an order-2 automorphism.
    For w odd the meaningful question is whether L and sigma commute; for w
    even whether L o sigma is L or -L (coinciding in characteristic 2)."""
    K.check_subfield(m)
    k = sigma_power % K.degree
    if k == 0 or K.degree // math.gcd(K.degree, k) != 2:
        raise ValueError("sigma must have order 2 on the field")
    w = K.tower_degree(m)
    fixed = K.frobenius(alpha, k) == alpha
    if w % 2 == 1:
        return LSigmaRelation.COMMUTES if fixed else LSigmaRelation.NEITHER
    if fixed:
        return LSigmaRelation.EQUAL
    if K.frobenius(alpha, k) == K.neg(alpha):
        return LSigmaRelation.NEGATED
    return LSigmaRelation.NEITHER


# ---------------------------------------------------------------------------
# Type transfer (reflexive class of the composed sesquilinear form)
# ---------------------------------------------------------------------------

def predict_type(d: CompositionDescriptor) -> FormType:
    if d.alpha == 0:
        raise ValueError("type prediction requires a nonzero functional")
    if d.base is BaseKind.ALTERNATING:
        return FormType.ALTERNATING
    if d.base is BaseKind.SYMMETRIC or d.base in QUADRATIC_KINDS:
        return FormType.SYMMETRIC
    if d.base is BaseKind.SYMMETRIC_NOT_ALTERNATING:
        if d.p != 2:
            raise ValueError("symmetric-not-alternating bases live in characteristic 2")
        return FormType.SYMMETRIC_NOT_ALTERNATING
    if d.base is BaseKind.HERMITIAN:
        rel = lsigma_relation(d.K, d.m, d.alpha, d.effective_sigma)
        if d.w % 2 == 1:
            return FormType.HERMITIAN if rel is LSigmaRelation.COMMUTES else FormType.ATYPICAL
        if d.p == 2:
            return FormType.ALTERNATING if rel is LSigmaRelation.EQUAL else FormType.ATYPICAL
        if rel is LSigmaRelation.EQUAL:
            return FormType.SYMMETRIC
        if rel is LSigmaRelation.NEGATED:
            return FormType.ALTERNATING
        return FormType.ATYPICAL
    raise ValueError(f"unsupported base kind {d.base}")


# ---------------------------------------------------------------------------
# Orthogonal class of composed quadratic forms
# ---------------------------------------------------------------------------

def germ_condition_plus(K: FiniteField, m_half: int, x: int) -> bool:
    """Plus-type test for a one-dimensional germ with alpha*gamma = x over the
    half-way field GF(q^(w/2)) = GF(p^m_half): x^(-2) is a non-square member
    of the half field, or the relative norm of x is not -1 modulo squares."""
    inv2 = K.inv(K.mul(x, x))
    if K.is_in_subfield(inv2, m_half) and K.square_class(inv2, m_half) is SquareClass.NONSQUARE:
        return True
    n = K.relative_norm(x, m_half)
    # n == -1 mod squares  <=>  -n is a square in the half field
    return K.square_class(K.neg(n), m_half) is not SquareClass.SQUARE


def predict_orthogonal_class(d: CompositionDescriptor) -> Prediction:
    if d.base not in QUADRATIC_KINDS:
        raise ValueError("orthogonal prediction needs an orthogonal base kind")
    if d.alpha == 0:
        raise ValueError("class prediction requires a nonzero functional")
    if d.base is BaseKind.O_PLUS:
        return Prediction(False, OrthogonalClass.PLUS.value, _emb("O+", d, "O+"), ("quad:O+:always",))
    if d.base is BaseKind.O_MINUS:
        return Prediction(False, OrthogonalClass.MINUS.value, _emb("O-", d, "O-"), ("quad:O-:always",))
    # odd-dimensional base
    if d.p == 2:
        if d.w == 1:
            return Prediction(False, OrthogonalClass.ODD.value, _emb("O", d, "O"), ("quad:O:scaling",))
        return Prediction(True, DEGENERATE, None, ("quad:O:even-char-degenerate",))
    if d.w % 2 == 1:
        return Prediction(False, OrthogonalClass.ODD.value, _emb("O", d, "O"), ("quad:O:w-odd",))
    if d.gamma is None:
        raise ValueError("odd-dimensional bases with even w need the germ coefficient")
    x = d.K.mul(d.alpha, d.gamma)
    m_half = d.m * (d.w // 2)
    if germ_condition_plus(d.K, m_half, x):
        return Prediction(False, OrthogonalClass.PLUS.value, _emb("O", d, "O+"), ("quad:O:germ-plus",))
    return Prediction(False, OrthogonalClass.MINUS.value, _emb("O", d, "O-"), ("quad:O:germ-minus",))


# ---------------------------------------------------------------------------
# Full table for sesquilinear bases
# ---------------------------------------------------------------------------

def predict_sesquilinear(d: CompositionDescriptor) -> Prediction:
    if d.alpha == 0:
        raise ValueError("class prediction requires a nonzero functional")
    if d.base in QUADRATIC_KINDS:
        # symmetric bases in odd characteristic share their isometry class
        # with the quadratic form v -> beta(v,v)/2 and follow its table
        inner = predict_orthogonal_class(d)
        return Prediction(
            inner.degenerate, inner.verdict, inner.embedding,
            ("sesq:symmetric:via-quadratic",) + inner.rules,
        )
    if d.base is BaseKind.SYMMETRIC:
        raise ValueError("describe a symmetric base by its orthogonal class (O+/O-/O)")
    if d.base is BaseKind.ALTERNATING:
        return Prediction(False, FormType.ALTERNATING.value, _emb("Sp", d, "Sp"), ("sesq:alt:always",))
    if d.base is BaseKind.SYMMETRIC_NOT_ALTERNATING:
        if d.p != 2:
            raise ValueError("pseudo-symplectic bases live in characteristic 2")
        return Prediction(
            False, FormType.SYMMETRIC_NOT_ALTERNATING.value, None, ("sesq:pseudo:always",)
        )
    # hermitian base
    rel = lsigma_relation(d.K, d.m, d.alpha, d.effective_sigma)
    if d.w % 2 == 1:
        if rel is LSigmaRelation.COMMUTES:
            return Prediction(
                False, FormType.HERMITIAN.value, _emb("U", d, "U"), ("sesq:herm:w-odd:hermitian",)
            )
        return Prediction(False, FormType.ATYPICAL.value, None, ("sesq:herm:w-odd:atypical",))
    if d.p == 2:
        if rel is LSigmaRelation.EQUAL:
            return Prediction(
                False, FormType.ALTERNATING.value, _emb("U", d, "Sp"),
                ("sesq:herm:even-char:alternating",),
            )
        return Prediction(False, FormType.ATYPICAL.value, None, ("sesq:herm:atypical",))
    if rel is LSigmaRelation.NEGATED:
        return Prediction(
            False, FormType.ALTERNATING.value, _emb("U", d, "Sp"),
            ("sesq:herm:odd-char:alternating",),
        )
    if rel is LSigmaRelation.EQUAL:
        # composed form is symmetric; its orthogonal class depends on the
        # parity of the K-dimension alone
        if d.A % 2 == 0:
            return Prediction(
                False, OrthogonalClass.PLUS.value, _emb("U", d, "O+"), ("sesq:herm:O+:A-even",)
            )
        return Prediction(
            False, OrthogonalClass.MINUS.value, _emb("U", d, "O-"), ("sesq:herm:O-:A-odd",)
        )
    return Prediction(False, FormType.ATYPICAL.value, None, ("sesq:herm:atypical",))


def predict(d: CompositionDescriptor) -> Prediction:
    """Degeneracy first, then the class table for the base family."""
    if predict_degeneracy(d):
        if d.alpha == 0:
            return Prediction(True, DEGENERATE, None, ("degenerate:zero-functional",))
        # only odd-dimensional quadratic bases over proper char-2 towers
        # reach this point; it is the degenerate row of the orthogonal table
        return Prediction(
            True, DEGENERATE, None,
            ("degenerate:even-char-odd-dim", "quad:O:even-char-degenerate"),
        )
    if d.base in QUADRATIC_KINDS:
        return predict_orthogonal_class(d)
    return predict_sesquilinear(d)


ALL_TABLE_RULES = (
    "quad:O+:always",
    "quad:O-:always",
    "quad:O:even-char-degenerate",
    "quad:O:w-odd",
    "quad:O:germ-plus",
    "quad:O:germ-minus",
    "sesq:herm:w-odd:hermitian",
    "sesq:herm:w-odd:atypical",
    "sesq:herm:even-char:alternating",
    "sesq:herm:odd-char:alternating",
    "sesq:herm:atypical",
    "sesq:herm:O+:A-even",
    "sesq:herm:O-:A-odd",
    "sesq:alt:always",
    "sesq:pseudo:always",
)
