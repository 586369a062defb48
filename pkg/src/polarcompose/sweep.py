"""Predictor-versus-oracle sweep machinery.

For every grid cell (tower, dimension, base class, alpha, gamma) this module
builds a canonical representative base form over K, composes it down to F
with the trace functional of alpha, classifies the result exhaustively, and
compares against the closed-form prediction.  Cells over the enumeration
budget are reported as skipped, never silently dropped.

Canonical representatives, fixed for reproducibility:
  O+        orthogonal sum of hyperbolic planes x*y
  O-        hyperbolic planes plus the lexicographically first anisotropic
            binary form over K
  O         hyperbolic planes plus the germ gamma * x^2
  hermitian identity Gram with the order-2 automorphism
  alternating  standard symplectic Gram in 2x2 blocks
  symmetric-not-alternating  identity Gram in characteristic 2
  symmetric  identity Gram in odd characteristic (classified through its
             associated quadratic form)

A cell with resample > 0 replaces the canonical base by a random invertible
change of variables (seeded), which must not change any conclusion.
"""

from __future__ import annotations

import dataclasses
import functools
import itertools
import random
from typing import Optional

from . import forms, linalg
from .compose import RestrictionContext, compose_quadratic, compose_sesquilinear
from .forms import (
    BudgetExceededError,
    FormType,
    OrthogonalClass,
    QuadraticForm,
    SesquilinearForm,
)
from .gf import FiniteField, canonical_field
from .predict import (
    ALL_TABLE_RULES,
    BaseKind,
    CompositionDescriptor,
    Prediction,
    QUADRATIC_KINDS,
    predict,
)

DEGENERATE = "degenerate"


# ---------------------------------------------------------------------------
# Canonical base forms
# ---------------------------------------------------------------------------

@functools.lru_cache(maxsize=32)
def anisotropic_binary(K: FiniteField) -> QuadraticForm:
    """Lexicographically first binary form over K without nonzero zeros."""
    for a, b, c in itertools.product(K.elements(), repeat=3):
        q = QuadraticForm(K, [[a, b], [0, c]])
        if forms.count_singular(q, K.order ** 2) == 0:
            return q
    raise ArithmeticError("no anisotropic binary form found")


def base_quadratic(K: FiniteField, A: int, kind: BaseKind, gamma: int = 1) -> QuadraticForm:
    if kind is BaseKind.O_PLUS:
        if A % 2:
            raise ValueError("plus type needs even dimension")
        return forms.hyperbolic_standard(K, A // 2)
    if kind is BaseKind.O_MINUS:
        if A % 2 or A < 2:
            raise ValueError("minus type needs even dimension >= 2")
        return forms.hyperbolic_standard(K, (A - 2) // 2, anisotropic_binary(K))
    if kind is BaseKind.O_ODD:
        if A % 2 == 0:
            raise ValueError("parabolic type needs odd dimension")
        if gamma == 0:
            raise ValueError("germ coefficient must be nonzero")
        return forms.hyperbolic_standard(K, (A - 1) // 2, QuadraticForm(K, [[gamma]]))
    raise ValueError(f"{kind} is not a quadratic base kind")


def base_sesquilinear(K: FiniteField, A: int, kind: BaseKind) -> SesquilinearForm:
    ident = linalg.identity(A)
    if kind is BaseKind.HERMITIAN:
        if K.degree % 2:
            raise ValueError("hermitian bases need an order-2 automorphism")
        return SesquilinearForm(K, ident, K.degree // 2)
    if kind is BaseKind.ALTERNATING:
        if A % 2:
            raise ValueError("alternating non-degenerate bases need even dimension")
        gram = [[0] * A for _ in range(A)]
        for t in range(A // 2):
            gram[2 * t][2 * t + 1] = 1
            gram[2 * t + 1][2 * t] = K.neg(1)
        return SesquilinearForm(K, gram, 0)
    if kind is BaseKind.SYMMETRIC_NOT_ALTERNATING:
        if K.p != 2:
            raise ValueError("symmetric-not-alternating bases live in characteristic 2")
        return SesquilinearForm(K, ident, 0)
    if kind is BaseKind.SYMMETRIC:
        if K.p == 2:
            raise ValueError("use the symmetric-not-alternating kind in characteristic 2")
        return SesquilinearForm(K, ident, 0)
    raise ValueError(f"{kind} is not a sesquilinear base kind")


@functools.lru_cache(maxsize=256)
def _validated_quadratic_base(K: FiniteField, A: int, kind: BaseKind, gamma: int, budget: int) -> QuadraticForm:
    q = base_quadratic(K, A, kind, gamma)
    observed = forms.orthogonal_class(q, budget)
    if observed.value != kind.value:
        raise forms.OracleInconsistencyError(
            f"canonical {kind.value} base classified as {observed.value}"
        )
    return q


@functools.lru_cache(maxsize=256)
def _validated_sesquilinear_base(K: FiniteField, A: int, kind: BaseKind) -> SesquilinearForm:
    beta = base_sesquilinear(K, A, kind)
    expected = {
        BaseKind.HERMITIAN: FormType.HERMITIAN,
        BaseKind.ALTERNATING: FormType.ALTERNATING,
        BaseKind.SYMMETRIC_NOT_ALTERNATING: FormType.SYMMETRIC_NOT_ALTERNATING,
        BaseKind.SYMMETRIC: FormType.SYMMETRIC,
    }[kind]
    if forms.classify_reflexive(beta) is not expected:
        raise forms.OracleInconsistencyError(f"canonical {kind.value} base misclassified")
    if forms.is_degenerate_sesquilinear(beta):
        raise forms.OracleInconsistencyError(f"canonical {kind.value} base is degenerate")
    return beta


@functools.lru_cache(maxsize=128)
def _symmetric_base_profile(K: FiniteField, A: int, budget: int) -> tuple[BaseKind, Optional[int]]:
    """Orthogonal class (and germ coefficient for odd dimension) of the
    canonical symmetric base, derived once by the oracle."""
    beta = _validated_sesquilinear_base(K, A, BaseKind.SYMMETRIC)
    q = forms.quadratic_from_symmetric(beta)
    cls = forms.orthogonal_class(q, budget)
    kind = {
        OrthogonalClass.PLUS: BaseKind.O_PLUS,
        OrthogonalClass.MINUS: BaseKind.O_MINUS,
        OrthogonalClass.ODD: BaseKind.O_ODD,
    }[cls]
    gamma = None
    if A % 2:
        gamma = forms.decompose_hyperbolic_germ(q, budget).germ_coefficient
    return kind, gamma


# ---------------------------------------------------------------------------
# Cells
# ---------------------------------------------------------------------------

@dataclasses.dataclass(frozen=True)
class CellSpec:
    p: int
    m: int
    w: int
    A: int
    base: BaseKind
    alpha: int
    gamma: Optional[int] = None
    resample: int = 0

    @property
    def q(self) -> int:
        return self.p ** self.m

    def key(self) -> tuple:
        return (self.p, self.m, self.w, self.A, self.base.value,
                self.alpha, self.gamma, self.resample)


@dataclasses.dataclass
class CellResult:
    spec: CellSpec
    predicted: Optional[Prediction]
    observed: Optional[dict]
    match: bool
    skipped: Optional[str] = None

    def to_record(self) -> dict:
        K = canonical_field(self.spec.p, self.spec.m * self.spec.w)
        rec = {
            "q": self.spec.q,
            "w": self.spec.w,
            "A": self.spec.A,
            "base": self.spec.base.value,
            "alpha": list(K.coeffs(self.spec.alpha)),
            "gamma": list(K.coeffs(self.spec.gamma)) if self.spec.gamma is not None else None,
            "resample": self.spec.resample,
            "match": self.match,
            "skipped": self.skipped,
        }
        if self.predicted is not None:
            rec["predicted"] = self.predicted.to_dict()
        if self.observed is not None:
            rec["observed"] = {
                k: (v.value if hasattr(v, "value") else v) for k, v in self.observed.items()
            }
        return rec


@functools.lru_cache(maxsize=64)
def _context(K: FiniteField, m: int, A: int) -> RestrictionContext:
    return RestrictionContext(K, m, A)


def _observe_quadratic(composed: QuadraticForm, budget: int) -> dict:
    report = forms.orthogonal_report(composed, budget)
    verdict = DEGENERATE if report["degenerate"] else report["class"].value
    return {
        "degenerate": report["degenerate"],
        "verdict": verdict,
        "witt_index": report["witt_index"],
        "singular_count": report["singular_count"],
        "radical_dim": report["radical_dim"],
    }


def _observe_sesquilinear(composed: SesquilinearForm, budget: int) -> dict:
    rdim = forms.radical_dim(composed)
    if rdim > 0:
        return {"degenerate": True, "verdict": DEGENERATE, "radical_dim": rdim}
    ftype = forms.classify_reflexive(composed)
    out = {"degenerate": False, "verdict": ftype.value, "radical_dim": 0,
           "form_type": ftype.value}
    if ftype is FormType.SYMMETRIC and composed.field.p != 2:
        report = forms.orthogonal_report(forms.quadratic_from_symmetric(composed), budget)
        out["verdict"] = report["class"].value
        out["witt_index"] = report["witt_index"]
        out["singular_count"] = report["singular_count"]
    return out


def run_cell(spec: CellSpec, budget: int = forms.DEFAULT_BUDGET,
             rng: Optional[random.Random] = None) -> CellResult:
    K = canonical_field(spec.p, spec.m * spec.w)
    try:
        ctx = _context(K, spec.m, spec.A)
        L = ctx.functional(spec.alpha)
        if spec.base in QUADRATIC_KINDS:
            gamma = spec.gamma if spec.gamma is not None else 1
            base = _validated_quadratic_base(K, spec.A, spec.base, gamma, budget)
            if spec.resample:
                if rng is None:
                    raise ValueError("resampled cells need an rng")
                base = forms.quadratic_congruence(base, linalg.random_invertible(K, spec.A, rng))
            desc = CompositionDescriptor(K, spec.m, spec.A, spec.base, spec.alpha,
                                         gamma=gamma if spec.base is BaseKind.O_ODD else None)
            composed = compose_quadratic(base, L, ctx)
            observed = _observe_quadratic(composed, budget)
        else:
            if spec.base is BaseKind.SYMMETRIC:
                kind, gamma = _symmetric_base_profile(K, spec.A, budget)
                desc = CompositionDescriptor(K, spec.m, spec.A, kind, spec.alpha, gamma=gamma)
            else:
                desc = CompositionDescriptor(K, spec.m, spec.A, spec.base, spec.alpha)
            base = _validated_sesquilinear_base(K, spec.A, spec.base)
            if spec.resample:
                if rng is None:
                    raise ValueError("resampled cells need an rng")
                base = forms.sesquilinear_congruence(base, linalg.random_invertible(K, spec.A, rng))
            composed = compose_sesquilinear(base, L, ctx)
            observed = _observe_sesquilinear(composed, budget)
    except BudgetExceededError as exc:
        return CellResult(spec, None, None, match=False, skipped=str(exc))
    predicted = predict(desc)
    match = predicted.degenerate == observed["degenerate"] and (
        predicted.degenerate or predicted.verdict == observed["verdict"]
    )
    return CellResult(spec, predicted, observed, match)


# ---------------------------------------------------------------------------
# Grids
# ---------------------------------------------------------------------------

@dataclasses.dataclass
class GridSpec:
    towers: list[tuple[int, int, int]]           # (p, m, w)
    dims: list[int]
    bases: Optional[list[BaseKind]] = None       # None = every kind that fits
    alphas: str | list = "all"                   # "all", "nonzero", or coeff lists
    gammas: str | list = "all"
    budget: int = 10 ** 4
    resample: int = 0
    seed: int = 0
    prune_over_budget: bool = False              # drop cells the budget cannot cover

    @classmethod
    def from_dict(cls, data: dict) -> "GridSpec":
        towers = []
        for q in data.get("q", []):
            p, m = _factor_prime_power(q)
            for w in data.get("w", [1]):
                towers.append((p, m, w))
        for t in data.get("towers", []):
            towers.append((int(t["p"]), int(t["m"]), int(t["w"])))
        bases = data.get("bases")
        if bases is not None:
            bases = [BaseKind(b) for b in bases]
        return cls(
            towers=towers,
            dims=[int(a) for a in data.get("A", [1])],
            bases=bases,
            alphas=data.get("alphas", "all"),
            gammas=data.get("gammas", "all"),
            budget=int(data.get("budget", 10 ** 4)),
            resample=int(data.get("resample", 0)),
            seed=int(data.get("seed", 0)),
        )


def _factor_prime_power(q: int) -> tuple[int, int]:
    for p in range(2, q + 1):
        if q % p == 0:
            m = 0
            while q % p == 0:
                q //= p
                m += 1
            if q != 1:
                raise ValueError("grid sizes must be prime powers")
            return p, m
    raise ValueError("grid sizes must be prime powers")


def _fitting_bases(p: int, N: int, A: int) -> list[BaseKind]:
    kinds: list[BaseKind] = []
    if A % 2 == 0:
        kinds += [BaseKind.O_PLUS, BaseKind.O_MINUS, BaseKind.ALTERNATING]
    else:
        kinds.append(BaseKind.O_ODD)
    if N % 2 == 0:
        kinds.append(BaseKind.HERMITIAN)
    kinds.append(
        BaseKind.SYMMETRIC_NOT_ALTERNATING if p == 2 else BaseKind.SYMMETRIC
    )
    return kinds


def grid_cells(grid: GridSpec) -> list[CellSpec]:
    cells: list[CellSpec] = []
    for (p, m, w) in grid.towers:
        K = canonical_field(p, m * w)
        if grid.prune_over_budget and K.order > grid.budget:
            continue
        if grid.alphas == "all":
            alphas = list(K.elements())
        elif grid.alphas == "nonzero":
            alphas = list(K.units())
        else:
            alphas = [K.from_coeffs(c) for c in grid.alphas]
        if grid.gammas == "all":
            gammas = list(K.units())
        else:
            gammas = [K.from_coeffs(c) for c in grid.gammas]
        for A in grid.dims:
            if grid.prune_over_budget and (p ** (m * w)) ** A > grid.budget:
                continue
            kinds = grid.bases if grid.bases is not None else _fitting_bases(p, m * w, A)
            for kind in kinds:
                if kind in (BaseKind.O_PLUS, BaseKind.O_MINUS, BaseKind.ALTERNATING) and A % 2:
                    continue
                if kind is BaseKind.O_ODD and A % 2 == 0:
                    continue
                if kind is BaseKind.HERMITIAN and (m * w) % 2:
                    continue
                if kind is BaseKind.SYMMETRIC_NOT_ALTERNATING and p != 2:
                    continue
                if kind is BaseKind.SYMMETRIC and p == 2:
                    continue
                cell_gammas = gammas if kind is BaseKind.O_ODD else [None]
                for alpha in alphas:
                    for gamma in cell_gammas:
                        for rs in range(grid.resample + 1):
                            cells.append(CellSpec(p, m, w, A, kind, alpha, gamma, rs))
    return cells


@dataclasses.dataclass
class GridReport:
    results: list[CellResult]
    summary: dict
    coverage: dict

    def to_dict(self) -> dict:
        return {"summary": self.summary, "coverage": self.coverage}


def run_grid(grid: GridSpec) -> GridReport:
    rng = random.Random(grid.seed)
    results = [run_cell(cell, grid.budget, rng) for cell in grid_cells(grid)]
    fired: set[str] = set()
    for r in results:
        if r.predicted is not None:
            fired.update(r.predicted.rules)
    matches = sum(1 for r in results if r.skipped is None and r.match)
    mismatches = [r for r in results if r.skipped is None and not r.match]
    skipped = [r for r in results if r.skipped is not None]
    missing = [rule for rule in ALL_TABLE_RULES if rule not in fired]
    summary = {
        "cells": len(results),
        "matches": matches,
        "mismatches": len(mismatches),
        "skipped": len(skipped),
    }
    coverage = {"fired": sorted(fired), "missing_table_rules": missing}
    return GridReport(results, summary, coverage)


def default_grid() -> GridSpec:
    """Desk-scale grid covering every row of both prediction tables; sized so
    that no generated cell exceeds the budget."""
    towers = []
    for p, m in ((2, 1), (3, 1), (2, 2)):
        for w in (1, 2, 3):
            towers.append((p, m, w))
    return GridSpec(towers=towers, dims=[1, 2, 3], budget=10 ** 4, resample=1, seed=0,
                    prune_over_budget=True)


# ---------------------------------------------------------------------------
# Isometry sampling (for the embedding checks)
# ---------------------------------------------------------------------------

def sample_isometries(form, count: int, rng: random.Random,
                      budget: int = forms.DEFAULT_BUDGET, max_tries: int = 500_000) -> list:
    """Random invertible matrices filtered down to isometries of the form."""
    found = []
    field = form.field
    n = form.dim
    tries = 0
    while len(found) < count and tries < max_tries:
        tries += 1
        t = linalg.random_matrix(field, n, rng)
        if not linalg.is_invertible(field, t):
            continue
        if forms.is_isometry(t, form, budget):
            found.append(t)
    if len(found) < count:
        raise RuntimeError(f"found only {len(found)} isometries in {max_tries} tries")
    return found
