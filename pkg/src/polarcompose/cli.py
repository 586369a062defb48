"""Command-line surface.

Subcommands:
  classify  compose a form spec down the tower and classify it exhaustively
  predict   evaluate the closed-form tables for a descriptor
  verify    run a predictor-versus-oracle grid and report every cell
  embed     push a base isometry down to the composed space and check it

Exit codes: 0 all checks pass, 1 mathematical mismatch, 2 invalid input,
3 enumeration budget exceeded.  POLARCOMPOSE_BUDGET overrides the default
budget.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys

from . import forms, report, sweep
from .compose import (
    RestrictionContext,
    composed_form_record,
    compose_quadratic,
    compose_sesquilinear,
    embed_isometry,
)
from .forms import BudgetExceededError, FormType, QuadraticForm
from .gf import FiniteField, field_create
from .predict import BaseKind, CompositionDescriptor, predict
from .sweep import GridSpec, default_grid, run_grid

DEFAULT_BUDGET = int(os.environ.get("POLARCOMPOSE_BUDGET", forms.DEFAULT_BUDGET))


class InputError(ValueError):
    pass


def _load_json(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def _field_from_spec(data: dict) -> FiniteField:
    try:
        return field_create(int(data["p"]), int(data["N"]), data.get("poly"))
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"bad field spec: {exc}") from exc


def _parse_coeffs(text: str) -> list[int]:
    try:
        return [int(c) for c in text.split(",")]
    except ValueError as exc:
        raise InputError(f"bad element {text!r}: expected comma-separated coefficients") from exc


def _load_job(path: str):
    data = _load_json(path)
    try:
        K = _field_from_spec(data["field"])
        m = int(data["subfield_m"])
        alpha = K.from_coeffs(data["alpha"])
        form = forms.form_from_dict(K, data["form"])
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"bad job spec: {exc}") from exc
    ctx = RestrictionContext(K, m, form.dim)
    return K, m, alpha, form, ctx


# ---------------------------------------------------------------------------
# classify
# ---------------------------------------------------------------------------

def _classification_record(composed, budget: int) -> dict:
    if isinstance(composed, QuadraticForm):
        rep = forms.orthogonal_report(composed, budget)
        rec = {
            "kind": "quadratic",
            "degenerate": rep["degenerate"],
            "orthogonal_class": rep["class"].value,
            "witt_index": rep["witt_index"],
            "singular_count": rep["singular_count"],
            "radical_dim": rep["radical_dim"],
        }
        if not rep["degenerate"] and composed.field.p != 2 and composed.dim % 2 == 0:
            rec["discriminant_class"] = forms.discriminant_class(composed).value
        return rec
    rdim = forms.radical_dim(composed)
    rec = {
        "kind": "sesquilinear",
        "degenerate": rdim > 0,
        "type": forms.classify_reflexive(composed).value,
        "radical_dim": rdim,
    }
    if rec["type"] == FormType.SYMMETRIC.value and not rec["degenerate"] and composed.field.p != 2:
        rep = forms.orthogonal_report(forms.quadratic_from_symmetric(composed), budget)
        rec["orthogonal_class"] = rep["class"].value
        rec["witt_index"] = rep["witt_index"]
        rec["singular_count"] = rep["singular_count"]
    return rec


def cmd_classify(args) -> int:
    K, m, alpha, form, ctx = _load_job(args.spec)
    L = ctx.functional(alpha)
    if isinstance(form, QuadraticForm):
        composed = compose_quadratic(form, L, ctx)
    else:
        composed = compose_sesquilinear(form, L, ctx)
    out = composed_form_record(composed, ctx, alpha)
    out["classification"] = _classification_record(composed, args.budget)
    text = json.dumps(out, indent=2, sort_keys=True)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    print(text)
    return 0


# ---------------------------------------------------------------------------
# predict
# ---------------------------------------------------------------------------

def cmd_predict(args) -> int:
    try:
        base = BaseKind(args.base)
    except ValueError as exc:
        raise InputError(f"unknown base kind {args.base!r}") from exc
    p, m = sweep._factor_prime_power(args.q)
    K = field_create(p, m * args.w)
    if args.alpha in ("all", "nonzero"):
        alphas = list(K.units()) if args.alpha == "nonzero" else list(K.elements())
    else:
        alphas = [K.from_coeffs(_parse_coeffs(args.alpha))]
    gamma = K.from_coeffs(_parse_coeffs(args.gamma)) if args.gamma else None
    for alpha in alphas:
        try:
            desc = CompositionDescriptor(K, m, args.A, base, alpha, gamma=gamma)
            pred = predict(desc)
        except ValueError as exc:
            raise InputError(str(exc)) from exc
        rec = {"alpha": list(K.coeffs(alpha)), **pred.to_dict()}
        print(json.dumps(rec, sort_keys=True))
    return 0


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

def cmd_verify(args) -> int:
    if args.grid:
        grid = GridSpec.from_dict(_load_json(args.grid))
    else:
        grid = default_grid()
    if args.budget is not None:
        grid.budget = args.budget
    if args.seed is not None:
        grid.seed = args.seed
    if args.resample is not None:
        grid.resample = args.resample
    result = run_grid(grid)
    records = [r.to_record() for r in result.results]
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        report.write_jsonl(os.path.join(args.out, "records.jsonl"), records)
        report.write_json(os.path.join(args.out, "summary.json"), result.to_dict())
        if not args.no_figures:
            report.render_verify_figures(records, args.out)
    else:
        for rec in records:
            print(json.dumps(rec, sort_keys=True))
    for line in report.summary_lines(result.summary, result.coverage):
        print(line)
    for r in result.results:
        if r.skipped is None and not r.match:
            print(f"MISMATCH {r.spec.key()}: predicted={r.predicted.to_dict()} observed={r.observed}")
    if result.summary["mismatches"]:
        return 1
    if result.summary["skipped"]:
        return 3
    return 0


# ---------------------------------------------------------------------------
# embed
# ---------------------------------------------------------------------------

def _matrix_from_file(K: FiniteField, path: str) -> list[list[int]]:
    data = _load_json(path)
    try:
        return [[K.from_coeffs(entry) for entry in row] for row in data["matrix"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"bad matrix file: {exc}") from exc


def _embed_one(form, t, ctx, L, budget: int) -> dict:
    if not forms.is_isometry(t, form, budget):
        raise _NotAnIsometry(t)
    if isinstance(form, QuadraticForm):
        composed = compose_quadratic(form, L, ctx)
    else:
        composed = compose_sesquilinear(form, L, ctx)
    embedded = embed_isometry(ctx, t)
    ok = forms.is_isometry(embedded, composed, budget)
    K = ctx.K
    return {
        "matrix": [[list(K.coeffs(x)) for x in row] for row in t],
        "embedded_matrix": [[list(ctx.F.coeffs(x)) for x in row] for row in embedded],
        "composed_isometry": ok,
    }


class _NotAnIsometry(Exception):
    def __init__(self, t):
        super().__init__("matrix is not an isometry of the base form")
        self.matrix = t


def cmd_embed(args) -> int:
    K, m, alpha, form, ctx = _load_job(args.spec)
    L = ctx.functional(alpha)
    if args.matrix:
        mats = [_matrix_from_file(K, args.matrix)]
    elif args.sample:
        rng = random.Random(args.seed)
        mats = sweep.sample_isometries(form, args.sample, rng, args.budget)
    else:
        raise InputError("embed needs --matrix or --sample")
    failures = 0
    for t in mats:
        try:
            rec = _embed_one(form, t, ctx, L, args.budget)
        except _NotAnIsometry:
            print(json.dumps({"matrix": [[list(K.coeffs(x)) for x in row] for row in t],
                              "base_isometry": False}, sort_keys=True))
            failures += 1
            continue
        print(json.dumps(rec, sort_keys=True))
        if not rec["composed_isometry"]:
            failures += 1
    return 1 if failures else 0


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="polarcompose", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    c = sub.add_parser("classify", help="compose and classify a form spec")
    c.add_argument("--spec", required=True)
    c.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    c.add_argument("--out")
    c.set_defaults(func=cmd_classify)

    p = sub.add_parser("predict", help="closed-form prediction for a descriptor")
    p.add_argument("--base", required=True,
                   help="O+, O-, O, hermitian, alternating, symmetric-not-alternating")
    p.add_argument("--q", type=int, required=True, help="subfield size (prime power)")
    p.add_argument("--w", type=int, required=True, help="extension degree")
    p.add_argument("--A", type=int, required=True, help="dimension over the big field")
    p.add_argument("--alpha", required=True,
                   help="comma-separated GF(p) coefficients, or 'all' / 'nonzero'")
    p.add_argument("--gamma", help="germ coefficient for odd-dimensional orthogonal bases")
    p.set_defaults(func=cmd_predict)

    v = sub.add_parser("verify", help="predictor-versus-oracle sweep")
    v.add_argument("--grid", help="JSON grid file; defaults to the built-in grid")
    v.add_argument("--seed", type=int, default=None)
    v.add_argument("--budget", type=int, default=None)
    v.add_argument("--resample", type=int, default=None,
                   help="extra random-congruence representatives per cell")
    v.add_argument("--out", help="directory for records.jsonl, summary.json and figures")
    v.add_argument("--no-figures", action="store_true")
    v.set_defaults(func=cmd_verify)

    e = sub.add_parser("embed", help="embed a base isometry into the composed space")
    e.add_argument("--spec", required=True)
    e.add_argument("--matrix", help="JSON file with the isometry over the big field")
    e.add_argument("--sample", type=int, help="sample this many random base isometries")
    e.add_argument("--seed", type=int, default=0)
    e.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    e.set_defaults(func=cmd_embed)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except BudgetExceededError as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
