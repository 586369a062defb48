"""Report rendering: line-delimited records, summaries, and figures.

The verify command writes one JSON record per grid cell plus a summary
block; when an output directory is given it also renders one heatmap per
(tower, dimension, base kind) group showing the observed class across the
(alpha, gamma) plane with mismatching cells crossed out.
"""

from __future__ import annotations

import json
import os
from collections import defaultdict
from typing import Iterable

_VERDICT_ORDER = [
    "degenerate",
    "O+",
    "O-",
    "O",
    "alternating",
    "symmetric",
    "symmetric-not-alternating",
    "hermitian",
    "atypical",
]
_SKIPPED = len(_VERDICT_ORDER)


def write_jsonl(path: str, records: Iterable[dict]) -> None:
    with open(path, "w") as fh:
        for rec in records:
            fh.write(json.dumps(rec, sort_keys=True) + "\n")


def write_json(path: str, payload: dict) -> None:
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def summary_lines(summary: dict, coverage: dict) -> list[str]:
    lines = [
        "summary: cells={cells} matches={matches} mismatches={mismatches} skipped={skipped}".format(
            **summary
        )
    ]
    missing = coverage.get("missing_table_rules", [])
    if missing:
        lines.append("table rows never fired: " + ", ".join(missing))
    else:
        lines.append("table row coverage: complete")
    return lines


def _safe_base(base: str) -> str:
    return base.replace("O+", "Oplus").replace("O-", "Ominus").replace(" ", "_")


def render_verify_figures(records: list[dict], outdir: str) -> list[str]:
    """One PNG per (q, w, A, base) group; colour = observed verdict,
    crosses mark mismatches, grey cells were skipped for budget."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    from matplotlib import colors

    groups: dict[tuple, list[dict]] = defaultdict(list)
    for rec in records:
        if rec.get("resample", 0):
            continue
        groups[(rec["q"], rec["w"], rec["A"], rec["base"])].append(rec)

    paths = []
    for (q, w, a_dim, base), recs in sorted(groups.items()):
        alphas = sorted({tuple(r["alpha"]) for r in recs})
        gammas = sorted({tuple(r["gamma"]) if r["gamma"] is not None else () for r in recs})
        grid = [[_SKIPPED] * len(alphas) for _ in gammas]
        marks = []
        for r in recs:
            col = alphas.index(tuple(r["alpha"]))
            row = gammas.index(tuple(r["gamma"]) if r["gamma"] is not None else ())
            if r["skipped"]:
                code = _SKIPPED
            else:
                code = _VERDICT_ORDER.index(r["observed"]["verdict"])
            grid[row][col] = code
            if not r["match"] and not r["skipped"]:
                marks.append((col, row))
        fig, ax = plt.subplots(figsize=(max(4, len(alphas) * 0.28), max(2.4, len(gammas) * 0.28)))
        cmap = colors.ListedColormap(
            ["#bbbbbb", "#1f77b4", "#d62728", "#2ca02c", "#9467bd",
             "#8c564b", "#e377c2", "#17becf", "#ff7f0e", "#f0f0f0"]
        )
        ax.imshow(grid, cmap=cmap, vmin=0, vmax=_SKIPPED, aspect="auto", interpolation="nearest")
        for col, row in marks:
            ax.plot(col, row, marker="x", color="black", markersize=10, markeredgewidth=2)
        ax.set_title(f"base {base}, GF({q ** w}) -> GF({q}), A={a_dim}")
        ax.set_xlabel("alpha (enumeration order)")
        ax.set_ylabel("gamma" if gammas != [()] else "")
        ax.set_xticks([])
        ax.set_yticks([])
        handles = [
            plt.Line2D([0], [0], marker="s", linestyle="", color=cmap(i), label=v)
            for i, v in enumerate(_VERDICT_ORDER)
        ]
        ax.legend(handles=handles, loc="upper left", bbox_to_anchor=(1.02, 1.0), fontsize=7)
        name = f"verify_q{q}_w{w}_A{a_dim}_{_safe_base(base)}.png"
        path = os.path.join(outdir, name)
        fig.savefig(path, dpi=110, bbox_inches="tight")
        plt.close(fig)
        paths.append(path)
    return paths
