"""Report emission: delimited outputs with fixed column contracts, structured
summaries, and the matplotlib figures rendered alongside them.

All writers are deterministic byte-for-byte given identical inputs: fixed key
order, ``repr``-style float formatting, Agg-rendered PNGs with pinned
metadata.
"""

from __future__ import annotations

import csv
import hashlib
import json
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .analytics import ConvergenceReport, CorrMatrix
from .estimation import LambdaEstimate
from .rating import PowerPlan, RatingTable, RunsTestResult

_PNG_META = {"Software": "qrelab"}

ESTIMATE_COLUMNS = [
    "agent",
    "game_kind",
    "n",
    "lambda_mle",
    "fisher_se",
    "ci_lo",
    "ci_hi",
    "boundary",
    "unidentified",
    "near_boundary",
    "warning",
    "nll",
    "post_mean",
    "post_sd",
    "hdi_lo",
    "hdi_hi",
]

RATING_COLUMNS = ["agent", "axis", "rating", "n_games", "boot_sd", "ci_lo", "ci_hi"]

CONVERGENCE_COLUMNS = [
    "block",
    "bluff_rate",
    "bluff_se",
    "gap_beta",
    "coop_rate",
    "coop_se",
    "gap_c",
    "convergence_pct",
]

CORRELATION_COLUMNS = ["axis_x", "axis_y", "defined", "r", "p", "perm_p", "loo_min", "loo_max"]

RUNS_COLUMNS = ["agent_a", "agent_b", "n", "runs", "z", "p", "degenerate"]


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _write_csv(path: Path, columns: list[str], rows: list[dict]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_cell(row.get(c)) for c in columns])


def _write_jsonl(path: Path, rows: list[dict]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for row in rows:
            fh.write(json.dumps(row, ensure_ascii=False) + "\n")


def sha256_file(path: Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            digest.update(chunk)
    return digest.hexdigest()


# ---------------------------------------------------------------------------
# Lambda estimates
# ---------------------------------------------------------------------------


def estimate_rows(estimates: list[LambdaEstimate]) -> list[dict]:
    rows = []
    for e in estimates:
        rows.append(
            {
                "agent": e.agent,
                "game_kind": e.game_kind,
                "n": e.n,
                "lambda_mle": e.lambda_mle,
                "fisher_se": e.fisher_se,
                "ci_lo": e.ci_lo,
                "ci_hi": e.ci_hi,
                "boundary": e.boundary,
                "unidentified": e.unidentified,
                "near_boundary": e.near_boundary,
                "warning": e.warning,
                "nll": e.nll,
                "post_mean": e.post_mean,
                "post_sd": e.post_sd,
                "hdi_lo": e.hdi_lo,
                "hdi_hi": e.hdi_hi,
            }
        )
    return rows


def write_estimates(estimates: list[LambdaEstimate], out_dir: Path, stem: str = "estimates"):
    rows = estimate_rows(estimates)
    _write_csv(out_dir / f"{stem}.csv", ESTIMATE_COLUMNS, rows)
    _write_jsonl(out_dir / f"{stem}.jsonl", rows)
    return [out_dir / f"{stem}.csv", out_dir / f"{stem}.jsonl"]


def fig_estimates(estimates: list[LambdaEstimate], path: Path) -> None:
    """MLE vs posterior-mean scatter with HDI whiskers, one marker per row."""
    fig, ax = plt.subplots(figsize=(5.0, 4.0))
    xs = [e.lambda_mle for e in estimates if e.post_mean is not None]
    ys = [e.post_mean for e in estimates if e.post_mean is not None]
    errs = [
        (e.post_mean - e.hdi_lo, e.hdi_hi - e.post_mean)
        for e in estimates
        if e.post_mean is not None
    ]
    if xs:
        lo = [e[0] for e in errs]
        hi = [e[1] for e in errs]
        ax.errorbar(xs, ys, yerr=[lo, hi], fmt="o", capsize=3, color="#32618d")
        top = max(max(xs), max(ys)) * 1.1 + 0.05
        ax.plot([0, top], [0, top], ls="--", lw=0.8, color="gray")
    ax.set_xlabel("lambda (MLE)")
    ax.set_ylabel("lambda (posterior mean, 95% HDI)")
    ax.set_title("Rationality estimates: MLE vs Bayesian")
    fig.tight_layout()
    fig.savefig(path, dpi=150, metadata=_PNG_META)
    plt.close(fig)


# ---------------------------------------------------------------------------
# Ratings
# ---------------------------------------------------------------------------


def rating_rows(tables: list[RatingTable]) -> list[dict]:
    rows = []
    for table in tables:
        for agent in table.agents():
            rows.append(
                {
                    "agent": agent,
                    "axis": table.axis,
                    "rating": table.ratings[agent],
                    "n_games": table.n_games[agent],
                    "boot_sd": table.boot_sd.get(agent),
                    "ci_lo": table.ci_lo.get(agent),
                    "ci_hi": table.ci_hi.get(agent),
                }
            )
    return rows


def write_ratings(tables: list[RatingTable], out_dir: Path, stem: str = "ratings"):
    rows = rating_rows(tables)
    _write_csv(out_dir / f"{stem}.csv", RATING_COLUMNS, rows)
    _write_jsonl(out_dir / f"{stem}.jsonl", rows)
    return [out_dir / f"{stem}.csv", out_dir / f"{stem}.jsonl"]


def fig_ratings(tables: list[RatingTable], path: Path) -> None:
    """Per-axis rating chart with bootstrap CI bars."""
    fig, axes = plt.subplots(
        1, max(len(tables), 1), figsize=(3.2 * max(len(tables), 1), 4.0), sharey=True
    )
    if len(tables) == 1:
        axes = [axes]
    for ax, table in zip(axes, tables):
        agents = table.agents()
        ys = [table.ratings[a] for a in agents]
        lo = [table.ratings[a] - table.ci_lo.get(a, table.ratings[a]) for a in agents]
        hi = [table.ci_hi.get(a, table.ratings[a]) - table.ratings[a] for a in agents]
        xs = range(len(agents))
        ax.errorbar(xs, ys, yerr=[lo, hi], fmt="o", capsize=3, color="#7d3b8a")
        ax.axhline(1500.0, ls="--", lw=0.8, color="gray")
        ax.set_xticks(list(xs))
        ax.set_xticklabels(agents, rotation=45, ha="right", fontsize=7)
        ax.set_title(table.axis)
    axes[0].set_ylabel("rating")
    fig.suptitle("Per-axis ratings (bootstrap 95% CI)")
    fig.tight_layout()
    fig.savefig(path, dpi=150, metadata=_PNG_META)
    plt.close(fig)


# ---------------------------------------------------------------------------
# Convergence
# ---------------------------------------------------------------------------


def convergence_rows(report: ConvergenceReport) -> list[dict]:
    rows = []
    for b in report.blocks:
        rows.append(
            {
                "block": b.block,
                "bluff_rate": b.bluff_rate,
                "bluff_se": b.bluff_se,
                "gap_beta": b.gap_beta,
                "coop_rate": b.coop_rate,
                "coop_se": b.coop_se,
                "gap_c": b.gap_coop,
                "convergence_pct": b.convergence_pct,
            }
        )
    return rows


def write_convergence(report: ConvergenceReport, out_dir: Path, stem: str = "convergence"):
    _write_csv(out_dir / f"{stem}.csv", CONVERGENCE_COLUMNS, convergence_rows(report))
    summary = {
        "block_size": report.block_size,
        "beta_star": report.beta_star,
        "coop_reference": report.coop_reference,
        "coop_reference_note": "behavioral reference, not an equilibrium",
        "random_baseline": report.random_baseline,
        "fit": None
        if report.fit is None
        else {
            "rho": report.fit.rho,
            "amplitude": report.fit.amplitude,
            "r_squared": report.fit.r_squared,
            "adj_r_squared": report.fit.adj_r_squared,
            "contracting": report.fit.contracting,
            "caveat": report.fit.caveat,
        },
    }
    with open(out_dir / f"{stem}_summary.json", "w", encoding="utf-8") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return [out_dir / f"{stem}.csv", out_dir / f"{stem}_summary.json"]


def fig_convergence(report: ConvergenceReport, path: Path) -> None:
    """Block-gap decay with the fitted exponential, plus cooperation panel."""
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9.0, 4.0))
    blocks = [b.block for b in report.blocks if b.gap_beta is not None]
    gaps = [b.gap_beta for b in report.blocks if b.gap_beta is not None]
    if blocks:
        ax1.plot(blocks, gaps, "o-", color="#32618d", label="|bluff rate - target|")
        if report.fit is not None:
            xs = [b - blocks[0] for b in blocks]
            ax1.plot(
                blocks,
                [report.fit.amplitude * report.fit.rho**x for x in xs],
                "--",
                color="#c24f38",
                label=f"fit rho={report.fit.rho:.3f}",
            )
        ax1.legend(fontsize=8)
    ax1.set_xlabel("round block")
    ax1.set_ylabel("equilibrium gap")
    ax1.set_title("Bluff-rate gap by block")

    cblocks = [b.block for b in report.blocks if b.coop_rate is not None]
    coops = [b.coop_rate for b in report.blocks if b.coop_rate is not None]
    if cblocks:
        ax2.plot(cblocks, coops, "o-", color="#3a7d44", label="cooperation rate")
        ax2.axhline(report.coop_reference, ls="--", lw=0.8, color="gray", label="0.70 reference")
        ax2.set_ylim(0.0, 1.0)
        ax2.legend(fontsize=8)
    ax2.set_xlabel("round block")
    ax2.set_ylabel("cooperation rate")
    ax2.set_title("Cooperation by block")
    fig.tight_layout()
    fig.savefig(path, dpi=150, metadata=_PNG_META)
    plt.close(fig)


# ---------------------------------------------------------------------------
# Correlations, runs tests, power
# ---------------------------------------------------------------------------


def correlation_rows(matrix: CorrMatrix) -> list[dict]:
    rows = []
    for e in matrix.entries + matrix.control_entries:
        rows.append(
            {
                "axis_x": e.axis_x,
                "axis_y": e.axis_y,
                "defined": e.defined,
                "r": e.r,
                "p": e.p_t,
                "perm_p": e.p_perm,
                "loo_min": e.loo_min,
                "loo_max": e.loo_max,
            }
        )
    return rows


def write_correlations(matrix: CorrMatrix, out_dir: Path, stem: str = "correlations"):
    _write_csv(out_dir / f"{stem}.csv", CORRELATION_COLUMNS, correlation_rows(matrix))
    return [out_dir / f"{stem}.csv"]


def write_runs_tests(
    rows: list[tuple[str, str, RunsTestResult | None]], out_dir: Path, stem: str = "runs_tests"
):
    table = []
    for agent_a, agent_b, res in rows:
        if res is None:
            table.append(
                {"agent_a": agent_a, "agent_b": agent_b, "n": 0, "runs": None, "z": None,
                 "p": None, "degenerate": True}
            )
        else:
            table.append(
                {"agent_a": agent_a, "agent_b": agent_b, "n": res.n, "runs": res.runs,
                 "z": res.z, "p": res.p, "degenerate": res.degenerate}
            )
    _write_csv(out_dir / f"{stem}.csv", RUNS_COLUMNS, table)
    return [out_dir / f"{stem}.csv"]


def write_power_plan(plan: PowerPlan, out_dir: Path, stem: str = "power"):
    payload = {
        "elo_gap": plan.elo_gap,
        "eps": plan.eps,
        "alpha": plan.alpha,
        "n_required": plan.n_required,
    }
    with open(out_dir / f"{stem}.json", "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return [out_dir / f"{stem}.json"]
