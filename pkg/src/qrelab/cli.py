"""Command-line interface.

Commands: ``tournament <config>``, ``estimate <logs> --game sc|rpd``,
``rate <logs> --axis <axis> --boot N``, ``analyze <logs>``, and
``power --elo-gap G --alpha A``.  Exit codes: 0 success, 1 usage error,
2 validation error, 3 partial bundle (some reports skipped).
"""

from __future__ import annotations

import json
from pathlib import Path

import click

from .core import AXES, AXIS_OF, GameKind, read_log
from .estimation import EmptyDatasetError, build_choice_dataset, estimate_lambda
from .rating import bootstrap_ci, power_plan
from .tournament import TournamentConfig, log_path, pipeline, run_tournament
from . import reports

_GAME_ALIASES = {"sc": GameKind.STRATEGIC_CLAIM, "rpd": GameKind.REPEATED_PD}


@click.group()
def cli():
    """Strategic-game simulation, rationality estimation, and rating reports."""


@cli.command("tournament")
@click.argument("config_file", type=click.Path(exists=True, dir_okay=False))
def tournament_cmd(config_file):
    """Play a full tournament from a JSON config file."""
    with open(config_file, "r", encoding="utf-8") as fh:
        config = TournamentConfig.from_json(json.load(fh))
    manifest = run_tournament(config)
    total = sum(manifest["counts"].values())
    click.echo(f"played {total} games into {config.output_dir}")
    for kind, n in manifest["counts"].items():
        click.echo(f"  {kind}: {n}")
    if manifest["forfeits"]:
        click.echo(f"  forfeits: {len(manifest['forfeits'])} (see manifest.json)")
    return 0


@cli.command("estimate")
@click.argument("logs", type=click.Path(exists=True, file_okay=False))
@click.option("--game", type=click.Choice(["sc", "rpd"]), required=True)
@click.option("--out", type=click.Path(file_okay=False), default=None)
def estimate_cmd(logs, game, out):
    """Estimate rationality parameters per agent from a game log."""
    kind = _GAME_ALIASES[game]
    path = log_path(Path(logs), kind)
    records = read_log(path)
    agents = sorted({r.agent_a for r in records} | {r.agent_b for r in records})
    estimates = []
    for agent in agents:
        try:
            data = build_choice_dataset(records, agent, kind)
        except EmptyDatasetError:
            continue
        estimates.append(estimate_lambda(data))
    out_dir = Path(out) if out else Path(logs) / "reports"
    out_dir.mkdir(parents=True, exist_ok=True)
    files = reports.write_estimates(estimates, out_dir, stem=f"estimates_{game}")
    for est in estimates:
        flag = " [near boundary]" if est.near_boundary else ""
        click.echo(
            f"{est.agent}: lambda_mle={est.lambda_mle:.4f} "
            f"post_mean={est.post_mean:.4f}{flag}"
        )
    click.echo(f"wrote {', '.join(str(f) for f in files)}")
    return 0


@cli.command("rate")
@click.argument("logs", type=click.Path(exists=True, file_okay=False))
@click.option("--axis", type=click.Choice(list(AXES)), required=True)
@click.option("--boot", type=int, default=1000, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", type=click.Path(file_okay=False), default=None)
def rate_cmd(logs, axis, boot, seed, out):
    """Per-axis ratings with bootstrap confidence intervals."""
    records = []
    for kind in GameKind:
        if AXIS_OF[kind] != axis:
            continue
        path = log_path(Path(logs), kind)
        if path.exists():
            records.extend(read_log(path))
    table = bootstrap_ci(records, axis, n_boot=boot, seed=seed)
    out_dir = Path(out) if out else Path(logs) / "reports"
    out_dir.mkdir(parents=True, exist_ok=True)
    files = reports.write_ratings([table], out_dir, stem=f"ratings_{axis.lower()}")
    for agent in table.agents():
        click.echo(
            f"{agent}: {table.ratings[agent]:.1f} "
            f"[{table.ci_lo[agent]:.1f}, {table.ci_hi[agent]:.1f}]"
        )
    for note in table.diagnostics:
        click.echo(f"note: {note}")
    click.echo(f"wrote {', '.join(str(f) for f in files)}")
    return 0


@cli.command("analyze")
@click.argument("logs", type=click.Path(exists=True, file_okay=False))
@click.option("--out", type=click.Path(file_okay=False), default=None)
@click.option("--boot", type=int, default=1000, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--elo-gap", type=float, default=50.0, show_default=True)
@click.option("--alpha", type=float, default=0.05, show_default=True)
@click.option("--figures/--no-figures", default=True, show_default=True)
def analyze_cmd(logs, out, boot, seed, elo_gap, alpha, figures):
    """Run the full report pipeline over a log directory."""
    result = pipeline(
        logs, out_dir=out, n_boot=boot, seed=seed, elo_gap=elo_gap, alpha=alpha,
        make_figures=figures,
    )
    click.echo(f"report bundle in {result.out_dir}")
    for name in sorted(result.manifest["files"]):
        click.echo(f"  {name}")
    for note in result.skipped:
        click.echo(f"skipped: {note}")
    return result.status


@cli.command("power")
@click.option("--elo-gap", type=float, default=50.0, show_default=True)
@click.option("--alpha", type=float, default=0.05, show_default=True)
@click.option("--out", type=click.Path(file_okay=False), default=None)
def power_cmd(elo_gap, alpha, out):
    """Hoeffding sample-size plan for detecting a rating gap."""
    plan = power_plan(elo_gap, alpha)
    click.echo(
        f"elo gap {plan.elo_gap:g} -> win-prob deviation eps={plan.eps:.4f}; "
        f"n >= {plan.n_required} games at alpha={plan.alpha:g}"
    )
    if out:
        out_dir = Path(out)
        out_dir.mkdir(parents=True, exist_ok=True)
        reports.write_power_plan(plan, out_dir)
        click.echo(f"wrote {out_dir / 'power.json'}")
    return 0


def main(argv=None) -> int:
    """Entry point with the documented exit-code contract."""
    try:
        rc = cli.main(args=argv, standalone_mode=False)
        return int(rc) if isinstance(rc, int) else 0
    except click.exceptions.Exit as exc:
        return int(exc.exit_code)
    except click.UsageError as exc:
        click.echo(f"usage error: {exc.format_message()}", err=True)
        return 1
    except click.ClickException as exc:
        exc.show()
        return 1
    except (ValueError, OSError) as exc:
        click.echo(f"validation error: {exc}", err=True)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
