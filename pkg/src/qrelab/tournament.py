"""Tournament orchestration and the end-to-end analysis pipeline.

A tournament plays every (pairing, game kind, replication) cell against
pre-sampled conditions and appends validated records to one JSON Lines log
per game kind, plus a manifest with seeds, counts, agent specs, forfeits, and
content digests.  The pipeline turns a log directory into a report bundle:
rationality estimates, per-axis ratings with bootstrap intervals, convergence
analytics, correlation and independence diagnostics, a power plan, and the
figures that accompany the delimited outputs.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable

from . import __version__
from .agents import AgentSpec, make_agent
from .analytics import block_convergence, correlations
from .core import (
    AXES,
    AXIS_OF,
    GameKind,
    GameRecord,
    RejectedInputError,
    append_log,
    derive_seed,
    read_log,
    sample_conditions,
)
from .estimation import (
    EmptyDatasetError,
    LambdaEstimate,
    build_choice_dataset,
    estimate_lambda,
)
from .games import GameForfeitError, run_game
from .rating import RatingTable, RunsTestResult, bootstrap_ci, power_plan, runs_test
from . import reports

DEFAULT_REPLICATIONS = 10


@dataclass
class TournamentConfig:
    """Scheduling parameters: agents, kinds, replications, seeds, output.

    Pairings are all unordered agent pairs, plus self-pairs when self-play is
    enabled (7 agents give 28 pairings).  Replication r of every pairing uses
    condition set ``r % condition_count``, so all pairings face identical
    setups.
    """

    agents: list[AgentSpec]
    game_kinds: list[GameKind]
    master_seed: int
    output_dir: str
    replications: dict[GameKind, int] = field(default_factory=dict)
    condition_count: int = 150
    include_self_play: bool = True
    workers: int = 1

    def __post_init__(self):
        ids = [a.id for a in self.agents]
        if len(set(ids)) != len(ids):
            raise RejectedInputError("agent ids must be unique")
        if not self.agents:
            raise RejectedInputError("need at least one agent")
        if not self.game_kinds:
            raise RejectedInputError("need at least one game kind")
        if self.condition_count < 1:
            raise RejectedInputError("condition_count must be >= 1")
        for kind in self.game_kinds:
            if self.reps(kind) < 1:
                raise RejectedInputError("replications must be >= 1")

    def reps(self, kind: GameKind) -> int:
        return self.replications.get(kind, DEFAULT_REPLICATIONS)

    def pairings(self) -> list[tuple[str, str]]:
        ids = [a.id for a in self.agents]
        out = []
        for i, a in enumerate(ids):
            for j in range(i, len(ids)):
                if i == j and not self.include_self_play:
                    continue
                out.append((a, ids[j]))
        return out

    @classmethod
    def from_json(cls, obj: dict[str, Any]) -> "TournamentConfig":
        try:
            agents = [AgentSpec.from_json(a) for a in obj["agents"]]
            kinds_field = obj.get("game_kinds", "all")
            if kinds_field == "all":
                kinds = list(GameKind)
            else:
                kinds = [GameKind(k) for k in kinds_field]
            reps_field = obj.get("replications", DEFAULT_REPLICATIONS)
            if isinstance(reps_field, dict):
                reps = {GameKind(k): int(v) for k, v in reps_field.items()}
            else:
                reps = {k: int(reps_field) for k in kinds}
            return cls(
                agents=agents,
                game_kinds=kinds,
                master_seed=int(obj["master_seed"]),
                output_dir=obj["output_dir"],
                replications=reps,
                condition_count=int(obj.get("condition_count", 150)),
                include_self_play=bool(obj.get("include_self_play", True)),
                workers=int(obj.get("workers", 1)),
            )
        except KeyError as exc:
            raise RejectedInputError(f"config missing field {exc}") from exc


def log_path(out_dir: Path, kind: GameKind) -> Path:
    return out_dir / f"{kind.value}.jsonl"


def _schedule(config: TournamentConfig):
    """Deterministic game schedule: (kind, condition index, pairing, seed)."""
    for kind in config.game_kinds:
        for pair in config.pairings():
            for rep in range(config.reps(kind)):
                cond_index = rep % config.condition_count
                seed = derive_seed(
                    config.master_seed, "game", kind.value, cond_index, f"{pair[0]}|{pair[1]}"
                )
                yield kind, cond_index, pair, seed


def _play_cell(args) -> GameRecord:
    kind, condition, spec_a, spec_b, seed = args
    agent_a = make_agent(spec_a)
    agent_b = make_agent(spec_b)
    return run_game(kind, condition, agent_a, agent_b, seed, spec_a.id, spec_b.id)


def run_tournament(
    config: TournamentConfig,
    transports: dict[str, Callable[[dict], dict]] | None = None,
) -> dict[str, Any]:
    """Play the full schedule and write per-kind logs plus a manifest.

    External-agent forfeits are recorded in the manifest and the tournament
    continues; forfeited games produce no log record.  Re-running with the
    same config and master seed reproduces the logs byte for byte.
    ``transports`` overrides the HTTP client per external agent id (testing).
    """
    out_dir = Path(config.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    specs = {a.id: a for a in config.agents}
    counts: dict[str, int] = {}
    forfeits: list[dict[str, Any]] = []
    use_pool = config.workers > 1 and not transports and not any(
        a.kind == "external" for a in config.agents
    )

    for kind in config.game_kinds:
        conditions = sample_conditions(kind, config.master_seed, config.condition_count)
        cells = [
            (kind, conditions[cond_index], specs[pair[0]], specs[pair[1]], seed)
            for k2, cond_index, pair, seed in _schedule(config)
            if k2 is kind
        ]
        written = 0
        with open(log_path(out_dir, kind), "w", encoding="utf-8") as fh:
            if use_pool:
                with ProcessPoolExecutor(max_workers=config.workers) as pool:
                    results = pool.map(_play_cell, cells, chunksize=8)
                    for record in results:
                        append_log(record, fh)
                        written += 1
            else:
                for cell in cells:
                    kind_, condition, spec_a, spec_b, seed = cell
                    agent_a = make_agent(spec_a, (transports or {}).get(spec_a.id))
                    agent_b = make_agent(spec_b, (transports or {}).get(spec_b.id))
                    try:
                        record = run_game(
                            kind_, condition, agent_a, agent_b, seed, spec_a.id, spec_b.id
                        )
                    except GameForfeitError as exc:
                        forfeits.append(
                            {
                                "game_kind": kind_.value,
                                "condition_index": condition.index,
                                "agent_a": spec_a.id,
                                "agent_b": spec_b.id,
                                "seed": seed,
                                "forfeited_by": exc.agent_id,
                                "reason": exc.reason,
                            }
                        )
                        continue
                    append_log(record, fh)
                    written += 1
        counts[kind.value] = written

    manifest = {
        "version": __version__,
        "master_seed": config.master_seed,
        "condition_count": config.condition_count,
        "include_self_play": config.include_self_play,
        "replications": {k.value: config.reps(k) for k in config.game_kinds},
        "agents": [a.to_json() for a in config.agents],
        "game_kinds": [k.value for k in config.game_kinds],
        "counts": counts,
        "forfeits": forfeits,
        "files": {
            log_path(out_dir, kind).name: reports.sha256_file(log_path(out_dir, kind))
            for kind in config.game_kinds
        },
    }
    with open(out_dir / "manifest.json", "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return manifest


# ---------------------------------------------------------------------------
# Analysis pipeline
# ---------------------------------------------------------------------------


@dataclass
class PipelineResult:
    status: int
    out_dir: Path
    manifest: dict[str, Any]
    skipped: list[str]


def read_log_dir(log_dir: Path) -> dict[GameKind, list[GameRecord]]:
    logs = {}
    for kind in GameKind:
        path = log_path(log_dir, kind)
        if path.exists():
            logs[kind] = read_log(path)
    return logs


def pipeline(
    log_dir,
    out_dir=None,
    n_boot: int = 1000,
    seed: int = 0,
    elo_gap: float = 50.0,
    alpha: float = 0.05,
    make_figures: bool = True,
) -> PipelineResult:
    """Full analysis over a log directory; reports that lack inputs are
    skipped with a manifest note and the exit status marks the bundle partial.

    All analysis seeds are fixed, so re-running on the same logs produces
    byte-identical reports.
    """
    log_dir = Path(log_dir)
    out_dir = Path(out_dir) if out_dir else log_dir / "reports"
    out_dir.mkdir(parents=True, exist_ok=True)
    fig_dir = out_dir / "figures"
    logs = read_log_dir(log_dir)
    emitted: list[Path] = []
    skipped: list[str] = []

    # Rationality estimates for the two estimable kinds.
    estimates: list[LambdaEstimate] = []
    for kind in (GameKind.STRATEGIC_CLAIM, GameKind.REPEATED_PD):
        records = logs.get(kind, [])
        if not records:
            skipped.append(f"estimates[{kind.value}]: no log")
            continue
        agents = sorted({r.agent_a for r in records} | {r.agent_b for r in records})
        for agent in agents:
            try:
                data = build_choice_dataset(records, agent, kind)
            except EmptyDatasetError:
                continue
            estimates.append(estimate_lambda(data))
    if estimates:
        emitted += reports.write_estimates(estimates, out_dir)
        if make_figures:
            fig_dir.mkdir(exist_ok=True)
            reports.fig_estimates(estimates, fig_dir / "estimates.png")
            emitted.append(fig_dir / "estimates.png")

    # Per-axis ratings with bootstrap intervals.
    tables: list[RatingTable] = []
    present_axes = {AXIS_OF[k] for k in logs}
    for axis in AXES:
        if axis not in present_axes:
            skipped.append(f"ratings[{axis}]: no log")
            continue
        axis_records = [r for recs in logs.values() for r in recs if AXIS_OF[r.game_kind] == axis]
        tables.append(
            bootstrap_ci(axis_records, axis, n_boot=n_boot, seed=derive_seed(seed, "boot", axis))
        )
    if tables:
        emitted += reports.write_ratings(tables, out_dir)
        if make_figures:
            fig_dir.mkdir(exist_ok=True)
            reports.fig_ratings(tables, fig_dir / "ratings.png")
            emitted.append(fig_dir / "ratings.png")

    # Convergence analytics over the claim game and repeated PD.
    conv_records = logs.get(GameKind.STRATEGIC_CLAIM, []) + logs.get(GameKind.REPEATED_PD, [])
    if conv_records:
        report = block_convergence(conv_records)
        emitted += reports.write_convergence(report, out_dir)
        if make_figures:
            fig_dir.mkdir(exist_ok=True)
            reports.fig_convergence(report, fig_dir / "convergence.png")
            emitted.append(fig_dir / "convergence.png")
    else:
        skipped.append("convergence: no claim-game or repeated-PD logs")

    # Inter-axis correlations need enough rated agents.
    informative = [t for t in tables if t.axis != "Control"]
    common = set.intersection(*(set(t.agents()) for t in tables)) if tables else set()
    if len(informative) >= 2 and len(common) >= 4:
        ratings_by_axis = {t.axis: t.ratings for t in tables}
        matrix = correlations(
            ratings_by_axis, control_axis="Control", seed=derive_seed(seed, "perm")
        )
        emitted += reports.write_correlations(matrix, out_dir)
    else:
        skipped.append("correlations: need >= 4 agents rated on >= 2 informative axes")

    # Runs-test diagnostics per pairing, pooled over game kinds in log order.
    sequences: dict[tuple[str, str], list[int]] = {}
    for kind in GameKind:
        for rec in logs.get(kind, []):
            pair = tuple(sorted((rec.agent_a, rec.agent_b)))
            if rec.outcome == "Draw":
                continue
            first_won = (rec.outcome == "WinA") == (rec.agent_a == pair[0])
            sequences.setdefault(pair, []).append(1 if first_won else 0)
    all_pairs = sorted(
        {tuple(sorted((r.agent_a, r.agent_b))) for recs in logs.values() for r in recs}
    )
    runs_rows: list[tuple[str, str, RunsTestResult | None]] = []
    for pair in all_pairs:
        seq = sequences.get(pair, [])
        try:
            runs_rows.append((pair[0], pair[1], runs_test(seq)))
        except RejectedInputError:
            runs_rows.append((pair[0], pair[1], None))
    if runs_rows:
        emitted += reports.write_runs_tests(runs_rows, out_dir)
    else:
        skipped.append("runs_tests: no games")

    emitted += reports.write_power_plan(power_plan(elo_gap, alpha), out_dir)

    manifest = {
        "version": __version__,
        "inputs": {log_path(log_dir, k).name: reports.sha256_file(log_path(log_dir, k)) for k in logs},
        "parameters": {
            "n_boot": n_boot,
            "seed": seed,
            "elo_gap": elo_gap,
            "alpha": alpha,
        },
        "files": {
            str(p.relative_to(out_dir)): reports.sha256_file(p) for p in sorted(emitted)
        },
        "skipped": skipped,
    }
    with open(out_dir / "manifest.json", "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return PipelineResult(
        status=3 if skipped else 0, out_dir=out_dir, manifest=manifest, skipped=skipped
    )
