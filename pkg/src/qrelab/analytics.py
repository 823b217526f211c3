"""Equilibrium-convergence measurement by round block, exponential contraction
fitting, and correlation statistics with permutation and leave-one-out checks.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np
from scipy import stats

from .core import GameKind, GameRecord, RejectedInputError, make_rng
from .equilibrium import sc_conditional_bluff_rate

#: Behavioral cooperation reference for the repeated PD.  This is not an
#: equilibrium (the subgame-perfect prediction is mutual defection); the
#: reports label it a behavioral reference.
COOP_REFERENCE = 0.70

#: Conditional bluff rate of the uniform baseline (coin over bluff/honest).
RANDOM_BLUFF_RATE = 0.50
RANDOM_COOP_RATE = 0.50

LOG_FLOOR = 1e-6


@dataclass
class BlockStats:
    """Per-block conditional bluff and cooperation statistics."""

    block: int
    first_round: int
    last_round: int
    bluff_rate: float | None = None
    bluff_se: float | None = None
    gap_beta: float | None = None
    n_bluff_obs: int = 0
    coop_rate: float | None = None
    coop_se: float | None = None
    gap_coop: float | None = None
    n_coop_obs: int = 0
    convergence_pct: float | None = None


@dataclass
class ExpFit:
    """Least-squares exponential fit g_b = A * rho^(b-1) in log space."""

    rho: float
    amplitude: float
    r_squared: float
    adj_r_squared: float
    contracting: bool
    #: The fit is illustrative of exponential convergence, not a precise
    #: estimate (few block means, nonlinear model).
    caveat: str = "illustrative fit on block means"


@dataclass
class ConvergenceReport:
    block_size: int
    blocks: list[BlockStats]
    beta_star: float
    coop_reference: float
    fit: ExpFit | None
    random_baseline: dict = field(
        default_factory=lambda: {
            "bluff_rate": RANDOM_BLUFF_RATE,
            "coop_rate": RANDOM_COOP_RATE,
        }
    )


def block_convergence(records: list[GameRecord], block: int = 2) -> ConvergenceReport:
    """Round-block equilibrium gaps from claim-game and repeated-PD records.

    The conditional bluff rate counts bluffs over low-value (v <= 3) sender
    rounds of both players, with binomial standard errors; the cooperation
    rate counts C moves over all moves.  Gaps are absolute distances to the
    equilibrium bluff rate and the 0.70 behavioral cooperation reference.
    Blocks with no low-value rounds are marked undefined.
    """
    if not records:
        raise RejectedInputError("no records")
    if block < 1:
        raise RejectedInputError("block size must be >= 1")
    beta_star = sc_conditional_bluff_rate()

    bluff_hits: dict[int, int] = {}
    bluff_n: dict[int, int] = {}
    coop_hits: dict[int, int] = {}
    coop_n: dict[int, int] = {}
    max_round = 0
    for rec in records:
        for rnd in rec.rounds:
            b = (rnd.t - 1) // block + 1
            max_round = max(max_round, rnd.t)
            if rec.game_kind is GameKind.STRATEGIC_CLAIM:
                for private, action in (
                    (rnd.private_a, rnd.action_a),
                    (rnd.private_b, rnd.action_b),
                ):
                    if private["value"] <= 3:
                        bluff_n[b] = bluff_n.get(b, 0) + 1
                        bluff_hits[b] = bluff_hits.get(b, 0) + (
                            action["claim"] > private["value"]
                        )
            elif rec.game_kind is GameKind.REPEATED_PD:
                for action in (rnd.action_a, rnd.action_b):
                    coop_n[b] = coop_n.get(b, 0) + 1
                    coop_hits[b] = coop_hits.get(b, 0) + (action["move"] == "C")

    n_blocks = (max_round - 1) // block + 1
    blocks: list[BlockStats] = []
    for b in range(1, n_blocks + 1):
        row = BlockStats(block=b, first_round=(b - 1) * block + 1, last_round=b * block)
        if bluff_n.get(b, 0) > 0:
            n = bluff_n[b]
            rate = bluff_hits[b] / n
            row.bluff_rate = rate
            row.bluff_se = float(np.sqrt(rate * (1.0 - rate) / n))
            row.gap_beta = abs(rate - beta_star)
            row.n_bluff_obs = n
        if coop_n.get(b, 0) > 0:
            n = coop_n[b]
            rate = coop_hits[b] / n
            row.coop_rate = rate
            row.coop_se = float(np.sqrt(rate * (1.0 - rate) / n))
            row.gap_coop = abs(rate - COOP_REFERENCE)
            row.n_coop_obs = n
        blocks.append(row)

    first_gap = blocks[0].gap_beta if blocks else None
    if first_gap:
        for row in blocks[1:]:
            if row.gap_beta is not None:
                row.convergence_pct = (first_gap - row.gap_beta) / first_gap

    gaps = [row.gap_beta for row in blocks if row.gap_beta is not None]
    fit = exp_fit(gaps) if len(gaps) >= 3 else None
    return ConvergenceReport(
        block_size=block,
        blocks=blocks,
        beta_star=beta_star,
        coop_reference=COOP_REFERENCE,
        fit=fit,
    )


def exp_fit(gaps) -> ExpFit:
    """Fit g_b = A * rho^(b-1) by least squares on log(g + 1e-6).

    R-squared is computed on the original scale against the mean-only model;
    adjusted for the two parameters.  A fitted rho >= 1 is allowed and
    flagged non-contracting; zero gaps are absorbed by the log floor.
    """
    g = np.asarray(gaps, dtype=float)
    if len(g) < 3:
        raise RejectedInputError("need at least 3 block gaps")
    if np.any(g < 0):
        raise RejectedInputError("gaps must be >= 0")
    x = np.arange(len(g), dtype=float)
    y = np.log(g + LOG_FLOOR)
    slope, intercept = np.polyfit(x, y, 1)
    rho = float(np.exp(slope))
    amplitude = float(np.exp(intercept))
    predicted = amplitude * rho**x
    sse = float(((g - predicted) ** 2).sum())
    sst = float(((g - g.mean()) ** 2).sum())
    if sst == 0.0:
        r2 = 1.0 if sse < 1e-18 else 0.0
    else:
        r2 = 1.0 - sse / sst
    n = len(g)
    adj = 1.0 - (1.0 - r2) * (n - 1) / (n - 2)
    return ExpFit(
        rho=rho,
        amplitude=amplitude,
        r_squared=r2,
        adj_r_squared=adj,
        contracting=rho < 1.0,
    )


# ---------------------------------------------------------------------------
# Correlation statistics
# ---------------------------------------------------------------------------


@dataclass
class CorrEntry:
    axis_x: str
    axis_y: str
    defined: bool
    r: float | None = None
    p_t: float | None = None
    p_perm: float | None = None
    loo_min: float | None = None
    loo_max: float | None = None
    note: str | None = None


@dataclass
class CorrMatrix:
    agents: list[str]
    axes: list[str]
    entries: list[CorrEntry]
    control_entries: list[CorrEntry]

    def get(self, ax1: str, ax2: str) -> CorrEntry | None:
        for e in self.entries + self.control_entries:
            if {e.axis_x, e.axis_y} == {ax1, ax2}:
                return e
        return None


def _pearson(x: np.ndarray, y: np.ndarray) -> float:
    xc, yc = x - x.mean(), y - y.mean()
    return float((xc * yc).sum() / np.sqrt((xc**2).sum() * (yc**2).sum()))


def pearson_tests(
    x, y, n_perm: int = 10_000, seed: int = 0
) -> tuple[float, float, float]:
    """Pearson r with a two-sided t-test p and a seeded permutation p.

    The permutation p-value uses the add-one convention
    ``(1 + #{|r_perm| >= |r|}) / (n_perm + 1)``.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    n = len(x)
    r = _pearson(x, y)
    if abs(r) >= 1.0:
        p_t = 0.0
    else:
        t = r * np.sqrt((n - 2) / (1.0 - r**2))
        p_t = float(2.0 * stats.t.sf(abs(t), df=n - 2))
    rng = make_rng(seed)
    hits = 0
    for _ in range(n_perm):
        r_perm = _pearson(x, y[rng.permutation(n)])
        if abs(r_perm) >= abs(r) - 1e-12:
            hits += 1
    p_perm = (1.0 + hits) / (n_perm + 1.0)
    return r, p_t, p_perm


def leave_one_out_range(x, y) -> tuple[float, float]:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    rs = []
    for i in range(len(x)):
        keep = np.arange(len(x)) != i
        rs.append(_pearson(x[keep], y[keep]))
    return float(min(rs)), float(max(rs))


def correlations(
    ratings_by_axis: dict[str, dict[str, float]],
    control_axis: str = "Control",
    n_perm: int = 10_000,
    seed: int = 0,
) -> CorrMatrix:
    """Pairwise axis correlations over agents, control axis reported apart.

    Requires at least 4 agents rated on every requested axis.  Zero-variance
    columns (the word game under symmetric scoring) yield entries marked
    undefined rather than numbers.
    """
    axes = [a for a in ratings_by_axis if a != control_axis]
    agents = sorted(set.intersection(*(set(ratings_by_axis[a]) for a in ratings_by_axis)))
    if len(agents) < 4:
        raise RejectedInputError("need at least 4 agents with ratings on every axis")
    columns = {
        a: np.array([ratings_by_axis[a][agent] for agent in agents]) for a in ratings_by_axis
    }

    def build(ax1: str, ax2: str, perm_seed: int) -> CorrEntry:
        x, y = columns[ax1], columns[ax2]
        if x.std() == 0.0 or y.std() == 0.0:
            return CorrEntry(
                axis_x=ax1, axis_y=ax2, defined=False, note="zero-variance column"
            )
        r, p_t, p_perm = pearson_tests(x, y, n_perm=n_perm, seed=perm_seed)
        lo, hi = leave_one_out_range(x, y)
        return CorrEntry(
            axis_x=ax1, axis_y=ax2, defined=True, r=r, p_t=p_t, p_perm=p_perm,
            loo_min=lo, loo_max=hi,
        )

    entries = [
        build(ax1, ax2, seed + 17 * i)
        for i, (ax1, ax2) in enumerate(combinations(axes, 2))
    ]
    control_entries = []
    if control_axis in ratings_by_axis:
        control_entries = [
            build(control_axis, ax, seed + 1000 + 17 * i) for i, ax in enumerate(axes)
        ]
    return CorrMatrix(agents=agents, axes=axes, entries=entries, control_entries=control_entries)


@dataclass(frozen=True)
class SpearmanResult:
    rho: float
    p: float
    degenerate: bool = False


def spearman(x, y, n_perm: int = 10_000, seed: int = 0) -> SpearmanResult:
    """Spearman rank correlation (average ranks for ties) with permutation p."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if len(x) < 4:
        raise RejectedInputError("need n >= 4")
    if np.all(x == x[0]) or np.all(y == y[0]):
        return SpearmanResult(rho=float("nan"), p=float("nan"), degenerate=True)
    rx = stats.rankdata(x)
    ry = stats.rankdata(y)
    rho = _pearson(rx, ry)
    rng = make_rng(seed)
    hits = 0
    for _ in range(n_perm):
        r_perm = _pearson(rx, ry[rng.permutation(len(ry))])
        if abs(r_perm) >= abs(rho) - 1e-12:
            hits += 1
    return SpearmanResult(rho=rho, p=(1.0 + hits) / (n_perm + 1.0))
