"""Per-axis ELO ratings under the Bradley-Terry model: sequential updates,
bootstrap confidence intervals, Hoeffding sample-size planning, and
Wald-Wolfowitz independence diagnostics on game-level outcome sequences.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from .core import AXIS_OF, GameRecord, RejectedInputError, derive_seed, make_rng

INITIAL_RATING = 1500.0
DEFAULT_K = 32.0


def bt_prob(delta: float) -> float:
    """Bradley-Terry win probability for a rating-point advantage ``delta``."""
    return 1.0 / (1.0 + 10.0 ** (-delta / 400.0))


def elo_update(
    rating_a: float, rating_b: float, score_a: float, k: float = DEFAULT_K
) -> tuple[float, float]:
    """One sequential update; ``score_a`` is 1 for a win, 0.5 draw, 0 loss.

    The rating exchange is computed once and applied with opposite signs, so
    the rating sum is conserved exactly.
    """
    if score_a not in (0.0, 0.5, 1.0):
        raise RejectedInputError(f"score {score_a!r} must be 0, 0.5, or 1")
    if k <= 0:
        raise RejectedInputError("k must be > 0")
    delta = k * (score_a - bt_prob(rating_a - rating_b))
    return rating_a + delta, rating_b - delta


@dataclass
class RatingTable:
    """Ratings for one axis, with bootstrap uncertainty when computed."""

    axis: str
    ratings: dict[str, float]
    n_games: dict[str, int]
    boot_sd: dict[str, float] = field(default_factory=dict)
    ci_lo: dict[str, float] = field(default_factory=dict)
    ci_hi: dict[str, float] = field(default_factory=dict)
    diagnostics: list[str] = field(default_factory=list)

    def agents(self) -> list[str]:
        return sorted(self.ratings)


def _score_of(outcome: str) -> float:
    return {"WinA": 1.0, "WinB": 0.0, "Draw": 0.5}[outcome]


def _axis_games(records: list[GameRecord], axis: str):
    games = [r for r in records if AXIS_OF[r.game_kind] == axis]
    if not games:
        raise RejectedInputError(f"no records for axis {axis!r}")
    agents = sorted({r.agent_a for r in games} | {r.agent_b for r in games})
    index = {a: i for i, a in enumerate(agents)}
    ia = np.array([index[r.agent_a] for r in games])
    ib = np.array([index[r.agent_b] for r in games])
    s = np.array([_score_of(r.outcome) for r in games])
    return agents, ia, ib, s


def run_rating(
    records: list[GameRecord], axis: str, order_seed: int, k: float = DEFAULT_K
) -> RatingTable:
    """Sequential ELO over the axis's games in seeded random order.

    Everyone starts at 1500; draws score 0.5 for both sides.  Self-play games
    are included (they cannot move ratings under the symmetric update).
    """
    agents, ia, ib, s = _axis_games(records, axis)
    order = make_rng(order_seed).permutation(len(s))
    ratings = np.full(len(agents), INITIAL_RATING)
    counts = np.zeros(len(agents), dtype=int)
    for g in order:
        a, b = ia[g], ib[g]
        delta = k * (s[g] - bt_prob(ratings[a] - ratings[b]))
        ratings[a] += delta
        ratings[b] -= delta
        counts[a] += 1
        counts[b] += 1
    return RatingTable(
        axis=axis,
        ratings={agent: float(ratings[i]) for i, agent in enumerate(agents)},
        n_games={agent: int(counts[i]) for i, agent in enumerate(agents)},
    )


def bootstrap_ci(
    records: list[GameRecord],
    axis: str,
    n_boot: int = 1000,
    seed: int = 0,
    k: float = DEFAULT_K,
) -> RatingTable:
    """Percentile bootstrap for per-axis ratings.

    Game outcomes are resampled with replacement within each agent pair
    (keeping each pair's game count fixed, preserving the pairing design);
    every replicate replays the sequential update in its own shuffled order.
    The 2.5th and 97.5th percentiles define the interval.
    """
    if n_boot < 2:
        raise RejectedInputError("n_boot must be >= 2")
    table = run_rating(records, axis, order_seed=derive_seed(seed, "base-order", axis), k=k)
    agents, ia, ib, s = _axis_games(records, axis)
    n_games = len(s)
    rng = make_rng(derive_seed(seed, "bootstrap", axis))

    pair_key = np.array([f"{min(a, b)}|{max(a, b)}" for a, b in zip(ia, ib)])
    game_matrix = np.empty((n_boot, n_games), dtype=np.int64)
    col = 0
    for key in sorted(set(pair_key)):
        idx = np.flatnonzero(pair_key == key)
        if len(idx) == 1:
            table.diagnostics.append(
                f"pair {key} has a single game; its bootstrap resampling is degenerate"
            )
        draws = rng.integers(0, len(idx), size=(n_boot, len(idx)))
        game_matrix[:, col : col + len(idx)] = idx[draws]
        col += len(idx)
    game_matrix = rng.permuted(game_matrix, axis=1)

    ratings = np.full((n_boot, len(agents)), INITIAL_RATING)
    rows = np.arange(n_boot)
    for j in range(n_games):
        g = game_matrix[:, j]
        a, b = ia[g], ib[g]
        delta = k * (s[g] - bt_prob(ratings[rows, a] - ratings[rows, b]))
        np.add.at(ratings, (rows, a), delta)
        np.add.at(ratings, (rows, b), -delta)

    if np.all(s == 0.5):
        table.diagnostics.append(
            "zero outcome variance on this axis: all ratings stay at 1500"
        )
    lo, hi = np.percentile(ratings, [2.5, 97.5], axis=0)
    sd = ratings.std(axis=0, ddof=1)
    for i, agent in enumerate(agents):
        table.boot_sd[agent] = float(sd[i])
        table.ci_lo[agent] = float(lo[i])
        table.ci_hi[agent] = float(hi[i])
    return table


# ---------------------------------------------------------------------------
# Power planning
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PowerPlan:
    """Hoeffding sample-size plan for detecting a win-probability deviation."""

    elo_gap: float
    eps: float
    alpha: float
    n_required: int


def hoeffding_n(eps: float, alpha: float) -> int:
    """Games needed so that P(|p-hat - p| > eps) <= alpha: ceil(ln(2/a)/(2 eps^2))."""
    if not 0.0 < eps <= 0.5:
        raise RejectedInputError("eps must lie in (0, 0.5]")
    if not 0.0 < alpha < 1.0:
        raise RejectedInputError("alpha must lie in (0, 1)")
    return math.ceil(math.log(2.0 / alpha) / (2.0 * eps**2))


def elo_gap_to_eps(delta: float) -> float:
    """Win-probability deviation from even play implied by a rating gap."""
    return bt_prob(delta) - 0.5


def power_plan(elo_gap: float, alpha: float) -> PowerPlan:
    eps = elo_gap_to_eps(elo_gap)
    return PowerPlan(elo_gap=elo_gap, eps=eps, alpha=alpha, n_required=hoeffding_n(eps, alpha))


# ---------------------------------------------------------------------------
# Runs test
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RunsTestResult:
    n: int
    runs: int
    z: float
    p: float
    degenerate: bool = False


def runs_test(outcomes) -> RunsTestResult:
    """Wald-Wolfowitz runs test on a binary sequence.

    z = (runs - mu) / sigma with mu = 2 n1 n0 / n + 1 and
    sigma^2 = (mu - 1)(mu - 2) / (n - 1); two-sided normal p-value.
    A single-symbol sequence is degenerate and returns p = 1 flagged.
    """
    x = np.asarray(list(outcomes), dtype=int)
    n = len(x)
    if n < 10:
        raise RejectedInputError("need length >= 10 for the normal approximation")
    if not set(np.unique(x)) <= {0, 1}:
        raise RejectedInputError("sequence must be binary (0/1)")
    n1 = int(x.sum())
    n0 = n - n1
    runs = int(1 + (np.diff(x) != 0).sum())
    if n1 == 0 or n0 == 0:
        return RunsTestResult(n=n, runs=runs, z=0.0, p=1.0, degenerate=True)
    mu = 2.0 * n1 * n0 / n + 1.0
    sigma = math.sqrt((mu - 1.0) * (mu - 2.0) / (n - 1.0))
    z = (runs - mu) / sigma
    p = float(2.0 * stats.norm.sf(abs(z)))
    return RunsTestResult(n=n, runs=runs, z=float(z), p=min(p, 1.0))
