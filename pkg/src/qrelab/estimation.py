"""Rationality-parameter inference from choice data.

The model is the logit quantal response: an observation is a legal action
set with an expected-utility vector and a chosen index, and
``P(a) = exp(lam * U_a) / sum exp(lam * U)``.  This module provides the
log-likelihood kernel, multi-start Newton-Raphson MLE with Fisher uncertainty
and boundary handling, a Bayesian grid posterior under Gamma priors with
highest-density intervals, prior-sensitivity sweeps, and BIC comparison
against the zero-parameter equilibrium and uniform baselines.

Expected utilities are used in raw payoff units, so lam carries units of
inverse payoff points; cross-game comparisons are approximate calibration
rather than precise equivalence.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy import stats

from .core import GameKind, GameRecord, RejectedInputError, make_rng
from .equilibrium import (
    sc_bluff_prob,
    sc_equilibrium_bluff_posteriors,
    sc_equilibrium_challenge_probs,
    sc_equilibrium_claim_distribution,
    sc_expected_utilities,
    sc_receiver_utilities,
    SC_RECEIVER_THRESHOLD,
)

LAMBDA_MAX = 5.0
GRID_STEP = 0.005
NASH_PROB_FLOOR = 1e-6
MULTISTART_SEED = 20_240_915
#: MLE at or below this is a boundary solution (Fisher intervals invalid).
BOUNDARY_TOL = 1e-9
#: Estimates below this carry a weak-identification note in reports.
NEAR_BOUNDARY = 0.05


class EmptyDatasetError(ValueError):
    """No observations: the estimate is undefined."""


class WidenGridError(ValueError):
    """Posterior mass concentrates at the top of the lambda grid."""


# Row kinds for claim-game datasets.
ROW_SENDER = 0
ROW_RECEIVER = 1
ROW_SENDER_BINARY = 2


@dataclass
class ChoiceDataset:
    """Per-observation action sets, utility vectors, and chosen indices.

    ``utilities`` is (n, max_actions), padded; ``mask`` marks the legal
    entries.  ``row_kind`` / ``values`` carry claim-game structure where the
    BIC comparison needs it (sender rows keyed by private value).
    """

    agent: str
    game_kind: GameKind | None
    utilities: np.ndarray
    mask: np.ndarray
    chosen: np.ndarray
    row_kind: np.ndarray | None = None
    values: np.ndarray | None = None

    @property
    def n(self) -> int:
        return len(self.chosen)

    def n_actions(self) -> np.ndarray:
        return self.mask.sum(axis=1)


def _pack_rows(rows: list[np.ndarray], chosen: list[int]) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    width = max(len(r) for r in rows)
    utilities = np.zeros((len(rows), width))
    mask = np.zeros((len(rows), width), dtype=bool)
    for i, r in enumerate(rows):
        utilities[i, : len(r)] = r
        mask[i, : len(r)] = True
    return utilities, mask, np.asarray(chosen, dtype=int)


def _masked_logits(data: ChoiceDataset, lam: float) -> np.ndarray:
    z = np.where(data.mask, lam * data.utilities, -np.inf)
    return z


def loglik(lam: float, data: ChoiceDataset) -> float:
    """Log-likelihood of the chosen actions under the logit model at ``lam``.

    Computed with max-shifted exponentials, so lam * U magnitudes up to the
    hundreds do not overflow.
    """
    if lam < 0:
        raise RejectedInputError("lam must be >= 0")
    if data.n == 0:
        raise EmptyDatasetError("no observations")
    z = _masked_logits(data, lam)
    zmax = z.max(axis=1)
    lse = zmax + np.log(np.exp(z - zmax[:, None]).sum(axis=1))
    return float((z[np.arange(data.n), data.chosen] - lse).sum())


def loglik_grid(lams: np.ndarray, data: ChoiceDataset, chunk: int = 64) -> np.ndarray:
    """Vectorized log-likelihood over a grid of lambda values."""
    if data.n == 0:
        raise EmptyDatasetError("no observations")
    out = np.empty(len(lams))
    idx = np.arange(data.n)
    for start in range(0, len(lams), chunk):
        block = np.asarray(lams[start : start + chunk])
        z = block[:, None, None] * data.utilities[None, :, :]
        z = np.where(data.mask[None, :, :], z, -np.inf)
        zmax = z.max(axis=2)
        lse = zmax + np.log(np.exp(z - zmax[:, :, None]).sum(axis=2))
        out[start : start + len(block)] = (z[:, idx, data.chosen] - lse).sum(axis=1)
    return out


def _score_and_curvature(lam: float, data: ChoiceDataset) -> tuple[float, float]:
    """First and second derivatives of the log-likelihood in lam.

    d/dlam = sum(U_chosen - E[U]); d2/dlam2 = -sum Var(U), so the
    log-likelihood is globally concave in lam.
    """
    z = _masked_logits(data, lam)
    zmax = z.max(axis=1)
    w = np.exp(z - zmax[:, None])
    probs = w / w.sum(axis=1, keepdims=True)
    u = np.where(data.mask, data.utilities, 0.0)
    mean_u = (probs * u).sum(axis=1)
    var_u = (probs * u * u).sum(axis=1) - mean_u**2
    chosen_u = u[np.arange(data.n), data.chosen]
    return float((chosen_u - mean_u).sum()), float(-np.maximum(var_u, 0.0).sum())


@dataclass
class LambdaEstimate:
    """MLE and Bayesian posterior summaries for one (agent, game-kind) dataset.

    Fisher standard errors and Wald intervals are suppressed at boundary
    estimates (lam-hat = 0), where asymptotic normality fails.
    """

    agent: str
    game_kind: str
    n: int
    lambda_mle: float | None = None
    fisher_se: float | None = None
    ci_lo: float | None = None
    ci_hi: float | None = None
    boundary: bool = False
    unidentified: bool = False
    warning: str | None = None
    nll: float | None = None
    post_mean: float | None = None
    post_sd: float | None = None
    hdi_lo: float | None = None
    hdi_hi: float | None = None
    hdi_mass: float | None = None

    @property
    def near_boundary(self) -> bool:
        lam = self.lambda_mle if self.lambda_mle is not None else self.post_mean
        return lam is not None and lam < NEAR_BOUNDARY


def _newton_from(start: float, data: ChoiceDataset, lambda_max: float) -> float:
    lam = min(max(start, 0.0), lambda_max)
    ll = loglik(lam, data)
    for _ in range(200):
        score, curv = _score_and_curvature(lam, data)
        if curv >= 0.0:
            return _golden_section(data, lambda_max)
        step = -score / curv
        new = min(max(lam + step, 0.0), lambda_max)
        # Step halving keeps every accepted move an improvement.
        for _ in range(60):
            new_ll = loglik(new, data)
            if new_ll >= ll - 1e-13:
                break
            new = lam + (new - lam) / 2.0
        if abs(new - lam) < 1e-12:
            return new
        if abs(new_ll - ll) < 1e-13 and abs(score) < 1e-9:
            return new
        lam, ll = new, new_ll
    return lam


def _golden_section(data: ChoiceDataset, lambda_max: float, tol: float = 1e-10) -> float:
    """Maximize the log-likelihood on [0, lambda_max] without derivatives."""
    invphi = (np.sqrt(5.0) - 1.0) / 2.0
    a, b = 0.0, lambda_max
    c, d = b - invphi * (b - a), a + invphi * (b - a)
    fc, fd = loglik(c, data), loglik(d, data)
    while b - a > tol:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = loglik(c, data)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = loglik(d, data)
    return (a + b) / 2.0


def mle_lambda(
    data: ChoiceDataset,
    lambda_max: float = LAMBDA_MAX,
    n_starts: int = 10,
    start_seed: int = MULTISTART_SEED,
) -> LambdaEstimate:
    """Maximum-likelihood lam over [0, lambda_max] from 10 seeded starts.

    The solution with the smallest negative log-likelihood wins.  A boundary
    solution (lam-hat = 0) sets the boundary flag and suppresses the Fisher
    standard error and Wald interval; otherwise
    SE = 1 / sqrt(-d2 loglik) and the 95% interval is clipped at 0.
    """
    if data.n < 1:
        raise EmptyDatasetError("no observations")
    est = LambdaEstimate(agent=data.agent, game_kind=_kind_name(data), n=data.n)

    spread = np.where(data.mask, data.utilities, np.nan)
    ranges = np.nanmax(spread, axis=1) - np.nanmin(spread, axis=1)
    if np.all(ranges < 1e-12):
        est.lambda_mle = 0.0
        est.boundary = True
        est.unidentified = True
        est.warning = "all actions have identical utilities; lambda is unidentified"
        est.nll = -loglik(0.0, data)
        return est

    starts = make_rng(start_seed).uniform(0.0, lambda_max, size=n_starts)
    candidates = []
    for s in starts:
        lam = _newton_from(float(s), data, lambda_max)
        candidates.append((-loglik(lam, data), lam))
    nll, lam_hat = min(candidates, key=lambda t: (t[0], t[1]))

    est.lambda_mle = float(lam_hat)
    est.nll = float(nll)
    if lam_hat <= BOUNDARY_TOL:
        est.lambda_mle = 0.0
        est.boundary = True
        return est
    _, curv = _score_and_curvature(lam_hat, data)
    if curv < 0.0:
        se = 1.0 / np.sqrt(-curv)
        est.fisher_se = float(se)
        est.ci_lo = float(max(0.0, lam_hat - 1.96 * se))
        est.ci_hi = float(lam_hat + 1.96 * se)
    else:
        est.warning = "non-negative curvature at the optimum; no Fisher interval"
    return est


@dataclass(frozen=True)
class PriorSpec:
    """Gamma prior over lam with shape k and rate theta (mean k / theta)."""

    shape: float
    rate: float

    def __post_init__(self):
        if self.shape <= 0 or self.rate <= 0:
            raise RejectedInputError("Gamma shape and rate must be > 0")

    def logpdf(self, lam: np.ndarray) -> np.ndarray:
        return stats.gamma.logpdf(lam, a=self.shape, scale=1.0 / self.rate)


DEFAULT_PRIOR = PriorSpec(2.0, 1.0)
SENSITIVITY_PRIORS = (PriorSpec(1.0, 0.5), PriorSpec(2.0, 1.0), PriorSpec(3.0, 1.0))


def bayes_lambda(
    data: ChoiceDataset,
    prior: PriorSpec = DEFAULT_PRIOR,
    lambda_max: float = LAMBDA_MAX,
    step: float = GRID_STEP,
) -> LambdaEstimate:
    """Grid posterior over lam: exp(loglik) times the Gamma prior density.

    Normalization, posterior mean, and SD use the trapezoid rule; the 95%
    HDI is the smallest set of grid cells holding at least 0.95 posterior
    mass, reported as its spanning interval.  Mass piling up at the top of
    the grid raises :class:`WidenGridError`.
    """
    if step <= 0:
        raise RejectedInputError("grid step must be > 0")
    if data.n == 0:
        raise EmptyDatasetError("no observations")
    grid = np.arange(0.0, lambda_max + step / 2.0, step)
    logpost = loglik_grid(grid, data) + prior.logpdf(grid)
    logpost -= logpost.max()
    density = np.exp(logpost)
    z = np.trapezoid(density, grid)
    density /= z

    mean = float(np.trapezoid(grid * density, grid))
    second = float(np.trapezoid(grid**2 * density, grid))
    sd = float(np.sqrt(max(second - mean**2, 0.0)))

    weights = np.full(len(grid), step)
    weights[0] = weights[-1] = step / 2.0
    cell_mass = density * weights
    cell_mass /= cell_mass.sum()

    edge = max(2, int(0.01 * len(grid)))
    if cell_mass[-edge:].sum() > 0.1:
        raise WidenGridError(
            f"posterior mass {cell_mass[-edge:].sum():.3f} within {edge} cells of "
            f"lambda_max={lambda_max}; widen the grid"
        )

    order = np.argsort(density)[::-1]
    cum = np.cumsum(cell_mass[order])
    take = order[: int(np.searchsorted(cum, 0.95)) + 1]
    est = LambdaEstimate(agent=data.agent, game_kind=_kind_name(data), n=data.n)
    est.post_mean = mean
    est.post_sd = sd
    est.hdi_lo = float(grid[take].min())
    est.hdi_hi = float(grid[take].max())
    est.hdi_mass = float(cell_mass[take].sum())
    return est


def estimate_lambda(
    data: ChoiceDataset,
    prior: PriorSpec = DEFAULT_PRIOR,
    lambda_max: float = LAMBDA_MAX,
    step: float = GRID_STEP,
) -> LambdaEstimate:
    """Combined MLE and Bayesian summaries for one dataset."""
    est = mle_lambda(data, lambda_max=lambda_max)
    bay = bayes_lambda(data, prior=prior, lambda_max=lambda_max, step=step)
    est.post_mean, est.post_sd = bay.post_mean, bay.post_sd
    est.hdi_lo, est.hdi_hi, est.hdi_mass = bay.hdi_lo, bay.hdi_hi, bay.hdi_mass
    return est


def prior_sensitivity(
    data: ChoiceDataset,
    priors: Sequence[PriorSpec] = SENSITIVITY_PRIORS,
    lambda_max: float = LAMBDA_MAX,
    step: float = GRID_STEP,
) -> dict:
    """Posterior means under each prior and their max - min range."""
    if len(priors) < 2:
        raise RejectedInputError("need at least 2 priors")
    means = {}
    for p in priors:
        means[(p.shape, p.rate)] = bayes_lambda(
            data, prior=p, lambda_max=lambda_max, step=step
        ).post_mean
    values = list(means.values())
    return {"posterior_means": means, "range": max(values) - min(values)}


# ---------------------------------------------------------------------------
# Model comparison (BIC)
# ---------------------------------------------------------------------------


@dataclass
class BicReport:
    """BIC comparison of the one-parameter logit model against the
    zero-parameter equilibrium and uniform baselines."""

    n: int
    lambda_hat: float
    loglik: dict[str, float]
    bic: dict[str, float]
    weights: dict[str, float]
    winner: str


def bic_compare(data: ChoiceDataset) -> BicReport:
    """Compare QRE (k=1, at the MLE), Nash (k=0), and Random (k=0) by BIC.

    Requires a claim-game dataset with the bluff/honest binarization on
    sender rows (see :func:`build_sc_bic_dataset`): the Nash likelihood uses
    the profile bluff probability per private value and the deterministic
    threshold-5 challenge rule, with a 1e-6 floor on zero-probability
    predictions; Random is uniform over each row's legal actions.
    """
    if data.n < 2:
        raise RejectedInputError("need at least 2 observations")
    if data.row_kind is None or data.values is None:
        raise RejectedInputError("dataset lacks the claim-game binarization metadata")

    est = mle_lambda(data)
    ll_qre = -est.nll

    ll_nash = 0.0
    for i in range(data.n):
        if data.row_kind[i] == ROW_SENDER_BINARY:
            beta = sc_bluff_prob(int(data.values[i]))
            p = beta if data.chosen[i] == 1 else 1.0 - beta
        else:
            p = 1.0 if data.chosen[i] == SC_RECEIVER_THRESHOLD - 1 else 0.0
        ll_nash += np.log(max(p, NASH_PROB_FLOOR))

    ll_random = float(-np.log(data.n_actions()).sum())

    n = data.n
    ll = {"qre": float(ll_qre), "nash": float(ll_nash), "random": float(ll_random)}
    k = {"qre": 1.0, "nash": 0.0, "random": 0.0}
    bic = {m: k[m] * np.log(n) - 2.0 * ll[m] for m in ll}
    shift = min(bic.values())
    raw = {m: np.exp(-(bic[m] - shift) / 2.0) for m in bic}
    total = sum(raw.values())
    weights = {m: raw[m] / total for m in raw}
    winner = min(bic, key=lambda m: (bic[m], m))
    return BicReport(
        n=n,
        lambda_hat=est.lambda_mle,
        loglik=ll,
        bic={m: float(b) for m, b in bic.items()},
        weights=weights,
        winner=winner,
    )


# ---------------------------------------------------------------------------
# Dataset builders
# ---------------------------------------------------------------------------


def _kind_name(data: ChoiceDataset) -> str:
    return data.game_kind.value if data.game_kind else "synthetic"


def _agent_sides(rec: GameRecord, agent: str) -> list[str]:
    sides = []
    if rec.agent_a == agent:
        sides.append("a")
    if rec.agent_b == agent:
        sides.append("b")
    return sides


def _pooled_sc_stats(records: list[GameRecord], agent: str):
    """Dataset-pooled opponent frequencies: the challenge curve from threshold
    draws, the claim distribution, and the per-claim bluff posterior."""
    thresholds: list[int] = []
    claims: list[int] = []
    bluffs: list[bool] = []
    for rec in records:
        for side in _agent_sides(rec, agent):
            opp = "b" if side == "a" else "a"
            for rnd in rec.rounds:
                action = rnd.action_a if opp == "a" else rnd.action_b
                private = rnd.private_a if opp == "a" else rnd.private_b
                thresholds.append(action["threshold"])
                claims.append(action["claim"])
                bluffs.append(action["claim"] > private["value"])
    thresholds_arr = np.array(thresholds)
    claims_arr = np.array(claims)
    bluffs_arr = np.array(bluffs)
    levels = np.arange(1, 7)
    challenge = (thresholds_arr[None, :] <= levels[:, None]).mean(axis=1)
    claim_counts = (claims_arr[None, :] == levels[:, None]).sum(axis=1)
    claim_probs = claim_counts / claim_counts.sum()
    with np.errstate(invalid="ignore"):
        bluff_post = np.where(
            claim_counts > 0,
            np.array([(bluffs_arr & (claims_arr == c)).sum() for c in levels])
            / np.maximum(claim_counts, 1),
            0.0,
        )
    return challenge, claim_probs, bluff_post


def build_choice_dataset(
    records: list[GameRecord],
    agent: str,
    kind: GameKind,
    include_receiver: bool = True,
) -> ChoiceDataset:
    """One observation per (round, decision) for the given agent.

    Opponent strategy is the dataset-pooled empirical aggregate: the claim
    game uses the pooled challenge curve for sender utility vectors (keyed by
    private value) and the pooled claim/bluff statistics for receiver rows;
    the repeated PD uses the pooled cooperation frequency.  Sender and
    receiver decisions are pooled by default; ``include_receiver=False``
    restricts to sender rows.
    """
    recs = [r for r in records if r.game_kind is kind and agent in (r.agent_a, r.agent_b)]
    if not recs:
        raise EmptyDatasetError(f"agent {agent!r} absent from {kind.value} records")

    rows: list[np.ndarray] = []
    chosen: list[int] = []
    row_kind: list[int] = []
    values: list[int] = []

    if kind is GameKind.STRATEGIC_CLAIM:
        challenge, claim_probs, bluff_post = _pooled_sc_stats(recs, agent)
        sender_utils = {v: sc_expected_utilities(v, challenge) for v in range(1, 7)}
        receiver_utils = sc_receiver_utilities(claim_probs, bluff_post)
        for rec in recs:
            for side in _agent_sides(rec, agent):
                for rnd in rec.rounds:
                    action = rnd.action_a if side == "a" else rnd.action_b
                    private = rnd.private_a if side == "a" else rnd.private_b
                    v = private["value"]
                    rows.append(sender_utils[v])
                    chosen.append(action["claim"] - v)
                    row_kind.append(ROW_SENDER)
                    values.append(v)
                    if include_receiver:
                        rows.append(receiver_utils)
                        chosen.append(action["threshold"] - 1)
                        row_kind.append(ROW_RECEIVER)
                        values.append(-1)
    elif kind is GameKind.REPEATED_PD:
        coop_n = coop_c = 0
        for rec in recs:
            for side in _agent_sides(rec, agent):
                opp = "b" if side == "a" else "a"
                for rnd in rec.rounds:
                    action = rnd.action_a if opp == "a" else rnd.action_b
                    coop_n += 1
                    coop_c += action["move"] == "C"
        coop = coop_c / coop_n
        stage = np.array([3.0 * coop, 4.0 * coop + 1.0])
        for rec in recs:
            for side in _agent_sides(rec, agent):
                for rnd in rec.rounds:
                    action = rnd.action_a if side == "a" else rnd.action_b
                    rows.append(stage)
                    chosen.append(0 if action["move"] == "C" else 1)
                    row_kind.append(ROW_SENDER)
                    values.append(-1)
    else:
        raise RejectedInputError(f"no likelihood defined for {kind.value}")

    utilities, mask, chosen_arr = _pack_rows(rows, chosen)
    return ChoiceDataset(
        agent=agent,
        game_kind=kind,
        utilities=utilities,
        mask=mask,
        chosen=chosen_arr,
        row_kind=np.array(row_kind),
        values=np.array(values),
    )


def build_sc_bic_dataset(records: list[GameRecord], agent: str) -> ChoiceDataset:
    """Claim-game dataset for BIC comparison.

    Sender decisions are binarized to honest-vs-bluff (values 1..5; the top
    value has no bluff available), with the bluff utility taken at the
    profile's top-claim target; receiver decisions stay at threshold level.
    """
    recs = [
        r
        for r in records
        if r.game_kind is GameKind.STRATEGIC_CLAIM and agent in (r.agent_a, r.agent_b)
    ]
    if not recs:
        raise EmptyDatasetError(f"agent {agent!r} absent from claim-game records")
    challenge, claim_probs, bluff_post = _pooled_sc_stats(recs, agent)
    sender_utils = {}
    for v in range(1, 6):
        full = sc_expected_utilities(v, challenge)
        sender_utils[v] = np.array([full[0], full[-1]])  # [honest, bluff-to-6]
    receiver_utils = sc_receiver_utilities(claim_probs, bluff_post)

    rows: list[np.ndarray] = []
    chosen: list[int] = []
    row_kind: list[int] = []
    values: list[int] = []
    for rec in recs:
        for side in _agent_sides(rec, agent):
            for rnd in rec.rounds:
                action = rnd.action_a if side == "a" else rnd.action_b
                private = rnd.private_a if side == "a" else rnd.private_b
                v = private["value"]
                if v < 6:
                    rows.append(sender_utils[v])
                    chosen.append(1 if action["claim"] > v else 0)
                    row_kind.append(ROW_SENDER_BINARY)
                    values.append(v)
                rows.append(receiver_utils)
                chosen.append(action["threshold"] - 1)
                row_kind.append(ROW_RECEIVER)
                values.append(-1)

    utilities, mask, chosen_arr = _pack_rows(rows, chosen)
    return ChoiceDataset(
        agent=agent,
        game_kind=GameKind.STRATEGIC_CLAIM,
        utilities=utilities,
        mask=mask,
        chosen=chosen_arr,
        row_kind=np.array(row_kind),
        values=np.array(values),
    )


def truncate_dataset(data: ChoiceDataset, n: int) -> ChoiceDataset:
    """First ``n`` observations, preserving metadata."""
    return ChoiceDataset(
        agent=data.agent,
        game_kind=data.game_kind,
        utilities=data.utilities[:n],
        mask=data.mask[:n],
        chosen=data.chosen[:n],
        row_kind=None if data.row_kind is None else data.row_kind[:n],
        values=None if data.values is None else data.values[:n],
    )


def sample_sc_choice_dataset(
    lam: float, n: int, seed: int, include_receiver: bool = True
) -> ChoiceDataset:
    """Synthetic claim-game choices drawn from the logit model at ``lam``.

    Decision contexts mirror the real dataset builder: sender rows with
    uniform private values against the equilibrium challenge curve, and
    (optionally, alternating) receiver rows against the equilibrium claim
    statistics.  Because the generating utilities equal the estimating
    utilities, this is the recovery oracle for the estimators.
    """
    if lam < 0:
        raise RejectedInputError("lam must be >= 0")
    rng = make_rng(seed)
    challenge = sc_equilibrium_challenge_probs()
    sender_utils = {v: sc_expected_utilities(v, challenge) for v in range(1, 7)}
    receiver_utils = sc_receiver_utilities(
        sc_equilibrium_claim_distribution(), sc_equilibrium_bluff_posteriors()
    )

    row_kind = np.full(n, ROW_SENDER)
    if include_receiver:
        row_kind[1::2] = ROW_RECEIVER
    values = np.full(n, -1)
    sender_rows = np.flatnonzero(row_kind == ROW_SENDER)
    values[sender_rows] = rng.integers(1, 7, size=len(sender_rows))
    uniform = rng.random(n)

    width = 7
    utilities = np.zeros((n, width))
    mask = np.zeros((n, width), dtype=bool)
    chosen = np.zeros(n, dtype=int)
    contexts = [(ROW_RECEIVER, -1, receiver_utils)] + [
        (ROW_SENDER, v, sender_utils[v]) for v in range(1, 7)
    ]
    for kind, v, utils in contexts:
        idx = np.flatnonzero((row_kind == kind) & (values == v))
        if len(idx) == 0:
            continue
        utilities[idx, : len(utils)] = utils
        mask[idx, : len(utils)] = True
        z = np.exp(lam * (utils - utils.max()))
        cdf = np.cumsum(z / z.sum())
        chosen[idx] = np.minimum(np.searchsorted(cdf, uniform[idx]), len(utils) - 1)
    return ChoiceDataset(
        agent=f"synthetic-qre-{lam}",
        game_kind=None,
        utilities=utilities,
        mask=mask,
        chosen=chosen,
        row_kind=row_kind,
        values=values,
    )
