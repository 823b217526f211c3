"""Closed-form equilibrium profile for the claim-and-challenge game and a
generic logit quantal-response fixed-point solver for finite stage games.

The claim-game profile: low values (v <= 3) bluff by claiming 6 with
probability ``2 / (8 - v)``, values >= 4 claim honestly, and the receiver
challenges claims at or above threshold 5.  This profile is an approximation
(a deterministic receiver threshold cannot sustain exact sender indifference)
but its conditional bluff rate is the behavioral prediction target used by the
analytics module.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .core import (
    RejectedInputError,
    SC_THRESHOLD_MAX,
    SC_THRESHOLD_MIN,
    SC_VALUE_MAX,
    SC_VALUE_MIN,
)

#: Receiver challenge threshold of the equilibrium profile.
SC_RECEIVER_THRESHOLD = 5

#: All bluffs in the profile land on the top claim.
SC_BLUFF_CLAIM = 6

#: Posterior bluff probability that would make the challenger indifferent.
SC_INDIFFERENCE_POSTERIOR = 2.0 / 5.0


def sc_bluff_prob(v: int) -> float:
    """Equilibrium bluff probability for a sender holding value ``v``.

    ``2 / (8 - v)`` for v <= 3, zero for v >= 4 (honest claims).
    """
    if not SC_VALUE_MIN <= v <= SC_VALUE_MAX:
        raise RejectedInputError(f"value {v} outside {{1..6}}")
    if v <= 3:
        return 2.0 / (8.0 - v)
    return 0.0


def sc_conditional_bluff_rate() -> float:
    """Mean bluff rate conditional on holding a low value (v <= 3).

    Exactly (2/7 + 2/6 + 2/5) / 3 = 107/315, reported as 0.340.
    """
    return (sc_bluff_prob(1) + sc_bluff_prob(2) + sc_bluff_prob(3)) / 3.0


def sc_posterior_bluff(c: int) -> float:
    """Bayes posterior P(bluff | claim c) under the equilibrium profile.

    All bluffs claim 6, so the posterior is 107/212 at c = 6 and zero at
    c in {4, 5}.  Claims below 4 are never reached by bluffing and are
    rejected.
    """
    if c not in (4, 5, 6):
        raise RejectedInputError(f"claim {c} outside {{4, 5, 6}}")
    if c < SC_BLUFF_CLAIM:
        return 0.0
    bluff_mass = sum(sc_bluff_prob(v) / 6.0 for v in (1, 2, 3))
    honest_mass = 1.0 / 6.0
    return bluff_mass / (bluff_mass + honest_mass)


def sc_equilibrium_challenge_probs() -> np.ndarray:
    """Challenge probability per claim level 1..6 under the threshold-5 receiver."""
    claims = np.arange(SC_VALUE_MIN, SC_VALUE_MAX + 1)
    return (claims >= SC_RECEIVER_THRESHOLD).astype(float)


def sc_equilibrium_claim_distribution() -> np.ndarray:
    """Marginal claim distribution (claims 1..6) induced by the profile."""
    p = np.zeros(6)
    for v in range(1, 7):
        beta = sc_bluff_prob(v)
        p[v - 1] += (1.0 - beta) / 6.0
        p[SC_BLUFF_CLAIM - 1] += beta / 6.0
    return p


def sc_equilibrium_bluff_posteriors() -> np.ndarray:
    """P(bluff | claim c) per claim level 1..6 under the profile."""
    post = np.zeros(6)
    post[SC_BLUFF_CLAIM - 1] = sc_posterior_bluff(SC_BLUFF_CLAIM)
    return post


def sc_expected_utilities(v: int, challenge_probs: Sequence[float]) -> np.ndarray:
    """Sender expected utility per legal claim {v..6} against a challenge curve.

    ``challenge_probs[c - 1]`` is the probability that a claim of level c gets
    challenged.  An honest claim pays c whether challenged or not (the false
    accusation penalty falls on the challenger); a bluff pays c + 2
    unchallenged and -4 when caught.
    """
    if not SC_VALUE_MIN <= v <= SC_VALUE_MAX:
        raise RejectedInputError(f"value {v} outside {{1..6}}")
    q = np.asarray(challenge_probs, dtype=float)
    if q.shape != (6,):
        raise RejectedInputError("challenge_probs must have one entry per claim level 1..6")
    claims = np.arange(v, SC_VALUE_MAX + 1)
    bluff = (claims > v).astype(float)
    qc = q[claims - 1]
    return (1.0 - qc) * (claims + 2.0 * bluff) + qc * (-4.0 * bluff + claims * (1.0 - bluff))


def sc_receiver_utilities(
    claim_probs: Sequence[float], bluff_posteriors: Sequence[float]
) -> np.ndarray:
    """Receiver expected utility per threshold {1..7}.

    Challenging a claim of level c pays +3 against a bluff and -2 against an
    honest claim, so each challenged level contributes
    ``P(c) * (5 * P(bluff|c) - 2)``.  Threshold 7 never challenges.
    """
    p = np.asarray(claim_probs, dtype=float)
    pb = np.asarray(bluff_posteriors, dtype=float)
    if p.shape != (6,) or pb.shape != (6,):
        raise RejectedInputError("claim_probs and bluff_posteriors must cover claims 1..6")
    gain = p * (5.0 * pb - 2.0)
    thresholds = np.arange(SC_THRESHOLD_MIN, SC_THRESHOLD_MAX + 1)
    return np.array([gain[t - 1 :].sum() if t <= 6 else 0.0 for t in thresholds])


# ---------------------------------------------------------------------------
# Logit quantal response fixed point
# ---------------------------------------------------------------------------


def logit_choice(utilities: np.ndarray, lam: float) -> np.ndarray:
    """Logit choice probabilities exp(lam * U) / sum, computed max-shifted."""
    z = lam * np.asarray(utilities, dtype=float)
    z = z - z.max()
    w = np.exp(z)
    return w / w.sum()


@dataclass(frozen=True)
class StageGame:
    """A finite two-player stage game in expected-utility form.

    ``payoffs[i]`` has shape (n_actions_i, n_actions_other); entry (a, b) is
    player i's payoff when i plays a and the opponent plays b.  Expected
    utilities against a mixed opponent follow by matrix-vector product.
    """

    payoffs: tuple[np.ndarray, np.ndarray]

    def n_actions(self, player: int) -> int:
        return self.payoffs[player].shape[0]

    def expected_utilities(self, player: int, opp_strategy: np.ndarray) -> np.ndarray:
        return self.payoffs[player] @ opp_strategy


def matching_pennies() -> StageGame:
    m = np.array([[1.0, -1.0], [-1.0, 1.0]])
    return StageGame((m, -m.T))


@dataclass
class QREProfile:
    """A logit-QRE fixed point (or best iterate when not converged)."""

    lam: float
    strategies: list[np.ndarray]
    residual: float
    converged: bool
    iterations: int


def qre_fixed_point(
    game: StageGame,
    lam: float,
    tol: float = 1e-10,
    max_iter: int = 10_000,
    damping: float = 0.5,
) -> QREProfile:
    """Solve for the logit quantal-response fixed point at rationality ``lam``.

    Damped iteration ``sigma <- (1 - a) * sigma + a * logit(U(sigma))`` from
    the uniform profile until the sup-norm change drops below ``tol``.  A
    fixed point exists for every lam >= 0; non-convergence within
    ``max_iter`` returns the best iterate flagged unconverged.
    """
    if lam < 0:
        raise RejectedInputError("lam must be >= 0")
    if tol <= 0:
        raise RejectedInputError("tol must be > 0")
    sigma = [np.full(game.n_actions(i), 1.0 / game.n_actions(i)) for i in (0, 1)]
    residual = np.inf
    for it in range(1, max_iter + 1):
        target = [
            logit_choice(game.expected_utilities(i, sigma[1 - i]), lam) for i in (0, 1)
        ]
        new = [(1.0 - damping) * sigma[i] + damping * target[i] for i in (0, 1)]
        new = [s / s.sum() for s in new]
        residual = max(float(np.max(np.abs(new[i] - sigma[i]))) for i in (0, 1))
        sigma = new
        if residual < tol:
            return QREProfile(lam, sigma, residual, True, it)
    return QREProfile(lam, sigma, residual, False, max_iter)
