"""Synthetic decision policies with known rationality.

These agents are the ground truth for every estimator: the logit agent draws
actions from the quantal-response distribution at a known lam, the
equilibrium agent plays the closed-form claim-game profile exactly, the
random agent is the uniform baseline, and the smoothing agent implements the
exponential-smoothing / partial-best-response learning model whose self-play
bluff rate contracts toward the equilibrium rate geometrically.

In games without a specific prescription (word convergence, clue-guessing,
the auction control) the smoothing agent falls back to equilibrium play; its
learning model is specific to the claim game's bluff decision.
"""

from __future__ import annotations

import math
from typing import Any

import numpy as np

from ..core import RejectedInputError
from ..equilibrium import (
    logit_choice,
    sc_bluff_prob,
    sc_conditional_bluff_rate,
    sc_expected_utilities,
    sc_receiver_utilities,
    SC_BLUFF_CLAIM,
    SC_RECEIVER_THRESHOLD,
)
from ..games.same_word import salience_utilities
from ..games.text_dixit import guess_posteriors
from .base import AgentSpec, rpd_coop_freq, sc_beliefs

#: Width of the belief band inside which the smoothing agent tracks its
#: belief; outside the band it plays the equilibrium rate.  Chosen so that
#: every belief in [0, 1] is in-band and kappa is the operative parameter;
#: narrower bands reintroduce a nonlinearity that visibly distorts the
#: self-play contraction rate.
SMOOTHING_BAND = 0.67


def smoothing_update(belief: float, observed_bluff: bool, eta: float) -> float:
    """Exponential-smoothing belief update: (1 - eta) * belief + eta * 1[bluff]."""
    if not 0.0 <= belief <= 1.0:
        raise RejectedInputError("belief must lie in [0, 1]")
    if not 0.0 <= eta <= 1.0:
        raise RejectedInputError("eta must lie in [0, 1]")
    return (1.0 - eta) * belief + eta * (1.0 if observed_bluff else 0.0)


def smoothing_bluff_prob(belief: float, kappa: float, band: float = SMOOTHING_BAND) -> float:
    """Partial best response: beta* + kappa * (belief - beta*) inside the band.

    Outside the band the agent plays the equilibrium rate beta* itself; the
    equilibrium rate is the unique fixed point of this map.
    """
    if not 0.0 <= kappa < 1.0:
        raise RejectedInputError("kappa must lie in [0, 1)")
    beta_star = sc_conditional_bluff_rate()
    if abs(belief - beta_star) < band:
        p = beta_star + kappa * (belief - beta_star)
    else:
        p = beta_star
    return min(1.0, max(0.0, p))


def smoothing_decide(
    belief: float, kappa: float, band: float, rng: np.random.Generator
) -> bool:
    """Sample the bluff decision for a low-value round."""
    return bool(rng.random() < smoothing_bluff_prob(belief, kappa, band))


class Policy:
    """Base policy: dispatches an observation envelope to a per-game handler."""

    def __init__(self, spec: AgentSpec):
        self.spec = spec
        self.agent_id = spec.id

    def act(self, obs: dict[str, Any], rng: np.random.Generator) -> dict[str, Any]:
        handler = getattr(self, "_act_" + obs["game_kind"])
        return handler(obs, rng)


class QrePolicy(Policy):
    """Logit quantal-response agent at a fixed rationality lam.

    Actions are sampled from exp(lam * U) over the legal set, with expected
    utilities computed against in-game empirical opponent frequencies
    initialized at the equilibrium profile.  lam = 0 is exactly uniform over
    every legal action set.
    """

    def __init__(self, spec: AgentSpec):
        super().__init__(spec)
        self.lam = spec.lam

    def _sample(self, utilities: np.ndarray, rng: np.random.Generator) -> int:
        return int(rng.choice(len(utilities), p=logit_choice(utilities, self.lam)))

    def _act_strategic_claim(self, obs, rng):
        v = obs["private_state"]["value"]
        beliefs = sc_beliefs(obs["history"])
        claim_utils = sc_expected_utilities(v, beliefs.challenge_probs)
        claim = v + self._sample(claim_utils, rng)
        threshold_utils = sc_receiver_utilities(beliefs.claim_probs, beliefs.bluff_posteriors)
        threshold = 1 + self._sample(threshold_utils, rng)
        return {"claim": claim, "threshold": threshold}

    def _act_repeated_pd(self, obs, rng):
        coop = rpd_coop_freq(obs["history"])
        utils = np.array([3.0 * coop, 4.0 * coop + 1.0])  # [C, D] stage utilities
        move = ("C", "D")[self._sample(utils, rng)]
        return {"move": move, "message": ""}

    def _act_say_the_same_thing(self, obs, rng):
        utils = salience_utilities(
            obs["private_state"]["your_last_word"],
            obs["private_state"]["opponent_last_word"],
        )
        return {"word": obs["legal_actions"]["words"][self._sample(utils, rng)]}

    def _act_text_dixit(self, obs, rng):
        if obs["role"] == "storyteller":
            return self._tell(obs, rng)
        return self._guess(obs, rng)

    def _tell(self, obs, rng):
        state = obs["private_state"]
        scenes = [{"tokens": toks} for toks in state["scene_tokens"]]
        bank = obs["legal_actions"]["bank"]
        scores = _clue_token_scores(bank, scenes, state["target"])
        clue = _plackett_luce_sample(bank, scores, self.lam, 3, rng)
        posterior = guess_posteriors(scenes, clue)
        pick_probs = logit_choice(100.0 * posterior, self.lam)
        predicted = float(np.dot(pick_probs, 100.0 * posterior))
        return {"clue": clue, "predicted_confidence": min(100.0, max(0.0, predicted))}

    def _guess(self, obs, rng):
        state = obs["private_state"]
        scenes = [{"tokens": toks} for toks in state["scene_tokens"]]
        posterior = guess_posteriors(scenes, state["clue"])
        pick = self._sample(100.0 * posterior, rng)
        return {"guess": pick + 1, "confidence": float(100.0 * posterior[pick])}

    def _act_auction(self, obs, rng):
        v = obs["private_state"]["value"]
        grid = np.arange(0.0, math.floor(v) + 1.0)
        # Believed opponent: half-value bidding against U[0, 100] values.
        win_prob = np.minimum(grid / 50.0, 1.0)
        utils = win_prob * (v - grid)
        return {"bid": float(grid[self._sample(utils, rng)])}


class NashPolicy(Policy):
    """Plays the closed-form equilibrium profile of each game.

    Claim game: bluff to the top claim with probability 2/(8-v) for low
    values, honest otherwise, challenge threshold 5.  Repeated PD: defect
    (the subgame-perfect prediction).  Word game: the focal-point argmax.
    Clue game: the most discriminating clue with an oracle-calibrated
    prediction.  Auction: the risk-neutral half-value bid.
    """

    def _act_strategic_claim(self, obs, rng):
        v = obs["private_state"]["value"]
        if v <= 3 and rng.random() < sc_bluff_prob(v):
            claim = SC_BLUFF_CLAIM
        else:
            claim = v
        return {"claim": claim, "threshold": SC_RECEIVER_THRESHOLD}

    def _act_repeated_pd(self, obs, rng):
        return {"move": "D", "message": ""}

    def _act_say_the_same_thing(self, obs, rng):
        utils = salience_utilities(
            obs["private_state"]["your_last_word"],
            obs["private_state"]["opponent_last_word"],
        )
        return {"word": obs["legal_actions"]["words"][int(np.argmax(utils))]}

    def _act_text_dixit(self, obs, rng):
        state = obs["private_state"]
        scenes = [{"tokens": toks} for toks in state["scene_tokens"]]
        if obs["role"] == "storyteller":
            bank = obs["legal_actions"]["bank"]
            scores = _clue_token_scores(bank, scenes, state["target"])
            order = sorted(range(len(bank)), key=lambda i: (-scores[i], bank[i]))
            clue = [bank[i] for i in order[:3]]
            posterior = guess_posteriors(scenes, clue)
            best = int(np.argmax(posterior))
            return {"clue": clue, "predicted_confidence": float(100.0 * posterior[best])}
        posterior = guess_posteriors(scenes, state["clue"])
        pick = int(np.argmax(posterior))
        return {"guess": pick + 1, "confidence": float(100.0 * posterior[pick])}

    def _act_auction(self, obs, rng):
        return {"bid": obs["private_state"]["value"] / 2.0}


class RandomPolicy(Policy):
    """Uniform baseline.

    In the claim game the bluff decision itself is a fair coin (bluff target
    uniform among the higher claims), so the conditional bluff rate of the
    baseline is exactly 0.50.
    """

    def _act_strategic_claim(self, obs, rng):
        v = obs["private_state"]["value"]
        if v < 6 and rng.random() < 0.5:
            claim = int(rng.integers(v + 1, 7))
        else:
            claim = v
        return {"claim": claim, "threshold": int(rng.integers(1, 8))}

    def _act_repeated_pd(self, obs, rng):
        return {"move": ("C", "D")[int(rng.integers(2))], "message": ""}

    def _act_say_the_same_thing(self, obs, rng):
        words = obs["legal_actions"]["words"]
        return {"word": words[int(rng.integers(len(words)))]}

    def _act_text_dixit(self, obs, rng):
        if obs["role"] == "storyteller":
            bank = obs["legal_actions"]["bank"]
            k = int(rng.integers(2, 5))
            picks = rng.choice(len(bank), size=k, replace=False)
            return {
                "clue": [bank[i] for i in picks],
                "predicted_confidence": int(rng.integers(0, 101)),
            }
        return {
            "guess": int(rng.integers(1, 7)),
            "confidence": int(rng.integers(0, 101)),
        }

    def _act_auction(self, obs, rng):
        v = obs["private_state"]["value"]
        return {"bid": float(rng.uniform(0.0, v))}


class SmoothingPolicy(Policy):
    """Exponential-smoothing belief learner with partial best response.

    The bluff-rate belief starts at ``initial_belief`` and is refreshed from
    the revealed history on every opportunity round of the opponent (rounds
    where the opponent held a low value and so could have bluffed).  With a
    low value the agent bluffs with probability
    ``beta* + kappa * (belief - beta*)``; everything else follows the
    equilibrium profile.
    """

    def __init__(self, spec: AgentSpec):
        super().__init__(spec)
        self._nash = NashPolicy(spec)

    def current_belief(self, history: list[dict]) -> float:
        belief = self.spec.initial_belief
        for entry in history:
            opp = entry["opponent"]
            if opp["value"] <= 3:
                belief = smoothing_update(belief, opp["claim"] > opp["value"], self.spec.eta)
        return belief

    def _act_strategic_claim(self, obs, rng):
        v = obs["private_state"]["value"]
        claim = v
        if v <= 3:
            belief = self.current_belief(obs["history"])
            if smoothing_decide(belief, self.spec.kappa, SMOOTHING_BAND, rng):
                claim = SC_BLUFF_CLAIM
        return {"claim": claim, "threshold": SC_RECEIVER_THRESHOLD}

    def __getattr__(self, name):
        # All non-claim-game handlers delegate to equilibrium play.
        if name.startswith("_act_"):
            return getattr(self._nash, name)
        raise AttributeError(name)


def _clue_token_scores(bank, scenes, target: int) -> np.ndarray:
    """Discrimination score per bank token: presence in the target scene minus
    the fraction of decoys that also contain it."""
    target_tokens = set(scenes[target - 1]["tokens"])
    n_decoys = len(scenes) - 1
    scores = []
    for tok in bank:
        in_target = 1.0 if tok in target_tokens else 0.0
        in_decoys = sum(1.0 for i, s in enumerate(scenes) if i != target - 1 and tok in s["tokens"])
        scores.append(in_target - in_decoys / max(1, n_decoys))
    return np.array(scores)


def _plackett_luce_sample(items, scores, lam, k, rng) -> list:
    """Sample k distinct items by sequential logit draws (uniform at lam = 0)."""
    remaining = list(range(len(items)))
    picked = []
    for _ in range(min(k, len(items))):
        utils = np.array([scores[i] for i in remaining])
        idx = int(rng.choice(len(remaining), p=logit_choice(utils, lam)))
        picked.append(items[remaining[idx]])
        remaining.pop(idx)
    return picked
