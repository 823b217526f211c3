"""Claim-and-challenge engine.

Ten rounds; each round both players privately hold a value in {1..6}, claim at
least that value, and set a challenge threshold in {1..7} (7 = never
challenge).  A player challenges the opponent exactly when the opponent's
claim reaches their own threshold.  Payoffs per round are the sum of a
sender-side and a receiver-side component:

- unchallenged honest claim: c
- unchallenged bluff: c + 2
- caught bluff: -4 to the bluffer, +3 to the challenger
- false accusation: -2 to the challenger; the honest sender still receives c

The last rule (honest sender keeps c under a false challenge) preserves the
value of honest claims and is applied consistently by the expected-utility
helpers in the equilibrium module.

Round-record schema: ``private_{a,b} = {"value": v}``,
``action_{a,b} = {"claim": c, "threshold": t}``, flags ``bluffed_{a,b}``
(claimed above value) and ``challenged_{a,b}`` (that player's claim was
challenged).  Values, claims, and thresholds are revealed to both players
after each round.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

import numpy as np

from ..core import (
    IllegalActionError,
    RoundRecord,
    SC_ROUNDS,
    SC_THRESHOLD_MAX,
    SC_THRESHOLD_MIN,
    SC_VALUE_MAX,
    SC_VALUE_MIN,
)
from .protocol import validate_action


@dataclass(frozen=True)
class SCConfig:
    """Immutable rule constants for the claim game."""

    rounds: int = SC_ROUNDS
    value_min: int = SC_VALUE_MIN
    value_max: int = SC_VALUE_MAX
    threshold_min: int = SC_THRESHOLD_MIN
    threshold_max: int = SC_THRESHOLD_MAX
    unchallenged_bluff_bonus: float = 2.0
    caught_bluff_penalty: float = -4.0
    catch_reward: float = 3.0
    false_accusation_penalty: float = -2.0


def sc_round_payoff(
    claim_a: int,
    value_a: int,
    claim_b: int,
    value_b: int,
    threshold_a: int,
    threshold_b: int,
) -> tuple[float, float]:
    """Round payoffs for both players; each acts as sender and receiver.

    A challenge occurs iff the opponent's claim is at or above one's own
    threshold.
    """
    for claim, value in ((claim_a, value_a), (claim_b, value_b)):
        if not SC_VALUE_MIN <= value <= SC_VALUE_MAX:
            raise IllegalActionError(f"value {value} outside {{1..6}}")
        if claim < value or claim > SC_VALUE_MAX:
            raise IllegalActionError(f"claim {claim} illegal for value {value}")
    for threshold in (threshold_a, threshold_b):
        if not SC_THRESHOLD_MIN <= threshold <= SC_THRESHOLD_MAX:
            raise IllegalActionError(f"threshold {threshold} outside {{1..7}}")

    a_challenges = claim_b >= threshold_a
    b_challenges = claim_a >= threshold_b
    payoff_a = _sender_component(claim_a, value_a, b_challenges) + _receiver_component(
        claim_b, value_b, a_challenges
    )
    payoff_b = _sender_component(claim_b, value_b, a_challenges) + _receiver_component(
        claim_a, value_a, b_challenges
    )
    return payoff_a, payoff_b


def _sender_component(claim: int, value: int, challenged: bool) -> float:
    bluffed = claim > value
    if challenged:
        return -4.0 if bluffed else float(claim)
    return float(claim) + (2.0 if bluffed else 0.0)


def _receiver_component(opp_claim: int, opp_value: int, challenged: bool) -> float:
    if not challenged:
        return 0.0
    return 3.0 if opp_claim > opp_value else -2.0


def play(
    payload: dict[str, Any],
    agent_a,
    agent_b,
    rng_a: np.random.Generator,
    rng_b: np.random.Generator,
) -> list[RoundRecord]:
    values_a, values_b = payload["values_a"], payload["values_b"]
    rounds: list[RoundRecord] = []
    history_a: list[dict] = []
    history_b: list[dict] = []
    score_a = score_b = 0.0

    for t in range(1, SC_ROUNDS + 1):
        va, vb = values_a[t - 1], values_b[t - 1]
        obs_a = _observation(t, va, history_a, score_a, score_b)
        obs_b = _observation(t, vb, history_b, score_b, score_a)
        act_a = agent_a.act(obs_a, rng_a)
        validate_action(obs_a, act_a)
        act_b = agent_b.act(obs_b, rng_b)
        validate_action(obs_b, act_b)

        pa, pb = sc_round_payoff(
            act_a["claim"], va, act_b["claim"], vb, act_a["threshold"], act_b["threshold"]
        )
        score_a += pa
        score_b += pb
        challenged_a = act_a["claim"] >= act_b["threshold"]
        challenged_b = act_b["claim"] >= act_a["threshold"]
        rounds.append(
            RoundRecord(
                t=t,
                private_a={"value": va},
                private_b={"value": vb},
                action_a={"claim": act_a["claim"], "threshold": act_a["threshold"]},
                action_b={"claim": act_b["claim"], "threshold": act_b["threshold"]},
                payoff_a=pa,
                payoff_b=pb,
                flags={
                    "bluffed_a": act_a["claim"] > va,
                    "bluffed_b": act_b["claim"] > vb,
                    "challenged_a": challenged_a,
                    "challenged_b": challenged_b,
                },
            )
        )
        entry_a = _history_entry(t, va, act_a, pa, vb, act_b, pb, challenged_a, challenged_b)
        entry_b = _history_entry(t, vb, act_b, pb, va, act_a, pa, challenged_b, challenged_a)
        history_a.append(entry_a)
        history_b.append(entry_b)
    return rounds


def _observation(t, value, history, score_you, score_opp) -> dict[str, Any]:
    return {
        "game_kind": "strategic_claim",
        "role": "player",
        "round": t,
        "private_state": {"value": value},
        "legal_actions": {
            "claims": list(range(value, SC_VALUE_MAX + 1)),
            "thresholds": list(range(SC_THRESHOLD_MIN, SC_THRESHOLD_MAX + 1)),
        },
        "history": list(history),
        "scores": {"you": score_you, "opponent": score_opp},
    }


def _history_entry(t, v_you, act_you, pay_you, v_opp, act_opp, pay_opp, you_chal, opp_chal):
    # Full post-round revelation: both values and thresholds become public.
    return {
        "round": t,
        "you": {
            "value": v_you,
            "claim": act_you["claim"],
            "threshold": act_you["threshold"],
            "payoff": pay_you,
        },
        "opponent": {
            "value": v_opp,
            "claim": act_opp["claim"],
            "threshold": act_opp["threshold"],
            "payoff": pay_opp,
        },
        "your_claim_challenged": you_chal,
        "opponent_claim_challenged": opp_chal,
    }
