"""Repeated prisoner's dilemma with cheap-talk messages and a hidden horizon.

Stage payoffs (T, R, P, S) = (5, 3, 1, 0); the realized horizon is drawn
uniformly from {7..15} at condition-sampling time and never shown to the
players (the common upper bound is 15).  Messages are recorded verbatim but
carry no payoff.

Round-record schema: ``action_{a,b} = {"move": "C"|"D", "message": str}``,
flags ``cooperated_{a,b}``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

import numpy as np

from ..core import RejectedInputError, RoundRecord, RPD_HORIZON_MAX, RPD_HORIZON_MIN
from .protocol import validate_action

#: Stage payoffs for (my move, opponent move).
STAGE_PAYOFFS: dict[tuple[str, str], tuple[float, float]] = {
    ("C", "C"): (3.0, 3.0),
    ("C", "D"): (0.0, 5.0),
    ("D", "C"): (5.0, 0.0),
    ("D", "D"): (1.0, 1.0),
}


@dataclass(frozen=True)
class RPDConfig:
    temptation: float = 5.0
    reward: float = 3.0
    punishment: float = 1.0
    sucker: float = 0.0
    horizon_min: int = RPD_HORIZON_MIN
    horizon_max: int = RPD_HORIZON_MAX


def rpd_continuation(t: int) -> float:
    """Round-dependent continuation probability (15 - t) / (16 - t).

    Crosses the folk-theorem boundary 0.5 at t = 14 and reaches 0 at the
    final possible round.
    """
    if not 1 <= t <= RPD_HORIZON_MAX:
        raise RejectedInputError(f"round {t} outside 1..{RPD_HORIZON_MAX}")
    return (15.0 - t) / (16.0 - t)


def play(
    payload: dict[str, Any],
    agent_a,
    agent_b,
    rng_a: np.random.Generator,
    rng_b: np.random.Generator,
) -> list[RoundRecord]:
    horizon = payload["horizon"]
    rounds: list[RoundRecord] = []
    history_a: list[dict] = []
    history_b: list[dict] = []
    score_a = score_b = 0.0

    for t in range(1, horizon + 1):
        obs_a = _observation(t, history_a, score_a, score_b)
        obs_b = _observation(t, history_b, score_b, score_a)
        act_a = agent_a.act(obs_a, rng_a)
        validate_action(obs_a, act_a)
        act_b = agent_b.act(obs_b, rng_b)
        validate_action(obs_b, act_b)
        move_a, move_b = act_a["move"], act_b["move"]
        pa, pb = STAGE_PAYOFFS[(move_a, move_b)]
        score_a += pa
        score_b += pb
        rounds.append(
            RoundRecord(
                t=t,
                private_a={},
                private_b={},
                action_a={"move": move_a, "message": act_a.get("message", "")},
                action_b={"move": move_b, "message": act_b.get("message", "")},
                payoff_a=pa,
                payoff_b=pb,
                flags={"cooperated_a": move_a == "C", "cooperated_b": move_b == "C"},
            )
        )
        history_a.append(
            {"round": t, "you": {"move": move_a, "payoff": pa}, "opponent": {"move": move_b, "payoff": pb}}
        )
        history_b.append(
            {"round": t, "you": {"move": move_b, "payoff": pb}, "opponent": {"move": move_a, "payoff": pa}}
        )
    return rounds


def _observation(t, history, score_you, score_opp) -> dict[str, Any]:
    # The realized horizon stays hidden; only the common upper bound is shown.
    return {
        "game_kind": "repeated_pd",
        "role": "player",
        "round": t,
        "private_state": {"max_rounds": RPD_HORIZON_MAX},
        "legal_actions": {"moves": ["C", "D"]},
        "history": list(history),
        "scores": {"you": score_you, "opponent": score_opp},
    }
