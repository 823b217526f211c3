"""Sealed-bid first-price auction control game.

Each player privately draws a value v from U[0, 100] and submits one bid
b <= v; the highest bidder wins at their own bid (payoff v - b, loser gets 0).
Equal bids split the surplus: each receives (v_i - b) / 2 (a measure-zero
event under continuous values; splitting keeps the game symmetric).

Round-record schema: ``private_{a,b} = {"value": v}``,
``action_{a,b} = {"bid": b}``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

import numpy as np

from ..core import AUCTION_VALUE_MAX, IllegalActionError, RoundRecord
from .protocol import validate_action


@dataclass(frozen=True)
class AuctionConfig:
    value_max: float = AUCTION_VALUE_MAX


def auction_settle(
    value_a: float, bid_a: float, value_b: float, bid_b: float
) -> tuple[float, float]:
    """Winner pays their own bid; ties split the surplus."""
    for value, bid in ((value_a, bid_a), (value_b, bid_b)):
        if not 0.0 <= bid <= value <= AUCTION_VALUE_MAX:
            raise IllegalActionError(f"bid {bid} / value {value} violates 0 <= b <= v <= 100")
    if bid_a > bid_b:
        return value_a - bid_a, 0.0
    if bid_b > bid_a:
        return 0.0, value_b - bid_b
    return (value_a - bid_a) / 2.0, (value_b - bid_b) / 2.0


def play(
    payload: dict[str, Any],
    agent_a,
    agent_b,
    rng_a: np.random.Generator,
    rng_b: np.random.Generator,
) -> list[RoundRecord]:
    va, vb = payload["value_a"], payload["value_b"]
    obs_a = _observation(va)
    obs_b = _observation(vb)
    act_a = agent_a.act(obs_a, rng_a)
    validate_action(obs_a, act_a)
    act_b = agent_b.act(obs_b, rng_b)
    validate_action(obs_b, act_b)
    pa, pb = auction_settle(va, act_a["bid"], vb, act_b["bid"])
    return [
        RoundRecord(
            t=1,
            private_a={"value": va},
            private_b={"value": vb},
            action_a={"bid": float(act_a["bid"])},
            action_b={"bid": float(act_b["bid"])},
            payoff_a=pa,
            payoff_b=pb,
            flags={},
        )
    ]


def _observation(value: float) -> dict[str, Any]:
    return {
        "game_kind": "auction",
        "role": "player",
        "round": 1,
        "private_state": {"value": value},
        "legal_actions": {"bid": [0.0, value]},
        "history": [],
        "scores": {"you": 0.0, "opponent": 0.0},
    }
