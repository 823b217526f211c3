"""Clue-and-guess engine over procedurally generated surreal scenes.

Four rounds with alternating storyteller/guesser roles (player A tells first).
Each round shows six scenes; the storyteller knows the 1-based target, picks a
clue of 2-4 word-bank tokens, and predicts the guesser's reported confidence
(0-100).  The guesser picks a scene and reports confidence.  The round score
``100 * (1 - (phat/100 - p/100)^2)`` goes to the storyteller, whose
calibration is the measured quantity; the guesser scores in the rounds where
the roles are swapped.

Round-record schema: the storyteller's action is
``{"clue": [...], "predicted_confidence": x}`` and the guesser's is
``{"guess": i, "confidence": p}``; ``private_*`` holds the target on the
storyteller side; flags carry ``storyteller`` ("a"/"b") and ``correct``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

import numpy as np

from ..core import DIXIT_ROUNDS, RejectedInputError, RoundRecord
from ..wordgen import DIXIT_CLUE_MAX, DIXIT_CLUE_MIN, DIXIT_SCENES
from .protocol import validate_action


@dataclass(frozen=True)
class DixitConfig:
    rounds: int = DIXIT_ROUNDS
    scenes_per_round: int = DIXIT_SCENES
    clue_min: int = DIXIT_CLUE_MIN
    clue_max: int = DIXIT_CLUE_MAX


def dixit_score(predicted: float, reported: float) -> float:
    """Calibration score: 100 * (1 - (predicted/100 - reported/100)^2).

    Both arguments are percentages in [0, 100]; the score is symmetric in its
    arguments and maximal when they agree.
    """
    if not 0.0 <= predicted <= 100.0 or not 0.0 <= reported <= 100.0:
        raise RejectedInputError("confidences must lie in [0, 100]")
    return 100.0 * (1.0 - (predicted / 100.0 - reported / 100.0) ** 2)


def guess_posteriors(scenes: list[dict[str, Any]], clue: list[str]) -> np.ndarray:
    """Shared semantic oracle: P(scene | clue) from token overlap.

    Each scene scores the number of clue tokens it contains, smoothed by 0.1
    so the posterior is defined for useless clues, then normalized.
    """
    scores = np.array(
        [sum(1.0 for tok in clue if tok in scene["tokens"]) + 0.1 for scene in scenes]
    )
    return scores / scores.sum()


def play(
    payload: dict[str, Any],
    agent_a,
    agent_b,
    rng_a: np.random.Generator,
    rng_b: np.random.Generator,
) -> list[RoundRecord]:
    rounds: list[RoundRecord] = []
    history_a: list[dict] = []
    history_b: list[dict] = []

    for t in range(1, DIXIT_ROUNDS + 1):
        round_data = payload["rounds"][t - 1]
        a_tells = t % 2 == 1
        teller, guesser = (agent_a, agent_b) if a_tells else (agent_b, agent_a)
        rng_t, rng_g = (rng_a, rng_b) if a_tells else (rng_b, rng_a)
        hist_t, hist_g = (history_a, history_b) if a_tells else (history_b, history_a)

        obs_t = _teller_observation(t, round_data, hist_t)
        act_t = teller.act(obs_t, rng_t)
        validate_action(obs_t, act_t)

        obs_g = _guesser_observation(t, round_data, act_t["clue"], hist_g)
        act_g = guesser.act(obs_g, rng_g)
        validate_action(obs_g, act_g)

        score = dixit_score(act_t["predicted_confidence"], act_g["confidence"])
        correct = act_g["guess"] == round_data["target"]

        teller_action = {
            "clue": list(act_t["clue"]),
            "predicted_confidence": act_t["predicted_confidence"],
        }
        guesser_action = {"guess": act_g["guess"], "confidence": act_g["confidence"]}
        rounds.append(
            RoundRecord(
                t=t,
                private_a={"target": round_data["target"]} if a_tells else {},
                private_b={} if a_tells else {"target": round_data["target"]},
                action_a=teller_action if a_tells else guesser_action,
                action_b=guesser_action if a_tells else teller_action,
                payoff_a=score if a_tells else 0.0,
                payoff_b=0.0 if a_tells else score,
                flags={"storyteller": "a" if a_tells else "b", "correct": correct},
            )
        )
        entry = {
            "round": t,
            "storyteller": "you" if a_tells else "opponent",
            "clue": list(act_t["clue"]),
            "predicted_confidence": act_t["predicted_confidence"],
            "guess": act_g["guess"],
            "confidence": act_g["confidence"],
            "correct": correct,
            "score": score,
        }
        history_a.append(dict(entry, storyteller="you" if a_tells else "opponent"))
        history_b.append(dict(entry, storyteller="opponent" if a_tells else "you"))
    return rounds


def _teller_observation(t, round_data, history) -> dict[str, Any]:
    return {
        "game_kind": "text_dixit",
        "role": "storyteller",
        "round": t,
        "private_state": {
            "scenes": [s["text"] for s in round_data["scenes"]],
            "scene_tokens": [s["tokens"] for s in round_data["scenes"]],
            "target": round_data["target"],
            "bank": list(round_data["bank"]),
        },
        "legal_actions": {
            "bank": list(round_data["bank"]),
            "clue_length": [DIXIT_CLUE_MIN, DIXIT_CLUE_MAX],
            "confidence": [0, 100],
        },
        "history": list(history),
        "scores": {"you": 0.0, "opponent": 0.0},
    }


def _guesser_observation(t, round_data, clue, history) -> dict[str, Any]:
    return {
        "game_kind": "text_dixit",
        "role": "guesser",
        "round": t,
        "private_state": {
            "scenes": [s["text"] for s in round_data["scenes"]],
            "scene_tokens": [s["tokens"] for s in round_data["scenes"]],
            "clue": list(clue),
            "bank": list(round_data["bank"]),
        },
        "legal_actions": {
            "scenes": list(range(1, DIXIT_SCENES + 1)),
            "confidence": [0, 100],
        },
        "history": list(history),
        "scores": {"you": 0.0, "opponent": 0.0},
    }
