"""Word-convergence engine (say the same thing).

Players start with distinct vocabulary words and simultaneously pick a new
word each round, trying to say the same word.  The game ends at the first
exact match or after 20 rounds; on convergence at round t both players score
1 - t/20, otherwise 0.  Semantic distance d_t = 1 - similarity is tracked per
round via the shared similarity oracle.

Out-of-vocabulary emissions never reach the engine: the external adapter maps
them to the nearest token first (see the agents module).

Round-record schema: ``action_{a,b} = {"word": w}``, flags ``distance`` and
``matched``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np

from ..core import RoundRecord, STST_MAX_ROUNDS
from ..wordgen import semantic_distance, similarity_matrix, vocabulary
from .protocol import validate_action


@dataclass(frozen=True)
class STSTConfig:
    max_rounds: int = STST_MAX_ROUNDS
    vocab: tuple[str, ...] = field(default_factory=vocabulary)


def convergence_payoff(t: int) -> float:
    """Payoff for both players on an exact match at round t."""
    return 1.0 - t / 20.0


def play(
    payload: dict[str, Any],
    agent_a,
    agent_b,
    rng_a: np.random.Generator,
    rng_b: np.random.Generator,
) -> list[RoundRecord]:
    vocab = list(vocabulary())
    word_a, word_b = payload["word_a"], payload["word_b"]
    rounds: list[RoundRecord] = []
    history_a: list[dict] = []
    history_b: list[dict] = []

    for t in range(1, STST_MAX_ROUNDS + 1):
        obs_a = _observation(t, word_a, word_b, history_a, vocab)
        obs_b = _observation(t, word_b, word_a, history_b, vocab)
        act_a = agent_a.act(obs_a, rng_a)
        validate_action(obs_a, act_a)
        act_b = agent_b.act(obs_b, rng_b)
        validate_action(obs_b, act_b)
        pick_a, pick_b = act_a["word"], act_b["word"]
        matched = pick_a == pick_b
        distance = semantic_distance(pick_a, pick_b)
        payoff = convergence_payoff(t) if matched else 0.0
        rounds.append(
            RoundRecord(
                t=t,
                private_a={},
                private_b={},
                action_a={"word": pick_a},
                action_b={"word": pick_b},
                payoff_a=payoff,
                payoff_b=payoff,
                flags={"distance": distance, "matched": matched},
            )
        )
        history_a.append({"round": t, "you": {"word": pick_a}, "opponent": {"word": pick_b}})
        history_b.append({"round": t, "you": {"word": pick_b}, "opponent": {"word": pick_a}})
        if matched:
            break
        word_a, word_b = pick_a, pick_b
    return rounds


def _observation(t, your_word, opp_word, history, vocab) -> dict[str, Any]:
    return {
        "game_kind": "say_the_same_thing",
        "role": "player",
        "round": t,
        "private_state": {"your_last_word": your_word, "opponent_last_word": opp_word},
        "legal_actions": {"words": vocab},
        "history": list(history),
        "scores": {"you": 0.0, "opponent": 0.0},
    }


def salience_utilities(your_word: str, opp_word: str) -> np.ndarray:
    """Joint-salience score per vocabulary word: sim(w, yours) * sim(w, theirs).

    The product form favors words mutually close to both current words, the
    natural focal-point target.
    """
    sim = similarity_matrix()
    vocab = vocabulary()
    i, j = vocab.index(your_word), vocab.index(opp_word)
    return sim[:, i] * sim[:, j]
