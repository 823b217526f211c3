"""Action legality checks shared by the game engines and the external-agent
adapter.

An action is validated against the observation envelope that requested it, so
the engine and the adapter apply identical rules.
"""

from __future__ import annotations

from typing import Any

from ..core import GameKind, IllegalActionError


def validate_action(obs: dict[str, Any], action: dict[str, Any]) -> None:
    """Raise :class:`IllegalActionError` unless ``action`` answers ``obs`` legally."""
    if not isinstance(action, dict):
        raise IllegalActionError(f"action must be an object, got {type(action).__name__}")
    kind = GameKind(obs["game_kind"])
    legal = obs["legal_actions"]
    if kind is GameKind.STRATEGIC_CLAIM:
        claim, threshold = action.get("claim"), action.get("threshold")
        if claim not in legal["claims"]:
            raise IllegalActionError(f"claim {claim!r} not in {legal['claims']}")
        if threshold not in legal["thresholds"]:
            raise IllegalActionError(f"threshold {threshold!r} not in 1..7")
    elif kind is GameKind.REPEATED_PD:
        if action.get("move") not in legal["moves"]:
            raise IllegalActionError(f"move {action.get('move')!r} not in {legal['moves']}")
    elif kind is GameKind.SAY_THE_SAME_THING:
        if action.get("word") not in legal["words"]:
            raise IllegalActionError(f"word {action.get('word')!r} not in vocabulary")
    elif kind is GameKind.TEXT_DIXIT:
        if obs["role"] == "storyteller":
            clue = action.get("clue")
            lo, hi = legal["clue_length"]
            if not isinstance(clue, list) or not lo <= len(clue) <= hi:
                raise IllegalActionError(f"clue must be a list of {lo}-{hi} tokens")
            if any(tok not in legal["bank"] for tok in clue):
                raise IllegalActionError("clue tokens must come from the word bank")
            _check_confidence(action.get("predicted_confidence"))
        else:
            if action.get("guess") not in legal["scenes"]:
                raise IllegalActionError(f"guess {action.get('guess')!r} not in 1..6")
            _check_confidence(action.get("confidence"))
    elif kind is GameKind.AUCTION:
        bid = action.get("bid")
        lo, hi = legal["bid"]
        if not isinstance(bid, (int, float)) or not lo <= bid <= hi:
            raise IllegalActionError(f"bid {bid!r} outside [{lo}, {hi}]")


def _check_confidence(value: Any) -> None:
    if not isinstance(value, (int, float)) or not 0 <= value <= 100:
        raise IllegalActionError(f"confidence {value!r} outside [0, 100]")
