"""Adapter for external decision services speaking the agent wire protocol.

Requests carry the full observation envelope (the server is stateless):
``{game_kind, role, round, private_state, legal_actions, history, scores}``.
Replies are structured action objects per game kind: claim game
``{"claim": N, "threshold": N}``; repeated PD ``{"move": "C"|"D",
"message": str?}``; word game ``{"word": str}``; clue game storyteller
``{"clue": [tokens], "predicted_confidence": N}`` and guesser
``{"guess": N, "confidence": N}``; auction ``{"bid": N}``.  All numbers are
decimal.

Illegal replies are retried up to the budget with an ``error`` note added to
the envelope, then replaced by a documented legal default.  Transport
failures (timeouts, unreachable endpoint) exhaust the same budget and then
forfeit the game.
"""

from __future__ import annotations

from typing import Any, Callable

from ..core import ForfeitError, GameKind, IllegalActionError
from ..games.protocol import validate_action
from ..wordgen import nearest_token
from .base import AgentSpec


class TransportError(RuntimeError):
    """The external endpoint could not produce a reply."""


def http_transport(spec: AgentSpec) -> Callable[[dict], dict]:
    """POST the envelope as JSON to the configured endpoint."""
    import requests

    def send(envelope: dict) -> dict:
        try:
            resp = requests.post(spec.endpoint, json=envelope, timeout=spec.timeout)
            resp.raise_for_status()
            return resp.json()
        except requests.RequestException as exc:
            raise TransportError(str(exc)) from exc

    return send


class ExternalPolicy:
    """Wire-protocol client with legality checking, retries, and fallbacks."""

    def __init__(self, spec: AgentSpec, transport: Callable[[dict], dict] | None = None):
        self.spec = spec
        self.agent_id = spec.id
        self._transport = transport or http_transport(spec)

    def act(self, obs: dict[str, Any], rng) -> dict[str, Any]:
        envelope = dict(obs)
        attempts = self.spec.retries + 1
        last_failure: Exception | None = None
        for _ in range(attempts):
            try:
                reply = self._transport(envelope)
            except TransportError as exc:
                last_failure = exc
                continue
            reply = self._normalize(obs, reply)
            try:
                validate_action(obs, reply)
            except IllegalActionError as exc:
                last_failure = exc
                envelope = dict(obs, error=str(exc))
                continue
            return reply
        if isinstance(last_failure, TransportError):
            raise ForfeitError(self.agent_id, f"transport failed: {last_failure}")
        return fallback_action(obs)

    @staticmethod
    def _normalize(obs: dict, reply: Any) -> Any:
        # Out-of-vocabulary word emissions map deterministically to the
        # nearest vocabulary token before legality is judged.
        if (
            isinstance(reply, dict)
            and obs["game_kind"] == GameKind.SAY_THE_SAME_THING.value
            and isinstance(reply.get("word"), str)
        ):
            return dict(reply, word=nearest_token(reply["word"]))
        return reply


def fallback_action(obs: dict[str, Any]) -> dict[str, Any]:
    """Documented legal default per game kind, used after illegal replies."""
    kind = GameKind(obs["game_kind"])
    if kind is GameKind.STRATEGIC_CLAIM:
        return {"claim": obs["private_state"]["value"], "threshold": 7}
    if kind is GameKind.REPEATED_PD:
        return {"move": "D", "message": ""}
    if kind is GameKind.SAY_THE_SAME_THING:
        return {"word": obs["private_state"]["your_last_word"]}
    if kind is GameKind.TEXT_DIXIT:
        if obs["role"] == "storyteller":
            return {"clue": list(obs["legal_actions"]["bank"][:2]), "predicted_confidence": 50}
        return {"guess": 1, "confidence": 50}
    return {"bid": 0.0}
