"""Shared domain types, deterministic seeding, condition pre-sampling, and the
persistent game-log schema.

Every other module consumes these types.  The JSON Lines log format defined by
:func:`write_log` / :func:`read_log` is a stable external contract: one record
per line with keys exactly ``game_kind, axis, condition_index, agent_a,
agent_b, seed, rounds, score_a, score_b, outcome``.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Iterable

import numpy as np


class GameKind(str, Enum):
    """The five playable games."""

    STRATEGIC_CLAIM = "strategic_claim"
    REPEATED_PD = "repeated_pd"
    SAY_THE_SAME_THING = "say_the_same_thing"
    TEXT_DIXIT = "text_dixit"
    AUCTION = "auction"


#: Fixed mapping from game kind to rating axis.
AXIS_OF: dict[GameKind, str] = {
    GameKind.STRATEGIC_CLAIM: "RSR",
    GameKind.REPEATED_PD: "RSM",
    GameKind.SAY_THE_SAME_THING: "SCG",
    GameKind.TEXT_DIXIT: "ESM",
    GameKind.AUCTION: "Control",
}

AXES: tuple[str, ...] = ("RSR", "RSM", "SCG", "ESM", "Control")

# Game-rule constants shared between engines, validators and estimators.
SC_ROUNDS = 10
SC_VALUE_MIN, SC_VALUE_MAX = 1, 6
SC_THRESHOLD_MIN, SC_THRESHOLD_MAX = 1, 7
RPD_HORIZON_MIN, RPD_HORIZON_MAX = 7, 15
STST_MAX_ROUNDS = 20
DIXIT_ROUNDS = 4
AUCTION_VALUE_MAX = 100.0


class RejectedInputError(ValueError):
    """An argument outside its documented domain."""


class IllegalActionError(ValueError):
    """An agent emitted an action the game rules forbid."""


class LogParseError(ValueError):
    """A game-log line could not be parsed.  Carries the 1-based line number."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class RecordValidationError(ValueError):
    """A GameRecord violates a game invariant."""


class ForfeitError(RuntimeError):
    """An external agent exhausted its retry budget; the game is aborted."""

    def __init__(self, agent_id: str, reason: str):
        super().__init__(f"agent {agent_id!r} forfeits: {reason}")
        self.agent_id = agent_id
        self.reason = reason


def derive_seed(master_seed: int, *parts: Any) -> int:
    """Derive a 64-bit sub-seed from a master seed and a tag tuple.

    Uses SHA-256 over a canonical text encoding, so results are identical on
    every platform.  Any single game is re-runnable in isolation from
    ``(master_seed, game_kind, condition_index, pairing)``.
    """
    payload = repr((int(master_seed),) + tuple(str(p) for p in parts))
    digest = hashlib.sha256(payload.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


def make_rng(seed: int) -> np.random.Generator:
    """Deterministic generator (PCG64) for a 64-bit seed.

    PCG64 draw sequences are platform-independent for a given numpy release,
    and the numpy project guarantees stream stability for ``Generator``.
    """
    return np.random.Generator(np.random.PCG64(int(seed) & 0xFFFFFFFFFFFFFFFF))


@dataclass(frozen=True)
class ConditionSet:
    """Pre-sampled per-game preconditions.

    ``payload`` is a plain dict whose schema depends on ``game_kind``; a
    ``(game_kind, master_seed, index)`` triple fully determines it.
    """

    game_kind: GameKind
    index: int
    payload: dict[str, Any]


@dataclass
class RoundRecord:
    """One round of play: private state, actions, payoffs, derived flags.

    The per-player sub-dicts hold game-specific keys (see the games module
    for the field-by-field schema of each kind).
    """

    t: int
    private_a: dict[str, Any]
    private_b: dict[str, Any]
    action_a: dict[str, Any]
    action_b: dict[str, Any]
    payoff_a: float
    payoff_b: float
    flags: dict[str, Any] = field(default_factory=dict)

    def to_json(self) -> dict[str, Any]:
        return {
            "t": self.t,
            "private_a": self.private_a,
            "private_b": self.private_b,
            "action_a": self.action_a,
            "action_b": self.action_b,
            "payoff_a": self.payoff_a,
            "payoff_b": self.payoff_b,
            "flags": self.flags,
        }

    @classmethod
    def from_json(cls, obj: dict[str, Any]) -> "RoundRecord":
        return cls(
            t=obj["t"],
            private_a=obj["private_a"],
            private_b=obj["private_b"],
            action_a=obj["action_a"],
            action_b=obj["action_b"],
            payoff_a=obj["payoff_a"],
            payoff_b=obj["payoff_b"],
            flags=obj.get("flags", {}),
        )


@dataclass
class GameRecord:
    """One complete game between two agents.

    ``outcome`` is derived from the score comparison (WinA iff
    ``score_a > score_b``, WinB iff ``score_b > score_a``, Draw otherwise).
    ``forfeit_by`` is in-memory bookkeeping only and is not serialized; the
    tournament manifest records forfeits.
    """

    game_kind: GameKind
    condition_index: int
    agent_a: str
    agent_b: str
    seed: int
    rounds: list[RoundRecord]
    score_a: float
    score_b: float
    outcome: str
    forfeit_by: str | None = None

    @property
    def axis(self) -> str:
        return AXIS_OF[self.game_kind]

    def to_json(self) -> dict[str, Any]:
        return {
            "game_kind": self.game_kind.value,
            "axis": self.axis,
            "condition_index": self.condition_index,
            "agent_a": self.agent_a,
            "agent_b": self.agent_b,
            "seed": self.seed,
            "rounds": [r.to_json() for r in self.rounds],
            "score_a": self.score_a,
            "score_b": self.score_b,
            "outcome": self.outcome,
        }

    @classmethod
    def from_json(cls, obj: dict[str, Any]) -> "GameRecord":
        return cls(
            game_kind=GameKind(obj["game_kind"]),
            condition_index=obj["condition_index"],
            agent_a=obj["agent_a"],
            agent_b=obj["agent_b"],
            seed=obj["seed"],
            rounds=[RoundRecord.from_json(r) for r in obj["rounds"]],
            score_a=obj["score_a"],
            score_b=obj["score_b"],
            outcome=obj["outcome"],
        )


def outcome_of(score_a: float, score_b: float) -> str:
    if score_a > score_b:
        return "WinA"
    if score_b > score_a:
        return "WinB"
    return "Draw"


# ---------------------------------------------------------------------------
# Condition pre-sampling
# ---------------------------------------------------------------------------


def sample_conditions(
    game_kind: GameKind, master_seed: int, count: int
) -> list[ConditionSet]:
    """Pre-sample ``count`` deterministic condition sets for a game kind.

    Payload schemas:

    - strategic_claim: ``values_a``, ``values_b`` — ten values each in {1..6}
    - repeated_pd: ``horizon`` — uniform on {7..15}
    - say_the_same_thing: ``word_a``, ``word_b``, ``distance`` — distinct
      starting words, stratified by semantic distance tercile
    - text_dixit: ``rounds`` — four rounds of six scene texts, a 1-based
      target index, and a word bank of 10-15 tokens
    - auction: ``value_a``, ``value_b`` — uniform on [0, 100]
    """
    if not isinstance(game_kind, GameKind):
        raise RejectedInputError(f"unknown game kind: {game_kind!r}")
    if count < 1:
        raise RejectedInputError("count must be >= 1")

    out = []
    for index in range(count):
        rng = make_rng(derive_seed(master_seed, "condition", game_kind.value, index))
        out.append(ConditionSet(game_kind, index, _sample_payload(game_kind, index, rng)))
    return out


def _sample_payload(kind: GameKind, index: int, rng: np.random.Generator) -> dict[str, Any]:
    if kind is GameKind.STRATEGIC_CLAIM:
        draw = rng.integers(SC_VALUE_MIN, SC_VALUE_MAX + 1, size=2 * SC_ROUNDS)
        return {
            "values_a": [int(v) for v in draw[:SC_ROUNDS]],
            "values_b": [int(v) for v in draw[SC_ROUNDS:]],
        }
    if kind is GameKind.REPEATED_PD:
        return {"horizon": int(rng.integers(RPD_HORIZON_MIN, RPD_HORIZON_MAX + 1))}
    if kind is GameKind.SAY_THE_SAME_THING:
        from .wordgen import sample_word_pair

        word_a, word_b, distance = sample_word_pair(rng, stratum=index % 3)
        return {"word_a": word_a, "word_b": word_b, "distance": distance}
    if kind is GameKind.TEXT_DIXIT:
        from .wordgen import sample_dixit_round

        return {"rounds": [sample_dixit_round(rng) for _ in range(DIXIT_ROUNDS)]}
    if kind is GameKind.AUCTION:
        vals = rng.uniform(0.0, AUCTION_VALUE_MAX, size=2)
        return {"value_a": float(vals[0]), "value_b": float(vals[1])}
    raise RejectedInputError(f"unknown game kind: {kind!r}")


# ---------------------------------------------------------------------------
# Record validation
# ---------------------------------------------------------------------------


def validate_record(rec: GameRecord) -> None:
    """Check a GameRecord against the invariants of its game.

    Applied both at creation time and after reading from disk, so anything
    loaded from a log has passed the same checks as freshly played games.
    Raises :class:`RecordValidationError` naming the offending round.
    """
    kind = rec.game_kind
    n = len(rec.rounds)
    if kind is GameKind.STRATEGIC_CLAIM and n != SC_ROUNDS:
        raise RecordValidationError(f"strategic_claim must have {SC_ROUNDS} rounds, got {n}")
    if kind is GameKind.REPEATED_PD and not (RPD_HORIZON_MIN <= n <= RPD_HORIZON_MAX):
        raise RecordValidationError(f"repeated_pd horizon {n} outside {{7..15}}")
    if kind is GameKind.SAY_THE_SAME_THING and n > STST_MAX_ROUNDS:
        raise RecordValidationError(f"say_the_same_thing exceeds {STST_MAX_ROUNDS} rounds")
    if kind is GameKind.TEXT_DIXIT and n != DIXIT_ROUNDS:
        raise RecordValidationError(f"text_dixit must have {DIXIT_ROUNDS} rounds, got {n}")
    if kind is GameKind.AUCTION and n != 1:
        raise RecordValidationError(f"auction must have exactly 1 round, got {n}")

    for r in rec.rounds:
        _validate_round(kind, r)

    sum_a = sum(r.payoff_a for r in rec.rounds)
    sum_b = sum(r.payoff_b for r in rec.rounds)
    if sum_a != rec.score_a or sum_b != rec.score_b:
        raise RecordValidationError(
            f"scores ({rec.score_a}, {rec.score_b}) do not equal round sums ({sum_a}, {sum_b})"
        )
    if rec.outcome != outcome_of(rec.score_a, rec.score_b):
        raise RecordValidationError(
            f"outcome {rec.outcome!r} inconsistent with scores {rec.score_a} vs {rec.score_b}"
        )


def _validate_round(kind: GameKind, r: RoundRecord) -> None:
    if r.t < 1:
        raise RecordValidationError(f"round index {r.t} must be >= 1")
    if kind is GameKind.STRATEGIC_CLAIM:
        for side, priv, act in (("a", r.private_a, r.action_a), ("b", r.private_b, r.action_b)):
            v, c, t = priv["value"], act["claim"], act["threshold"]
            if not SC_VALUE_MIN <= v <= SC_VALUE_MAX:
                raise RecordValidationError(f"round {r.t}: value {v} of player {side} out of range")
            if c < v or c > SC_VALUE_MAX:
                raise RecordValidationError(
                    f"round {r.t}: claim {c} of player {side} illegal for value {v}"
                )
            if not SC_THRESHOLD_MIN <= t <= SC_THRESHOLD_MAX:
                raise RecordValidationError(f"round {r.t}: threshold {t} of player {side} out of range")
    elif kind is GameKind.REPEATED_PD:
        for side, act in (("a", r.action_a), ("b", r.action_b)):
            if act["move"] not in ("C", "D"):
                raise RecordValidationError(f"round {r.t}: move {act['move']!r} of player {side} illegal")
    elif kind is GameKind.AUCTION:
        for side, priv, act in (("a", r.private_a, r.action_a), ("b", r.private_b, r.action_b)):
            if not 0.0 <= act["bid"] <= priv["value"]:
                raise RecordValidationError(
                    f"round {r.t}: bid {act['bid']} of player {side} exceeds value {priv['value']}"
                )


# ---------------------------------------------------------------------------
# Game log (JSON Lines)
# ---------------------------------------------------------------------------


def write_log(records: Iterable[GameRecord], path) -> None:
    """Append-free write of records to a JSON Lines file (UTF-8).

    Each record is validated before writing; the serialization is
    deterministic (fixed key order, ``repr``-style floats).
    """
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            validate_record(rec)
            fh.write(json.dumps(rec.to_json(), ensure_ascii=False) + "\n")


def append_log(rec: GameRecord, fh) -> None:
    """Append one validated record to an open log file handle."""
    validate_record(rec)
    fh.write(json.dumps(rec.to_json(), ensure_ascii=False) + "\n")


def read_log(path) -> list[GameRecord]:
    """Read and validate a JSON Lines game log.

    Raises :class:`LogParseError` with the line number on malformed lines and
    :class:`RecordValidationError` on invariant violations.
    """
    records = []
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise LogParseError(line_no, f"invalid JSON ({exc.msg})") from exc
            try:
                rec = GameRecord.from_json(obj)
            except (KeyError, ValueError) as exc:
                raise LogParseError(line_no, f"missing or bad field: {exc}") from exc
            validate_record(rec)
            records.append(rec)
    return records
