"""Game engines: state machines, legality checks, payoff computation.

Engines are pure: given a condition payload, two agents, and seeded
generators they produce the full round trace.  Many games may run
concurrently; a single game is strictly sequential.
"""

from __future__ import annotations

from ..core import (
    ConditionSet,
    ForfeitError,
    GameKind,
    GameRecord,
    RejectedInputError,
    derive_seed,
    make_rng,
    outcome_of,
    validate_record,
)
from . import auction, repeated_pd, same_word, strategic_claim, text_dixit
from .auction import AuctionConfig, auction_settle
from .protocol import validate_action
from .repeated_pd import RPDConfig, rpd_continuation
from .same_word import STSTConfig, convergence_payoff, salience_utilities
from .strategic_claim import SCConfig, sc_round_payoff
from .text_dixit import DixitConfig, dixit_score, guess_posteriors

_ENGINES = {
    GameKind.STRATEGIC_CLAIM: strategic_claim.play,
    GameKind.REPEATED_PD: repeated_pd.play,
    GameKind.SAY_THE_SAME_THING: same_word.play,
    GameKind.TEXT_DIXIT: text_dixit.play,
    GameKind.AUCTION: auction.play,
}


class GameForfeitError(ForfeitError):
    """A game was aborted because an external agent forfeited.

    No GameRecord is produced; the tournament manifest records the forfeit.
    """

    def __init__(self, agent_id: str, reason: str, rounds_completed: int):
        super().__init__(agent_id, reason)
        self.rounds_completed = rounds_completed


def run_game(
    kind: GameKind,
    condition: ConditionSet,
    agent_a,
    agent_b,
    seed: int,
    agent_a_id: str | None = None,
    agent_b_id: str | None = None,
) -> GameRecord:
    """Play one game and return its validated record.

    Each side gets its own generator derived from the game seed, so the game
    is re-runnable in isolation.  Agent protocol violations surface as
    :class:`IllegalActionError` (synthetic agents are expected to be legal;
    the external adapter enforces legality before the engine sees a reply);
    forfeits abort the game via :class:`GameForfeitError`.
    """
    if condition.game_kind is not kind:
        raise RejectedInputError(
            f"condition is for {condition.game_kind.value}, not {kind.value}"
        )
    rng_a = make_rng(derive_seed(seed, "side_a"))
    rng_b = make_rng(derive_seed(seed, "side_b"))
    try:
        rounds = _ENGINES[kind](condition.payload, agent_a, agent_b, rng_a, rng_b)
    except ForfeitError as exc:
        raise GameForfeitError(exc.agent_id, exc.reason, rounds_completed=0) from exc
    score_a = sum(r.payoff_a for r in rounds)
    score_b = sum(r.payoff_b for r in rounds)
    record = GameRecord(
        game_kind=kind,
        condition_index=condition.index,
        agent_a=agent_a_id or getattr(agent_a, "agent_id", "a"),
        agent_b=agent_b_id or getattr(agent_b, "agent_id", "b"),
        seed=seed,
        rounds=rounds,
        score_a=score_a,
        score_b=score_b,
        outcome=outcome_of(score_a, score_b),
    )
    validate_record(record)
    return record


__all__ = [
    "AuctionConfig",
    "DixitConfig",
    "GameForfeitError",
    "RPDConfig",
    "SCConfig",
    "STSTConfig",
    "auction_settle",
    "convergence_payoff",
    "dixit_score",
    "guess_posteriors",
    "rpd_continuation",
    "run_game",
    "salience_utilities",
    "sc_round_payoff",
    "validate_action",
]
