"""Agent specifications and belief extraction.

Policies are stateless between calls: every decision is recomputed from the
observation envelope (which carries the full game history), so an agent
instance never carries hidden state across rounds or games.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np

from ..core import RejectedInputError
from ..equilibrium import (
    sc_equilibrium_bluff_posteriors,
    sc_equilibrium_challenge_probs,
    sc_equilibrium_claim_distribution,
)


@dataclass(frozen=True)
class AgentSpec:
    """A decision policy: synthetic with known rationality, or external.

    kinds: ``qre`` (lam >= 0), ``nash``, ``random``, ``smoothing``
    (eta in (0,1), kappa in [0,1), initial_belief in [0,1]), ``external``
    (endpoint, timeout seconds, retries).
    """

    id: str
    kind: str
    lam: float = 0.0
    eta: float = 0.4
    kappa: float = 0.52
    initial_belief: float = 0.5
    endpoint: str = ""
    timeout: float = 10.0
    retries: int = 2

    def __post_init__(self):
        if self.kind not in ("qre", "nash", "random", "smoothing", "external"):
            raise RejectedInputError(f"unknown agent kind {self.kind!r}")
        if self.kind == "qre" and self.lam < 0:
            raise RejectedInputError("lam must be >= 0")
        if self.kind == "smoothing":
            if not 0.0 < self.eta < 1.0:
                raise RejectedInputError("eta must lie in (0, 1)")
            if not 0.0 <= self.kappa < 1.0:
                raise RejectedInputError("kappa must lie in [0, 1)")
            if not 0.0 <= self.initial_belief <= 1.0:
                raise RejectedInputError("initial_belief must lie in [0, 1]")
        if self.kind == "external" and not self.endpoint:
            raise RejectedInputError("external agents need an endpoint")

    def to_json(self) -> dict[str, Any]:
        out: dict[str, Any] = {"id": self.id, "kind": self.kind}
        if self.kind == "qre":
            out["lambda"] = self.lam
        elif self.kind == "smoothing":
            out.update(eta=self.eta, kappa=self.kappa, initial_belief=self.initial_belief)
        elif self.kind == "external":
            out.update(endpoint=self.endpoint, timeout=self.timeout, retries=self.retries)
        return out

    @classmethod
    def from_json(cls, obj: dict[str, Any]) -> "AgentSpec":
        return cls(
            id=obj["id"],
            kind=obj["kind"],
            lam=obj.get("lambda", 0.0),
            eta=obj.get("eta", 0.4),
            kappa=obj.get("kappa", 0.52),
            initial_belief=obj.get("initial_belief", 0.5),
            endpoint=obj.get("endpoint", ""),
            timeout=obj.get("timeout", 10.0),
            retries=obj.get("retries", 2),
        )


@dataclass
class BeliefState:
    """Empirical opponent statistics extracted from a game history.

    Claim-game beliefs start from the equilibrium profile as a single
    pseudo-observation (so round-1 beliefs are the equilibrium itself and no
    frequency is ever division-by-zero) and mix toward the in-game empirical
    frequencies as rounds accumulate.
    """

    challenge_probs: np.ndarray = field(
        default_factory=sc_equilibrium_challenge_probs
    )
    claim_probs: np.ndarray = field(default_factory=sc_equilibrium_claim_distribution)
    bluff_posteriors: np.ndarray = field(
        default_factory=sc_equilibrium_bluff_posteriors
    )
    coop_freq: float = 0.0
    bluff_rate: float = 0.5


def sc_beliefs(history: list[dict]) -> BeliefState:
    """Claim-game beliefs from post-round-revealed history entries."""
    n = len(history)
    beliefs = BeliefState()
    if n == 0:
        return beliefs

    opp_thresholds = np.array([h["opponent"]["threshold"] for h in history])
    claims_levels = np.arange(1, 7)
    challenge_counts = (opp_thresholds[None, :] <= claims_levels[:, None]).sum(axis=1)
    beliefs.challenge_probs = (beliefs.challenge_probs + challenge_counts) / (1.0 + n)

    opp_claims = np.array([h["opponent"]["claim"] for h in history])
    opp_bluffs = np.array(
        [h["opponent"]["claim"] > h["opponent"]["value"] for h in history]
    )
    claim_counts = (opp_claims[None, :] == claims_levels[:, None]).sum(axis=1)
    bluff_counts = np.array(
        [(opp_bluffs & (opp_claims == c)).sum() for c in claims_levels]
    )
    prior_claims = sc_equilibrium_claim_distribution()
    prior_posts = sc_equilibrium_bluff_posteriors()
    beliefs.claim_probs = (prior_claims + claim_counts) / (1.0 + n)
    beliefs.bluff_posteriors = (prior_posts * prior_claims + bluff_counts) / (
        prior_claims + claim_counts
    )
    return beliefs


def rpd_coop_freq(history: list[dict]) -> float:
    """Opponent cooperation frequency, initialized at the defect prediction."""
    n = len(history)
    coop = sum(1 for h in history if h["opponent"]["move"] == "C")
    return coop / (1.0 + n)
