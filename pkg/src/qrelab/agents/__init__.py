"""Decision policies: synthetic agents with known rationality and the
external-service adapter."""

from __future__ import annotations

from typing import Callable

from ..core import RejectedInputError
from .base import AgentSpec, BeliefState, rpd_coop_freq, sc_beliefs
from .external import ExternalPolicy, TransportError, fallback_action
from .synthetic import (
    NashPolicy,
    Policy,
    QrePolicy,
    RandomPolicy,
    SMOOTHING_BAND,
    SmoothingPolicy,
    smoothing_bluff_prob,
    smoothing_decide,
    smoothing_update,
)


def make_agent(spec: AgentSpec, transport: Callable[[dict], dict] | None = None):
    """Instantiate the policy for a spec.

    ``transport`` overrides the HTTP client of external agents (used by
    tests and alternative transports); it is ignored for synthetic kinds.
    """
    if spec.kind == "qre":
        return QrePolicy(spec)
    if spec.kind == "nash":
        return NashPolicy(spec)
    if spec.kind == "random":
        return RandomPolicy(spec)
    if spec.kind == "smoothing":
        return SmoothingPolicy(spec)
    if spec.kind == "external":
        return ExternalPolicy(spec, transport)
    raise RejectedInputError(f"unknown agent kind {spec.kind!r}")


__all__ = [
    "AgentSpec",
    "BeliefState",
    "ExternalPolicy",
    "NashPolicy",
    "Policy",
    "QrePolicy",
    "RandomPolicy",
    "SMOOTHING_BAND",
    "SmoothingPolicy",
    "TransportError",
    "fallback_action",
    "make_agent",
    "rpd_coop_freq",
    "sc_beliefs",
    "smoothing_bluff_prob",
    "smoothing_decide",
    "smoothing_update",
]
