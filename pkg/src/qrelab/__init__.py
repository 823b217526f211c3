"""qrelab: strategic-game simulation with quantal-response rationality
estimation, per-axis Bradley-Terry ratings, and convergence analytics.

Five two-player games (claim-and-challenge, repeated prisoner's dilemma,
word convergence, clue-and-guess, and a sealed-bid auction control) are
played between pluggable agents; synthetic agents of known rationality serve
as ground truth for every estimator.
"""

__version__ = "0.1.0"

from .core import (
    AXES,
    AXIS_OF,
    ConditionSet,
    GameKind,
    GameRecord,
    RoundRecord,
    derive_seed,
    make_rng,
    read_log,
    sample_conditions,
    write_log,
)

__all__ = [
    "AXES",
    "AXIS_OF",
    "ConditionSet",
    "GameKind",
    "GameRecord",
    "RoundRecord",
    "__version__",
    "derive_seed",
    "make_rng",
    "read_log",
    "sample_conditions",
    "write_log",
]
