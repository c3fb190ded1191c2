"""
Choice mechanisms: aggregate the recommender's list with the allocated agents' ballots.
"""
from .base import (
    ChoiceConfig,
    BallotProfile,
    BaseChoiceMechanism,
    build_ballots,
    ordered_by_score,
    RULES,
    WEIGHT_MODES,
    SCORE_TOLERANCE,
)
from .rules import (
    borda_aggregate,
    pairwise_support,
    copeland_aggregate,
    rescore,
    BordaChoice,
    CopelandChoice,
    RescoreChoice,
)

CHOICE_TYPES = {
    "borda": "fairness_engine.choice.BordaChoice",
    "copeland": "fairness_engine.choice.CopelandChoice",
    "rescore": "fairness_engine.choice.RescoreChoice",
}

__all__ = [
    'ChoiceConfig',
    'BallotProfile',
    'BaseChoiceMechanism',
    'build_ballots',
    'ordered_by_score',
    'RULES',
    'WEIGHT_MODES',
    'SCORE_TOLERANCE',
    'CHOICE_TYPES',
    'borda_aggregate',
    'pairwise_support',
    'copeland_aggregate',
    'rescore',
    'BordaChoice',
    'CopelandChoice',
    'RescoreChoice',
]
