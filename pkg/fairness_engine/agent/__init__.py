"""
Fairness agents: windowed metrics, user compatibility and ballot-producing ranking functions.
"""
from .base import AgentSpec, AgentState, Ballot, BaseFairnessAgent, METRIC_KINDS
from .metric_agents import ProportionalFairnessAgent, UtilityFairnessAgent, ReciprocalRankFairnessAgent
from .metrics import fairness_gpf, fairness_guf, fairness_mrr, rank_discount
from .ranking import BinaryPreference, rank_binary, rank_cascaded
from .compatibility import LikeRule, compute_compatibility, feature_shares, uniform_compatibility

AGENT_TYPES = {
    "gpf": "fairness_engine.agent.ProportionalFairnessAgent",
    "guf": "fairness_engine.agent.UtilityFairnessAgent",
    "mrr": "fairness_engine.agent.ReciprocalRankFairnessAgent",
}

__all__ = [
    'AgentSpec',
    'AgentState',
    'Ballot',
    'BaseFairnessAgent',
    'METRIC_KINDS',
    'AGENT_TYPES',
    'ProportionalFairnessAgent',
    'UtilityFairnessAgent',
    'ReciprocalRankFairnessAgent',
    'fairness_gpf',
    'fairness_guf',
    'fairness_mrr',
    'rank_discount',
    'BinaryPreference',
    'rank_binary',
    'rank_cascaded',
    'LikeRule',
    'compute_compatibility',
    'feature_shares',
    'uniform_compatibility',
]
