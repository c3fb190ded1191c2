"""
FairnessEngine: multi-agent fairness-aware re-ranking for recommendation lists.
"""
__version__ = "1.0.0"
