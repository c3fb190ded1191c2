from .metrics import (
    ndcg_at_n,
    summative_fairness,
    l_half_norm,
    EvaluationSummary,
    evaluate_lists,
    mean_summary,
    confidence_interval,
    interval_rows,
)

__all__ = [
    'ndcg_at_n',
    'summative_fairness',
    'l_half_norm',
    'EvaluationSummary',
    'evaluate_lists',
    'mean_summary',
    'confidence_interval',
    'interval_rows',
]
