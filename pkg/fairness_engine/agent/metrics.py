"""
Windowed provider-fairness metrics. Each returns a value in [0, 1] where 1 means
the agent's target has been reached over the given lists.

Every function takes any iterable of ``ScoredList`` (a ``HistoryWindow`` or the
full run for summative evaluation). An empty window is "not yet fair" (0.0).
"""
import math
from typing import Iterable
from fairness_engine.core.types import FeatureCatalog, ScoredList
from fairness_engine.utils.errors import InputError


def _check_target(target: float, name: str, upper: float = math.inf) -> None:
    if not (target > 0) or target > upper:
        raise InputError(f"[METRIC] {name} must lie in (0, {upper}], got {target}")


def rank_discount(rank: int) -> float:
    """Utility of 1-based position ``rank``; rank 1 is worth 1."""
    return 1.0 / math.log2(rank + 1)


def fairness_gpf(window: Iterable[ScoredList], catalog: FeatureCatalog, feature: str, target: float) -> float:
    """Share of protected occurrences over all list entries, relative to ``target``."""
    _check_target(target, "target")
    protected = catalog.protected_items(feature)
    total = 0
    hits = 0
    for scored_list in window:
        for item_id, _ in scored_list:
            total += 1
            if item_id in protected:
                hits += 1
    if total == 0:
        return 0.0
    return min(1.0, (hits / total) / target)


def fairness_guf(window: Iterable[ScoredList], catalog: FeatureCatalog, feature: str, target_ratio: float) -> float:
    """Size-normalized rank-discounted utility of protected vs unprotected items."""
    _check_target(target_ratio, "target_ratio")
    catalog.require(feature)
    protected = catalog.protected_items(feature)
    utility_p = 0.0
    utility_n = 0.0
    seen_entries = False
    for scored_list in window:
        for rank, (item_id, _) in enumerate(scored_list, start=1):
            seen_entries = True
            if item_id in protected:
                utility_p += rank_discount(rank)
            else:
                utility_n += rank_discount(rank)
    if not seen_entries:
        return 0.0
    per_item_p = utility_p / catalog.protected_count(feature)
    per_item_n = utility_n / catalog.unprotected_count(feature)
    if per_item_n == 0.0:
        return 1.0 if per_item_p > 0.0 else 0.0
    return min(1.0, (per_item_p / per_item_n) / target_ratio)


def fairness_mrr(window: Iterable[ScoredList], catalog: FeatureCatalog, feature: str, target_mrr: float) -> float:
    """Mean reciprocal rank of the first protected item per list, relative to ``target_mrr``."""
    _check_target(target_mrr, "target_mrr", upper=1.0)
    protected = catalog.protected_items(feature)
    lists = 0
    reciprocal_sum = 0.0
    for scored_list in window:
        lists += 1
        for rank, (item_id, _) in enumerate(scored_list, start=1):
            if item_id in protected:
                reciprocal_sum += 1.0 / rank
                break
    if lists == 0:
        return 0.0
    return min(1.0, (reciprocal_sum / lists) / target_mrr)
