from typing import NamedTuple, Tuple
from fairness_engine.core.types import FeatureCatalog, ScoredList


class BinaryPreference(NamedTuple):
    """Two-level preference: every protected item over every unprotected item."""
    protected: Tuple[str, ...]
    unprotected: Tuple[str, ...]

    def prefers(self, item_id: str) -> bool:
        return item_id in self.protected


def rank_binary(candidates: ScoredList, catalog: FeatureCatalog, feature: str) -> BinaryPreference:
    protected = catalog.protected_items(feature)
    return BinaryPreference(
        protected=tuple(item_id for item_id in candidates.items if item_id in protected),
        unprotected=tuple(item_id for item_id in candidates.items if item_id not in protected),
    )


def rank_cascaded(candidates: ScoredList, catalog: FeatureCatalog, feature: str) -> Tuple[str, ...]:
    """Protected items first, each block keeping the recommender's order."""
    preference = rank_binary(candidates, catalog, feature)
    return preference.protected + preference.unprotected
