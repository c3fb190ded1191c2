from typing import Iterable
from fairness_engine.agent.base import BaseFairnessAgent
from fairness_engine.agent.metrics import fairness_gpf, fairness_guf, fairness_mrr
from fairness_engine.core.types import ScoredList


class ProportionalFairnessAgent(BaseFairnessAgent):
    """Wants a target share of all recommended slots to go to protected items."""
    metric_kind = "gpf"

    def measure(self, lists: Iterable[ScoredList]) -> float:
        return fairness_gpf(lists, self.catalog, self.feature, self.spec.target)


class UtilityFairnessAgent(BaseFairnessAgent):
    """Wants protected items to earn a target ratio of per-item exposure utility."""
    metric_kind = "guf"

    def measure(self, lists: Iterable[ScoredList]) -> float:
        return fairness_guf(lists, self.catalog, self.feature, self.spec.target)


class ReciprocalRankFairnessAgent(BaseFairnessAgent):
    """Wants a protected item near the top of every list."""
    metric_kind = "mrr"

    def measure(self, lists: Iterable[ScoredList]) -> float:
        return fairness_mrr(lists, self.catalog, self.feature, self.spec.target)
