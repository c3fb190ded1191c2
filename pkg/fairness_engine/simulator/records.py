from dataclasses import dataclass, field
from typing import Mapping, Tuple
from fairness_engine.allocation.base import Allocation
from fairness_engine.core.types import ScoredList
from fairness_engine.evaluation.metrics import EvaluationSummary


@dataclass(frozen=True)
class RunRecord:
    """Audit entry for one recommendation opportunity."""
    tick: int
    user_id: str
    allocation: Allocation
    fairness: Mapping[str, float]
    delivered: ScoredList


@dataclass(frozen=True)
class FoldResult:
    fold: int
    records: Tuple[RunRecord, ...]
    summary: EvaluationSummary
    # opportunities dropped for lack of candidates
    skipped: int = 0

    @property
    def lists(self) -> Tuple[ScoredList, ...]:
        return tuple(record.delivered for record in self.records)


@dataclass(frozen=True)
class CellResult:
    """All folds of one allocation x choice combination (or the baseline)."""
    allocation: str
    choice: str
    folds: Tuple[FoldResult, ...]
    mean: EvaluationSummary
