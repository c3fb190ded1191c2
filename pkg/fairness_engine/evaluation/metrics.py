import math
from dataclasses import dataclass, field
from typing import Dict, Iterable, Mapping, Optional, Sequence, Set, Tuple
import numpy as np
from fairness_engine.agent.base import BaseFairnessAgent
from fairness_engine.agent.metrics import rank_discount
from fairness_engine.core.types import ScoredList
from fairness_engine.utils.errors import InputError


def ndcg_at_n(delivered: ScoredList, relevant: Set[str], n: int) -> float:
    """Binary-relevance nDCG over the top ``n`` delivered items; 0 when nothing is relevant."""
    if n < 1:
        raise InputError(f"[EVAL] nDCG depth must be at least 1, got {n}")
    if not relevant:
        return 0.0
    dcg = math.fsum(
        rank_discount(rank)
        for rank, item_id in enumerate(delivered.items[:n], start=1)
        if item_id in relevant
    )
    ideal = math.fsum(rank_discount(rank) for rank in range(1, min(len(relevant), n) + 1))
    return dcg / ideal


def summative_fairness(lists: Iterable[ScoredList], agent: BaseFairnessAgent) -> float:
    """The agent's own metric applied to every delivered list of the run as one window."""
    return agent.measure(lists)


def l_half_norm(scores: Sequence[float]) -> float:
    """Power mean with exponent 1/2: equals the arithmetic mean iff all scores are equal."""
    values = np.asarray(list(scores), dtype=float)
    if values.size == 0:
        raise InputError("[EVAL] l-half norm needs at least one score")
    if np.any(values < 0.0) or np.any(values > 1.0) or np.any(np.isnan(values)):
        raise InputError(f"[EVAL] l-half norm scores must lie in [0, 1], got {values.tolist()}")
    return float(np.mean(np.sqrt(values)) ** 2)


@dataclass(frozen=True)
class EvaluationSummary:
    """Accuracy and fairness of one fold of one mechanism combination."""
    mechanism_allocation: str
    mechanism_choice: str
    fold: str
    ndcg: float
    agent_fairness: Mapping[str, float] = field(default_factory=dict)
    l_half: float = 0.0

    def row(self, agent_names: Sequence[str]) -> Dict[str, object]:
        row: Dict[str, object] = {
            "mechanism_allocation": self.mechanism_allocation,
            "mechanism_choice": self.mechanism_choice,
            "fold": self.fold,
            "ndcg": self.ndcg,
        }
        for name in agent_names:
            row[f"agent_fairness_{name}"] = self.agent_fairness[name]
        row["l_half"] = self.l_half
        return row


def evaluate_lists(
        lists: Sequence[ScoredList],
        relevant: Mapping[str, Set[str]],
        agents: Sequence[BaseFairnessAgent],
        n: int,
        mechanism_allocation: str,
        mechanism_choice: str,
        fold: str
        ) -> EvaluationSummary:
    """
    Mean nDCG@n over delivered lists whose user has held-out positives, plus each
    agent's summative fairness and their l-half norm. ``lists`` must be in tick order.
    """
    gains = [
        ndcg_at_n(scored_list, relevant[scored_list.user_id], n)
        for scored_list in lists
        if relevant.get(scored_list.user_id)
    ]
    ndcg = math.fsum(gains) / len(gains) if gains else 0.0
    fairness = {agent.name: summative_fairness(lists, agent) for agent in agents}
    l_half = l_half_norm(list(fairness.values())) if fairness else 0.0
    return EvaluationSummary(mechanism_allocation, mechanism_choice, str(fold), ndcg, fairness, l_half)


def mean_summary(summaries: Sequence[EvaluationSummary]) -> EvaluationSummary:
    """Fold-averaged summary; l-half is recomputed from the averaged agent fairness."""
    if not summaries:
        raise InputError("[EVAL] no fold summaries to average")
    first = summaries[0]
    names = list(first.agent_fairness)
    count = len(summaries)
    fairness = {name: math.fsum(s.agent_fairness[name] for s in summaries) / count for name in names}
    return EvaluationSummary(
        first.mechanism_allocation,
        first.mechanism_choice,
        "mean",
        math.fsum(s.ndcg for s in summaries) / count,
        fairness,
        l_half_norm(list(fairness.values())) if fairness else 0.0,
    )


def confidence_interval(values: Sequence[float], z: float = 1.96) -> Tuple[float, float, float]:
    """Mean and mean ± z * standard error; zero width for a single value."""
    data = np.asarray(list(values), dtype=float)
    mean = float(math.fsum(data) / data.size)
    if data.size < 2:
        return mean, mean, mean
    half_width = z * float(np.std(data, ddof=1)) / math.sqrt(data.size)
    return mean, mean - half_width, mean + half_width


def interval_rows(summaries: Sequence[EvaluationSummary]) -> Sequence[Dict[str, object]]:
    if not summaries:
        return []
    first = summaries[0]
    metrics = ["ndcg"] + [f"agent_fairness_{name}" for name in first.agent_fairness] + ["l_half"]
    rows = []
    for metric in metrics:
        if metric == "ndcg":
            values = [s.ndcg for s in summaries]
        elif metric == "l_half":
            values = [s.l_half for s in summaries]
        else:
            name = metric[len("agent_fairness_"):]
            values = [s.agent_fairness[name] for s in summaries]
        mean, low, high = confidence_interval(values)
        rows.append({
            "mechanism_allocation": first.mechanism_allocation,
            "mechanism_choice": first.mechanism_choice,
            "metric": metric,
            "mean": mean,
            "ci_low": low,
            "ci_high": high,
        })
    return rows
