from typing import Dict, Mapping
import numpy as np
from fairness_engine.agent.base import BaseFairnessAgent
from fairness_engine.agent.ranking import BinaryPreference
from fairness_engine.allocation.base import Allocation
from fairness_engine.choice.base import (
    BallotProfile,
    BaseChoiceMechanism,
    ChoiceConfig,
    SCORE_TOLERANCE,
    build_ballots,
    ordered_by_score,
)
from fairness_engine.core.types import ScoredList


def borda_aggregate(profile: BallotProfile, user_id: str = "", produced_at: int = 0) -> ScoredList:
    """Weighted Borda: an item at 1-based rank r on a ballot of m items earns weight * (m - r)."""
    m = len(profile.candidates)
    scores: Dict[str, float] = {item_id: 0.0 for item_id in profile.candidates}
    for ballot in profile.ballots:
        points = m - 1
        for item_id in ballot.ranking:
            scores[item_id] += ballot.weight * points
            points -= 1
    return ordered_by_score(user_id, profile.candidates, scores, produced_at)


def pairwise_support(profile: BallotProfile) -> np.ndarray:
    """support[x, y] = total weight of ballots ranking candidate x above candidate y.

    Every pair of candidates is compared on every ballot, so the table costs
    O(m^2) per ballot for m candidates.
    """
    index = {item_id: position for position, item_id in enumerate(profile.candidates)}
    m = len(profile.candidates)
    ranked = []
    for ballot in profile.ballots:
        positions = [0] * m
        for rank, item_id in enumerate(ballot.ranking):
            positions[index[item_id]] = rank
        ranked.append((positions, ballot.weight))
    support = np.zeros((m, m), dtype=float)
    for x in range(m):
        for y in range(x + 1, m):
            above = 0.0
            below = 0.0
            for positions, weight in ranked:
                if positions[x] < positions[y]:
                    above += weight
                else:
                    below += weight
            support[x, y] = above
            support[y, x] = below
    return support


def copeland_aggregate(profile: BallotProfile, user_id: str = "", produced_at: int = 0) -> ScoredList:
    """One point per pairwise majority win, half a point per exact pairwise tie."""
    support = pairwise_support(profile)
    margins = support - support.T
    wins = (margins > SCORE_TOLERANCE).sum(axis=1)
    # the diagonal always ties with itself
    ties = (np.abs(margins) <= SCORE_TOLERANCE).sum(axis=1) - 1
    copeland = wins + 0.5 * ties
    scores = {item_id: float(copeland[position]) for position, item_id in enumerate(profile.candidates)}
    return ordered_by_score(user_id, profile.candidates, scores, produced_at)


def _normalized(scores: Dict[str, float]) -> Dict[str, float]:
    low = min(scores.values())
    high = max(scores.values())
    if high == low:
        return {item_id: 0.0 for item_id in scores}
    return {item_id: (score - low) / (high - low) for item_id, score in scores.items()}


def rescore(
        rec_list: ScoredList,
        allocation: Allocation,
        preferences: Mapping[str, BinaryPreference],
        config: ChoiceConfig
        ) -> ScoredList:
    """
    final(i) = rec_score(i) + sum over allocated agents of
    allocation_weight * delta * [i protected for the agent] / recommender_weight.
    """
    if allocation.is_empty or not len(rec_list):
        return rec_list
    scores = rec_list.scores
    if config.normalize_scores:
        scores = _normalized(scores)
    for name, allocation_weight in allocation.entries.items():
        bonus = allocation_weight * config.delta / config.recommender_weight
        protected = set(preferences[name].protected)
        for item_id in protected:
            scores[item_id] += bonus
    return ordered_by_score(rec_list.user_id, rec_list.items, scores, rec_list.produced_at)


class BordaChoice(BaseChoiceMechanism):
    name = "borda"

    def _choose(self, candidates: ScoredList, allocation: Allocation, agents: Mapping[str, BaseFairnessAgent]) -> ScoredList:
        rankings = {name: agents[name].rank_cascaded(candidates) for name in allocation.entries}
        profile = build_ballots(candidates, allocation, rankings, self.config)
        return borda_aggregate(profile, candidates.user_id, candidates.produced_at)


class CopelandChoice(BaseChoiceMechanism):
    name = "copeland"

    def _choose(self, candidates: ScoredList, allocation: Allocation, agents: Mapping[str, BaseFairnessAgent]) -> ScoredList:
        rankings = {name: agents[name].rank_cascaded(candidates) for name in allocation.entries}
        profile = build_ballots(candidates, allocation, rankings, self.config)
        return copeland_aggregate(profile, candidates.user_id, candidates.produced_at)


class RescoreChoice(BaseChoiceMechanism):
    name = "rescore"

    def _choose(self, candidates: ScoredList, allocation: Allocation, agents: Mapping[str, BaseFairnessAgent]) -> ScoredList:
        preferences = {name: agents[name].rank_binary(candidates) for name in allocation.entries}
        return rescore(candidates, allocation, preferences, self.config)
