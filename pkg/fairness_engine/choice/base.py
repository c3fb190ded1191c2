from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Dict, Mapping, Sequence, Tuple
from fairness_engine.agent.base import Ballot, BaseFairnessAgent
from fairness_engine.allocation.base import Allocation
from fairness_engine.core.types import ScoredList
from fairness_engine.utils.errors import InputError

RULES = ("borda", "copeland", "rescore")
WEIGHT_MODES = ("shared", "per_agent")

# aggregate scores closer than this are ties, broken by recommender order
SCORE_TOLERANCE = 1e-9


@dataclass(frozen=True)
class ChoiceConfig:
    """_summary_

    Args:
        rule (str): ``borda``, ``copeland`` or ``rescore``.
        recommender_weight (float): Weight of the recommender ballot, in (0, 1).
        delta (float): Rescoring bonus for protected items.
        agent_weight_mode (str): ``shared`` splits (1 - recommender_weight) across the
            allocated agents by allocation weight; ``per_agent`` gives each allocated
            agent the full (1 - recommender_weight).
        normalize_scores (bool): Min-max scale recommender scores per candidate list before rescoring.
    """
    rule: str = "borda"
    recommender_weight: float = 0.6
    delta: float = 0.5
    agent_weight_mode: str = "shared"
    normalize_scores: bool = False

    def __post_init__(self):
        if self.rule not in RULES:
            raise InputError(f"[CHOICE] unknown rule '{self.rule}', expected one of {RULES}")
        if not 0.0 < self.recommender_weight < 1.0:
            raise InputError(f"[CHOICE] recommender_weight must lie in (0, 1), got {self.recommender_weight}")
        if self.delta < 0:
            raise InputError(f"[CHOICE] delta must be nonnegative, got {self.delta}")
        if self.agent_weight_mode not in WEIGHT_MODES:
            raise InputError(f"[CHOICE] unknown agent_weight_mode '{self.agent_weight_mode}'")


@dataclass(frozen=True)
class BallotProfile:
    """The recommender's ballot (always first) followed by one ballot per allocated agent."""
    candidates: Tuple[str, ...]
    ballots: Tuple[Ballot, ...]

    def __post_init__(self):
        if not self.ballots:
            raise InputError("[PROFILE] the recommender ballot is required")
        if tuple(self.ballots[0].ranking) != tuple(self.candidates):
            raise InputError("[PROFILE] first ballot must be the recommender's order")
        expected = set(self.candidates)
        for ballot in self.ballots:
            if len(ballot.ranking) != len(self.candidates) or set(ballot.ranking) != expected:
                raise InputError("[PROFILE] every ballot must rank exactly the candidate set")

    @property
    def recommender(self) -> Ballot:
        return self.ballots[0]


def build_ballots(
        rec_list: ScoredList,
        allocation: Allocation,
        agent_rankings: Mapping[str, Sequence[str]],
        config: ChoiceConfig
        ) -> BallotProfile:
    """
    Recommender ballot weighted ``w_rec``; each allocated agent's ballot weighted
    (1 - w_rec) * allocation weight (``shared``) or (1 - w_rec) (``per_agent``).
    """
    ballots = [Ballot(rec_list.items, config.recommender_weight)]
    if not allocation.is_empty:
        agent_share = 1.0 - config.recommender_weight
        for name, allocation_weight in allocation.entries.items():
            if name not in agent_rankings:
                raise InputError(f"[PROFILE] no ranking supplied for allocated agent '{name}'")
            if config.agent_weight_mode == "shared":
                weight = agent_share * allocation_weight
            else:
                weight = agent_share
            ballots.append(Ballot(tuple(agent_rankings[name]), weight))
    return BallotProfile(rec_list.items, tuple(ballots))


def ordered_by_score(user_id: str, candidates: Sequence[str], scores: Mapping[str, float], produced_at: int = 0) -> ScoredList:
    """Sort ``candidates`` by score descending; near-equal scores keep candidate order."""
    order = list(candidates)
    position = {item_id: index for index, item_id in enumerate(order)}
    ranked = sorted(order, key=lambda item_id: (-scores[item_id], position[item_id]))
    # merge runs of tied scores back into candidate order
    result = []
    index = 0
    while index < len(ranked):
        run = [ranked[index]]
        anchor = scores[ranked[index]]
        index += 1
        while index < len(ranked) and anchor - scores[ranked[index]] <= SCORE_TOLERANCE:
            run.append(ranked[index])
            index += 1
        run.sort(key=position.__getitem__)
        result.extend(run)
    entries = []
    ceiling = None
    for item_id in result:
        score = scores[item_id]
        # tolerance ties can leave a later score a hair above an earlier one
        if ceiling is not None and score > ceiling:
            score = ceiling
        entries.append((item_id, score))
        ceiling = score
    return ScoredList(user_id, tuple(entries), produced_at)


class BaseChoiceMechanism(ABC):
    """_summary_

    Args:
        config (ChoiceConfig): Weights and rule options.

    Aggregates the recommender's candidate list with the ballots of the allocated
    agents. With no agents allocated every rule returns the candidate list as is.
    """
    name: str = ""

    def __init__(self, config: ChoiceConfig):
        self.config = config

    def choose(
            self,
            candidates: ScoredList,
            allocation: Allocation,
            agents: Mapping[str, BaseFairnessAgent]
            ) -> ScoredList:
        if allocation.is_empty:
            return candidates
        return self._choose(candidates, allocation, agents)

    @abstractmethod
    def _choose(
            self,
            candidates: ScoredList,
            allocation: Allocation,
            agents: Mapping[str, BaseFairnessAgent]
            ) -> ScoredList:
        pass
