import math
from typing import Dict, Sequence
import numpy as np
from fairness_engine.agent.base import AgentState
from fairness_engine.allocation.base import Allocation, BaseAllocationMechanism


def allocate_least_fair(states: Sequence[AgentState]) -> Allocation:
    """The agent with the lowest fairness, first declared on ties; nobody once all are at 1."""
    if not states:
        return Allocation.none()
    if all(state.fairness >= 1.0 for state in states):
        return Allocation.none()
    chosen = min(range(len(states)), key=lambda index: (states[index].fairness, index))
    return Allocation.single(states[chosen].name)


def lottery_scores(states: Sequence[AgentState], user_id: str, alpha: int = 1, beta: int = 2) -> Dict[str, float]:
    return {
        state.name: (1.0 - state.fairness) ** alpha * state.compatibility_of(user_id) ** beta
        for state in states
    }


def lottery_distribution(states: Sequence[AgentState], user_id: str, alpha: int = 1, beta: int = 2) -> Dict[str, float]:
    """Unfairness^alpha * compatibility^beta per agent, normalized; empty when every score is zero."""
    scores = lottery_scores(states, user_id, alpha, beta)
    total = math.fsum(scores.values())
    if total <= 0.0:
        return {}
    return {name: score / total for name, score in scores.items()}


def allocate_lottery(distribution: Dict[str, float], rng: np.random.Generator) -> Allocation:
    """Draw a single agent from ``distribution``."""
    if not distribution:
        return Allocation.none()
    names = list(distribution)
    probabilities = np.asarray([distribution[name] for name in names], dtype=float)
    cumulative = np.cumsum(probabilities)
    draw = rng.random() * cumulative[-1]
    index = int(np.searchsorted(cumulative, draw, side="right"))
    index = min(index, len(names) - 1)
    # skip zero-mass agents that searchsorted can land on at exact boundaries
    while probabilities[index] == 0.0 and index > 0:
        index -= 1
    return Allocation.single(names[index])


def allocate_weighted(distribution: Dict[str, float], states: Sequence[AgentState]) -> Allocation:
    """Every agent below its target, weighted by its renormalized distribution mass."""
    eligible = {
        state.name: distribution.get(state.name, 0.0)
        for state in states
        if state.fairness < 1.0 and distribution.get(state.name, 0.0) > 0.0
    }
    total = math.fsum(eligible.values())
    if total <= 0.0:
        return Allocation.none()
    return Allocation("weighted", {name: mass / total for name, mass in eligible.items()})


class LeastFairAllocation(BaseAllocationMechanism):
    """Allocates the least fair agent; ignores compatibility."""
    name = "least_fair"

    def allocate(self, states, user_id, rng):
        return allocate_least_fair(states)


class LotteryAllocation(BaseAllocationMechanism):
    """Allocates one agent drawn from the unfairness x compatibility distribution."""
    name = "lottery"

    def allocate(self, states, user_id, rng):
        return allocate_lottery(lottery_distribution(states, user_id, self.alpha, self.beta), rng)


class WeightedAllocation(BaseAllocationMechanism):
    """Allocates every unsatisfied agent, weighted by the lottery distribution."""
    name = "weighted"

    def allocate(self, states, user_id, rng):
        return allocate_weighted(lottery_distribution(states, user_id, self.alpha, self.beta), states)
