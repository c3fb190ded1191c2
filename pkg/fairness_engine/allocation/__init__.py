"""
Allocation mechanisms: which fairness agents join each recommendation opportunity.
"""
from .base import Allocation, BaseAllocationMechanism
from .mechanisms import (
    allocate_least_fair,
    lottery_scores,
    lottery_distribution,
    allocate_lottery,
    allocate_weighted,
    LeastFairAllocation,
    LotteryAllocation,
    WeightedAllocation,
)

ALLOCATION_TYPES = {
    "least_fair": "fairness_engine.allocation.LeastFairAllocation",
    "lottery": "fairness_engine.allocation.LotteryAllocation",
    "weighted": "fairness_engine.allocation.WeightedAllocation",
}

__all__ = [
    'Allocation',
    'BaseAllocationMechanism',
    'ALLOCATION_TYPES',
    'allocate_least_fair',
    'lottery_scores',
    'lottery_distribution',
    'allocate_lottery',
    'allocate_weighted',
    'LeastFairAllocation',
    'LotteryAllocation',
    'WeightedAllocation',
]
