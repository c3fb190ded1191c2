import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Dict, Mapping, Sequence
import numpy as np
from fairness_engine.agent.base import AgentState
from fairness_engine.utils.errors import InputError

KINDS = ("none", "single", "weighted")


@dataclass(frozen=True)
class Allocation:
    """Which agents take part in one opportunity, and with what weight."""
    kind: str = "none"
    entries: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self):
        entries = {str(name): float(weight) for name, weight in dict(self.entries).items()}
        object.__setattr__(self, "entries", entries)
        if self.kind not in KINDS:
            raise InputError(f"[ALLOCATION] unknown kind '{self.kind}'")
        if any(weight < 0 for weight in entries.values()):
            raise InputError("[ALLOCATION] weights must be nonnegative")
        if self.kind == "none" and entries:
            raise InputError("[ALLOCATION] kind 'none' cannot carry agents")
        if self.kind == "single" and (len(entries) != 1 or next(iter(entries.values())) != 1.0):
            raise InputError("[ALLOCATION] kind 'single' needs exactly one agent with weight 1")
        if self.kind == "weighted" and (not entries or abs(math.fsum(entries.values()) - 1.0) > 1e-9):
            raise InputError("[ALLOCATION] weighted allocation must sum to 1")

    @classmethod
    def none(cls) -> "Allocation":
        return cls("none", {})

    @classmethod
    def single(cls, name: str) -> "Allocation":
        return cls("single", {name: 1.0})

    @property
    def is_empty(self) -> bool:
        return self.kind == "none"

    def weight(self, name: str) -> float:
        return self.entries.get(name, 0.0)

    def describe(self) -> str:
        """Compact ``name:weight;name:weight`` form for record files."""
        return ";".join(f"{name}:{weight!r}" for name, weight in self.entries.items())


class BaseAllocationMechanism(ABC):
    """_summary_

    Args:
        alpha (int): Exponent applied to unfairness (1 - fairness).
        beta (int): Exponent applied to user compatibility.

    Turns the agents' states at one opportunity into an ``Allocation``. The
    random stream is owned by the caller and consumed in arrival order.
    """
    name: str = ""

    def __init__(self, alpha: int = 1, beta: int = 2):
        if alpha < 1 or beta < 1:
            raise InputError(f"[ALLOCATION] exponents must be at least 1, got alpha={alpha}, beta={beta}")
        self.alpha = alpha
        self.beta = beta

    @abstractmethod
    def allocate(self, states: Sequence[AgentState], user_id: str, rng: np.random.Generator) -> Allocation:
        pass
