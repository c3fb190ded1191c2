from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Dict, Iterable, Mapping, Optional, Tuple
from fairness_engine.core.types import FeatureCatalog, ScoredList
from fairness_engine.agent.ranking import BinaryPreference, rank_binary, rank_cascaded
from fairness_engine.utils.errors import InputError

METRIC_KINDS = ("gpf", "guf", "mrr")


@dataclass(frozen=True)
class AgentSpec:
    """_summary_

    Args:
        name (str): Unique agent name, used as a column suffix in every output.
        feature (str): Feature tag whose carriers are this agent's protected items.
        metric_kind (str): One of ``gpf``, ``guf``, ``mrr``.
        target (float): Target proportion (gpf), utility ratio (guf) or MRR value (mrr).
    """
    name: str
    feature: str
    metric_kind: str
    target: float

    def __post_init__(self):
        if self.metric_kind not in METRIC_KINDS:
            raise InputError(f"[AGENT] {self.name}: unknown metric '{self.metric_kind}'")
        if not self.target > 0:
            raise InputError(f"[AGENT] {self.name}: target must be positive, got {self.target}")
        if self.metric_kind == "mrr" and self.target > 1:
            raise InputError(f"[AGENT] {self.name}: MRR target must be at most 1, got {self.target}")


@dataclass(frozen=True)
class AgentState:
    """An agent's view at one opportunity: windowed fairness and its compatibility map."""
    spec: AgentSpec
    fairness: float
    compatibility: Mapping[str, float] = field(default_factory=dict)
    default_compatibility: float = 1.0

    @property
    def name(self) -> str:
        return self.spec.name

    def compatibility_of(self, user_id: str) -> float:
        return self.compatibility.get(user_id, self.default_compatibility)


@dataclass(frozen=True)
class Ballot:
    ranking: Tuple[str, ...]
    weight: float

    def __post_init__(self):
        object.__setattr__(self, "ranking", tuple(self.ranking))
        if self.weight < 0:
            raise InputError(f"[BALLOT] weight must be nonnegative, got {self.weight}")
        if len(set(self.ranking)) != len(self.ranking):
            raise InputError("[BALLOT] ranking repeats an item")


class BaseFairnessAgent(ABC):
    """_summary_

    Args:
        spec (AgentSpec): What the agent advocates for and its target.
        catalog (FeatureCatalog): Item features, also the source of group sizes.

    A fairness agent bundles three functions: a fairness metric over recent
    lists, a compatibility score per user (assigned after training data is seen)
    and a ranking function that turns a candidate list into the agent's ballot.
    """
    metric_kind: str = ""

    def __init__(self, spec: AgentSpec, catalog: FeatureCatalog):
        if spec.metric_kind != self.metric_kind:
            raise InputError(
                f"[AGENT] {spec.name}: {type(self).__name__} implements '{self.metric_kind}', "
                f"not '{spec.metric_kind}'"
            )
        catalog.require(spec.feature)
        self.spec = spec
        self.catalog = catalog
        self.compatibility: Dict[str, float] = {}
        self.default_compatibility = 1.0

    @property
    def name(self) -> str:
        return self.spec.name

    @property
    def feature(self) -> str:
        return self.spec.feature

    def set_compatibility(self, compatibility: Mapping[str, float], default: float) -> None:
        self.compatibility = dict(compatibility)
        self.default_compatibility = default

    @abstractmethod
    def measure(self, lists: Iterable[ScoredList]) -> float:
        """Apply this agent's metric to ``lists`` treated as one window."""

    def state(self, window: Iterable[ScoredList]) -> AgentState:
        return AgentState(
            spec=self.spec,
            fairness=self.measure(window),
            compatibility=self.compatibility,
            default_compatibility=self.default_compatibility,
        )

    def is_protected(self, item_id: str) -> bool:
        return self.catalog.is_protected(item_id, self.feature)

    def rank_binary(self, candidates: ScoredList) -> BinaryPreference:
        return rank_binary(candidates, self.catalog, self.feature)

    def rank_cascaded(self, candidates: ScoredList) -> Tuple[str, ...]:
        return rank_cascaded(candidates, self.catalog, self.feature)
