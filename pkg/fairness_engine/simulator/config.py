from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Tuple
from fairness_engine.agent.base import AgentSpec, METRIC_KINDS
from fairness_engine.agent.compatibility import BASELINES, LIKE_RULES, LikeRule
from fairness_engine.allocation import ALLOCATION_TYPES
from fairness_engine.choice import CHOICE_TYPES, ChoiceConfig, WEIGHT_MODES
from fairness_engine.data.synthetic import SyntheticSpec
from fairness_engine.utils.config import ConfigNode
from fairness_engine.utils.errors import ConfigError, FairnessEngineError


@dataclass(frozen=True)
class AllocationConfig:
    mechanism: str = "lottery"
    alpha: int = 1
    beta: int = 2


@dataclass(frozen=True)
class ExperimentConfig:
    """_summary_

    Args:
        ratings_path, features_path, candidates_path (Optional[str]): Input files; when
            all are empty the ``synthetic`` spec is generated in memory instead.
        agents (Tuple[AgentSpec, ...]): Fairness agents in declaration order.
        allocation (AllocationConfig): Mechanism name and lottery exponents.
        choice (ChoiceConfig): Rule, recommender weight, delta and weighting mode.
        k (int): Candidate pool per opportunity.
        n (int): Delivered list length, also the nDCG depth.
        window (int): History window capacity in lists.
        folds (int): Number of train/test folds.
        seed (int): Base seed every random stream is derived from.
        like_rule (LikeRule): What counts as a liked rating.
        holdout_fraction (float): Share of a test user's ratings held out.
        compatibility_baseline (str): ``user_mean`` or ``catalog``.
        arrivals_per_user (int): Opportunities per test user per fold.
        threads (int): Worker processes for independent folds and cells.
        sweep_allocations, sweep_choices (Tuple[str, ...]): Grid for the sweep command.
        synthetic (SyntheticSpec): Generator spec for ``synth`` and file-less runs.
        out_dir (str): Where outputs are written.
        lists_path (Optional[str]): Index of delivered lists to re-evaluate with ``eval``.
    """
    ratings_path: Optional[str] = None
    features_path: Optional[str] = None
    candidates_path: Optional[str] = None
    agents: Tuple[AgentSpec, ...] = ()
    allocation: AllocationConfig = field(default_factory=AllocationConfig)
    choice: ChoiceConfig = field(default_factory=ChoiceConfig)
    k: int = 50
    n: int = 10
    window: int = 100
    folds: int = 5
    seed: int = 0
    like_rule: LikeRule = field(default_factory=LikeRule)
    holdout_fraction: float = 0.2
    compatibility_baseline: str = "user_mean"
    arrivals_per_user: int = 1
    threads: int = 1
    sweep_allocations: Tuple[str, ...] = tuple(ALLOCATION_TYPES)
    sweep_choices: Tuple[str, ...] = tuple(CHOICE_TYPES)
    synthetic: SyntheticSpec = field(default_factory=SyntheticSpec)
    out_dir: str = "output"
    lists_path: Optional[str] = None

    def __post_init__(self):
        _require(self.k >= 1, "run.k", f"must be at least 1, got {self.k}")
        _require(1 <= self.n <= self.k, "run.n", f"must lie in [1, run.k={self.k}], got {self.n}")
        _require(self.window >= 1, "run.window", f"must be at least 1, got {self.window}")
        _require(self.folds >= 1, "run.folds", f"must be at least 1, got {self.folds}")
        _require(self.seed >= 0, "run.seed", f"must be nonnegative, got {self.seed}")
        _require(self.arrivals_per_user >= 1, "run.arrivals_per_user", "must be at least 1")
        _require(self.threads >= 1, "run.threads", "must be at least 1")
        _require(0.0 < self.holdout_fraction < 1.0, "data.holdout_fraction", "must lie in (0, 1)")
        _require(self.compatibility_baseline in BASELINES, "compatibility.baseline",
                 f"expected one of {BASELINES}, got '{self.compatibility_baseline}'")
        _require(self.allocation.mechanism in ALLOCATION_TYPES, "allocation.mechanism",
                 f"expected one of {tuple(ALLOCATION_TYPES)}, got '{self.allocation.mechanism}'")
        _require(self.allocation.alpha >= 1, "allocation.alpha", "must be an integer >= 1")
        _require(self.allocation.beta >= 1, "allocation.beta", "must be an integer >= 1")
        for mechanism in self.sweep_allocations:
            _require(mechanism in ALLOCATION_TYPES, "sweep.allocations", f"unknown mechanism '{mechanism}'")
        for rule in self.sweep_choices:
            _require(rule in CHOICE_TYPES, "sweep.choices", f"unknown rule '{rule}'")
        names = [agent.name for agent in self.agents]
        _require(len(names) == len(set(names)), "agents", "agent names must be unique")
        paths = (self.ratings_path, self.features_path, self.candidates_path)
        _require(all(paths) or not any(paths), "data",
                 "set all of ratings, features and candidates, or none to use the synthetic spec")

    @property
    def uses_files(self) -> bool:
        return bool(self.ratings_path)

    @property
    def agent_names(self) -> Tuple[str, ...]:
        return tuple(agent.name for agent in self.agents)

    @classmethod
    def from_node(cls, cfg: ConfigNode) -> "ExperimentConfig":
        """Build from a config already merged over ``configs/base.yaml``."""
        data = cfg.data
        run = cfg.run
        agents = []
        for name in cfg.agents.keys():
            entry = cfg.agents[name]
            _require(bool(entry.feature), f"agents.{name}.feature", "is required")
            _require(entry.metric in METRIC_KINDS, f"agents.{name}.metric",
                     f"expected one of {METRIC_KINDS}, got '{entry.metric}'")
            agents.append(_build(f"agents.{name}", AgentSpec,
                                 name=str(name), feature=str(entry.feature),
                                 metric_kind=entry.metric, target=_number(entry.target, f"agents.{name}.target")))
        _require(data.like_rule in LIKE_RULES, "data.like_rule",
                 f"expected one of {LIKE_RULES}, got '{data.like_rule}'")
        choice = cfg.choice
        _require(choice.rule in CHOICE_TYPES, "choice.rule", f"expected one of {tuple(CHOICE_TYPES)}, got '{choice.rule}'")
        _require(choice.agent_weight_mode in WEIGHT_MODES, "choice.agent_weight_mode",
                 f"expected one of {WEIGHT_MODES}, got '{choice.agent_weight_mode}'")
        synthetic = cfg.synthetic
        return cls(
            ratings_path=data.ratings or None,
            features_path=data.features or None,
            candidates_path=data.candidates or None,
            agents=tuple(agents),
            allocation=AllocationConfig(
                mechanism=cfg.allocation.mechanism,
                alpha=_integer(cfg.allocation.alpha, "allocation.alpha"),
                beta=_integer(cfg.allocation.beta, "allocation.beta"),
            ),
            choice=_build("choice", ChoiceConfig,
                          rule=choice.rule,
                          recommender_weight=_number(choice.recommender_weight, "choice.recommender_weight"),
                          delta=_number(choice.delta, "choice.delta"),
                          agent_weight_mode=choice.agent_weight_mode,
                          normalize_scores=bool(choice.normalize_scores)),
            k=_integer(run.k, "run.k"),
            n=_integer(run.n, "run.n"),
            window=_integer(run.window, "run.window"),
            folds=_integer(run.folds, "run.folds"),
            seed=_integer(run.seed, "run.seed"),
            like_rule=LikeRule(data.like_rule, _number(data.like_threshold, "data.like_threshold")),
            holdout_fraction=_number(data.holdout_fraction, "data.holdout_fraction"),
            compatibility_baseline=cfg.compatibility.baseline,
            arrivals_per_user=_integer(run.arrivals_per_user, "run.arrivals_per_user"),
            threads=_integer(run.threads, "run.threads"),
            sweep_allocations=tuple(cfg.sweep.allocations),
            sweep_choices=tuple(cfg.sweep.choices),
            synthetic=_build("synthetic", SyntheticSpec,
                             users=_integer(synthetic.users, "synthetic.users"),
                             items=_integer(synthetic.items, "synthetic.items"),
                             features=dict(synthetic.features.raw) if synthetic.features else {},
                             bias_factor=_number(synthetic.bias_factor, "synthetic.bias_factor"),
                             density=_number(synthetic.density, "synthetic.density"),
                             seed=_integer(synthetic.seed, "synthetic.seed"),
                             latent_dim=_integer(synthetic.latent_dim, "synthetic.latent_dim"),
                             score_noise=_number(synthetic.score_noise, "synthetic.score_noise"),
                             min_ratings=_integer(synthetic.min_ratings, "synthetic.min_ratings"),
                             affinity_sd=_number(synthetic.affinity_sd, "synthetic.affinity_sd"),
                             recommender_affinity=_number(synthetic.recommender_affinity,
                                                          "synthetic.recommender_affinity"),
                             score_scale=_number(synthetic.score_scale, "synthetic.score_scale")),
            out_dir=str(run.out_dir),
            lists_path=cfg.evaluation.lists or None,
        )

    def run_info(self) -> Dict[str, Any]:
        """Settings reported next to every result set."""
        return {
            "seed": self.seed,
            "folds": self.folds,
            "window": self.window,
            "k": self.k,
            "n": self.n,
            "ndcg_depth": self.n,
            "arrivals_per_user": self.arrivals_per_user,
            "agent_weight_mode": self.choice.agent_weight_mode,
            "recommender_weight": self.choice.recommender_weight,
            "delta": self.choice.delta,
            "normalize_scores": self.choice.normalize_scores,
            "alpha": self.allocation.alpha,
            "beta": self.allocation.beta,
            "compatibility_baseline": self.compatibility_baseline,
            "like_rule": self.like_rule.kind,
            "like_threshold": self.like_rule.threshold,
            "holdout_fraction": self.holdout_fraction,
            "agents": [
                {"name": a.name, "feature": a.feature, "metric": a.metric_kind, "target": a.target}
                for a in self.agents
            ],
        }


def _require(condition: bool, key: str, message: str) -> None:
    if not condition:
        raise ConfigError(key, message)


def _number(value: Any, key: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(key, f"expected a number, got {value!r}")
    return float(value)


def _integer(value: Any, key: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(key, f"expected an integer, got {value!r}")
    return value


def _build(key: str, factory, **kwargs):
    try:
        return factory(**kwargs)
    except ConfigError:
        raise
    except FairnessEngineError as e:
        raise ConfigError(key, str(e))
