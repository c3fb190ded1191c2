from dataclasses import dataclass
from typing import Dict, Iterable, Sequence, Tuple, Union
import numpy as np
import pandas as pd
from fairness_engine.agent.base import AgentSpec
from fairness_engine.core.types import FeatureCatalog, Rating
from fairness_engine.utils.errors import InputError, SetupError

LIKE_RULES = ("threshold", "all")
BASELINES = ("user_mean", "catalog")


@dataclass(frozen=True)
class LikeRule:
    """Which ratings count as "liked": ``threshold`` (rating > threshold) or ``all``."""
    kind: str = "threshold"
    threshold: float = 3.0

    def __post_init__(self):
        if self.kind not in LIKE_RULES:
            raise InputError(f"[LIKE] unknown like rule '{self.kind}', expected one of {LIKE_RULES}")

    def mask(self, ratings: pd.Series) -> pd.Series:
        if self.kind == "all":
            return pd.Series(True, index=ratings.index)
        return ratings > self.threshold


def ratings_frame(ratings: Union[pd.DataFrame, Iterable[Rating]]) -> pd.DataFrame:
    if isinstance(ratings, pd.DataFrame):
        return ratings
    return pd.DataFrame(
        [(r.user_id, r.item_id, r.value) for r in ratings],
        columns=["user_id", "item_id", "rating"],
    )


def feature_shares(
        train: Union[pd.DataFrame, Iterable[Rating]],
        catalog: FeatureCatalog,
        features: Sequence[str],
        like_rule: LikeRule
        ) -> pd.DataFrame:
    """p_{u,f}: liked items of u carrying f over all items u rated, one column per feature."""
    frame = ratings_frame(train)
    if frame.empty:
        raise SetupError("[COMPATIBILITY] training ratings are empty")
    liked = like_rule.mask(frame["rating"])
    rated = frame.groupby("user_id", sort=True).size()
    shares = {}
    for feature in features:
        carries = frame["item_id"].isin(catalog.protected_items(feature))
        hits = (liked & carries).groupby(frame["user_id"], sort=True).sum()
        shares[feature] = hits.reindex(rated.index, fill_value=0) / rated
    return pd.DataFrame(shares, index=rated.index)


def compute_compatibility(
        train: Union[pd.DataFrame, Iterable[Rating]],
        catalog: FeatureCatalog,
        agents: Sequence[AgentSpec],
        like_rule: LikeRule,
        baseline: str = "user_mean"
        ) -> Dict[str, Tuple[float, ...]]:
    """
    c_{u,f} = p_{u,f} / p̄_f, normalized over the agents to sum to 1 per user.

    ``baseline`` picks p̄_f: the mean of p_{u,f} over training users
    (``user_mean``) or the share of catalog items carrying f (``catalog``).
    Users whose raw vector is all zero get the uniform vector, as do users
    that never appear in training (see ``uniform_compatibility``).
    """
    if baseline not in BASELINES:
        raise InputError(f"[COMPATIBILITY] unknown baseline '{baseline}', expected one of {BASELINES}")
    if not agents:
        return {}
    features = [agent.feature for agent in agents]
    shares = feature_shares(train, catalog, sorted(set(features)), like_rule)

    raw = np.empty((len(shares.index), len(agents)), dtype=float)
    for column, agent in enumerate(agents):
        if baseline == "user_mean":
            mean_share = float(shares[agent.feature].mean())
        else:
            mean_share = catalog.protected_count(agent.feature) / len(catalog)
        if mean_share == 0.0:
            raise SetupError(
                f"[COMPATIBILITY] agent '{agent.name}': no training user likes any item with feature '{agent.feature}'"
            )
        raw[:, column] = shares[agent.feature].to_numpy(dtype=float) / mean_share

    totals = raw.sum(axis=1, keepdims=True)
    uniform = np.full(len(agents), 1.0 / len(agents))
    normalized = np.where(totals > 0, raw / np.where(totals > 0, totals, 1.0), uniform)
    return {
        str(user_id): tuple(float(value) for value in row)
        for user_id, row in zip(shares.index, normalized)
    }


def uniform_compatibility(agent_count: int) -> float:
    return 1.0 / agent_count if agent_count else 0.0
