import os
from dataclasses import dataclass, field
from typing import Dict, Mapping, Optional
import numpy as np
import pandas as pd
from fairness_engine.agent.compatibility import LikeRule
from fairness_engine.data.loader import DatasetBundle, build_bundle
from fairness_engine.utils.errors import InputError


@dataclass(frozen=True)
class SyntheticSpec:
    """_summary_

    Args:
        users (int): Number of users.
        items (int): Number of items.
        features (Mapping[str, float]): Feature tag -> prevalence in (0, 1).
        bias_factor (float): Multiplier in (0, 1] applied to the recommender score of
            every item carrying at least one feature tag.
        density (float): Expected share of the catalog each user rates.
        seed (int): Seed of the generator; the output depends only on the settings and the seed.
        latent_dim (int): Size of the user/item taste vectors.
        score_noise (float): Std of the recommender's error on the preference logit.
        min_ratings (int): Floor on ratings per user.
        affinity_sd (float): Std of each user's affinity for each feature tag.
        recommender_affinity (float): Share in [0, 1] of the tag affinity the recommender
            picks up; the rest of it is missing from the scores.
        score_scale (float): Unpenalized score of the item the recommender predicts highest.
    """
    users: int = 500
    items: int = 200
    features: Mapping[str, float] = field(default_factory=lambda: {"group_a": 0.1, "group_b": 0.2, "group_c": 0.3})
    bias_factor: float = 0.5
    density: float = 0.1
    seed: int = 0
    latent_dim: int = 8
    score_noise: float = 0.5
    min_ratings: int = 5
    affinity_sd: float = 1.0
    recommender_affinity: float = 0.5
    score_scale: float = 2.5

    def __post_init__(self):
        object.__setattr__(self, "features", dict(self.features))
        if self.users < 1 or self.items < 2:
            raise InputError("[SYNTH] need at least one user and two items")
        if not self.features:
            raise InputError("[SYNTH] at least one feature is required")
        for tag, prevalence in self.features.items():
            if not 0.0 < prevalence < 1.0:
                raise InputError(f"[SYNTH] prevalence of '{tag}' must lie in (0, 1), got {prevalence}")
        if not 0.0 < self.bias_factor <= 1.0:
            raise InputError(f"[SYNTH] bias_factor must lie in (0, 1], got {self.bias_factor}")
        if not 0.0 < self.density <= 1.0:
            raise InputError(f"[SYNTH] density must lie in (0, 1], got {self.density}")
        if self.min_ratings < 1 or self.min_ratings > self.items:
            raise InputError(f"[SYNTH] min_ratings must lie in [1, items], got {self.min_ratings}")
        if self.latent_dim < 1:
            raise InputError(f"[SYNTH] latent_dim must be positive, got {self.latent_dim}")
        if self.score_noise < 0.0 or self.affinity_sd < 0.0:
            raise InputError("[SYNTH] score_noise and affinity_sd must be non-negative")
        if not 0.0 <= self.recommender_affinity <= 1.0:
            raise InputError(f"[SYNTH] recommender_affinity must lie in [0, 1], got {self.recommender_affinity}")
        if self.score_scale <= 0.0:
            raise InputError(f"[SYNTH] score_scale must be positive, got {self.score_scale}")


def generate_frames(spec: SyntheticSpec) -> Dict[str, pd.DataFrame]:
    """
    Draw items, users, ratings and biased recommender scores.

    Each item carries each tag independently with the tag's prevalence. A user's
    preference logit for an item is a latent taste match plus item quality plus the
    user's affinity for the item's tags; no tag is better or worse on average.

    Each user rates ``Binomial(items, density)`` items (at least ``min_ratings``),
    drawn without replacement with probability proportional to ``exp(logit)``, and
    rates them ``round(3 + logit + noise)`` clipped to 1-5.

    The recommender sees the logit with noise and only ``recommender_affinity`` of the
    tag affinity. Its score is ``score_scale * exp(predicted - best predicted)`` per
    user, multiplied by ``bias_factor`` for tagged items.
    """
    rng = np.random.default_rng(spec.seed)
    tags = list(spec.features)
    prevalence = np.asarray([spec.features[tag] for tag in tags])
    user_ids = [f"u{index:05d}" for index in range(spec.users)]
    item_ids = [f"i{index:05d}" for index in range(spec.items)]

    flags = rng.random((spec.items, len(tags))) < prevalence
    for column in range(len(tags)):
        # keep both groups nonempty
        if not flags[:, column].any():
            flags[0, column] = True
        if flags[:, column].all():
            flags[-1, column] = False

    quality = rng.normal(0.0, 0.5, spec.items)
    user_taste = rng.normal(size=(spec.users, spec.latent_dim))
    item_taste = rng.normal(size=(spec.items, spec.latent_dim))
    affinity = rng.normal(0.0, spec.affinity_sd, size=(spec.users, len(tags)))
    tag_affinity = affinity @ flags.T.astype(float)
    logits = user_taste @ item_taste.T / np.sqrt(spec.latent_dim) + quality[None, :] + tag_affinity

    counts = np.maximum(rng.binomial(spec.items, spec.density, spec.users), spec.min_ratings)
    # top-count of logit + Gumbel is a draw without replacement proportional to exp(logit)
    keys = logits + rng.gumbel(size=logits.shape)
    rating_noise = rng.normal(0.0, 0.5, size=logits.shape)
    rating_rows = []
    for user, count in enumerate(counts):
        chosen = np.argsort(-keys[user], kind="stable")[:count]
        for item in np.sort(chosen):
            value = float(np.clip(np.rint(3.0 + logits[user, item] + rating_noise[user, item]), 1.0, 5.0))
            rating_rows.append((user_ids[user], item_ids[item], value))

    predicted = (logits - (1.0 - spec.recommender_affinity) * tag_affinity
                 + rng.normal(0.0, spec.score_noise, size=logits.shape))
    relative = np.exp(predicted - predicted.max(axis=1, keepdims=True))
    penalty = np.where(flags.any(axis=1), spec.bias_factor, 1.0)
    scores = np.round(spec.score_scale * relative * penalty[None, :], 6)

    feature_rows = []
    for item, item_id in enumerate(item_ids):
        carried = [tags[column] for column in range(len(tags)) if flags[item, column]]
        if carried:
            feature_rows.extend((item_id, tag) for tag in carried)
        else:
            feature_rows.append((item_id, ""))

    candidate_rows = [
        (user_ids[user], item_ids[item], float(scores[user, item]))
        for user in range(spec.users)
        for item in range(spec.items)
    ]
    return {
        "ratings": pd.DataFrame(rating_rows, columns=["user_id", "item_id", "rating"]),
        "item_features": pd.DataFrame(feature_rows, columns=["item_id", "feature_tag"]),
        "candidates": pd.DataFrame(candidate_rows, columns=["user_id", "item_id", "score"]),
    }


def write_frames(frames: Mapping[str, pd.DataFrame], out_dir: str) -> Dict[str, str]:
    os.makedirs(out_dir, exist_ok=True)
    paths = {}
    for name, frame in frames.items():
        path = os.path.join(out_dir, f"{name}.csv")
        frame.to_csv(path, index=False, encoding="utf-8", lineterminator="\n")
        paths[name] = path
    return paths


def generate_synthetic(
        spec: SyntheticSpec,
        folds: int = 1,
        like_rule: Optional[LikeRule] = None,
        holdout_fraction: float = 0.2,
        out_dir: Optional[str] = None,
        split_seed: Optional[int] = None
        ) -> DatasetBundle:
    """Generate a bundle from ``spec``; with ``out_dir`` also write the three input files there.

    Folds are split with ``split_seed`` (the generator seed when omitted).
    """
    frames = generate_frames(spec)
    if out_dir is not None:
        write_frames(frames, out_dir)
    return build_bundle(
        frames["ratings"],
        frames["item_features"],
        frames["candidates"],
        folds=folds,
        seed=spec.seed if split_seed is None else split_seed,
        like_rule=like_rule or LikeRule(),
        holdout_fraction=holdout_fraction,
    )
