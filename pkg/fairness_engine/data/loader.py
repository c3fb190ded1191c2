import os
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Set, Tuple
import pandas as pd
from fairness_engine.agent.compatibility import LikeRule
from fairness_engine.core.types import FeatureCatalog, ScoredList
from fairness_engine.utils.errors import DataLoadError, SetupError
from fairness_engine.utils.seeding import stable_bucket, stable_fraction

RATINGS_COLUMNS = ["user_id", "item_id", "rating"]
FEATURES_COLUMNS = ["item_id", "feature_tag"]
CANDIDATES_COLUMNS = ["user_id", "item_id", "score"]


@dataclass(frozen=True)
class FoldSplit:
    """One train/test split: the test users' held-out ratings and everyone else's training data."""
    fold: int
    train: pd.DataFrame
    test: pd.DataFrame
    test_users: Tuple[str, ...]
    relevant: Mapping[str, FrozenSet[str]]
    train_items: Mapping[str, FrozenSet[str]]


@dataclass
class DatasetBundle:
    """_summary_

    Args:
        ratings (pd.DataFrame): ``user_id,item_id,rating`` for every user.
        catalog (FeatureCatalog): Item universe with feature tags.
        candidates (Dict[str, ScoredList]): Recommender scores per user, best first.
        folds (Tuple[FoldSplit, ...]): Deterministic user-stratified splits.
        item_features (pd.DataFrame): The ``item_id,feature_tag`` rows the catalog came from.
        candidate_frame (pd.DataFrame): The ``user_id,item_id,score`` rows.
    """
    ratings: pd.DataFrame
    catalog: FeatureCatalog
    candidates: Dict[str, ScoredList]
    folds: Tuple[FoldSplit, ...]
    item_features: pd.DataFrame
    candidate_frame: pd.DataFrame
    like_rule: LikeRule = field(default_factory=LikeRule)

    def fold(self, index: int) -> FoldSplit:
        return self.folds[index]

    def flagged_users(self, k: int) -> List[str]:
        """Test users (of any fold) with fewer than ``k`` unrated candidates."""
        flagged = []
        for split in self.folds:
            for user_id in split.test_users:
                available = _available(self.candidates.get(user_id), split.train_items.get(user_id, frozenset()))
                if available < k:
                    flagged.append(user_id)
        return sorted(set(flagged))

    def require_features(self, features: Iterable[str]) -> None:
        for feature in features:
            try:
                self.catalog.require(feature)
            except SetupError as e:
                raise DataLoadError("item features", 0, str(e))


def _available(candidates: Optional[ScoredList], excluded: FrozenSet[str]) -> int:
    if candidates is None:
        return 0
    return sum(1 for item_id in candidates.items if item_id not in excluded)


def _read_table(path: str, columns: Sequence[str]) -> pd.DataFrame:
    if not os.path.exists(path):
        raise DataLoadError(path, 0, "file not found")
    try:
        frame = pd.read_csv(
            path,
            dtype=str,
            keep_default_na=False,
            encoding="utf-8",
        )
    except (pd.errors.ParserError, UnicodeDecodeError) as e:
        raise DataLoadError(path, 0, f"cannot parse: {e}")
    except pd.errors.EmptyDataError:
        raise DataLoadError(path, 1, "missing header row")
    if list(frame.columns) != list(columns):
        raise DataLoadError(path, 1, f"expected header {','.join(columns)}, got {','.join(map(str, frame.columns))}")
    for column in columns:
        frame[column] = frame[column].str.strip()
    return frame


def _row_number(position: int) -> int:
    # header is row 1
    return position + 2


def _numeric(frame: pd.DataFrame, column: str, path: str) -> pd.Series:
    values = pd.to_numeric(frame[column], errors="coerce")
    bad = values.isna().to_numpy().nonzero()[0]
    if len(bad):
        position = int(bad[0])
        raise DataLoadError(path, _row_number(position), f"{column} '{frame[column].iloc[position]}' is not a number")
    # exact decimal conversion, to_numeric only validates
    return frame[column].astype(float)


def _require_ids(frame: pd.DataFrame, columns: Sequence[str], path: str) -> None:
    for column in columns:
        empty = (frame[column] == "").to_numpy().nonzero()[0]
        if len(empty):
            raise DataLoadError(path, _row_number(int(empty[0])), f"empty {column}")


def _require_unique(frame: pd.DataFrame, columns: Sequence[str], path: str) -> None:
    duplicated = frame.duplicated(subset=list(columns)).to_numpy().nonzero()[0]
    if len(duplicated):
        position = int(duplicated[0])
        key = ",".join(str(frame[column].iloc[position]) for column in columns)
        raise DataLoadError(path, _row_number(position), f"duplicate ({','.join(columns)}) = ({key})")


def read_ratings(path: str) -> pd.DataFrame:
    frame = _read_table(path, RATINGS_COLUMNS)
    _require_ids(frame, ["user_id", "item_id"], path)
    frame["rating"] = _numeric(frame, "rating", path)
    _require_unique(frame, ["user_id", "item_id"], path)
    return frame


def read_item_features(path: str) -> pd.DataFrame:
    frame = _read_table(path, FEATURES_COLUMNS)
    _require_ids(frame, ["item_id"], path)
    return frame


def read_candidates(path: str, catalog: FeatureCatalog) -> pd.DataFrame:
    frame = _read_table(path, CANDIDATES_COLUMNS)
    _require_ids(frame, ["user_id", "item_id"], path)
    frame["score"] = _numeric(frame, "score", path)
    unknown = (~frame["item_id"].isin(set(item.item_id for item in catalog))).to_numpy().nonzero()[0]
    if len(unknown):
        position = int(unknown[0])
        raise DataLoadError(path, _row_number(position), f"unknown item '{frame['item_id'].iloc[position]}'")
    _require_unique(frame, ["user_id", "item_id"], path)
    return frame


def build_catalog(ratings: pd.DataFrame, item_features: pd.DataFrame) -> FeatureCatalog:
    """Items are everything named in the features file or the ratings file."""
    universe = list(dict.fromkeys(list(item_features["item_id"]) + list(ratings["item_id"])))
    pairs = zip(item_features["item_id"], item_features["feature_tag"])
    return FeatureCatalog.from_pairs(universe, pairs)


def build_candidates(frame: pd.DataFrame) -> Dict[str, ScoredList]:
    candidates = {}
    for user_id, group in frame.groupby("user_id", sort=True):
        candidates[str(user_id)] = ScoredList.from_scores(
            str(user_id), zip(group["item_id"], group["score"].astype(float))
        )
    return candidates


def split_folds(
        ratings: pd.DataFrame,
        folds: int,
        seed: int,
        like_rule: LikeRule,
        holdout_fraction: float = 0.2
        ) -> Tuple[FoldSplit, ...]:
    """
    Users are hashed with the seed into ``folds`` buckets; in fold f the users of
    bucket f hold out roughly ``holdout_fraction`` of their ratings (chosen by a hash
    of user, item and seed) as test data. All other ratings are training data.
    """
    if folds < 1:
        raise SetupError(f"[SPLIT] folds must be at least 1, got {folds}")
    if not 0.0 < holdout_fraction < 1.0:
        raise SetupError(f"[SPLIT] holdout_fraction must lie in (0, 1), got {holdout_fraction}")
    users = sorted(ratings["user_id"].unique())
    bucket = {user_id: stable_bucket(user_id, seed, "fold", buckets=folds) for user_id in users}
    held_out = pd.Series(
        [stable_fraction(u, i, seed, "holdout") < holdout_fraction for u, i in zip(ratings["user_id"], ratings["item_id"])],
        index=ratings.index,
    )
    user_bucket = ratings["user_id"].map(bucket)

    splits = []
    for fold in range(folds):
        is_test = (user_bucket == fold) & held_out
        train = ratings[~is_test].reset_index(drop=True)
        test = ratings[is_test].reset_index(drop=True)
        test_users = tuple(user_id for user_id in users if bucket[user_id] == fold)
        liked = test[like_rule.mask(test["rating"])]
        relevant = {
            str(user_id): frozenset(group["item_id"])
            for user_id, group in liked.groupby("user_id", sort=True)
        }
        train_items = {
            str(user_id): frozenset(group["item_id"])
            for user_id, group in train.groupby("user_id", sort=True)
        }
        splits.append(FoldSplit(fold, train, test, test_users, relevant, train_items))
    return tuple(splits)


def build_bundle(
        ratings: pd.DataFrame,
        item_features: pd.DataFrame,
        candidate_frame: pd.DataFrame,
        folds: int,
        seed: int,
        like_rule: LikeRule,
        holdout_fraction: float = 0.2
        ) -> DatasetBundle:
    catalog = build_catalog(ratings, item_features)
    return DatasetBundle(
        ratings=ratings,
        catalog=catalog,
        candidates=build_candidates(candidate_frame),
        folds=split_folds(ratings, folds, seed, like_rule, holdout_fraction),
        item_features=item_features,
        candidate_frame=candidate_frame,
        like_rule=like_rule,
    )


def load_bundle(
        ratings_path: str,
        features_path: str,
        candidates_path: str,
        folds: int = 1,
        seed: int = 0,
        like_rule: Optional[LikeRule] = None,
        holdout_fraction: float = 0.2,
        required_features: Iterable[str] = ()
        ) -> DatasetBundle:
    """Read and validate the three input files; raises ``DataLoadError`` naming file and row."""
    like_rule = like_rule or LikeRule()
    ratings = read_ratings(ratings_path)
    if ratings.empty:
        raise DataLoadError(ratings_path, 0, "no ratings")
    item_features = read_item_features(features_path)
    catalog = build_catalog(ratings, item_features)
    candidate_frame = read_candidates(candidates_path, catalog)
    bundle = DatasetBundle(
        ratings=ratings,
        catalog=catalog,
        candidates=build_candidates(candidate_frame),
        folds=split_folds(ratings, folds, seed, like_rule, holdout_fraction),
        item_features=item_features,
        candidate_frame=candidate_frame,
        like_rule=like_rule,
    )
    bundle.require_features(required_features)
    return bundle
