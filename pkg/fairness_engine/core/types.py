from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple
from fairness_engine.utils.errors import SetupError


@dataclass(frozen=True)
class Item:
    item_id: str
    features: FrozenSet[str] = frozenset()


@dataclass(frozen=True)
class Rating:
    user_id: str
    item_id: str
    value: float


class FeatureCatalog:
    """Items with their protected-feature tags, plus per-tag counts.

    An item is protected for an agent iff it carries the agent's feature tag.
    Counts are derived from the items on construction and never stored separately.
    """
    def __init__(self, items: Iterable[Item]):
        self._items: Dict[str, Item] = {}
        for item in items:
            if item.item_id in self._items:
                raise SetupError(f"[CATALOG] duplicate item id: {item.item_id}")
            self._items[item.item_id] = item
        self._protected: Dict[str, FrozenSet[str]] = {}
        tags = sorted({tag for item in self._items.values() for tag in item.features})
        for tag in tags:
            self._protected[tag] = frozenset(
                item_id for item_id, item in self._items.items() if tag in item.features
            )

    @classmethod
    def from_pairs(cls, item_ids: Iterable[str], pairs: Iterable[Tuple[str, str]]) -> "FeatureCatalog":
        """Build from an item universe and (item_id, feature_tag) rows."""
        features: Dict[str, set] = {item_id: set() for item_id in item_ids}
        for item_id, tag in pairs:
            features.setdefault(item_id, set())
            if tag:
                features[item_id].add(tag)
        return cls(Item(item_id, frozenset(tags)) for item_id, tags in features.items())

    def __len__(self) -> int:
        return len(self._items)

    def __contains__(self, item_id: str) -> bool:
        return item_id in self._items

    def __iter__(self) -> Iterator[Item]:
        return iter(self._items.values())

    def __getitem__(self, item_id: str) -> Item:
        return self._items[item_id]

    @property
    def features(self) -> Tuple[str, ...]:
        return tuple(self._protected)

    def protected_items(self, feature: str) -> FrozenSet[str]:
        return self._protected.get(feature, frozenset())

    def is_protected(self, item_id: str, feature: str) -> bool:
        return item_id in self._protected.get(feature, ())

    def protected_count(self, feature: str) -> int:
        return len(self.protected_items(feature))

    def unprotected_count(self, feature: str) -> int:
        return len(self._items) - self.protected_count(feature)

    def require(self, feature: str) -> None:
        """Check that ``feature`` splits the catalog into two nonempty groups."""
        if self.protected_count(feature) < 1:
            raise SetupError(f"[CATALOG] no item carries feature '{feature}'")
        if self.unprotected_count(feature) < 1:
            raise SetupError(f"[CATALOG] every item carries feature '{feature}', no unprotected group")


def _sort_key(entry: Tuple[str, float]):
    item_id, score = entry
    return (-score, item_id)


@dataclass(frozen=True)
class ScoredList:
    """A ranked list of (item_id, score) for one user.

    Entries are kept in ranked order; scores must be non-increasing.
    ``from_scores`` sorts unordered scores, breaking ties by ascending item id.
    """
    user_id: str
    entries: Tuple[Tuple[str, float], ...]
    produced_at: int = 0

    def __post_init__(self):
        entries = tuple((str(item_id), float(score)) for item_id, score in self.entries)
        object.__setattr__(self, "entries", entries)
        seen = set()
        previous = None
        for item_id, score in entries:
            if item_id in seen:
                raise ValueError(f"[LIST] duplicate item '{item_id}' in list for user '{self.user_id}'")
            seen.add(item_id)
            if previous is not None and score > previous:
                raise ValueError(f"[LIST] scores not in descending order for user '{self.user_id}'")
            previous = score

    @classmethod
    def from_scores(cls, user_id: str, scores: Iterable[Tuple[str, float]], produced_at: int = 0) -> "ScoredList":
        return cls(user_id, tuple(sorted(scores, key=_sort_key)), produced_at)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[Tuple[str, float]]:
        return iter(self.entries)

    @property
    def items(self) -> Tuple[str, ...]:
        return tuple(item_id for item_id, _ in self.entries)

    @property
    def scores(self) -> Dict[str, float]:
        return dict(self.entries)

    def top(self, n: int, produced_at: Optional[int] = None) -> "ScoredList":
        return ScoredList(
            self.user_id,
            self.entries[:n],
            self.produced_at if produced_at is None else produced_at,
        )

    def at_tick(self, produced_at: int) -> "ScoredList":
        return ScoredList(self.user_id, self.entries, produced_at)
