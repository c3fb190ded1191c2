import os
from typing import Any, Dict, Sequence

import yaml
from pytest import fixture

from fairness_engine.core import FeatureCatalog, ScoredList
from fairness_engine.data.synthetic import SyntheticSpec, generate_synthetic

SMALL_SYNTHETIC = {
    "users": 40,
    "items": 40,
    "features": {"group_a": 0.2, "group_b": 0.3},
    "bias_factor": 0.5,
    "density": 0.3,
    "seed": 3,
}

SMALL_AGENTS = {
    "a_exposure": {"feature": "group_a", "metric": "mrr", "target": 0.5},
    "b_share": {"feature": "group_b", "metric": "gpf", "target": 0.3},
}


def make_list(user_id: str, items: Sequence[str], tick: int = 0) -> ScoredList:
    """A list in the given order with strictly decreasing scores."""
    count = len(items)
    return ScoredList(user_id, tuple((item_id, float(count - rank)) for rank, item_id in enumerate(items)), tick)


@fixture
def catalog():
    "Ten items i0..i9; i0 and i1 carry feature ``p``, i2..i4 carry ``q``."
    pairs = [("i0", "p"), ("i1", "p"), ("i2", "q"), ("i3", "q"), ("i4", "q")]
    return FeatureCatalog.from_pairs([f"i{index}" for index in range(10)], pairs)


@fixture(scope="session")
def small_spec():
    return SyntheticSpec(**SMALL_SYNTHETIC)


@fixture(scope="session")
def small_bundle(small_spec):
    return generate_synthetic(small_spec, folds=2, split_seed=0)


@fixture
def write_config(tmp_path):
    "Write a YAML experiment config into the test's temp dir and return its path."
    def _write(content: Dict[str, Any], name: str = "experiment.yaml") -> str:
        path = os.path.join(tmp_path, name)
        with open(path, "w", encoding="utf-8") as f:
            yaml.safe_dump(content, f, sort_keys=False)
        return path
    return _write


@fixture
def small_config():
    "A small synthetic experiment; callers adjust sections before writing it."
    return {
        "workflow": {"verbose": False},
        "agents": {name: dict(entry) for name, entry in SMALL_AGENTS.items()},
        "allocation": {"mechanism": "lottery"},
        "choice": {"rule": "borda"},
        "run": {"k": 10, "n": 5, "window": 20, "folds": 2, "seed": 0},
        "synthetic": dict(SMALL_SYNTHETIC),
    }
