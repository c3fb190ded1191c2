import math

import numpy as np
from pytest import approx, mark, raises

from fairness_engine.agent import AgentSpec, ProportionalFairnessAgent, ReciprocalRankFairnessAgent
from fairness_engine.evaluation import (
    EvaluationSummary,
    confidence_interval,
    evaluate_lists,
    interval_rows,
    l_half_norm,
    mean_summary,
    ndcg_at_n,
    summative_fairness,
)
from fairness_engine.utils.errors import InputError

from conftest import make_list


def test_ndcg_hand_example():
    delivered = make_list("u", ["r1", "x", "r2"])
    expected = (1 + 0.5) / (1 + 1 / math.log2(3))
    assert ndcg_at_n(delivered, {"r1", "r2"}, 3) == approx(expected)
    assert ndcg_at_n(delivered, {"r1", "r2"}, 3) == approx(0.9197, abs=1e-4)


def test_ndcg_ideal_and_empty():
    delivered = make_list("u", ["a", "b", "c"])
    assert ndcg_at_n(delivered, {"a", "b", "c", "d"}, 3) == approx(1.0)
    assert ndcg_at_n(delivered, {"z"}, 3) == 0.0
    assert ndcg_at_n(delivered, set(), 3) == 0.0


def test_summative_gpf_hand_count(catalog):
    agent = ProportionalFairnessAgent(AgentSpec("g", "p", "gpf", 0.2), catalog)
    filler = [f"x{index}" for index in range(10)]
    lists = []
    for tick in range(100):
        # 150 protected occurrences over 1000 entries
        protected = ["i0", "i1"] if tick < 50 else ["i0"]
        lists.append(make_list("u", protected + filler[:10 - len(protected)], tick=tick))
    assert summative_fairness(lists, agent) == approx(0.75)


def test_summative_bounds(catalog):
    agent = ReciprocalRankFairnessAgent(AgentSpec("m", "p", "mrr", 0.5), catalog)
    assert summative_fairness([make_list("u", ["i0", "i5"], tick=0)], agent) == 1.0
    assert summative_fairness([make_list("u", ["i5", "i6"], tick=0)], agent) == 0.0


@mark.parametrize("scores, expected", [
    ((0.8, 0.8, 0.8), 0.8),
    ((0.25, 1.0), 0.5625),
    ((1.0, 0.0, 0.0), 1 / 9),
])
def test_l_half_examples(scores, expected):
    assert l_half_norm(scores) == approx(expected)


def test_l_half_properties():
    rng = np.random.default_rng(4)
    for _ in range(200):
        scores = rng.random(rng.integers(1, 6))
        assert l_half_norm(scores) <= scores.mean() + 1e-12
        assert l_half_norm(scores * 0.5) == approx(0.5 * l_half_norm(scores))


def test_l_half_ignores_agent_order_and_rewards_gains():
    rng = np.random.default_rng(8)
    for _ in range(200):
        scores = rng.random(rng.integers(1, 6))
        assert l_half_norm(rng.permutation(scores)) == approx(l_half_norm(scores))
        raised = scores.copy()
        index = rng.integers(scores.size)
        raised[index] = rng.uniform(scores[index], 1.0)
        assert l_half_norm(raised) >= l_half_norm(scores) - 1e-12



def test_l_half_rejects_out_of_range():
    with raises(InputError):
        l_half_norm([0.5, 1.2])
    with raises(InputError):
        l_half_norm([])


def test_evaluate_lists_skips_users_without_positives(catalog):
    agent = ProportionalFairnessAgent(AgentSpec("g", "p", "gpf", 0.5), catalog)
    lists = [make_list("u1", ["i0", "i5"], tick=0), make_list("u2", ["i6", "i7"], tick=1)]
    summary = evaluate_lists(lists, {"u1": frozenset({"i0"})}, [agent], 2, "lottery", "borda", "0")
    assert summary.ndcg == approx(1.0)
    assert summary.agent_fairness == {"g": approx(0.5)}
    assert summary.l_half == approx(0.5)
    assert summary.row(["g"]) == {
        "mechanism_allocation": "lottery",
        "mechanism_choice": "borda",
        "fold": "0",
        "ndcg": approx(1.0),
        "agent_fairness_g": approx(0.5),
        "l_half": approx(0.5),
    }


def test_evaluate_empty_run(catalog):
    agent = ProportionalFairnessAgent(AgentSpec("g", "p", "gpf", 0.5), catalog)
    summary = evaluate_lists([], {}, [agent], 5, "baseline", "baseline", "0")
    assert summary.ndcg == 0.0
    assert summary.l_half == 0.0


def test_mean_summary_recomputes_l_half():
    folds = [
        EvaluationSummary("lottery", "borda", "0", 0.2, {"a": 1.0, "b": 0.0}, l_half_norm([1.0, 0.0])),
        EvaluationSummary("lottery", "borda", "1", 0.4, {"a": 0.0, "b": 1.0}, l_half_norm([0.0, 1.0])),
    ]
    mean = mean_summary(folds)
    assert mean.fold == "mean"
    assert mean.ndcg == approx(0.3)
    assert mean.agent_fairness == approx({"a": 0.5, "b": 0.5})
    assert mean.l_half == approx(0.5)


def test_confidence_interval():
    mean, low, high = confidence_interval([1.0, 2.0, 3.0])
    half_width = 1.96 * 1.0 / math.sqrt(3)
    assert mean == approx(2.0)
    assert (low, high) == approx((2.0 - half_width, 2.0 + half_width))
    assert confidence_interval([0.7]) == approx((0.7, 0.7, 0.7))


def test_interval_rows_cover_every_metric():
    folds = [
        EvaluationSummary("weighted", "copeland", str(fold), 0.1 * fold, {"a": 0.5}, 0.5)
        for fold in range(3)
    ]
    rows = interval_rows(folds)
    assert [row["metric"] for row in rows] == ["ndcg", "agent_fairness_a", "l_half"]
    assert all(row["mechanism_allocation"] == "weighted" for row in rows)
    assert rows[0]["mean"] == approx(0.1)
