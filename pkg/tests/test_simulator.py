import numpy as np
from pytest import approx, fixture, mark

from fairness_engine.agent import AgentSpec
from fairness_engine.allocation import LeastFairAllocation, LotteryAllocation
from fairness_engine.choice import BordaChoice, ChoiceConfig, RescoreChoice
from fairness_engine.core import FeatureCatalog, HistoryWindow, ScoredList
from fairness_engine.data import BASELINE, SyntheticSpec
from fairness_engine.simulator import (
    AllocationConfig,
    CandidateSource,
    ExperimentConfig,
    arrival_order,
    build_agents,
    process_opportunity,
    run_experiment,
    sweep_cells,
)
from fairness_engine.utils.wrapper import VerboseConsoleWrapper

from conftest import SMALL_AGENTS, make_list


def agent_specs():
    return tuple(
        AgentSpec(name, entry["feature"], entry["metric"], entry["target"])
        for name, entry in SMALL_AGENTS.items()
    )


@fixture
def source(catalog):
    candidates = {"u": make_list("u", [f"i{index}" for index in [5, 6, 7, 8, 9, 0, 2, 3]])}
    return CandidateSource(candidates, {"u": frozenset({"i9"})})


def test_candidate_source_excludes_rated(source):
    top = source.top("u", 4)
    assert top.items == ("i5", "i6", "i7", "i8")
    assert source.top("u", 7).items == ("i5", "i6", "i7", "i8", "i0", "i2", "i3")
    assert source.top("u", 8) is None
    assert source.top("stranger", 1) is None


def test_satisfied_agents_leave_recommender_list(catalog, source):
    agents = build_agents([AgentSpec("p_share", "p", "gpf", 0.1)], catalog)
    window = HistoryWindow(10)
    window.append(make_list("x", ["i0", "i1"], tick=0))
    delivered, record = process_opportunity(
        "u", agents, window, source, LotteryAllocation(), BordaChoice(ChoiceConfig()),
        np.random.default_rng(0), tick=1, k=6, n=3,
    )
    assert record.allocation.is_empty
    assert delivered.items == ("i5", "i6", "i7")
    assert delivered.produced_at == 1
    assert window.view()[-1] == delivered


def test_cold_start_allocates(catalog, source):
    agents = build_agents([AgentSpec("p_share", "p", "gpf", 0.5), AgentSpec("q_rank", "q", "mrr", 0.5)], catalog)
    _, record = process_opportunity(
        "u", agents, HistoryWindow(5), source, LotteryAllocation(), BordaChoice(ChoiceConfig()),
        np.random.default_rng(0), tick=0, k=6, n=3,
    )
    assert not record.allocation.is_empty
    assert record.fairness == {"p_share": 0.0, "q_rank": 0.0}


def test_rescore_promotes_lone_protected_item(catalog, source):
    agents = build_agents([AgentSpec("p_share", "p", "gpf", 0.5)], catalog)
    delivered, record = process_opportunity(
        "u", agents, HistoryWindow(5), source, LeastFairAllocation(),
        RescoreChoice(ChoiceConfig(rule="rescore", delta=100.0)),
        np.random.default_rng(0), tick=0, k=6, n=3,
    )
    assert record.allocation.entries == {"p_share": 1.0}
    assert "i0" in delivered.items


def test_missing_candidates_skip_with_warning(catalog, source):
    console = VerboseConsoleWrapper(role="SIMULATOR")
    console.console.begin_capture()
    window = HistoryWindow(5)
    outcome = process_opportunity(
        "stranger", [], window, source, None, None, np.random.default_rng(0), tick=0, k=3, n=2, console=console,
    )
    output = console.console.end_capture()
    assert outcome is None
    assert "Skipping user stranger" in output
    assert window.view() == ()


def test_arrival_order_passes():
    rng = np.random.default_rng(3)
    order = arrival_order(["c", "a", "b"], 2, rng)
    assert sorted(order[:3]) == ["a", "b", "c"]
    assert sorted(order[3:]) == ["a", "b", "c"]


def small_experiment(**changes):
    settings = dict(
        agents=agent_specs(),
        allocation=AllocationConfig("least_fair"),
        choice=ChoiceConfig(rule="borda"),
        k=10,
        n=5,
        window=20,
        folds=2,
        seed=0,
    )
    settings.update(changes)
    return ExperimentConfig(**settings)


def test_baseline_is_recommender_top_n(small_bundle):
    config = small_experiment()
    result = run_experiment(config, bundle=small_bundle)
    baseline = result.cells[0]
    assert (baseline.allocation, baseline.choice) == (BASELINE, BASELINE)
    for fold in baseline.folds:
        split = small_bundle.fold(fold.fold)
        source = CandidateSource(small_bundle.candidates, split.train_items)
        assert fold.records
        for record in fold.records:
            assert record.allocation.is_empty
            assert record.delivered.items == source.top(record.user_id, config.k).items[:config.n]


def test_records_follow_ticks(small_bundle):
    result = run_experiment(small_experiment(arrivals_per_user=2), bundle=small_bundle)
    for cell in result.cells:
        for fold in cell.folds:
            ticks = [record.tick for record in fold.records]
            assert ticks == sorted(ticks)
            assert len(set(ticks)) == len(ticks)
            assert all(len(record.delivered) == 5 for record in fold.records)


def test_same_seed_same_results(small_bundle):
    config = small_experiment(allocation=AllocationConfig("lottery"))
    first = run_experiment(config, bundle=small_bundle)
    second = run_experiment(config, bundle=small_bundle)
    for a, b in zip(first.cells, second.cells):
        assert a.mean == b.mean
        for fold_a, fold_b in zip(a.folds, b.folds):
            assert fold_a.records == fold_b.records


def test_per_fold_and_mean_summaries(small_bundle):
    result = run_experiment(small_experiment(), bundle=small_bundle)
    cell = result.cells[1]
    assert [fold.summary.fold for fold in cell.folds] == ["0", "1"]
    assert cell.mean.fold == "mean"
    assert cell.mean.ndcg == approx(np.mean([fold.summary.ndcg for fold in cell.folds]))
    for summary in [fold.summary for fold in cell.folds] + [cell.mean]:
        assert 0.0 <= summary.ndcg <= 1.0
        assert set(summary.agent_fairness) == set(SMALL_AGENTS)


def test_sweep_grid(small_bundle):
    config = small_experiment(folds=1)
    cells = sweep_cells(config)
    assert len(cells) == 10
    result = run_experiment(config, bundle=small_bundle, cells=cells)
    assert len({(cell.allocation, cell.choice) for cell in result.cells}) == 10


def test_sweep_cell_matches_single_run(small_bundle):
    config = small_experiment(allocation=AllocationConfig("lottery"), folds=1)
    single = run_experiment(config, bundle=small_bundle)
    swept = run_experiment(config, bundle=small_bundle, cells=sweep_cells(config))
    by_label = {(cell.allocation, cell.choice): cell for cell in swept.cells}
    assert by_label[("lottery", "borda")].mean == single.cells[1].mean


@mark.slow
def test_worker_processes_match_sequential(small_bundle):
    sequential = run_experiment(small_experiment(allocation=AllocationConfig("lottery")), bundle=small_bundle)
    parallel = run_experiment(small_experiment(allocation=AllocationConfig("lottery"), threads=2), bundle=small_bundle)
    assert [cell.mean for cell in sequential.cells] == [cell.mean for cell in parallel.cells]


def delivered_items(cell):
    return [[record.delivered.items for record in fold.records] for fold in cell.folds]


@mark.parametrize("cell", [("lottery", "rescore"), ("weighted", "borda"), ("least_fair", "copeland")])
def test_zero_agents_deliver_recommender_lists(small_bundle, cell):
    config = small_experiment(agents=(), folds=1)
    baseline, acted = run_experiment(config, bundle=small_bundle, cells=[(BASELINE, BASELINE), cell]).cells
    assert delivered_items(acted) == delivered_items(baseline)
    assert all(record.allocation.is_empty for record in acted.folds[0].records)
    assert acted.mean.ndcg == baseline.mean.ndcg


def test_shared_copeland_keeps_recommender_order(small_bundle):
    config = small_experiment(folds=1)
    cells = [(BASELINE, BASELINE), ("lottery", "copeland"), ("weighted", "copeland")]
    result = run_experiment(config, bundle=small_bundle, cells=cells)
    baseline = delivered_items(result.cells[0])
    for cell in result.cells[1:]:
        assert any(not record.allocation.is_empty for record in cell.folds[0].records)
        assert delivered_items(cell) == baseline


def test_skipped_opportunities_are_counted(small_bundle):
    result = run_experiment(small_experiment(k=38, folds=1), bundle=small_bundle)
    test_users = small_bundle.fold(0).test_users
    for cell in result.cells:
        fold = cell.folds[0]
        assert fold.skipped > 0
        assert fold.skipped + len(fold.records) == len(test_users)


@mark.slow
def test_worker_processes_report_skips(small_bundle):
    console = VerboseConsoleWrapper(role="SIMULATOR")
    console.console.begin_capture()
    result = run_experiment(small_experiment(k=38, threads=2), bundle=small_bundle, console=console)
    output = console.console.end_capture()
    assert "Skipped" in output
    assert all(fold.skipped for cell in result.cells for fold in cell.folds)


SYNTHETIC_AGENTS = (
    AgentSpec("group_a_share", "group_a", "gpf", 0.1),
    AgentSpec("group_b_utility", "group_b", "guf", 1.0),
    AgentSpec("group_c_exposure", "group_c", "mrr", 0.5),
)


@fixture(scope="module")
def synthetic_sweeps():
    "Mean summaries of the full sweep on the default synthetic spec, one mapping per seed."
    runs = []
    for seed in range(5):
        config = ExperimentConfig(agents=SYNTHETIC_AGENTS, seed=seed, synthetic=SyntheticSpec(seed=seed))
        result = run_experiment(config, cells=sweep_cells(config))
        runs.append({(cell.allocation, cell.choice): cell.mean for cell in result.cells})
    return runs


def seed_mean(runs, cell, metric):
    return float(np.mean([getattr(run[cell], metric) for run in runs]))


@mark.slow
def test_synthetic_sweep_raises_fairness(synthetic_sweeps):
    baseline = (BASELINE, BASELINE)
    for cell in synthetic_sweeps[0]:
        wins = sum(run[cell].l_half >= run[baseline].l_half for run in synthetic_sweeps)
        assert wins > len(synthetic_sweeps) / 2, cell


@mark.slow
@mark.parametrize("rule", ["borda", "rescore"])
def test_synthetic_least_fair_costs_accuracy(synthetic_sweeps, rule):
    least_fair = seed_mean(synthetic_sweeps, ("least_fair", rule), "ndcg")
    for allocation in ["lottery", "weighted"]:
        assert least_fair < seed_mean(synthetic_sweeps, (allocation, rule), "ndcg")


@mark.slow
@mark.parametrize("allocation", ["lottery", "weighted"])
def test_synthetic_rescore_is_fair_and_accurate(synthetic_sweeps, allocation):
    baseline_ndcg = seed_mean(synthetic_sweeps, (BASELINE, BASELINE), "ndcg")
    assert seed_mean(synthetic_sweeps, (allocation, "rescore"), "l_half") >= 0.9
    assert seed_mean(synthetic_sweeps, (allocation, "rescore"), "ndcg") >= 0.95 * baseline_ndcg


@mark.slow
@mark.parametrize("allocation", ["least_fair", "lottery", "weighted"])
def test_synthetic_borda_trades_fairness_for_accuracy(synthetic_sweeps, allocation):
    borda, rescored = (allocation, "borda"), (allocation, "rescore")
    assert seed_mean(synthetic_sweeps, borda, "l_half") <= seed_mean(synthetic_sweeps, rescored, "l_half")
    assert seed_mean(synthetic_sweeps, borda, "ndcg") >= seed_mean(synthetic_sweeps, rescored, "ndcg")
