from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from typing import Callable, Dict, FrozenSet, List, Mapping, Optional, Sequence, Tuple
import numpy as np
from fairness_engine.agent import AGENT_TYPES, AgentSpec, BaseFairnessAgent, compute_compatibility, uniform_compatibility
from fairness_engine.allocation import ALLOCATION_TYPES, Allocation, BaseAllocationMechanism
from fairness_engine.choice import CHOICE_TYPES, BaseChoiceMechanism, ChoiceConfig
from fairness_engine.core.history import HistoryWindow
from fairness_engine.core.types import FeatureCatalog, ScoredList
from fairness_engine.data.loader import DatasetBundle, FoldSplit, load_bundle
from fairness_engine.data.synthetic import generate_synthetic
from fairness_engine.data.writer import BASELINE, cell_label, read_index, read_lists
from fairness_engine.evaluation.metrics import evaluate_lists, mean_summary
from fairness_engine.simulator.config import ExperimentConfig
from fairness_engine.simulator.records import CellResult, FoldResult, RunRecord
from fairness_engine.utils.builder import import_class
from fairness_engine.utils.errors import DataLoadError
from fairness_engine.utils.seeding import derive_seed
from fairness_engine.utils.wrapper import VerboseConsoleWrapper

Cell = Tuple[str, str]


class CandidateSource:
    """Recommender candidates per user, minus the items the user rated in training."""
    def __init__(self, candidates: Mapping[str, ScoredList], exclusions: Mapping[str, FrozenSet[str]]):
        self.candidates = candidates
        self.exclusions = exclusions

    def top(self, user_id: str, k: int) -> Optional[ScoredList]:
        """The best ``k`` unrated candidates, or None when fewer than ``k`` exist."""
        full = self.candidates.get(user_id)
        if full is None:
            return None
        excluded = self.exclusions.get(user_id, frozenset())
        entries = []
        for item_id, score in full:
            if item_id in excluded:
                continue
            entries.append((item_id, score))
            if len(entries) == k:
                return ScoredList(user_id, tuple(entries))
        return None


def build_agents(specs: Sequence[AgentSpec], catalog: FeatureCatalog) -> List[BaseFairnessAgent]:
    return [import_class(AGENT_TYPES[spec.metric_kind])(spec, catalog) for spec in specs]


def build_allocation(config: ExperimentConfig, mechanism: str) -> BaseAllocationMechanism:
    return import_class(ALLOCATION_TYPES[mechanism])(config.allocation.alpha, config.allocation.beta)


def build_choice(config: ExperimentConfig, rule: str) -> BaseChoiceMechanism:
    return import_class(CHOICE_TYPES[rule])(replace(config.choice, rule=rule))


def assign_compatibility(agents: Sequence[BaseFairnessAgent], compatibility: Mapping[str, Tuple[float, ...]]) -> None:
    default = uniform_compatibility(len(agents))
    for column, agent in enumerate(agents):
        agent.set_compatibility({user: vector[column] for user, vector in compatibility.items()}, default)


def process_opportunity(
        user_id: str,
        agents: Sequence[BaseFairnessAgent],
        window: HistoryWindow,
        rec_source: CandidateSource,
        allocation_mechanism: Optional[BaseAllocationMechanism],
        choice_mechanism: Optional[BaseChoiceMechanism],
        rng: np.random.Generator,
        tick: int,
        k: int,
        n: int,
        console: Optional[VerboseConsoleWrapper] = None
        ) -> Optional[Tuple[ScoredList, RunRecord]]:
    """
    Serve one arriving user: measure every agent on the window, allocate, aggregate
    the ballots, deliver the top ``n`` and append it to the window.

    Returns None (and warns) when the user has fewer than ``k`` candidates.
    """
    candidates = rec_source.top(user_id, k)
    if candidates is None:
        if console is not None:
            console.warn(f"Skipping user {user_id} at tick {tick}: fewer than {k} candidates")
        return None
    candidates = candidates.at_tick(tick)

    states = [agent.state(window) for agent in agents]
    if agents and allocation_mechanism is not None:
        allocation = allocation_mechanism.allocate(states, user_id, rng)
    else:
        allocation = Allocation.none()

    if choice_mechanism is not None:
        ranked = choice_mechanism.choose(candidates, allocation, {agent.name: agent for agent in agents})
    else:
        ranked = candidates
    delivered = ranked.top(n, produced_at=tick)
    window.append(delivered)
    record = RunRecord(
        tick=tick,
        user_id=user_id,
        allocation=allocation,
        fairness={state.name: state.fairness for state in states},
        delivered=delivered,
    )
    return delivered, record


def arrival_order(test_users: Sequence[str], passes: int, rng: np.random.Generator) -> List[str]:
    """Each pass is an independent shuffle of the test users."""
    users = sorted(test_users)
    order: List[str] = []
    for _ in range(passes):
        order.extend(users[index] for index in rng.permutation(len(users)))
    return order


@dataclass(frozen=True)
class FoldTask:
    """Everything one fold of one cell needs; picklable for worker processes."""
    config: ExperimentConfig
    bundle: DatasetBundle
    fold: int
    cell: Cell
    compatibility: Mapping[str, Tuple[float, ...]]


def run_fold(task: FoldTask, console: Optional[VerboseConsoleWrapper] = None) -> FoldResult:
    config = task.config
    split: FoldSplit = task.bundle.fold(task.fold)
    allocation_name, choice_name = task.cell
    agents = build_agents(config.agents, task.bundle.catalog)
    assign_compatibility(agents, task.compatibility)

    # the baseline still measures every agent but never lets one act
    if allocation_name == BASELINE:
        allocation_mechanism = None
        choice_mechanism = None
    else:
        allocation_mechanism = build_allocation(config, allocation_name)
        choice_mechanism = build_choice(config, choice_name)

    arrivals_rng = np.random.default_rng(derive_seed(config.seed, "fold", task.fold, "arrivals"))
    allocation_rng = np.random.default_rng(
        derive_seed(config.seed, "fold", task.fold, "cell", cell_label(*task.cell), "allocation")
    )
    source = CandidateSource(task.bundle.candidates, split.train_items)
    window = HistoryWindow(config.window)

    records: List[RunRecord] = []
    skipped = 0
    for tick, user_id in enumerate(arrival_order(split.test_users, config.arrivals_per_user, arrivals_rng)):
        outcome = process_opportunity(
            user_id, agents, window, source,
            allocation_mechanism, choice_mechanism, allocation_rng,
            tick, config.k, config.n, console,
        )
        if outcome is None:
            skipped += 1
            continue
        records.append(outcome[1])

    summary = evaluate_lists(
        [record.delivered for record in records],
        split.relevant,
        agents,
        config.n,
        allocation_name,
        choice_name,
        str(task.fold),
    )
    return FoldResult(task.fold, tuple(records), summary, skipped)


def _run_task(task: FoldTask) -> FoldResult:
    return run_fold(task)


@dataclass(frozen=True)
class ExperimentResult:
    cells: Tuple[CellResult, ...]
    config: ExperimentConfig


def load_experiment_bundle(config: ExperimentConfig) -> DatasetBundle:
    """The configured input files, or the synthetic spec generated in memory."""
    features = [agent.feature for agent in config.agents]
    if config.uses_files:
        return load_bundle(
            config.ratings_path,
            config.features_path,
            config.candidates_path,
            folds=config.folds,
            seed=config.seed,
            like_rule=config.like_rule,
            holdout_fraction=config.holdout_fraction,
            required_features=features,
        )
    bundle = generate_synthetic(
        config.synthetic,
        folds=config.folds,
        like_rule=config.like_rule,
        holdout_fraction=config.holdout_fraction,
        split_seed=config.seed,
    )
    bundle.require_features(features)
    return bundle


def default_cells(config: ExperimentConfig) -> List[Cell]:
    return [(BASELINE, BASELINE), (config.allocation.mechanism, config.choice.rule)]


def sweep_cells(config: ExperimentConfig) -> List[Cell]:
    return [(BASELINE, BASELINE)] + [
        (allocation, choice)
        for allocation in config.sweep_allocations
        for choice in config.sweep_choices
    ]


def run_experiment(
        config: ExperimentConfig,
        bundle: Optional[DatasetBundle] = None,
        cells: Optional[Sequence[Cell]] = None,
        console: Optional[VerboseConsoleWrapper] = None,
        on_fold_done: Optional[Callable[[Cell, int], None]] = None
        ) -> ExperimentResult:
    """
    Run every fold of every cell (baseline plus the configured combination by
    default). Data and compatibility are prepared for all folds before any fold
    runs, so setup errors surface first.
    """
    if bundle is None:
        bundle = load_experiment_bundle(config)
    cells = list(cells) if cells is not None else default_cells(config)

    compatibility = [
        compute_compatibility(split.train, bundle.catalog, config.agents, bundle.like_rule, config.compatibility_baseline)
        for split in bundle.folds[:config.folds]
    ]
    if console is not None:
        flagged = bundle.flagged_users(config.k)
        if flagged:
            console.warn(f"{len(flagged)} test users have fewer than k={config.k} candidates and will be skipped")

    tasks = [
        FoldTask(config, bundle, fold, cell, compatibility[fold])
        for cell in cells
        for fold in range(config.folds)
    ]
    if config.threads > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=config.threads) as executor:
            results = []
            for task, result in zip(tasks, executor.map(_run_task, tasks)):
                results.append(result)
                # workers run without a console, so their skips are reported here
                if console is not None and result.skipped:
                    console.warn(f"Skipped {result.skipped} opportunities in fold {task.fold} of "
                                 f"{cell_label(*task.cell)}: fewer than k={config.k} candidates")
                if on_fold_done is not None:
                    on_fold_done(task.cell, task.fold)
    else:
        results = []
        for task in tasks:
            results.append(run_fold(task, console))
            if on_fold_done is not None:
                on_fold_done(task.cell, task.fold)

    cell_results = []
    for position, cell in enumerate(cells):
        folds = tuple(results[position * config.folds:(position + 1) * config.folds])
        cell_results.append(CellResult(cell[0], cell[1], folds, mean_summary([fold.summary for fold in folds])))
    return ExperimentResult(tuple(cell_results), config)


def replay_evaluation(index_path: str, bundle: DatasetBundle, config: ExperimentConfig) -> Tuple[CellResult, ...]:
    """
    Re-evaluate the delivered lists named by a ``lists/index.csv`` against the
    held-out data of ``bundle``. Cells keep the order of the index.
    """
    agents = build_agents(config.agents, bundle.catalog)
    grouped: Dict[Cell, List[FoldResult]] = {}
    for allocation_name, choice_name, fold, path in read_index(index_path):
        if not 0 <= fold < len(bundle.folds):
            raise DataLoadError(index_path, 0, f"fold {fold} is outside the configured {len(bundle.folds)} folds")
        lists = read_lists(path)
        summary = evaluate_lists(
            lists,
            bundle.fold(fold).relevant,
            agents,
            config.n,
            allocation_name,
            choice_name,
            str(fold),
        )
        grouped.setdefault((allocation_name, choice_name), []).append(FoldResult(fold, (), summary))
    return tuple(
        CellResult(cell[0], cell[1], tuple(folds), mean_summary([fold.summary for fold in folds]))
        for cell, folds in grouped.items()
    )
