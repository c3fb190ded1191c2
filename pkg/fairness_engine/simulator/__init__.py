"""
The streaming loop: one opportunity per arriving test user, across folds and mechanism cells.
"""
from .config import ExperimentConfig, AllocationConfig
from .records import RunRecord, FoldResult, CellResult
from .engine import (
    CandidateSource,
    FoldTask,
    ExperimentResult,
    build_agents,
    build_allocation,
    build_choice,
    assign_compatibility,
    process_opportunity,
    arrival_order,
    run_fold,
    run_experiment,
    load_experiment_bundle,
    default_cells,
    sweep_cells,
    replay_evaluation,
)

__all__ = [
    'ExperimentConfig',
    'AllocationConfig',
    'RunRecord',
    'FoldResult',
    'CellResult',
    'CandidateSource',
    'FoldTask',
    'ExperimentResult',
    'build_agents',
    'build_allocation',
    'build_choice',
    'assign_compatibility',
    'process_opportunity',
    'arrival_order',
    'run_fold',
    'run_experiment',
    'load_experiment_bundle',
    'default_cells',
    'sweep_cells',
    'replay_evaluation',
]
