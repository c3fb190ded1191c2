from .loader import (
    DatasetBundle,
    FoldSplit,
    load_bundle,
    build_bundle,
    build_catalog,
    split_folds,
    read_ratings,
    read_item_features,
    read_candidates,
)
from .synthetic import SyntheticSpec, generate_frames, generate_synthetic, write_frames
from .writer import (
    BASELINE,
    cell_label,
    write_outputs,
    write_summaries,
    write_lists,
    read_lists,
    read_index,
    summary_columns,
)

__all__ = [
    'DatasetBundle',
    'FoldSplit',
    'load_bundle',
    'build_bundle',
    'build_catalog',
    'split_folds',
    'read_ratings',
    'read_item_features',
    'read_candidates',
    'SyntheticSpec',
    'generate_frames',
    'generate_synthetic',
    'write_frames',
    'BASELINE',
    'cell_label',
    'write_outputs',
    'write_summaries',
    'write_lists',
    'read_lists',
    'read_index',
    'summary_columns',
]
