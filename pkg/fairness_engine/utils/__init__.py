from .builder import WorkflowBuilder, create_workflow, import_class
from .config import ConfigNode, merge_config, read_yaml, apply_overrides
from .errors import (
    FairnessEngineError,
    OrderingError,
    SetupError,
    ConfigError,
    DataLoadError,
    InputError,
)
from .seeding import derive_seed, stable_bucket, stable_fraction
from .wrapper import VerboseConsoleWrapper

__all__ = [
    "WorkflowBuilder",
    "create_workflow",
    "import_class",
    "ConfigNode",
    "merge_config",
    "read_yaml",
    "apply_overrides",
    "FairnessEngineError",
    "OrderingError",
    "SetupError",
    "ConfigError",
    "DataLoadError",
    "InputError",
    "derive_seed",
    "stable_bucket",
    "stable_fraction",
    "VerboseConsoleWrapper",
    ]
