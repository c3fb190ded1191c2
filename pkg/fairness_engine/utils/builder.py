import yaml
from pathlib import Path
from typing import Any, Type, Optional, Dict
import importlib
from .errors import ConfigError

DEFAULT_CONFIG_PATH = str(Path(__file__).parent.parent.parent / "configs" / "base.yaml")


def create_workflow(config: str, overrides: Optional[Dict[str, Any]] = None, workflow_type: Optional[str] = None) -> Any:
    """
    Create a workflow object from a YAML experiment config.

    Args:
        config: Path to the YAML config file
        overrides: Dotted-key overrides applied on top of the file, e.g. {"run.seed": 7}
        workflow_type: Class path that replaces ``workflow.type`` from the file

    Returns:
        A fully configured workflow object
    """
    try:
        with open(config, 'r', encoding='utf-8') as f:
            cfg = yaml.safe_load(f) or {}
    except FileNotFoundError:
        raise ConfigError(str(config), "config file not found")

    if workflow_type is None:
        workflow_type = (cfg.get('workflow') or {}).get('type')
    if not workflow_type:
        with open(DEFAULT_CONFIG_PATH, 'r', encoding='utf-8') as f:
            workflow_type = yaml.safe_load(f)['workflow']['type']

    overrides = {**(overrides or {}), "workflow.type": workflow_type}
    workflow_class = import_class(workflow_type)

    builder = WorkflowBuilder()
    builder.set_class(workflow_class)

    return builder.build(workflow_class, config, overrides)


def import_class(class_path: str) -> Type:
    """
    Dynamically import a class from its string path.

    Args:
        class_path: Full import path of the class (e.g., 'fairness_engine.choice.BordaChoice')

    Returns:
        The class object
    """
    try:
        if '.' in class_path:
            module_path, class_name = class_path.rsplit('.', 1)
            module = importlib.import_module(module_path)
            return getattr(module, class_name)
        else:
            # bare names are looked up in the public packages
            for module_path in [
                "fairness_engine.workflow",
                "fairness_engine.agent",
                "fairness_engine.allocation",
                "fairness_engine.choice",
            ]:
                try:
                    module = importlib.import_module(module_path)
                    if hasattr(module, class_path):
                        return getattr(module, class_path)
                except (ImportError, AttributeError):
                    continue

            raise ImportError(f"Could not find class {class_path}")
    except (ImportError, AttributeError) as e:
        raise ImportError(f"Failed to import {class_path}: {e}")


class WorkflowBuilder:
    """
    Builder class for creating and configuring workflow instances.
    """
    def __init__(self):
        self._class = None
        self._instance = None

    def set_class(self, workflow_class: Type) -> 'WorkflowBuilder':
        """Set the workflow class"""
        self._class = workflow_class
        return self

    def build(self, workflow_class: Type, cfg: str, overrides: Optional[Dict[str, Any]] = None) -> Any:
        self._instance = workflow_class(cfg, overrides=overrides)
        return self._instance
