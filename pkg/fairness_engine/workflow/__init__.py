# __init__.py for workflow module
"""
Workflows tie a config file to one engine command: simulate, sweep,
generate synthetic data or re-evaluate stored lists.
"""
from .base import BaseWorkflow
from .for_simulation.simulation_workflow import SimulationWorkflow
from .for_simulation.sweep_workflow import SweepWorkflow
from .for_simulation.evaluation_workflow import EvaluationWorkflow
from .for_synthetic.synthetic_workflow import SyntheticWorkflow

__all__ = [
    'BaseWorkflow',
    'SimulationWorkflow',
    'SweepWorkflow',
    'EvaluationWorkflow',
    'SyntheticWorkflow'
]
