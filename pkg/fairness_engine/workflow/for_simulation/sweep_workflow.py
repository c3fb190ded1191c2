from typing import List
from fairness_engine.simulator.engine import Cell, sweep_cells
from fairness_engine.workflow.for_simulation.simulation_workflow import SimulationWorkflow


class SweepWorkflow(SimulationWorkflow):
    """Every ``sweep.allocations`` x ``sweep.choices`` cell plus the baseline on one loaded bundle."""
    def _cells(self) -> List[Cell]:
        return sweep_cells(self.experiment)
