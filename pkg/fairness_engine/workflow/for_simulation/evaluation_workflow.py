import os
from typing import Tuple
from fairness_engine.data.loader import DatasetBundle
from fairness_engine.data.writer import write_summaries
from fairness_engine.simulator.engine import load_experiment_bundle, replay_evaluation
from fairness_engine.simulator.records import CellResult
from fairness_engine.workflow.base import BaseWorkflow


class EvaluationWorkflow(BaseWorkflow):
    """_summary_

    Args:
        config (str): The config the lists were produced with (data, agents, folds, seed).
        overrides (Optional[Dict[str, Any]]): ``evaluation.lists`` points at a ``lists/index.csv``
            or the run directory holding it.

    Re-evaluates delivered lists offline and writes ``summary.csv`` and
    ``summary_intervals.csv`` to ``run.out_dir``.
    """
    def __init__(self, config: str, overrides=None):
        super().__init__(config, overrides)
        self.bundle: DatasetBundle = None
        self.index_path = self._index_path()

    def _index_path(self) -> str:
        path = self.experiment.lists_path or os.path.join(self.experiment.out_dir, "lists", "index.csv")
        if os.path.isdir(path):
            nested = os.path.join(path, "lists", "index.csv")
            path = nested if os.path.exists(nested) else os.path.join(path, "index.csv")
        return path

    def _pre_execute(self) -> None:
        self.bundle = load_experiment_bundle(self.experiment)

    def _execute(self) -> Tuple[CellResult, ...]:
        with self.bar(live_type="status", message=f"Replaying {self.index_path}..."):
            cells = replay_evaluation(self.index_path, self.bundle, self.experiment)
        paths = write_summaries(cells, self.experiment.agent_names, self.experiment.out_dir)
        self.console.print(f"Summary written to [bold cyan]{paths['summary']}")
        return cells
