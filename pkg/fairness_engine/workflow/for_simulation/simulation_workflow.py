from typing import Dict, List, Sequence, Tuple
from rich.table import Table
from fairness_engine.data.loader import DatasetBundle
from fairness_engine.data.writer import summary_columns, summary_rows, write_outputs
from fairness_engine.simulator.engine import Cell, ExperimentResult, default_cells, load_experiment_bundle, run_experiment
from fairness_engine.simulator.records import CellResult
from fairness_engine.workflow.base import BaseWorkflow


class SimulationWorkflow(BaseWorkflow):
    """Baseline plus the configured allocation x choice cell, over every fold."""
    def __init__(self, config: str, overrides=None):
        super().__init__(config, overrides)
        self.bundle: DatasetBundle = None
        self.paths: Dict[str, str] = {}

    def _cells(self) -> List[Cell]:
        return default_cells(self.experiment)

    def _pre_execute(self) -> None:
        self.bundle = load_experiment_bundle(self.experiment)
        source = self.experiment.ratings_path or "synthetic spec"
        self.console.child("DATA").print(
            f"Loaded {len(self.bundle.ratings)} ratings, {len(self.bundle.catalog)} items, "
            f"{len(self.bundle.candidates)} candidate lists from {source}"
        )

    def _execute(self) -> ExperimentResult:
        cells = self._cells()
        folds = self.experiment.folds
        simulator_console = self.console.child("SIMULATOR")
        with self.bar(live_type="progress") as progress:
            task = progress.add_task("[cyan]Simulating...", total=len(cells) * folds)

            def advance(cell: Cell, fold: int) -> None:
                progress.update(task, advance=1, description=f"[cyan]{cell[0]} / {cell[1]} fold {fold}")

            result = run_experiment(
                self.experiment,
                bundle=self.bundle,
                cells=cells,
                console=simulator_console,
                on_fold_done=advance,
            )
        self.paths = write_outputs(
            result.cells,
            self.experiment.agent_names,
            self.experiment.out_dir,
            self.experiment.run_info(),
        )
        self.show_summary(result.cells)
        self.console.print(f"Results written to [bold cyan]{self.experiment.out_dir}")
        return result

    def show_summary(self, cells: Sequence[CellResult]) -> None:
        summaries, _ = summary_rows(cells)
        columns = summary_columns(self.experiment.agent_names)
        table = Table(title="\nSummary")
        for column in columns:
            table.add_column(column, no_wrap=True)
        for summary in summaries:
            row = summary.row(self.experiment.agent_names)
            table.add_row(*[f"{row[c]:.4f}" if isinstance(row[c], float) else str(row[c]) for c in columns])
        self.console.print(table, verbose=False)
