from typing import Dict
from fairness_engine.data.synthetic import generate_frames, write_frames
from fairness_engine.workflow.base import BaseWorkflow


class SyntheticWorkflow(BaseWorkflow):
    """Write ``ratings.csv``, ``item_features.csv`` and ``candidates.csv`` for the ``synthetic`` spec to ``run.out_dir``."""

    def _execute(self) -> Dict[str, str]:
        spec = self.experiment.synthetic
        with self.bar(live_type="status", message="Generating synthetic data..."):
            frames = generate_frames(spec)
            paths = write_frames(frames, self.experiment.out_dir)
        data_console = self.console.child("DATA")
        for name, path in paths.items():
            data_console.print(f"{name}: {len(frames[name])} rows -> [bold cyan]{path}")
        return paths
