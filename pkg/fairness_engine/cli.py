import argparse
import sys
from typing import Any, Dict, List, Optional
from rich.console import Console
from rich.markup import escape
from fairness_engine import __version__
from fairness_engine.utils.builder import DEFAULT_CONFIG_PATH, create_workflow
from fairness_engine.utils.errors import FairnessEngineError

COMMANDS = {
    "run": ("fairness_engine.workflow.SimulationWorkflow", "Simulate the baseline and the configured mechanism cell."),
    "sweep": ("fairness_engine.workflow.SweepWorkflow", "Simulate every allocation x choice combination plus the baseline."),
    "synth": ("fairness_engine.workflow.SyntheticWorkflow", "Write a synthetic ratings/features/candidates bundle."),
    "eval": ("fairness_engine.workflow.EvaluationWorkflow", "Re-evaluate delivered lists written by run or sweep."),
}

EXIT_OK = 0
EXIT_FAILURE = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fairness-engine",
        description="Multi-agent fairness-aware re-ranking simulations.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        sub = subparsers.add_parser(name, help=help_text, description=help_text)
        sub.add_argument("--config", "-c", default=DEFAULT_CONFIG_PATH, help="experiment YAML (default: configs/base.yaml)")
        sub.add_argument("--out", "-o", default=None, help="output directory, overrides run.out_dir")
        sub.add_argument("--seed", type=int, default=None, help="overrides run.seed")
        sub.add_argument("--folds", type=int, default=None, help="overrides run.folds")
        sub.add_argument("--threads", type=int, default=None, help="overrides run.threads")
        sub.add_argument("--quiet", "-q", action="store_true", help="silence console output")
        if name == "eval":
            sub.add_argument("--lists", default=None, help="lists/index.csv, or the run directory holding it")
    return parser


def overrides_from(args: argparse.Namespace) -> Dict[str, Any]:
    overrides = {
        "run.out_dir": args.out,
        "run.seed": args.seed,
        "run.folds": args.folds,
        "run.threads": args.threads,
    }
    if args.quiet:
        overrides["workflow.verbose"] = False
    if getattr(args, "lists", None):
        overrides["evaluation.lists"] = args.lists
    return {key: value for key, value in overrides.items() if value is not None}


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    workflow_type, _ = COMMANDS[args.command]
    try:
        workflow = create_workflow(args.config, overrides=overrides_from(args), workflow_type=workflow_type)
        workflow.execute()
    except FairnessEngineError as e:
        Console(stderr=True, soft_wrap=True).print(f"[bold red]error:[/bold red] {escape(str(e))}", highlight=False)
        return EXIT_FAILURE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
