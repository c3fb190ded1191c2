import os
from typing import TYPE_CHECKING, Any, Dict, List, Mapping, Sequence, Tuple
import pandas as pd
import yaml
from fairness_engine.core.types import ScoredList
from fairness_engine.evaluation.metrics import EvaluationSummary, interval_rows
from fairness_engine.utils.errors import DataLoadError

if TYPE_CHECKING:
    from fairness_engine.simulator.records import CellResult, RunRecord

LISTS_COLUMNS = ["tick", "user_id", "rank", "item_id", "score"]
INDEX_COLUMNS = ["mechanism_allocation", "mechanism_choice", "fold", "path"]
INTERVAL_COLUMNS = ["mechanism_allocation", "mechanism_choice", "metric", "mean", "ci_low", "ci_high"]
BASELINE = "baseline"


def cell_label(allocation: str, choice: str) -> str:
    if allocation == BASELINE:
        return BASELINE
    return f"{allocation}__{choice}"


def summary_columns(agent_names: Sequence[str]) -> List[str]:
    return (
        ["mechanism_allocation", "mechanism_choice", "fold", "ndcg"]
        + [f"agent_fairness_{name}" for name in agent_names]
        + ["l_half"]
    )


def record_columns(agent_names: Sequence[str]) -> List[str]:
    return ["tick", "user_id", "allocation_kind", "allocation"] + [f"fairness_{name}" for name in agent_names]


def _to_csv(frame: pd.DataFrame, path: str) -> None:
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    frame.to_csv(path, index=False, encoding="utf-8", lineterminator="\n")


def lists_frame(lists: Sequence[ScoredList]) -> pd.DataFrame:
    rows = [
        (scored_list.produced_at, scored_list.user_id, rank, item_id, score)
        for scored_list in lists
        for rank, (item_id, score) in enumerate(scored_list, start=1)
    ]
    return pd.DataFrame(rows, columns=LISTS_COLUMNS)


def write_lists(lists: Sequence[ScoredList], path: str) -> None:
    _to_csv(lists_frame(lists), path)


def read_lists(path: str) -> List[ScoredList]:
    """Rebuild delivered lists from a lists file, ordered by tick then rank."""
    if not os.path.exists(path):
        raise DataLoadError(path, 0, "file not found")
    frame = pd.read_csv(path, dtype={"user_id": str, "item_id": str}, keep_default_na=False, float_precision="round_trip")
    if list(frame.columns) != LISTS_COLUMNS:
        raise DataLoadError(path, 1, f"expected header {','.join(LISTS_COLUMNS)}")
    frame = frame.sort_values(["tick", "rank"], kind="stable")
    lists = []
    for tick, group in frame.groupby("tick", sort=True):
        users = group["user_id"].unique()
        if len(users) != 1:
            raise DataLoadError(path, 0, f"tick {tick} holds lists of several users")
        lists.append(ScoredList(
            str(users[0]),
            tuple(zip(group["item_id"], group["score"].astype(float))),
            int(tick),
        ))
    return lists


def write_records(records: Sequence["RunRecord"], agent_names: Sequence[str], path: str) -> None:
    rows = []
    for record in records:
        row = {
            "tick": record.tick,
            "user_id": record.user_id,
            "allocation_kind": record.allocation.kind,
            "allocation": record.allocation.describe(),
        }
        for name in agent_names:
            row[f"fairness_{name}"] = record.fairness[name]
        rows.append(row)
    _to_csv(pd.DataFrame(rows, columns=record_columns(agent_names)), path)


def write_summary(summaries: Sequence[EvaluationSummary], agent_names: Sequence[str], path: str) -> None:
    rows = [summary.row(agent_names) for summary in summaries]
    _to_csv(pd.DataFrame(rows, columns=summary_columns(agent_names)), path)


def write_intervals(fold_groups: Sequence[Sequence[EvaluationSummary]], path: str) -> None:
    rows = [row for group in fold_groups for row in interval_rows(group)]
    _to_csv(pd.DataFrame(rows, columns=INTERVAL_COLUMNS), path)


def write_run_info(run_info: Mapping[str, Any], path: str) -> None:
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        yaml.safe_dump(dict(run_info), f, allow_unicode=True, sort_keys=False, default_flow_style=False)


def read_index(path: str) -> List[Tuple[str, str, int, str]]:
    if not os.path.exists(path):
        raise DataLoadError(path, 0, "file not found")
    frame = pd.read_csv(path, dtype=str, keep_default_na=False)
    if list(frame.columns) != INDEX_COLUMNS:
        raise DataLoadError(path, 1, f"expected header {','.join(INDEX_COLUMNS)}")
    base = os.path.dirname(path)
    return [
        (row.mechanism_allocation, row.mechanism_choice, int(row.fold), os.path.join(base, row.path))
        for row in frame.itertuples(index=False)
    ]


def summary_rows(cells: Sequence["CellResult"]) -> Tuple[List[EvaluationSummary], List[List[EvaluationSummary]]]:
    """Per-cell fold summaries followed by the cell's mean row, plus the fold groups for intervals."""
    summaries: List[EvaluationSummary] = []
    groups: List[List[EvaluationSummary]] = []
    for cell in cells:
        folds = [fold.summary for fold in cell.folds]
        summaries.extend(folds)
        if folds:
            summaries.append(cell.mean)
            groups.append(folds)
    return summaries, groups


def write_summaries(cells: Sequence["CellResult"], agent_names: Sequence[str], out_dir: str) -> Dict[str, str]:
    summaries, groups = summary_rows(cells)
    paths = {
        "summary": os.path.join(out_dir, "summary.csv"),
        "intervals": os.path.join(out_dir, "summary_intervals.csv"),
    }
    write_summary(summaries, agent_names, paths["summary"])
    write_intervals(groups, paths["intervals"])
    return paths


def write_outputs(
        cells: Sequence["CellResult"],
        agent_names: Sequence[str],
        out_dir: str,
        run_info: Mapping[str, Any]
        ) -> Dict[str, str]:
    """
    Write summary, intervals, delivered lists, run records and run info under ``out_dir``.
    Output bytes depend only on the inputs.
    """
    try:
        os.makedirs(out_dir, exist_ok=True)
    except OSError as e:
        raise DataLoadError(out_dir, 0, f"cannot create output directory: {e}")
    if not os.access(out_dir, os.W_OK):
        raise DataLoadError(out_dir, 0, "output directory is not writable")

    paths = write_summaries(cells, agent_names, out_dir)
    index_rows = []
    for cell in cells:
        label = cell_label(cell.allocation, cell.choice)
        for fold in cell.folds:
            relative = os.path.join(label, f"fold{fold.fold}.csv")
            write_lists(fold.lists, os.path.join(out_dir, "lists", relative))
            write_records(fold.records, agent_names, os.path.join(out_dir, "records", relative))
            index_rows.append((cell.allocation, cell.choice, fold.fold, relative))
    paths["index"] = os.path.join(out_dir, "lists", "index.csv")
    _to_csv(pd.DataFrame(index_rows, columns=INDEX_COLUMNS), paths["index"])
    paths["run_info"] = os.path.join(out_dir, "run_info.yaml")
    write_run_info(run_info, paths["run_info"])
    return paths
