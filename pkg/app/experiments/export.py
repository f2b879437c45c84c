"""
Sweep artifacts: CSV table, provenance JSON, bifurcation CSV and a
gnuplot script that reads the table by relative path.
"""
import logging
from pathlib import Path
from typing import List, Union

import pandas as pd

from app.experiments.schemas import BifurcationSample, SweepResult

logger = logging.getLogger(__name__)


def to_dataframe(result: SweepResult) -> pd.DataFrame:
    records = [{result.parameter: row.param, **row.values} for row in result.rows]
    return pd.DataFrame.from_records(records, columns=[result.parameter, *result.columns])


def write_csv(result: SweepResult, path: Union[str, Path]) -> Path:
    """One row per parameter value, deterministic for a fixed config and seed."""
    path = Path(path)
    to_dataframe(result).to_csv(path, index=False, lineterminator="\n")
    logger.info(f"Wrote {len(result.rows)} rows to {path}")
    return path


def write_provenance(result: SweepResult, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.write_text(result.provenance.model_dump_json(indent=2) + "\n", encoding="utf-8")
    return path


def write_bifurcation(samples: List[BifurcationSample], parameter: str, path: Union[str, Path]) -> Path:
    """Long format: one (parameter, value) line per orbit sample."""
    path = Path(path)
    records = [{parameter: sample.param, "value": value} for sample in samples for value in sample.orbit]
    pd.DataFrame.from_records(records, columns=[parameter, "value"]).to_csv(path, index=False, lineterminator="\n")
    return path


def write_plot_script(result: SweepResult, csv_path: Union[str, Path], path: Union[str, Path]) -> Path:
    """gnuplot script plotting every entropy column against the sweep parameter."""
    path = Path(path)
    csv_name = Path(csv_path).name
    entropy_columns = [c for c in result.columns if c.startswith("s") and not c.endswith("_std")]
    plots = []
    for column in entropy_columns:
        index = result.columns.index(column) + 2  # gnuplot columns are 1-based, parameter first
        plots.append(f"'{csv_name}' using 1:{index} with lines title '{column}'")
    lines = [
        "set datafile separator ','",
        "set key autotitle columnhead",
        f"set xlabel '{result.parameter}'",
        "set ylabel 'S'",
        f"set title '{result.experiment}'",
        "plot " + ", \\\n     ".join(plots) if plots else "# no entropy columns",
        "",
    ]
    path.write_text("\n".join(lines), encoding="utf-8")
    return path
