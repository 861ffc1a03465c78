"""
Result serialization: step-level CSV, summary / report / manifest JSON.

Step CSV schema (UTF-8, '\\n' line endings, fixed column order):

    step, epoch, candidate_index, reward, instantaneous_regret,
    cumulative_regret, q_t, h_t, elapsed_seconds

`epoch` and `h_t` both hold the 1-based decision round of the step.
"""
from pathlib import Path
from typing import Dict, List, Optional, Union
import logging

import pandas as pd
from pydantic import BaseModel, Field

from ..benchmarks.environment import Environment
from ..metrics import SUMMARY_SCHEMA_VERSION, compute_regret
from ..policies.results import RunResult

logger = logging.getLogger(__name__)

STEP_COLUMNS = [
    "step",
    "epoch",
    "candidate_index",
    "reward",
    "instantaneous_regret",
    "cumulative_regret",
    "q_t",
    "h_t",
    "elapsed_seconds",
]


class ManifestEntry(BaseModel):
    """One (algorithm, combination, seed) run and its step CSV"""
    algorithm: str
    combination: str
    params: Dict[str, float]
    seed: int
    csv: str


class Manifest(BaseModel):
    """Every file an experiment wrote"""
    schema_version: int = SUMMARY_SCHEMA_VERSION
    experiment: str
    out_dir: str
    regularization: float
    noise_std: float
    runs: List[ManifestEntry] = Field(default_factory=list)
    summaries: List[str] = Field(default_factory=list)
    report: Optional[str] = None
    plots: List[str] = Field(default_factory=list)


def step_frame(result: RunResult, env: Environment) -> pd.DataFrame:
    """Step-level table of one run in the documented column order"""
    regret = compute_regret(result, env)
    frame = pd.DataFrame({
        "step": range(1, result.steps + 1),
        "epoch": result.epoch_of_step,
        "candidate_index": result.chosen,
        "reward": result.rewards,
        "instantaneous_regret": regret.instantaneous,
        "cumulative_regret": regret.cumulative,
        "q_t": result.unique_counts,
        "h_t": result.switch_counts,
        "elapsed_seconds": result.elapsed,
    })
    return frame[STEP_COLUMNS]


def write_step_csv(result: RunResult, env: Environment, path: Union[str, Path]) -> Path:
    """Write the step table; identical runs produce byte-identical files"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    step_frame(result, env).to_csv(
        path,
        index=False,
        encoding="utf-8",
        lineterminator="\n",
        float_format="%.17g",
    )
    logger.debug(f"Wrote {result.steps} rows to {path}")
    return path


def write_model_json(model: BaseModel, path: Union[str, Path]) -> Path:
    """Serialize a pydantic model as indented JSON"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(model.model_dump_json(indent=2) + "\n", encoding="utf-8")
    return path

