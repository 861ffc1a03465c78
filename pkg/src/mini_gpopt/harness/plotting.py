"""
Static SVG panels from summary files: normalized R_t/t against t, q_t against
t, h_t against t, and cumulative regret R_t against wall-clock time.
"""
from pathlib import Path
from typing import List, Sequence, Tuple, Union
import logging

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from ..metrics import SummaryTable  # noqa: E402

logger = logging.getLogger(__name__)

PANELS = {
    "normalized_regret": ("normalized_average_regret", "step t", "normalized R_t / t"),
    "unique_candidates": ("unique_count", "step t", "unique candidates q_t"),
    "switches": ("switch_count", "step t", "batches h_t"),
}


def load_summary(path: Union[str, Path]) -> SummaryTable:
    return SummaryTable.model_validate_json(Path(path).read_text(encoding="utf-8"))


def regret_vs_time(summary: SummaryTable) -> Tuple[np.ndarray, np.ndarray]:
    """Mean wall-clock seconds and mean cumulative regret R_t, step by step"""
    elapsed = np.asarray(summary.curves["elapsed_seconds"].mean)
    cumulative = np.asarray(summary.curves["cumulative_regret"].mean)
    return elapsed, cumulative


def _label(summary: SummaryTable) -> str:
    return f"{summary.algorithm} [{summary.combination}]" if summary.combination else summary.algorithm


def plot_summaries(
    summaries: Sequence[SummaryTable],
    out_dir: Union[str, Path],
    fmt: str = "svg"
) -> List[Path]:
    """
    Draw one figure per panel with a mean curve and CI band per summary.

    Returns:
        Paths of the written figures
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []

    for name, (curve, xlabel, ylabel) in PANELS.items():
        fig, ax = plt.subplots(figsize=(6, 4))
        for summary in summaries:
            mean = np.asarray(summary.curves[curve].mean)
            hw = np.asarray(summary.curves[curve].half_width)
            steps = np.arange(1, mean.shape[0] + 1)
            ax.plot(steps, mean, label=_label(summary))
            ax.fill_between(steps, mean - hw, mean + hw, alpha=0.2)
        ax.set_xlabel(xlabel)
        ax.set_ylabel(ylabel)
        ax.legend(loc="best", fontsize=7)
        path = out_dir / f"{name}.{fmt}"
        fig.savefig(path, bbox_inches="tight", format=fmt)
        plt.close(fig)
        written.append(path)

    fig, ax = plt.subplots(figsize=(6, 4))
    for summary in summaries:
        elapsed, cumulative = regret_vs_time(summary)
        ax.plot(elapsed, cumulative, label=_label(summary))
    ax.set_xlabel("wall-clock time (s)")
    ax.set_ylabel("cumulative regret R_t")
    ax.legend(loc="best", fontsize=7)
    path = out_dir / f"regret_vs_time.{fmt}"
    fig.savefig(path, bbox_inches="tight", format=fmt)
    plt.close(fig)
    written.append(path)

    logger.info(f"Wrote {len(written)} plots to {out_dir}")
    return written
