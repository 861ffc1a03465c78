"""
mini-gpopt command line.

    mini-gpopt run  [config.yaml]   first value of every hyperparameter grid
    mini-gpopt grid [config.yaml]   full hyperparameter sweep
    mini-gpopt plot summary.json... redraw panels from summary files

Without a config file the embedded default protocol is used.
"""
from typing import List, Optional
import argparse
import logging
import sys

from pydantic import ValidationError

from .config import get_settings
from .errors import ConfigurationError, GPOptError, UsageError
from .harness.experiment import (
    ExperimentConfig,
    TimingMode,
    default_experiment_config,
    load_experiment_config,
    parse_experiment_config,
)
from .harness.plotting import load_summary, plot_summaries
from .harness.runner import run_experiment

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CONFIG = 2


def setup_logging(level: Optional[str] = None) -> None:
    level = (level or get_settings().LOG_LEVEL).upper()
    logging.basicConfig(level=getattr(logging, level, logging.INFO), format=LOG_FORMAT)


def apply_overrides(config: ExperimentConfig, args: argparse.Namespace) -> ExperimentConfig:
    """
    Fold CLI flags into a config and revalidate.

    --seed-count N replaces the seed list with 0..N-1.
    """
    data = config.model_dump(mode="json")
    if args.seed_count is not None:
        if args.seed_count < 1:
            raise UsageError(f"--seed-count must be >= 1, got {args.seed_count}")
        data["experiment"]["seeds"] = list(range(args.seed_count))
    if args.steps is not None:
        data["experiment"]["steps"] = args.steps
    if args.timing is not None:
        data["experiment"]["timing"] = args.timing
    if args.xi is not None:
        data["environment"]["xi"] = args.xi
    if args.lam is not None:
        data["regularization"] = {"mode": "explicit", "value": args.lam}
    if args.out_dir is not None:
        data["output"]["dir"] = args.out_dir
    if args.no_plots:
        data["output"]["plots"] = False
    return parse_experiment_config(data)


def _load(args: argparse.Namespace) -> ExperimentConfig:
    if args.config is None:
        config = default_experiment_config()
    else:
        config = load_experiment_config(args.config)
    return apply_overrides(config, args)


def cmd_run(args: argparse.Namespace) -> int:
    config = _load(args)
    manifest = run_experiment(config, full_grid=False, workers=args.workers)
    print(f"{len(manifest.runs)} runs written to {manifest.out_dir}")
    return EXIT_OK


def cmd_grid(args: argparse.Namespace) -> int:
    config = _load(args)
    manifest = run_experiment(config, full_grid=True, workers=args.workers)
    print(f"{len(manifest.runs)} runs written to {manifest.out_dir}")
    return EXIT_OK


def cmd_plot(args: argparse.Namespace) -> int:
    summaries = [load_summary(path) for path in args.summaries]
    written = plot_summaries(summaries, args.out_dir, fmt=args.format)
    for path in written:
        print(path)
    return EXIT_OK


def _add_experiment_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("config", nargs="?", default=None, help="Experiment YAML file")
    parser.add_argument("--seed-count", type=int, default=None, help="Use seeds 0..N-1")
    parser.add_argument("--steps", type=int, default=None, help="Step budget T")
    parser.add_argument("--workers", type=int, default=None, help="Worker processes")
    parser.add_argument("--out-dir", default=None, help="Output directory")
    parser.add_argument("--lambda", dest="lam", type=float, default=None,
                        help="Explicit regularization (disables the oracle rule)")
    parser.add_argument("--xi", type=float, default=None, help="Noise standard deviation")
    parser.add_argument("--timing", choices=[m.value for m in TimingMode], default=None,
                        help="'off' records zero elapsed time for byte-identical reruns")
    parser.add_argument("--no-plots", action="store_true", help="Skip plot files")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mini-gpopt",
        description="Low-switching GP optimization experiments on finite candidate grids",
    )
    parser.add_argument("--log-level", default=None, help="DEBUG, INFO, WARNING, ERROR")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="Run the first combination of every grid")
    _add_experiment_flags(run)
    run.set_defaults(func=cmd_run)

    grid = sub.add_parser("grid", help="Run the full hyperparameter sweep")
    _add_experiment_flags(grid)
    grid.set_defaults(func=cmd_grid)

    plot = sub.add_parser("plot", help="Draw panels from summary.json files")
    plot.add_argument("summaries", nargs="+", help="summary.json files")
    plot.add_argument("--out-dir", default="plots", help="Directory for figures")
    plot.add_argument("--format", default="svg", help="Figure format (svg, pdf, ...)")
    plot.set_defaults(func=cmd_plot)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logging(args.log_level)

    try:
        return args.func(args)
    except (ConfigurationError, UsageError, ValidationError) as e:
        logger.error(f"Invalid configuration: {e}")
        return EXIT_CONFIG
    except (GPOptError, OSError) as e:
        logger.error(f"Experiment failed: {e}")
        return EXIT_FAILURE
    except KeyboardInterrupt:
        logger.info("Stopped by user")
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
