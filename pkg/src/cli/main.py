"""
Command-Line Entry Point

    python -m src.cli gen-data --config configs/gen_data.json --seed 7 --out data
    python -m src.cli simulate --config configs/federation.json --manifest data/manifest.csv --out runs/fedavg
    python -m src.cli predict  --config configs/federation.json --model runs/fedavg/final_model.npy \\
                               --manifest data/manifest.csv --out runs/fedavg/pred
    python -m src.cli evaluate --pred-dir runs/fedavg/pred --gt-dir data/labels --manifest data/manifest.csv \\
                               --split test --algorithm fedavg --out runs/fedavg/metrics.csv
    python -m src.cli rank runs/fedavg/metrics.csv runs/uniform/metrics.csv --out runs/ranking

Exit codes: 0 success, 1 validation error, 2 runtime failure.
"""

import argparse
import sys
from typing import Callable, Dict, List, Optional

from loguru import logger
from pydantic import ValidationError

from ..exceptions import InputValidationError
from ..settings import DEFAULT_JOBS, configure_logging
from .commands import cmd_evaluate, cmd_gen_data, cmd_predict, cmd_rank, cmd_simulate
from .run_config import (
    EvaluateConfig,
    GenDataConfig,
    PredictConfig,
    RankConfig,
    SimulateConfig,
    merge_overrides,
    read_json_config,
)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_RUNTIME = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fets-sim",
        description="Federated tumor-segmentation simulator and scoring toolkit",
    )
    parser.add_argument("--log-level", default=None, help="Log level (default: FETS_LOG_LEVEL or INFO)")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen-data", help="Generate synthetic institutions as NIfTI files + manifest")
    gen.add_argument("--config", required=True, help="Data generation JSON config")
    gen.add_argument("--seed", type=int, default=None, help="Top-level seed (overrides config)")
    gen.add_argument("--out", default=None, help="Output directory (overrides config)")

    sim = sub.add_parser("simulate", help="Run a federation")
    sim.add_argument("--config", required=True, help="Federation JSON config")
    sim.add_argument("--manifest", required=True, help="Dataset manifest CSV")
    sim.add_argument("--seed", type=int, default=None, help="Federation seed (overrides config)")
    sim.add_argument("--out", required=True, help="Output directory")
    sim.add_argument("--jobs", type=int, default=DEFAULT_JOBS, help="Worker threads per round (results do not change)")

    pred = sub.add_parser("predict", help="Segment manifest cases with a saved model")
    pred.add_argument("--config", required=True, help="Federation JSON config (names the trainer)")
    pred.add_argument("--model", required=True, help="Saved model (.npy)")
    pred.add_argument("--manifest", required=True, help="Dataset manifest CSV")
    pred.add_argument("--split", default="test", help="Manifest split to segment (default: test)")
    pred.add_argument("--out", required=True, help="Prediction output directory")

    ev = sub.add_parser("evaluate", help="Score predictions against ground truth")
    ev.add_argument("--config", default=None, help="Optional evaluation JSON config")
    ev.add_argument("--pred-dir", default=None, help="Prediction directory")
    ev.add_argument("--gt-dir", default=None, help="Ground-truth label directory")
    ev.add_argument("--algorithm", default=None, help="Algorithm id for the records")
    ev.add_argument("--manifest", default=None, help="Manifest mapping cases to institutions")
    ev.add_argument("--split", default=None, help="Evaluate only this manifest split")
    ev.add_argument("--out", default=None, help="Output metric CSV")

    rank = sub.add_parser("rank", help="Rank algorithms from metric CSVs")
    rank.add_argument("metric_csvs", nargs="*", help="Metric CSV files")
    rank.add_argument("--config", default=None, help="Optional ranking JSON config")
    rank.add_argument("--out", default=None, help="Output directory")
    return parser


def _gen_data(args: argparse.Namespace) -> str:
    data = merge_overrides(read_json_config(args.config), seed=args.seed, out=args.out)
    return cmd_gen_data(GenDataConfig.model_validate(data))


def _simulate(args: argparse.Namespace) -> str:
    return cmd_simulate(SimulateConfig(
        federation=args.config, manifest=args.manifest, out=args.out, seed=args.seed, jobs=args.jobs,
    ))


def _predict(args: argparse.Namespace) -> str:
    return cmd_predict(PredictConfig(
        federation=args.config, model=args.model, manifest=args.manifest, out=args.out, split=args.split,
    ))


def _evaluate(args: argparse.Namespace) -> str:
    data = merge_overrides(
        read_json_config(args.config),
        pred_dir=args.pred_dir,
        gt_dir=args.gt_dir,
        algorithm=args.algorithm,
        manifest=args.manifest,
        split=args.split,
        out=args.out,
    )
    return cmd_evaluate(EvaluateConfig.model_validate(data))


def _rank(args: argparse.Namespace) -> str:
    data = merge_overrides(read_json_config(args.config), metric_csvs=args.metric_csvs or None, out=args.out)
    return cmd_rank(RankConfig.model_validate(data))


COMMANDS: Dict[str, Callable[[argparse.Namespace], str]] = {
    "gen-data": _gen_data,
    "simulate": _simulate,
    "predict": _predict,
    "evaluate": _evaluate,
    "rank": _rank,
}


def main(argv: Optional[List[str]] = None) -> int:
    """
    Run one command.

    Args:
        argv: Arguments without the program name (defaults to sys.argv[1:])

    Returns:
        int: Exit code (0 success, 1 validation error, 2 runtime failure)
    """
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.log_level)

    try:
        summary = COMMANDS[args.command](args)
    except (ValidationError, InputValidationError) as e:
        logger.error(f"{args.command}: invalid input: {e}")
        return EXIT_VALIDATION
    except Exception as e:
        logger.error(f"{args.command} failed: {type(e).__name__}: {e}")
        return EXIT_RUNTIME

    print(summary)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
