"""Command-line front end.

Usage::

    python -m mpr_sampling gamma-sweep --config configs/gamma_sweep.yaml --out results/gamma.csv

Subcommands ``rte-curves``, ``gamma-sweep``, ``weight-sweep``, ``validate``
and ``solve`` each write one CSV file and print a short summary.  Exit
status is 0 on success, 1 when validation finds a disagreement and 2 on
configuration or I/O errors.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

from pydantic import ValidationError

from . import __version__, experiments
from .config import get_settings
from .errors import MprSamplingError
from .logging_setup import configure_logging
from .schemas.experiment import ExperimentKind, ExperimentSpec, ResultTable, load_experiment

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VALIDATION_FAILED = 1
EXIT_CONFIG_ERROR = 2

COMMANDS = {
    "rte-curves": (ExperimentKind.RTE_CURVES, "closed-form RTE as a function of q"),
    "gamma-sweep": (ExperimentKind.GAMMA_SWEEP, "policy comparison over the sampling budget"),
    "weight-sweep": (ExperimentKind.WEIGHT_SWEEP, "policy comparison over the semantic weight w_2"),
    "validate": (ExperimentKind.VALIDATE, "closed forms against Monte Carlo simulation"),
    "solve": (ExperimentKind.SOLVE, "vertex candidate table for a single scenario"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mpr-sampling",
        description="Reconstruction-error analysis of sampling policies over an MPR channel.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--log-level", default=None, help="overrides MPR_LOG_LEVEL")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        cmd = sub.add_parser(name, help=help_text)
        cmd.add_argument("--config", type=Path, default=None, help="YAML experiment file")
        cmd.add_argument("--out", type=Path, default=None, help="CSV output path")
        cmd.add_argument("--seed", type=int, default=None, help="simulation seed (u64)")
    return parser


def _output_path(command: str, args: argparse.Namespace, spec: ExperimentSpec) -> Path:
    if args.out is not None:
        return args.out
    if spec.output_path is not None:
        return spec.output_path
    return get_settings().output_dir / f"{command.replace('-', '_')}.csv"


def _summary(kind: ExperimentKind, table: ResultTable) -> List[str]:
    lines = [f"{len(table.rows)} rows, columns: {', '.join(table.columns)}"]
    if kind == ExperimentKind.GAMMA_SWEEP and {"E_optimized", "E_tdma"} <= set(table.columns):
        crossover = experiments.tdma_crossover(table)
        if crossover is None:
            lines.append("TDMA is better than the optimised MPR policy at the largest budget")
        else:
            lines.append(f"optimised MPR policy at least as good as TDMA from gamma={crossover:g}")
    if kind == ExperimentKind.WEIGHT_SWEEP and {"E_greedy1", "E_greedy2", "E_tdma"} <= set(table.columns):
        outside = experiments.greedy_band_violations(table)
        if outside:
            points = ", ".join(f"{w:g}" for w in outside)
            lines.append(f"TDMA outside the greedy band at w2 = {points}")
        else:
            lines.append("TDMA lies between the two greedy baselines at every w2")
    if kind == ExperimentKind.SOLVE:
        for row in table.rows:
            if row[-1]:
                lines.append(f"selected {row[0]}: objective {row[-2]:.12g} ({row[-1]})")
    return lines


def run(command: str, args: argparse.Namespace) -> int:
    kind = COMMANDS[command][0]
    spec = load_experiment(args.config, kind)
    if args.seed is not None:
        spec = spec.with_seed(args.seed)
    out = _output_path(command, args, spec)

    if kind == ExperimentKind.VALIDATE:
        report = experiments.run_validate(spec)
        experiments.write_csv(experiments.validation_table(report), out)
        failures = report.failures
        print(f"validated {len(report.results)} policies, {len(failures)} disagreements (|z| > {report.z_threshold:g})")
        for label in report.excluded:
            print(f"excluded {label}: no update to either source")
        for row in failures:
            print(f"FAIL {row.label} source {row.source} {row.metric}: z={row.z:.3f}")
        return EXIT_OK if report.passed else EXIT_VALIDATION_FAILED

    runner = {
        ExperimentKind.RTE_CURVES: experiments.run_rte_curves,
        ExperimentKind.GAMMA_SWEEP: experiments.run_gamma_sweep,
        ExperimentKind.WEIGHT_SWEEP: experiments.run_weight_sweep,
        ExperimentKind.SOLVE: experiments.run_solve,
    }[kind]
    table = runner(spec)
    experiments.write_csv(table, out)
    for line in _summary(kind, table):
        print(line)
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level)
    try:
        return run(args.command, args)
    except (MprSamplingError, ValidationError) as exc:
        logger.error("%s", exc)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    except OSError as exc:
        logger.error("I/O error: %s", exc)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG_ERROR
