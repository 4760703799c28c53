"""Utility script to regenerate every sweep table from the bundled configs.

Run it from the repository root:

    python -m scripts.reproduce_figures --out-dir results

It writes ``rte_curves.csv``, ``gamma_sweep.csv`` and ``weight_sweep.csv``
into the output directory and prints each command's summary.  Use
``--validate`` to also run the Monte Carlo cross-check.
"""

import argparse
import sys
from pathlib import Path

from mpr_sampling.cli import EXIT_OK, main

CONFIG_DIR = Path(__file__).resolve().parent.parent / "configs"
SWEEPS = ("rte-curves", "gamma-sweep", "weight-sweep")


def reproduce(out_dir: Path, validate: bool = False, log_level: str = "INFO") -> int:
    commands = list(SWEEPS) + (["validate"] if validate else [])
    worst = EXIT_OK
    for command in commands:
        stem = command.replace("-", "_")
        print(f"== {command}")
        status = main(
            [
                "--log-level", log_level,
                command,
                "--config", str(CONFIG_DIR / f"{stem}.yaml"),
                "--out", str(out_dir / f"{stem}.csv"),
            ]
        )
        worst = max(worst, status)
    return worst


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out-dir", type=Path, default=Path("results"))
    parser.add_argument("--validate", action="store_true")
    parser.add_argument("--log-level", default="INFO")
    args = parser.parse_args()
    sys.exit(reproduce(args.out_dir, args.validate, args.log_level))
