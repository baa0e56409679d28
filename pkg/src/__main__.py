from __future__ import annotations

import argparse
import asyncio
import logging
import os
import sys
import typing as t

if sys.version_info[0] != 3 or sys.version_info[1] < 11:
    raise RuntimeError("Incompatible python version, must be 3.11 or later.")

from src.config import Config
from src.models import SELECTORS, ExperimentSpec, UsageError, builtin_problem_ids, run_experiment
from src.static import ALGORITHMS, EXIT_SUCCESS
from src.utils import handle_error, load_overrides

logger = logging.getLogger("src")


class BenchArgumentParser(argparse.ArgumentParser):
    """Argument parser that raises instead of exiting, so bad usage flows through the error handler."""

    def error(self, message: str) -> t.NoReturn:
        raise UsageError(message)


def build_parser() -> BenchArgumentParser:
    parser = BenchArgumentParser(
        prog="bench",
        description="Compare swarm optimizers against the equal incremental cost oracle on economic load dispatch.",
    )
    parser.add_argument(
        "--problem",
        required=True,
        help=f"built-in problem ({', '.join(builtin_problem_ids())}) or path to a JSON problem file",
    )
    parser.add_argument("--algo", default="all", help=f"one of: {', '.join(SELECTORS)}")
    parser.add_argument("--runs", type=int, default=Config.TIMING_RUNS, help="seeded runs per algorithm")
    parser.add_argument("--seed", type=int, default=Config.SEED_BASE, help="seed of the first run")
    parser.add_argument("--out", default=Config.OUTPUT_DIR, help="output directory")
    parser.add_argument("--config", help="TOML file with [pso], [abc] and [bfo] override sections")
    parser.add_argument("--emit-traces", action="store_true", help="also write the trace of every run to traces/")
    parser.add_argument("--no-timing", action="store_true", help="run concurrently without timing")
    parser.add_argument("--dump-problem", action="store_true", help="write the selected problem as JSON")
    parser.add_argument("--verbose", action="store_true", help="log debug output")
    return parser


async def bench(argv: t.Sequence[str] | None = None) -> int:
    """Parse the command line and run the experiment it describes.

    Parameters
    ----------
    argv : Sequence[str], optional
        Arguments without the program name, defaults to `sys.argv`.

    Returns
    -------
    int
        The exit status.

    """
    try:
        args = build_parser().parse_args(argv)
        logging.getLogger().setLevel(logging.DEBUG if args.verbose else Config.LOG_LEVEL)

        overrides = await load_overrides(args.config, ALGORITHMS) if args.config else {}
        spec = ExperimentSpec(
            problem=args.problem,
            algorithm=args.algo,
            overrides=overrides,
            n_timing_runs=args.runs,
            seed_base=args.seed,
            output_dir=args.out,
            emit_traces=args.emit_traces,
            timing=not args.no_timing,
            dump_problem=args.dump_problem,
        )
        result = await run_experiment(spec)
    except Exception as e:
        return handle_error(e)

    logger.info(f"Finished {args.problem}, results in {os.path.abspath(args.out)}")
    for path in result.files:
        print(path)

    return EXIT_SUCCESS


def main() -> None:
    logging.basicConfig(
        level=Config.LOG_LEVEL,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )

    if os.name != "nt":
        try:
            import uvloop  # type: ignore

            uvloop.install()

            logging.debug("Running with uvloop event loop")

        except ImportError:
            logging.warning("Failed to import uvloop, running with default async event loop")

    sys.exit(asyncio.run(bench()))


if __name__ == "__main__":
    main()


# Copyright (C) 2025 BBombs

# This program is free software: you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.

# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU General Public License for more details.

# You should have received a copy of the GNU General Public License
# along with this program.  If not, see <https://www.gnu.org/licenses/>.
