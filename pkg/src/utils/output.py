from __future__ import annotations

__all__ = [
    "emit_trace",
    "load_overrides",
    "load_problem",
    "save_problem",
    "write_comparison_csv",
    "write_text",
]

import csv
import io
import json
import logging
import os
import tomllib
import typing as t

import aiofiles
import aiofiles.os

from src.models.errors import OutputError, ProblemFileError, UsageError
from src.models.problem import EldProblem, Generator

if t.TYPE_CHECKING:
    from src.models.experiment import ComparisonRow
    from src.models.swarm import RunReport

logger = logging.getLogger(__name__)

GENERATOR_KEYS: tuple[str, ...] = ("p_min", "p_max", "a", "b", "c")


async def _write(path: str, content: str) -> None:
    try:
        directory = os.path.dirname(path)
        if directory:
            await aiofiles.os.makedirs(directory, exist_ok=True)

        async with aiofiles.open(path, "w", encoding="utf-8", newline="") as file:
            await file.write(content)
    except OSError as e:
        raise OutputError(f"Cannot write {path}: {e.strerror or e}") from e

    logger.info(f"Wrote {path}")


async def _read(path: str) -> str:
    try:
        async with aiofiles.open(path, "r", encoding="utf-8") as file:
            return await file.read()
    except OSError as e:
        raise ProblemFileError(path, e.strerror or str(e)) from e
    except UnicodeDecodeError as e:
        raise ProblemFileError(path, f"not valid UTF-8 text: {e.reason} at byte {e.start}") from e


def _rows_to_csv(rows: t.Iterable[t.Sequence[str]]) -> str:
    buffer = io.StringIO()
    csv.writer(buffer, lineterminator="\n").writerows(rows)
    return buffer.getvalue()


def _cell(value: float | int | None, fmt: str = "") -> str:
    return "" if value is None else format(value, fmt)


async def emit_trace(report: RunReport, path: str) -> None:
    """Write a run's convergence trace as CSV.

    Parameters
    ----------
    report : RunReport
        The completed run.
    path : str
        Destination file, parent directories are created.

    Raises
    ------
    OutputError
        If the file cannot be written.

    """
    rows = [["iteration", "best_cost"]]
    rows.extend([str(i), f"{cost:.12g}"] for i, cost in enumerate(report.trace.best_cost_per_iteration, 1))
    await _write(path, _rows_to_csv(rows))


async def write_comparison_csv(rows: t.Sequence[ComparisonRow], n_units: int, path: str) -> None:
    """Write the comparison table as CSV.

    Columns are the algorithm, one output per unit, cost, iterations, evaluations, mean time and
    oracle gap. Values that do not apply to a row are left empty.

    Parameters
    ----------
    rows : Sequence[ComparisonRow]
        The comparison rows.
    n_units : int
        Number of generating units.
    path : str
        Destination file.

    """
    header = ["algorithm", *(f"P{i}" for i in range(1, n_units + 1))]
    header += ["cost", "iterations", "evaluations", "mean_time_ms", "oracle_gap"]
    table = [header]

    for row in rows:
        cells = [row.algorithm, *(f"{p:.6f}" for p in row.dispatch)]
        cells += [
            f"{row.cost:.6f}",
            _cell(row.iterations),
            _cell(row.evaluations),
            _cell(row.mean_time_ms, ".2f"),
            f"{row.oracle_gap:.6f}",
        ]
        table.append(cells)

    await _write(path, _rows_to_csv(table))


async def write_text(content: str, path: str) -> None:
    """Write a text document."""
    await _write(path, content if content.endswith("\n") else content + "\n")


async def load_problem(path: str) -> EldProblem:
    """Read a problem definition from a JSON file.

    The document holds `demand` in MW, a list of `generators` each with p_min, p_max, a, b and c,
    and optionally a `name` (defaults to the file name).

    Parameters
    ----------
    path : str
        The problem file.

    Returns
    -------
    EldProblem
        The problem described by the file.

    Raises
    ------
    ProblemFileError
        If the file cannot be read or is malformed.
    RejectedInputError
        If the values violate a generator or problem invariant.

    """
    try:
        data = json.loads(await _read(path))
    except json.JSONDecodeError as e:
        raise ProblemFileError(path, f"invalid JSON: {e}") from e

    if not isinstance(data, dict) or not isinstance(data.get("generators"), list) or "demand" not in data:
        raise ProblemFileError(path, "expected an object with 'demand' and a list of 'generators'")

    try:
        generators = [Generator(*(unit[key] for key in GENERATOR_KEYS)) for unit in data["generators"]]
        name = str(data.get("name") or os.path.splitext(os.path.basename(path))[0])
        return EldProblem(generators=generators, demand=data["demand"], name=name)
    except (KeyError, TypeError, ValueError) as e:
        raise ProblemFileError(path, f"malformed problem: {e}") from e


async def save_problem(problem: EldProblem, path: str) -> None:
    """Write a problem definition as JSON, floats are written so they read back exactly."""
    data = {
        "name": problem.name,
        "demand": problem.demand,
        "generators": [{key: getattr(g, key) for key in GENERATOR_KEYS} for g in problem.generators],
    }
    await _write(path, json.dumps(data, indent=4))


async def load_overrides(path: str, sections: t.Iterable[str]) -> dict[str, dict[str, t.Any]]:
    """Read per-algorithm config overrides from a TOML file.

    Parameters
    ----------
    path : str
        The config file.
    sections : Iterable[str]
        The section names allowed in the file.

    Returns
    -------
    dict[str, dict[str, Any]]
        Overrides keyed by section name.

    Raises
    ------
    ProblemFileError
        If the file cannot be read or is not valid TOML.
    UsageError
        If the file has an unknown section.

    """
    try:
        data = tomllib.loads(await _read(path))
    except tomllib.TOMLDecodeError as e:
        raise ProblemFileError(path, f"invalid TOML: {e}") from e

    allowed = set(sections)
    overrides: dict[str, dict[str, t.Any]] = {}

    for section, values in data.items():
        if section not in allowed or not isinstance(values, dict):
            raise UsageError(
                f"Unknown config section '{section}' in {path}, expected one of: {', '.join(sorted(allowed))}"
            )

        overrides[section] = dict(values)

    return overrides


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
