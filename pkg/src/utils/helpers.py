from __future__ import annotations

__all__ = ["format_comparison", "host_description"]

import platform
import typing as t

import psutil

from src.static import CONVERGENCE_MARGIN, REFERENCE_COST_TOLERANCE, REFERENCE_RESULTS

if t.TYPE_CHECKING:
    from src.models.experiment import ComparisonRow, ExperimentResult


def host_description() -> str:
    """Describe the machine runs are timed on.

    Returns
    -------
    str
        Processor, core count, clock and memory, as far as they can be read.

    """
    cores = psutil.cpu_count(logical=False) or psutil.cpu_count() or 0
    threads = psutil.cpu_count() or cores
    memory = psutil.virtual_memory().total / 1073741824

    parts = [platform.processor() or platform.machine(), f"{cores} cores / {threads} threads"]

    try:
        frequency = psutil.cpu_freq()
    except (NotImplementedError, FileNotFoundError):
        frequency = None

    if frequency and frequency.max:
        parts.append(f"{frequency.max / 1000:.2f} GHz")

    parts.append(f"{memory:.1f} GB RAM")
    return ", ".join(part for part in parts if part)


def _value(value: float | int | None, fmt: str = "") -> str:
    return "-" if value is None else format(value, fmt)


def _row_cells(row: ComparisonRow) -> list[str]:
    return [
        row.algorithm,
        *(f"{p:.2f}" for p in row.dispatch),
        f"{row.cost:.4f}",
        _value(row.iterations),
        _value(row.evaluations),
        _value(row.iterations_used),
        _value(row.total_evaluations),
        _value(row.mean_time_ms, ".2f"),
        f"{row.oracle_gap:.4f}",
        _value(row.mean_cost, ".4f"),
        _value(row.worst_cost, ".4f"),
        _value(row.success_rate, ".0%"),
    ]


def format_comparison(result: ExperimentResult) -> str:
    """Render an experiment's comparison as a plain text table with notes.

    Parameters
    ----------
    result : ExperimentResult
        The finished experiment.

    Returns
    -------
    str
        The table, followed by the problem, the oracle's incremental cost, the published reference and
        the host the runs were timed on.

    """
    problem = result.problem
    header = ["algorithm", *(f"P{i}" for i in range(1, problem.n_units + 1))]
    header += ["cost", "iterations", "evaluations", "total_iter", "total_evals", "mean_ms", "gap"]
    header += ["mean_cost", "worst_cost", "success"]
    table = [header, *(_row_cells(row) for row in result.rows)]
    widths = [max(len(line[i]) for line in table) for i in range(len(header))]

    lines = [f"Problem {problem.name}: {problem.n_units} units, demand {problem.demand:g} MW", ""]
    lines.extend("  ".join(cell.rjust(width) for cell, width in zip(line, widths, strict=True)) for line in table)
    lines.append("")
    lines.append(f"Oracle incremental cost {result.oracle.lambda_:.6f} $/MWh")

    binding = sorted(result.oracle.binding_units)
    if binding:
        lines.append(f"Units at a limit: {', '.join(f'P{i + 1}' for i in binding)}")

    lines.append(
        f"Iterations and evaluations are those of the best run to come within {CONVERGENCE_MARGIN:.1%} of the oracle"
    )
    lines.append("total_iter and total_evals are everything the best run performed before it stopped")

    if result.reference_cost is not None:
        reference = REFERENCE_RESULTS[problem.name]
        lines.append(f"Published optimum {result.reference_cost:g} $/h")
        lines.extend(
            f"Published {algorithm}: {', '.join(f'{p:g}' for p in dispatch)} MW "
            f"after {reference['iterations'][algorithm]} iterations"
            for algorithm, dispatch in reference["dispatch"].items()
        )

        if abs(result.oracle.cost - result.reference_cost) > REFERENCE_COST_TOLERANCE:
            lines.append(
                f"Note: the oracle cost differs from the published optimum by "
                f"{result.oracle.cost - result.reference_cost:+.2f} $/h"
            )

    lines.append(f"Host: {host_description()}")
    return "\n".join(lines) + "\n"


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
