from __future__ import annotations

__all__ = ["handle_error"]

import logging
import sys
import traceback

from src.models.errors import (
    InfeasibilityError,
    OutputError,
    ProblemFileError,
    RejectedInputError,
    UsageError,
)
from src.static import EXIT_INPUT_ERROR, EXIT_OUTPUT_ERROR, EXIT_USAGE_ERROR

logger = logging.getLogger(__name__)


def _report(message: str) -> None:
    print(f"bench: {message}", file=sys.stderr)


def handle_error(error: BaseException) -> int:
    """Report an error raised while benchmarking and map it to an exit status.

    Parameters
    ----------
    error : BaseException
        The error that ended the run.

    Returns
    -------
    int
        1 for usage and unexpected errors, 2 for bad input, 3 for output failures.

    """
    if isinstance(error, UsageError):
        _report(f"{error}")
        return EXIT_USAGE_ERROR

    if isinstance(error, ProblemFileError):
        _report(f"Cannot load problem file {error}")
        return EXIT_INPUT_ERROR

    if isinstance(error, InfeasibilityError):
        _report(f"Infeasible problem: {error}")
        return EXIT_INPUT_ERROR

    if isinstance(error, RejectedInputError):
        _report(f"Invalid input: {error}")
        return EXIT_INPUT_ERROR

    if isinstance(error, OutputError):
        _report(f"{error}")
        return EXIT_OUTPUT_ERROR

    logger.error(
        f"Uncaught exception: {''.join(traceback.format_exception(type(error), error, error.__traceback__))}"
    )
    _report(f"Unexpected error: {error}")
    return EXIT_USAGE_ERROR


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
