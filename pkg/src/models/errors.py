__all__ = [
    "InfeasibilityError",
    "OptimizerStateError",
    "OutputError",
    "ProblemFileError",
    "RejectedInputError",
    "UsageError",
]


class RejectedInputError(Exception):
    """Exception raised when a value does not meet the preconditions of an operation."""


class InfeasibilityError(Exception):
    """Exception raised when the demand cannot be met within the generator limits."""


class ProblemFileError(Exception):
    """Exception raised when a problem or config file cannot be read or parsed."""

    def __init__(self, path: str, reason: str) -> None:
        super().__init__(f"{path}: {reason}")
        self.path = path
        self.reason = reason


class OptimizerStateError(Exception):
    """Exception raised when an optimizer is used before its population has been initialised."""


class UsageError(Exception):
    """Exception raised when the command line is used incorrectly."""


class OutputError(Exception):
    """Exception raised when results cannot be written to the output directory."""


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
