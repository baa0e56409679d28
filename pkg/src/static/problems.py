__all__ = ["BUILTIN_PROBLEMS", "REFERENCE_RESULTS"]

# Problem id: demand (MW) and generator rows (p_min, p_max, a, b, c)
BUILTIN_PROBLEMS: dict[str, dict] = {
    "problem1": {
        "demand": 975.0,
        "generators": [
            (200.0, 450.0, 0.004, 5.3, 500.0),
            (150.0, 350.0, 0.006, 5.5, 400.0),
            (100.0, 325.0, 0.009, 5.8, 200.0),
        ],
    },
    "problem2-printed": {
        "demand": 450.0,
        "generators": [
            (100.0, 600.0, 0.0025, 7.92, 561.0),
            (100.0, 400.0, 0.0019, 7.85, 310.0),
            (50.0, 200.0, 0.0048, 7.97, 78.0),
        ],
    },
    # Same units with the quadratic coefficients that reproduce the published optimum
    "problem2-corrected": {
        "demand": 450.0,
        "generators": [
            (100.0, 600.0, 0.001562, 7.92, 561.0),
            (100.0, 400.0, 0.00194, 7.85, 310.0),
            (50.0, 200.0, 0.00482, 7.97, 78.0),
        ],
    },
}

# Problem id: published optimal cost ($/h) and per-algorithm dispatch (MW)
REFERENCE_RESULTS: dict[str, dict] = {
    "problem1": {
        "cost": 8237.0,
        "dispatch": {
            "pso": (450.0, 325.0, 200.0),
            "abc": (450.0, 325.0, 200.0),
            "bfo": (450.0, 325.0, 200.0),
        },
        "iterations": {"pso": 50, "abc": 5, "bfo": 10},
    },
    "problem2-printed": {
        "cost": 4652.0,
        "dispatch": {
            "pso": (206.0, 184.0, 60.0),
            "abc": (206.0, 184.0, 60.0),
            "bfo": (206.0, 183.0, 61.0),
        },
        "iterations": {"pso": 35, "abc": 4, "bfo": 11},
    },
    "problem2-corrected": {
        "cost": 4652.0,
        "dispatch": {
            "pso": (206.0, 184.0, 60.0),
            "abc": (206.0, 184.0, 60.0),
            "bfo": (206.0, 183.0, 61.0),
        },
        "iterations": {"pso": 35, "abc": 4, "bfo": 11},
    },
}


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
