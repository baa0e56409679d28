from __future__ import annotations

import collections
import typing as t

import numpy as np
import pytest

from src.models import EldProblem, Generator, RngStream, builtin_problem


class PinnedRng(RngStream):
    """A random stream whose next draws can be forced.

    Pinned values are returned in order, one per call, before falling back to the seeded stream.
    """

    def __init__(self, seed: int = 0) -> None:
        super().__init__(seed)
        self._pinned: dict[str, collections.deque[t.Any]] = collections.defaultdict(collections.deque)

    def pin(self, method: str, *values: t.Any) -> PinnedRng:
        self._pinned[method].extend(values)
        return self

    def _next(self, method: str) -> t.Any:
        queue = self._pinned[method]
        return queue.popleft() if queue else None

    def random(self, size: int | tuple[int, ...] | None = None) -> t.Any:
        value = self._next("random")
        if value is None:
            return super().random(size)

        return value if size is None else np.full(size, value, dtype=float)

    def uniform(self, low: t.Any, high: t.Any, size: int | tuple[int, ...] | None = None) -> t.Any:
        value = self._next("uniform")
        return super().uniform(low, high, size) if value is None else np.asarray(value, dtype=float)

    def integers(self, low: int, high: int) -> int:
        value = self._next("integers")
        return super().integers(low, high) if value is None else int(value)


@pytest.fixture
def problem1() -> EldProblem:
    return builtin_problem("problem1")


@pytest.fixture
def problem2() -> EldProblem:
    return builtin_problem("problem2-corrected")


@pytest.fixture
def problem2_printed() -> EldProblem:
    return builtin_problem("problem2-printed")


@pytest.fixture
def single_unit() -> EldProblem:
    return EldProblem([Generator(100, 400, 0.004, 5.3, 500)], 250, name="single")


@pytest.fixture
def two_units() -> EldProblem:
    return EldProblem([Generator(0, 100, 0.01, 2, 0), Generator(0, 100, 0.01, 2, 0)], 100, name="two")


def random_problem(rng: np.random.Generator, n_units: int) -> EldProblem:
    """A feasible problem with strictly convex units and a demand strictly inside the fleet's range."""
    p_min = rng.uniform(10, 100, n_units)
    p_max = p_min + rng.uniform(50, 300, n_units)
    a = rng.uniform(0.001, 0.01, n_units)
    b = rng.uniform(5, 10, n_units)
    c = rng.uniform(50, 500, n_units)
    demand = rng.uniform(p_min.sum() + 1, p_max.sum() - 1)
    generators = [Generator(*unit) for unit in zip(p_min, p_max, a, b, c, strict=True)]
    return EldProblem(generators, demand, name=f"random-{n_units}")


@pytest.fixture
def make_problem() -> t.Callable[[np.random.Generator, int], EldProblem]:
    return random_problem


@pytest.fixture
def pinned_rng() -> PinnedRng:
    return PinnedRng(seed=7)
