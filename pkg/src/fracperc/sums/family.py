"""Families of independent one-dimensional percolations and their product cubes."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from fracperc.core import PercolationParams, Realization, derive_seed, generate
from fracperc.errors import BudgetExceededError, LevelOutOfRangeError
from fracperc.settings import get_settings

NORM_TOLERANCE = 1e-9


class Coefficients(BaseModel):
    """Positive unit vector ``a`` defining the sum ``a_1 E_1 + ... + a_d E_d``."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    a: tuple[float, ...] = Field(min_length=1)

    @field_validator("a")
    @classmethod
    def _positive_unit(cls, value: tuple[float, ...]) -> tuple[float, ...]:
        if any(not math.isfinite(item) or item <= 0.0 for item in value):
            raise ValueError("coefficients must be positive")
        norm = math.sqrt(math.fsum(item * item for item in value))
        if abs(norm - 1.0) > NORM_TOLERANCE:
            raise ValueError(f"coefficients must have unit norm, got {norm}")
        return value

    @classmethod
    def normalized(cls, values: Sequence[float]) -> Coefficients:
        norm = math.sqrt(math.fsum(float(item) ** 2 for item in values))
        if norm == 0.0:
            raise ValueError("coefficients must not all vanish")
        return cls(a=tuple(float(item) / norm for item in values))

    @classmethod
    def diagonal(cls, d: int) -> Coefficients:
        return cls.normalized([1.0] * d)

    @property
    def d(self) -> int:
        return len(self.a)

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.a, dtype=np.float64)

    @property
    def total(self) -> float:
        """``sum a_i``, the length of the sum of unit intervals."""

        return math.fsum(self.a)


def distinct_coordinate_bound(coeffs: Coefficients) -> float:
    """``2 sum a_j / min a_j``: how many shifted slabs a shared coordinate can reach."""

    return 2.0 * coeffs.total / min(coeffs.a)


@dataclass(frozen=True)
class FamilyRealization:
    """``d`` independent one-dimensional realizations with a shared ``M`` and depth."""

    members: tuple[Realization, ...]

    def __post_init__(self) -> None:
        if not self.members:
            raise ValueError("a family needs at least one member")
        first = self.members[0]
        for member in self.members:
            if member.d != 1:
                raise ValueError("family members must be one-dimensional")
            if member.M != first.M or member.depth != first.depth:
                raise ValueError("family members must share M and depth")
            if member.params.p <= 1.0 / member.M:
                raise ValueError(f"member probability {member.params.p} must exceed 1/M = {1.0 / member.M}")
        seeds = [member.params.seed for member in self.members]
        if len(set(seeds)) != len(seeds):
            raise ValueError("family members need distinct seeds")

    @property
    def d(self) -> int:
        return len(self.members)

    @property
    def M(self) -> int:
        return self.members[0].M

    @property
    def depth(self) -> int:
        return self.members[0].depth

    @property
    def probs(self) -> tuple[float, ...]:
        return tuple(member.params.p for member in self.members)

    @property
    def product_probability(self) -> float:
        return math.prod(self.probs)

    def check_level(self, n: int) -> None:
        if not 0 <= n <= self.depth:
            raise LevelOutOfRangeError(n, self.depth)

    def member_indices(self, n: int) -> list[np.ndarray]:
        """Retained level-``n`` indices of every member, each sorted ascending."""

        self.check_level(n)
        return [member.cubes(n)[:, 0] for member in self.members]

    def product_count(self, n: int) -> int:
        return math.prod(index.size for index in self.member_indices(n))

    def survived(self) -> bool:
        return all(member.survived for member in self.members)

    def product_cubes(self, n: int, *, budget: int | None = None) -> np.ndarray:
        """All retained level-``n`` product cubes, shape ``(count, d)``, lexicographic."""

        limit = budget if budget is not None else get_settings().budget.max_product_cubes
        count = self.product_count(n)
        if count > limit:
            raise BudgetExceededError("product cubes", count, limit)
        grids = np.meshgrid(*self.member_indices(n), indexing="ij")
        return np.stack([grid.ravel() for grid in grids], axis=1).astype(np.int64)

    def product_realization(self, *, budget: int | None = None) -> Realization:
        """The ``d``-dimensional realization whose level-``n`` cubes are products of member cubes."""

        params = PercolationParams(d=self.d, M=self.M, p=self.product_probability, seed=self.members[0].params.seed)
        levels = [self.product_cubes(n, budget=budget) for n in range(self.depth + 1)]
        return Realization.from_levels(params, levels)


def generate_family(
    probs: Sequence[float],
    M: int,
    depth: int,
    seed: int,
    *,
    budget: int | None = None,
) -> FamilyRealization:
    """Member ``i`` is driven by ``derive_seed(seed, i)``."""

    members = tuple(
        generate(PercolationParams(d=1, M=M, p=p, seed=derive_seed(seed, index)), depth, budget=budget)
        for index, p in enumerate(probs)
    )
    return FamilyRealization(members=members)


def product_volume(family: FamilyRealization, n: int) -> float:
    """``d``-volume of the product set at level ``n``."""

    return math.prod(index.size / float(family.M) ** n for index in family.member_indices(n))


__all__ = [
    "Coefficients",
    "FamilyRealization",
    "distinct_coordinate_bound",
    "generate_family",
    "product_volume",
]
