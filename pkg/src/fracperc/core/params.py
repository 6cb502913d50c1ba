"""Parameter and index types for M-adic fractal percolation."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterator

from pydantic import BaseModel, ConfigDict, Field

SEED_LIMIT = 2**64


class PercolationParams(BaseModel):
    """Dimension, subdivision, retention probability and master seed."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    d: int = Field(ge=1, description="Ambient dimension.")
    M: int = Field(ge=2, description="Subdivision factor per axis.")
    p: float = Field(gt=0.0, le=1.0, description="Retention probability.")
    seed: int = Field(default=0, ge=0, lt=SEED_LIMIT, description="64-bit stream key.")

    @property
    def children_per_cube(self) -> int:
        return self.M**self.d

    @property
    def mean_offspring(self) -> float:
        """Expected number of retained children of a retained cube."""

        return self.p * self.M**self.d

    def expected_count(self, n: int) -> float:
        return self.mean_offspring**n

    def with_seed(self, seed: int) -> "PercolationParams":
        return self.model_copy(update={"seed": seed})

    def with_p(self, p: float) -> "PercolationParams":
        return PercolationParams(d=self.d, M=self.M, p=p, seed=self.seed)


@dataclass(frozen=True, slots=True)
class CubeIndex:
    """Level-``n`` M-adic cube with integer coordinates ``k``.

    The cube is ``prod_i [k_i M^-n, (k_i + 1) M^-n]``; ``M`` is supplied by the caller
    because the index itself is shared across realizations with the same subdivision.
    """

    n: int
    k: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ValueError(f"level must be non-negative, got {self.n}")
        object.__setattr__(self, "k", tuple(int(value) for value in self.k))
        if not self.k:
            raise ValueError("cube index needs at least one coordinate")

    @classmethod
    def root(cls, d: int) -> "CubeIndex":
        return cls(0, (0,) * d)

    @property
    def d(self) -> int:
        return len(self.k)

    def validate(self, M: int) -> None:
        """Raise ``ValueError`` when a coordinate lies outside ``[0, M^n)``."""

        width = M**self.n
        for value in self.k:
            if not 0 <= value < width:
                raise ValueError(f"coordinate {value} outside [0, {width}) at level {self.n}")

    def side(self, M: int) -> float:
        return float(Fraction(1, M**self.n))

    def center(self, M: int) -> tuple[float, ...]:
        width = M**self.n
        return tuple(float(Fraction(2 * value + 1, 2 * width)) for value in self.k)

    def bounds(self, M: int) -> tuple[tuple[float, float], ...]:
        width = M**self.n
        return tuple((float(Fraction(value, width)), float(Fraction(value + 1, width))) for value in self.k)

    def parent(self, M: int) -> "CubeIndex":
        if self.n == 0:
            raise ValueError("the unit cube has no parent")
        return CubeIndex(self.n - 1, tuple(value // M for value in self.k))

    def ancestor(self, level: int, M: int) -> "CubeIndex":
        if not 0 <= level <= self.n:
            raise ValueError(f"ancestor level {level} outside [0, {self.n}]")
        scale = M ** (self.n - level)
        return CubeIndex(level, tuple(value // scale for value in self.k))

    def children(self, M: int) -> Iterator["CubeIndex"]:
        for offset in product(range(M), repeat=self.d):
            yield CubeIndex(self.n + 1, tuple(value * M + digit for value, digit in zip(self.k, offset)))

    def digits(self, M: int) -> tuple[tuple[int, ...], ...]:
        """M-adic digit path from the root, one d-tuple per level."""

        path: list[tuple[int, ...]] = []
        for level in range(1, self.n + 1):
            scale = M ** (self.n - level)
            path.append(tuple((value // scale) % M for value in self.k))
        return tuple(path)

    def is_within(self, other: "CubeIndex", M: int) -> bool:
        """True when this cube is ``other`` or one of its descendants."""

        if other.n > self.n or other.d != self.d:
            return False
        return self.ancestor(other.n, M) == other


def dimension_formula(d: int, M: int, p: float) -> float:
    return math.log(p * M**d) / math.log(M)


__all__ = ["CubeIndex", "PercolationParams", "SEED_LIMIT", "dimension_formula"]
