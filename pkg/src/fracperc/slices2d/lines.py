"""Angled lines through the unit square and nested line grids."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from fracperc.errors import BudgetExceededError
from fracperc.settings import get_settings

SQRT2 = math.sqrt(2.0)
HALF_PI = math.pi / 2.0
QUARTER_PI = math.pi / 4.0
_HALF_SQRT2 = math.sqrt(0.5)


@dataclass(frozen=True, slots=True)
class Line:
    """Line of angle ``alpha`` crossing the decreasing diagonal at parameter ``z``.

    The diagonal runs from ``(0, 1)`` (``z = 0``) to ``(1, 0)`` (``z = sqrt 2``). Shifted
    lines may carry ``z`` outside ``[0, sqrt 2]``; they still meet the diagonal's supporting line.
    """

    alpha: float
    z: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.alpha) and 0.0 <= self.alpha <= HALF_PI):
            raise ValueError(f"alpha must lie in [0, pi/2], got {self.alpha}")
        if not math.isfinite(self.z):
            raise ValueError("z must be finite")

    @property
    def direction(self) -> tuple[float, float]:
        if self.alpha == 0.0:
            return (1.0, 0.0)
        if self.alpha == HALF_PI:
            return (0.0, 1.0)
        if self.alpha == QUARTER_PI:
            # math.cos and math.sin differ in the last bit here
            return (_HALF_SQRT2, _HALF_SQRT2)
        return (math.cos(self.alpha), math.sin(self.alpha))

    @property
    def normal(self) -> tuple[float, float]:
        c, s = self.direction
        return (-s, c)

    @property
    def anchor(self) -> tuple[float, float]:
        x = self.z / SQRT2
        return (x, 1.0 - x)

    @property
    def offset(self) -> float:
        """Signed distance of the line from the origin along :attr:`normal`."""

        nx, ny = self.normal
        x, y = self.anchor
        return nx * x + ny * y

    @property
    def is_axis_parallel(self) -> bool:
        return self.alpha in (0.0, HALF_PI)

    @property
    def meets_diagonal_interior(self) -> bool:
        return 0.0 < self.z < SQRT2

    def in_proved_family(self, theta: float) -> bool:
        """Angle at least ``theta`` away from both axes and crossing the open diagonal."""

        return theta < self.alpha < HALF_PI - theta and self.meets_diagonal_interior

    def shifted(self, distance: float) -> Line:
        """Parallel line moved ``distance`` along :attr:`normal` (negative moves the other way)."""

        return Line(self.alpha, self.z - distance / math.sin(self.alpha + QUARTER_PI))

    def to_decimal(self) -> tuple[str, str]:
        return (format(self.alpha, ".17g"), format(self.z, ".17g"))

    @classmethod
    def from_decimal(cls, alpha: str, z: str) -> Line:
        return cls(float(alpha), float(z))


def shifted_lines(line: Line, n: int, M: int) -> tuple[Line, Line]:
    """Parallel lines at distance ``3 M^-n / (4 sqrt 2)`` above and below ``line``."""

    distance = 3.0 / (4.0 * SQRT2 * float(M) ** n)
    return line.shifted(distance), line.shifted(-distance)


def dump_lines(lines: Sequence[Line]) -> str:
    """``alpha,z`` per line with 17 significant digits."""

    return "".join(f"{alpha},{z}\n" for alpha, z in (line.to_decimal() for line in lines))


def load_lines(text: str) -> list[Line]:
    rows = [row.split(",") for row in text.splitlines() if row.strip()]
    return [Line.from_decimal(alpha.strip(), z.strip()) for alpha, z in rows]


@dataclass(frozen=True)
class LineGrid:
    """Product grid of anchors on the open diagonal and angles in ``(theta, pi/2 - theta)``.

    Anchors are ``sqrt2 * j / M^a`` and angles ``theta + w * j / M^b`` with ``w = pi/2 - 2 theta``;
    both exponents grow with ``n``, so the grid at ``n`` is contained in the grid at ``n + 1``
    with bit-identical values.
    """

    theta: float
    n: int
    M: int
    density_exponent: float
    anchor_exponent: int
    angle_exponent: int
    anchors: np.ndarray
    angles: np.ndarray

    def __len__(self) -> int:
        return int(self.anchors.size * self.angles.size)

    @property
    def anchor_spacing(self) -> float:
        return SQRT2 / self.M**self.anchor_exponent

    @property
    def angle_spacing(self) -> float:
        return (HALF_PI - 2.0 * self.theta) / self.M**self.angle_exponent

    def lines(self) -> Iterator[Line]:
        for alpha in self.angles:
            for z in self.anchors:
                yield Line(float(alpha), float(z))

    def contains(self, line: Line) -> bool:
        return bool(np.isin(line.alpha, self.angles) and np.isin(line.z, self.anchors))

    def issubset(self, other: LineGrid) -> bool:
        return bool(np.all(np.isin(self.anchors, other.anchors)) and np.all(np.isin(self.angles, other.angles)))

    def nearest(self, line: Line) -> Line:
        return Line(float(_nearest(self.angles, line.alpha)), float(_nearest(self.anchors, line.z)))


def _nearest(values: np.ndarray, target: float) -> float:
    position = int(np.searchsorted(values, target))
    candidates = values[max(position - 1, 0) : position + 1]
    return candidates[np.argmin(np.abs(candidates - target))]


def _grid_exponent(extent: float, density_exponent: float, n: int, M: int) -> int:
    """Smallest ``m >= 1`` with ``extent / M^m <= M^(-density_exponent n)``."""

    exponent = math.ceil(density_exponent * n + math.log(extent) / math.log(M) - 1e-12)
    return max(1, exponent)


def line_grid(
    theta: float,
    n: int,
    density_exponent: float = 1.0,
    M: int = 2,
    *,
    budget: int | None = None,
) -> LineGrid:
    """Build the level-``n`` grid with spacing at most ``M^(-density_exponent n)``.

    Raises:
        ValueError: ``theta`` outside ``(0, pi/4)`` or ``density_exponent`` outside ``(0, 2]``.
        BudgetExceededError: the grid cardinality exceeds ``budget`` (default from settings).
    """

    if not 0.0 < theta < QUARTER_PI:
        raise ValueError(f"theta must lie in (0, pi/4), got {theta}")
    if not 0.0 < density_exponent <= 2.0:
        raise ValueError(f"density_exponent must lie in (0, 2], got {density_exponent}")
    if n < 0 or M < 2:
        raise ValueError("need n >= 0 and M >= 2")
    width = HALF_PI - 2.0 * theta
    anchor_exponent = _grid_exponent(SQRT2, density_exponent, n, M)
    angle_exponent = _grid_exponent(width, density_exponent, n, M)
    size = (M**anchor_exponent - 1) * (M**angle_exponent - 1)
    limit = budget if budget is not None else get_settings().budget.max_grid_lines
    if size > limit:
        raise BudgetExceededError("grid lines", size, limit)
    anchor_steps = np.arange(1, M**anchor_exponent, dtype=np.float64) / float(M**anchor_exponent)
    angle_steps = np.arange(1, M**angle_exponent, dtype=np.float64) / float(M**angle_exponent)
    anchors = SQRT2 * anchor_steps
    angles = theta + width * angle_steps
    for array in (anchors, angles):
        array.setflags(write=False)
    return LineGrid(
        theta=theta,
        n=n,
        M=M,
        density_exponent=density_exponent,
        anchor_exponent=anchor_exponent,
        angle_exponent=angle_exponent,
        anchors=anchors,
        angles=angles,
    )


@dataclass(frozen=True)
class GridFamily:
    """Grid parameters shared by every level of a growth sweep."""

    theta: float
    density_exponent: float = 1.0
    M: int = 2
    budget: int | None = None

    def at(self, n: int) -> LineGrid:
        return line_grid(self.theta, n, self.density_exponent, self.M, budget=self.budget)


__all__ = [
    "GridFamily",
    "Line",
    "LineGrid",
    "SQRT2",
    "dump_lines",
    "line_grid",
    "load_lines",
    "shifted_lines",
]
