"""Grid maxima of rescaled slice lengths and the linear-growth dichotomy."""

from __future__ import annotations

import logging
import math
from dataclasses import asdict, dataclass, field
from typing import Any, Iterable

import numpy as np

from fracperc.core import Realization
from fracperc.errors import LevelOutOfRangeError
from fracperc.observability import get_observability
from fracperc.settings import get_settings

from .geometry import clip_lengths
from .lines import HALF_PI, SQRT2, GridFamily, Line, LineGrid, line_grid

LOGGER = logging.getLogger("fracperc.slices2d.growth")

_CHUNK_PAIRS = 2_000_000


def clamp_epsilon(M: int, p: float, epsilon: float) -> float:
    """Return ``epsilon`` if it satisfies ``0 < eps < min(p, 1/10)`` and, for ``p < 1/M``,
    ``M p (1 + eps) < 1``; otherwise half of the admissible upper limit."""

    ceiling = min(p, 0.1)
    if p < 1.0 / M:
        ceiling = min(ceiling, 1.0 / (M * p) - 1.0)
    if 0.0 < epsilon < ceiling:
        return epsilon
    clamped = ceiling / 2.0
    LOGGER.warning("epsilon %.6g outside (0, %.6g); using %.6g", epsilon, ceiling, clamped)
    return clamped


@dataclass(frozen=True)
class GrowthConstants:
    """``u``, ``r``, ``lambda`` and ``C2`` derived from ``(M, p, epsilon)``."""

    M: int
    p: float
    epsilon: float
    u: float
    r: float
    lam: float
    C2: float

    @classmethod
    def build(cls, M: int, p: float, epsilon: float) -> GrowthConstants:
        eps = clamp_epsilon(M, p, epsilon)
        u = 1.0 + eps / 3.0
        r = SQRT2 * (u - 1.0) ** 2 * p**2
        return cls(
            M=M,
            p=p,
            epsilon=eps,
            u=u,
            r=r,
            lam=p * M * (1.0 + 2.0 * eps / 3.0),
            C2=8.0 * M * math.log(M) / r + 1.0,
        )

    def b(self, n: int) -> float:
        return 8.0 * math.log(self.M) / self.r * n


@dataclass(frozen=True)
class GridMaximum:
    value: float
    line: Line | None


def max_rescaled_slice(
    real: Realization,
    n: int,
    grid: LineGrid,
    *,
    slack: float | None = None,
    chunk_pairs: int = _CHUNK_PAIRS,
) -> GridMaximum:
    """``max over grid of M^n L_n(line)``.

    For each angle, a cube is met by the anchors within ``side / sqrt 2`` of the anchor of the
    line through its center, so the candidate (line, cube) pairs are found with a sorted search
    and the per-line sums with a weighted bincount.
    """

    if real.d != 2:
        raise ValueError("grid maxima need d = 2")
    cubes = real.cubes(n)
    count = cubes.shape[0]
    if count == 0:
        return GridMaximum(0.0, None)
    slack_value = get_settings().simulation.incidence_slack if slack is None else slack
    width = float(real.M) ** n
    side = 1.0 / width
    lo_x = cubes[:, 0] / width
    lo_y = cubes[:, 1] / width
    cx = (cubes[:, 0] + 0.5) / width
    cy = (cubes[:, 1] + 0.5) / width
    half = side / SQRT2
    anchors = grid.anchors
    anchor_count = anchors.size
    per_angle = count * (SQRT2 * side / grid.anchor_spacing + 2.0)
    chunk = max(1, int(chunk_pairs // per_angle))

    best_value = 0.0
    best_line: Line | None = None
    for start in range(0, grid.angles.size, chunk):
        alphas = grid.angles[start : start + chunk]
        cos_a = np.cos(alphas)
        sin_a = np.sin(alphas)
        centers = SQRT2 * (cos_a[:, None] + sin_a[:, None] * cx[None, :] - cos_a[:, None] * cy[None, :])
        centers /= (sin_a + cos_a)[:, None]
        first = np.searchsorted(anchors, centers - half, side="right").ravel()
        last = np.searchsorted(anchors, centers + half, side="left").ravel()
        hits = np.clip(last - first, 0, None)
        total = int(hits.sum())
        if total == 0:
            continue
        rows = np.repeat(np.arange(hits.size), hits)
        within = np.arange(total) - np.repeat(np.cumsum(hits) - hits, hits)
        anchor_idx = np.repeat(first, hits) + within
        angle_idx = rows // count
        cube_idx = rows % count
        px = anchors[anchor_idx] / SQRT2
        lengths = clip_lengths(
            px,
            1.0 - px,
            cos_a[angle_idx],
            sin_a[angle_idx],
            lo_x[cube_idx],
            lo_y[cube_idx],
            side,
            slack_value,
        )
        sums = np.bincount(angle_idx * anchor_count + anchor_idx, weights=lengths, minlength=alphas.size * anchor_count)
        position = int(np.argmax(sums))
        if sums[position] > best_value:
            best_value = float(sums[position])
            best_line = Line(float(alphas[position // anchor_count]), float(anchors[position % anchor_count]))
    return GridMaximum(best_value * width, best_line)


@dataclass(frozen=True)
class GrowthDiagnostics:
    """Per-level grid maxima ``a_n`` against the comparison sequence ``b_n``.

    ``dichotomy[i]`` records ``a_n <= M b_n or a_{n+1} <= lambda a_n`` for ``n = levels[i]``; the
    last level only has the first clause. ``threshold`` is the first level from which the
    dichotomy holds through the end of the range, and the verdict requires it to be no later
    than the middle of the range.
    """

    levels: tuple[int, ...]
    a: tuple[float, ...]
    b: tuple[float, ...]
    constants: GrowthConstants
    applicable: bool
    dichotomy: tuple[bool, ...]
    threshold: int | None
    verdict: bool | None
    maximizers: tuple[Line | None, ...] = field(default=(), repr=False)
    s_theta: float | None = None

    @property
    def verdict_label(self) -> str:
        if self.verdict is None:
            return "not-applicable"
        return "pass" if self.verdict else "fail"

    def ratio(self, n: int) -> float:
        """``a_n / n``."""

        return self.a[self.levels.index(n)] / n

    def rows(self) -> list[dict[str, Any]]:
        rows: list[dict[str, Any]] = []
        for index, n in enumerate(self.levels):
            rows.append(
                {
                    "n": n,
                    "a_n": self.a[index],
                    "b_n": self.b[index],
                    "lambda": self.constants.lam,
                    "C2": self.constants.C2,
                    "verdict": self.dichotomy[index],
                    "below_linear_bound": self.a[index] < self.constants.C2 * n,
                }
            )
        return rows

    def to_dict(self) -> dict[str, Any]:
        return {
            "levels": list(self.levels),
            "a": list(self.a),
            "b": list(self.b),
            "constants": asdict(self.constants),
            "applicable": self.applicable,
            "dichotomy": list(self.dichotomy),
            "threshold": self.threshold,
            "verdict": self.verdict_label,
            "s_theta": self.s_theta,
        }


def _levels(n_range: Iterable[int] | tuple[int, int]) -> list[int]:
    if isinstance(n_range, tuple) and len(n_range) == 2:
        n_lo, n_hi = n_range
        return list(range(n_lo, n_hi + 1))
    return sorted(int(n) for n in n_range)


def in_growth_regime(M: int, p: float) -> bool:
    return M**-2 < p <= 1.0 / M


def growth_diagnostics(
    real: Realization,
    grid_family: GridFamily,
    n_range: Iterable[int] | tuple[int, int],
    epsilon: float | None = None,
    *,
    s_theta_samples: int = 0,
) -> GrowthDiagnostics:
    """Grid maxima over ``n_range`` (inclusive ``(n_lo, n_hi)`` or explicit levels) and the verdict."""

    levels = _levels(n_range)
    if not levels:
        raise ValueError("n_range is empty")
    if levels[-1] > real.depth:
        raise LevelOutOfRangeError(levels[-1], real.depth)
    if levels[0] < 1:
        raise ValueError("growth levels start at 1")
    resolved_epsilon = get_settings().simulation.slice_epsilon if epsilon is None else epsilon
    constants = GrowthConstants.build(real.M, real.params.p, resolved_epsilon)
    applicable = in_growth_regime(real.M, real.params.p)

    observability = get_observability(component="slices2d.growth")
    with observability.timed("growth.diagnostics", seed=real.params.seed, levels=[levels[0], levels[-1]]) as extra:
        maxima = [max_rescaled_slice(real, n, grid_family.at(n)) for n in levels]
        a = tuple(item.value for item in maxima)
        b = tuple(constants.b(n) for n in levels)
        dichotomy: list[bool] = []
        for index, n in enumerate(levels):
            first_clause = a[index] <= real.M * b[index]
            following = index + 1 < len(levels) and levels[index + 1] == n + 1
            second_clause = following and a[index + 1] <= constants.lam * a[index]
            dichotomy.append(bool(first_clause or second_clause))
        threshold: int | None = None
        for index in range(len(levels) - 1, -1, -1):
            if not dichotomy[index]:
                break
            threshold = levels[index]
        midpoint = levels[0] + (levels[-1] - levels[0]) // 2
        holds = threshold is not None and threshold <= midpoint
        extra.update(threshold=threshold, verdict=holds if applicable else None)

    s_theta = None
    if s_theta_samples > 0:
        s_theta = measure_s_theta(
            grid_family.theta, levels[-1], grid_family.density_exponent, real.M, samples=s_theta_samples
        )
    return GrowthDiagnostics(
        levels=tuple(levels),
        a=a,
        b=b,
        constants=constants,
        applicable=applicable,
        dichotomy=tuple(dichotomy),
        threshold=threshold,
        verdict=holds if applicable else None,
        maximizers=tuple(item.line for item in maxima),
        s_theta=s_theta,
    )


def measure_s_theta(
    theta: float,
    n: int,
    density_exponent: float = 1.0,
    M: int = 2,
    *,
    samples: int = 1000,
    seed: int = 0,
) -> float:
    """Largest ``M^(n-1) |L_{n-1}(l) - L_{n-1}(l')|`` over random lines ``l`` and their nearest grid line.

    On a full realization ``E_{n-1}`` is the unit square, so ``L_{n-1}`` is the chord of the square.
    """

    if n < 1:
        raise ValueError("n must be at least 1")
    grid = line_grid(theta, n, density_exponent, M)
    rng = np.random.Generator(np.random.Philox(seed))
    alphas = rng.uniform(theta, HALF_PI - theta, samples)
    zs = rng.uniform(0.0, SQRT2, samples)
    near_alphas = _nearest_values(grid.angles, alphas)
    near_zs = _nearest_values(grid.anchors, zs)
    exact = _square_chords(alphas, zs)
    approx = _square_chords(near_alphas, near_zs)
    return float(np.max(np.abs(exact - approx)) * float(M) ** (n - 1))


def _square_chords(alphas: np.ndarray, zs: np.ndarray) -> np.ndarray:
    px = zs / SQRT2
    return clip_lengths(px, 1.0 - px, np.cos(alphas), np.sin(alphas), 0.0, 0.0, 1.0, 0.0)


def _nearest_values(values: np.ndarray, targets: np.ndarray) -> np.ndarray:
    position = np.clip(np.searchsorted(values, targets), 1, values.size - 1)
    left = values[position - 1]
    right = values[position]
    return np.where(np.abs(targets - left) <= np.abs(right - targets), left, right)


__all__ = [
    "GridMaximum",
    "GrowthConstants",
    "GrowthDiagnostics",
    "clamp_epsilon",
    "growth_diagnostics",
    "in_growth_regime",
    "max_rescaled_slice",
    "measure_s_theta",
]
