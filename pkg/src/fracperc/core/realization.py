"""Sparse nested storage of retained cubes and the generator that fills it."""

from __future__ import annotations

import hashlib
import json
import logging
from dataclasses import dataclass
from typing import Any, Sequence

import numpy as np

from fracperc.errors import BudgetExceededError, CubeNotRetainedError, LevelOutOfRangeError
from fracperc.observability import get_observability
from fracperc.settings import get_settings

from .keyed import child_offsets, max_packable_level, pack_indices, retain_mask
from .params import CubeIndex, PercolationParams

LOGGER = logging.getLogger("fracperc.core.realization")

FORMAT_NAME = "fracperc.realization"
FORMAT_VERSION = 1


def _frozen(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class Realization:
    """Retained cubes per level, ``levels[n]`` of shape ``(count, d)`` sorted by packed index.

    Level 0 holds the unit cube. Arrays are read-only, so a realization can be shared
    between threads without copying.
    """

    params: PercolationParams
    depth: int
    levels: tuple[np.ndarray, ...]
    keys: tuple[np.ndarray, ...]

    def __post_init__(self) -> None:
        if len(self.levels) != self.depth + 1 or len(self.keys) != self.depth + 1:
            raise ValueError("levels and keys must cover 0..depth")
        for array in (*self.levels, *self.keys):
            array.setflags(write=False)

    @classmethod
    def from_levels(
        cls,
        params: PercolationParams,
        levels: Sequence[np.ndarray | Sequence[Sequence[int]]],
    ) -> Realization:
        """Build a realization from explicit coordinates, checking range and nesting."""

        if not levels:
            raise ValueError("at least level 0 is required")
        d, M = params.d, params.M
        coords: list[np.ndarray] = []
        keys: list[np.ndarray] = []
        for level, raw in enumerate(levels):
            array = np.asarray(raw, dtype=np.int64).reshape(-1, d)
            width = M**level
            if array.size and (array.min() < 0 or array.max() >= width):
                raise ValueError(f"coordinates at level {level} outside [0, {width})")
            packed = pack_indices(array, level, M)
            order = np.argsort(packed, kind="stable")
            array, packed = array[order], packed[order]
            if packed.size > 1 and np.any(np.diff(packed) == 0):
                raise ValueError(f"duplicate cubes at level {level}")
            if level == 0:
                if array.shape[0] != 1:
                    raise ValueError("level 0 must hold exactly the unit cube")
            elif array.size:
                parent_keys = pack_indices(array // M, level - 1, M)
                if not np.all(np.isin(parent_keys, keys[-1])):
                    raise ValueError(f"level {level} has cubes whose parent is not retained")
            coords.append(_frozen(array))
            keys.append(_frozen(packed))
        return cls(params=params, depth=len(coords) - 1, levels=tuple(coords), keys=tuple(keys))

    @property
    def d(self) -> int:
        return self.params.d

    @property
    def M(self) -> int:
        return self.params.M

    def _check_level(self, n: int) -> None:
        if not 0 <= n <= self.depth:
            raise LevelOutOfRangeError(n, self.depth)

    def cubes(self, n: int) -> np.ndarray:
        self._check_level(n)
        return self.levels[n]

    def count(self, n: int) -> int:
        self._check_level(n)
        return int(self.levels[n].shape[0])

    def level_counts(self) -> np.ndarray:
        return np.asarray([array.shape[0] for array in self.levels], dtype=np.int64)

    def extinction_level(self) -> int | None:
        """First level with no retained cube, or ``None`` when ``E_depth`` is nonempty."""

        for n, array in enumerate(self.levels):
            if array.shape[0] == 0:
                return n
        return None

    @property
    def survived(self) -> bool:
        return self.levels[-1].shape[0] > 0

    def contains(self, cube: CubeIndex) -> bool:
        if cube.d != self.d or not 0 <= cube.n <= self.depth:
            return False
        try:
            cube.validate(self.M)
        except ValueError:
            return False
        key = pack_indices(np.asarray([cube.k]), cube.n, self.M)[0]
        level_keys = self.keys[cube.n]
        position = int(np.searchsorted(level_keys, key))
        return position < level_keys.size and int(level_keys[position]) == int(key)

    def descendants(self, cube: CubeIndex, level: int) -> np.ndarray:
        """Retained level-``level`` cubes inside ``cube``, in packed order."""

        self._check_level(level)
        if level < cube.n:
            raise LevelOutOfRangeError(level, self.depth)
        array = self.levels[level]
        scale = self.M ** (level - cube.n)
        mask = np.all(array // scale == np.asarray(cube.k, dtype=np.int64), axis=1)
        return array[mask]

    def subtree(self, cube: CubeIndex) -> Realization:
        """Rescaled copy of the realization inside ``cube``, of depth ``depth - cube.n``."""

        if not self.contains(cube):
            raise CubeNotRetainedError(f"cube {cube} is not retained")
        origin = np.asarray(cube.k, dtype=np.int64)
        levels: list[np.ndarray] = []
        keys: list[np.ndarray] = []
        for offset in range(self.depth - cube.n + 1):
            local = self.descendants(cube, cube.n + offset) - origin * self.M**offset
            # shifting every axis by a constant keeps lexicographic order
            levels.append(_frozen(local))
            keys.append(_frozen(pack_indices(local, offset, self.M)))
        return Realization(params=self.params, depth=len(levels) - 1, levels=tuple(levels), keys=tuple(keys))

    def reflected(self, axis: int) -> Realization:
        """Mirror image under ``y_axis -> 1 - y_axis``."""

        if not 0 <= axis < self.d:
            raise ValueError(f"axis {axis} outside [0, {self.d})")
        mirrored: list[np.ndarray] = []
        for level, array in enumerate(self.levels):
            flipped = array.copy()
            flipped[:, axis] = self.M**level - 1 - flipped[:, axis]
            mirrored.append(flipped)
        return Realization.from_levels(self.params, mirrored)

    # ------------------------------------------------------------------
    # Serialization
    # ------------------------------------------------------------------

    def to_payload(self) -> dict[str, Any]:
        return {
            "format": FORMAT_NAME,
            "version": FORMAT_VERSION,
            "params": self.params.model_dump(),
            "depth": self.depth,
            "levels": [array.ravel().tolist() for array in self.levels],
        }

    @classmethod
    def from_payload(cls, payload: dict[str, Any]) -> Realization:
        if payload.get("format") != FORMAT_NAME:
            raise ValueError(f"unexpected format {payload.get('format')!r}")
        if payload.get("version") != FORMAT_VERSION:
            raise ValueError(f"unsupported realization version {payload.get('version')!r}")
        params = PercolationParams.model_validate(payload["params"])
        levels = [np.asarray(values, dtype=np.int64).reshape(-1, params.d) for values in payload["levels"]]
        realization = cls.from_levels(params, levels)
        if realization.depth != payload["depth"]:
            raise ValueError("depth does not match the stored levels")
        return realization

    def dumps(self) -> str:
        return json.dumps(self.to_payload(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def loads(cls, text: str) -> Realization:
        return cls.from_payload(json.loads(text))

    def digest(self) -> str:
        return hashlib.sha256(self.dumps().encode("utf-8")).hexdigest()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Realization):
            return NotImplemented
        return (
            self.params == other.params
            and self.depth == other.depth
            and all(np.array_equal(a, b) for a, b in zip(self.levels, other.levels))
        )

    __hash__ = None  # type: ignore[assignment]


def generate(params: PercolationParams, depth: int, *, budget: int | None = None) -> Realization:
    """Generate levels ``0..depth`` of a realization driven by the keyed stream of ``params.seed``.

    Args:
        params: Dimension, subdivision, probability and seed.
        depth: Deepest level to generate, at least 1.
        budget: Maximum number of retained cubes on any level; defaults to
            ``settings.budget.max_retained_cubes``.

    Returns:
        An immutable :class:`Realization`.

    Raises:
        BudgetExceededError: The expected (or realized) retained count exceeds the budget.
    """

    if depth < 1:
        raise ValueError(f"depth must be at least 1, got {depth}")
    limit_level = max_packable_level(params.d, params.M)
    if depth > limit_level:
        raise ValueError(f"depth {depth} exceeds the packable limit {limit_level} for d={params.d}, M={params.M}")
    limit = budget if budget is not None else get_settings().budget.max_retained_cubes
    expected = max(1.0, params.expected_count(depth))
    if expected > limit:
        raise BudgetExceededError("retained cubes", expected, limit)

    observability = get_observability(component="core.generate")
    with observability.timed("realization.generated", level=logging.DEBUG, seed=params.seed, depth=depth) as extra:
        offsets = child_offsets(params.M, params.d)
        current = np.zeros((1, params.d), dtype=np.int64)
        levels = [current]
        keys = [np.zeros(1, dtype=np.int64)]
        for n in range(1, depth + 1):
            if current.shape[0] == 0:
                levels.append(np.zeros((0, params.d), dtype=np.int64))
                keys.append(np.zeros(0, dtype=np.int64))
                continue
            children = (current[:, None, :] * params.M + offsets[None, :, :]).reshape(-1, params.d)
            child_keys = pack_indices(children, n, params.M)
            mask = retain_mask(params.seed, n, child_keys, params.p)
            children, child_keys = children[mask], child_keys[mask]
            order = np.argsort(child_keys, kind="stable")
            current = children[order]
            if current.shape[0] > limit:
                raise BudgetExceededError("retained cubes", current.shape[0], limit)
            levels.append(current)
            keys.append(child_keys[order])
        extra["final_count"] = int(current.shape[0])
    LOGGER.debug("generated depth=%d seed=%d final=%d", depth, params.seed, current.shape[0])
    return Realization(params=params, depth=depth, levels=tuple(levels), keys=tuple(keys))


def retained_count(real: Realization, n: int) -> int:
    """Exact ``#E_n``; raises :class:`LevelOutOfRangeError` beyond the generated depth."""

    return real.count(n)


__all__ = ["FORMAT_NAME", "FORMAT_VERSION", "Realization", "generate", "retained_count"]
