"""Counter-based keyed randomness for per-cube retention bits.

Every cube is identified by its level and the packed index of its coordinates, which is a
bijective encoding of its M-adic digit path. The retention bit of a cube is
``hash(seed, level, packed) < floor(p * 2**64)``, so it can be recomputed in any order, in
any process, and the same hash drives every ``p`` (monotone coupling).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .params import SEED_LIMIT, CubeIndex

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MUL_A = np.uint64(0xBF58476D1CE4E5B9)
_MUL_B = np.uint64(0x94D049BB133111EB)
_SHIFT_A = np.uint64(30)
_SHIFT_B = np.uint64(27)
_SHIFT_C = np.uint64(31)
_UNIT_THRESHOLD = np.uint64(SEED_LIMIT - 1)


def mix64(values: np.ndarray | int) -> np.ndarray:
    """Splitmix64 finalizer applied elementwise to unsigned 64-bit values."""

    x = np.array(values, dtype=np.uint64, copy=True)
    with np.errstate(over="ignore"):
        x = x + _GOLDEN
        x = (x ^ (x >> _SHIFT_A)) * _MUL_A
        x = (x ^ (x >> _SHIFT_B)) * _MUL_B
        x = x ^ (x >> _SHIFT_C)
    return x


def derive_seed(seed: int, *labels: int) -> int:
    """Deterministically derive a child seed from ``seed`` and integer labels."""

    state = np.uint64(seed % SEED_LIMIT)
    for label in labels:
        state = mix64(mix64(label % SEED_LIMIT) ^ mix64(state))
    return int(state)


def retention_threshold(p: float) -> np.uint64 | None:
    """Fixed-point threshold for ``p``; ``None`` means every cube is kept."""

    if not 0.0 < p <= 1.0:
        raise ValueError(f"probability must lie in (0, 1], got {p}")
    if p == 1.0:
        return None
    return np.uint64(int(p * float(SEED_LIMIT)))


def keyed_hash(seeds: np.ndarray | int, level: int, keys: np.ndarray | int) -> np.ndarray:
    """Hash of ``(seed, level, key)``; ``seeds`` and ``keys`` broadcast against each other."""

    seed_part = mix64(seeds)
    level_part = mix64(mix64(level))
    key_part = np.asarray(keys, dtype=np.int64).astype(np.uint64)
    return mix64(mix64(key_part ^ level_part) ^ seed_part)


def retain_mask(seeds: np.ndarray | int, level: int, keys: np.ndarray | int, p: float) -> np.ndarray:
    threshold = retention_threshold(p)
    hashed = keyed_hash(seeds, level, keys)
    if threshold is None:
        return np.ones(hashed.shape, dtype=bool)
    return hashed < threshold


def pack_indices(coords: np.ndarray, level: int, M: int) -> np.ndarray:
    """Row-major packed index of integer coordinates at ``level``.

    ``coords`` has shape ``(count, d)``; coordinate 0 is the most significant digit.
    """

    coords = np.asarray(coords, dtype=np.int64)
    if coords.ndim != 2:
        raise ValueError("coords must be a 2-D array")
    count, d = coords.shape
    if count == 0:
        return np.zeros(0, dtype=np.int64)
    width = M**level
    return np.ravel_multi_index(tuple(coords.T), (width,) * d).astype(np.int64)


def max_packable_level(d: int, M: int) -> int:
    """Largest level whose packed indices fit a signed 64-bit integer."""

    level = 0
    while (M ** (level + 1)) ** d < 2**63:
        level += 1
    return level


@dataclass(frozen=True, slots=True)
class KeyedStream:
    """Retention bits for one realization seed."""

    seed: int
    M: int
    d: int

    def bits(self, level: int, keys: np.ndarray, p: float) -> np.ndarray:
        return retain_mask(self.seed, level, keys, p)

    def children_mask(self, parent: CubeIndex, p: float) -> tuple[np.ndarray, np.ndarray]:
        """Return (child coordinates, retained mask) for one parent cube."""

        offsets = child_offsets(self.M, self.d)
        children = np.asarray(parent.k, dtype=np.int64)[None, :] * self.M + offsets
        keys = pack_indices(children, parent.n + 1, self.M)
        return children, self.bits(parent.n + 1, keys, p)

    def is_retained(self, cube: CubeIndex, p: float) -> bool:
        """Bit of ``cube`` and all of its ancestors."""

        if cube.n == 0:
            return True
        for level in range(1, cube.n + 1):
            ancestor = cube.ancestor(level, self.M)
            key = pack_indices(np.asarray([ancestor.k]), level, self.M)
            if not bool(self.bits(level, key, p)[0]):
                return False
        return True

    def path_digits(self, cube: CubeIndex) -> tuple[tuple[int, ...], ...]:
        return cube.digits(self.M)


def child_offsets(M: int, d: int) -> np.ndarray:
    """All ``M**d`` digit vectors in row-major order, shape ``(M**d, d)``."""

    grids = np.indices((M,) * d).reshape(d, -1).T
    return grids.astype(np.int64)


def seeds_array(seeds: Iterable[int]) -> np.ndarray:
    return np.asarray([int(seed) % SEED_LIMIT for seed in seeds], dtype=np.uint64)


__all__ = [
    "KeyedStream",
    "child_offsets",
    "derive_seed",
    "keyed_hash",
    "max_packable_level",
    "mix64",
    "pack_indices",
    "retain_mask",
    "retention_threshold",
    "seeds_array",
]
