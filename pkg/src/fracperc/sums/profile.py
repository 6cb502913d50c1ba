"""Per-class slice volumes of the colored dependency graph and the volume-to-count ratio."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Any, Sequence

import numpy as np

from fracperc.core.keyed import child_offsets
from fracperc.errors import LevelOutOfRangeError, UnsupportedModeError
from fracperc.settings import get_settings

from .dependency import dependency_graph, greedy_coloring
from .family import Coefficients, FamilyRealization
from .hyperplane import cube_slice_volumes, hyperplane_slice_volume


@dataclass(frozen=True)
class ClassProfile:
    """One coloring class: ``z`` is its level-``n`` slice volume, ``Z`` the retained level-``n+1`` part."""

    size: int
    z: float
    Z: float
    large: bool
    upper_holds: bool
    lower_holds: bool


@dataclass(frozen=True)
class PartitionProfile:
    n: int
    t: float
    epsilon: float
    p: float
    threshold: float
    max_degree: int
    classes: list[ClassProfile] = field(default_factory=list)

    @property
    def class_count(self) -> int:
        return len(self.classes)

    @property
    def large_count(self) -> int:
        return sum(1 for item in self.classes if item.large)

    @property
    def small_count(self) -> int:
        return self.class_count - self.large_count

    @property
    def upper_event(self) -> bool:
        """``Z < (1 + eps) p z`` on every large class."""

        return all(item.upper_holds for item in self.classes if item.large)

    @property
    def lower_event(self) -> bool:
        """``Z > (1 - eps) p z`` on every large class."""

        return all(item.lower_holds for item in self.classes if item.large)

    def to_dict(self) -> dict[str, Any]:
        payload = asdict(self)
        payload.update(
            class_count=self.class_count,
            large_count=self.large_count,
            small_count=self.small_count,
            upper_event=self.upper_event,
            lower_event=self.lower_event,
        )
        return payload


def retained_child_volumes(
    family: FamilyRealization,
    coeffs: Coefficients,
    t: float,
    cubes: np.ndarray,
    n: int,
) -> np.ndarray:
    """``h_n(x)(t)`` for every row ``x`` of ``cubes``: slice volume of its retained children."""

    M, d = family.M, family.d
    if cubes.shape[0] == 0:
        return np.zeros(0)
    offsets = child_offsets(M, d)
    children = cubes[:, None, :] * M + offsets[None, :, :]
    kept = np.ones(children.shape[:2], dtype=bool)
    for axis, member in enumerate(family.member_indices(n + 1)):
        kept &= np.isin(children[:, :, axis], member)
    parents, slots = np.nonzero(kept)
    volumes = cube_slice_volumes(children[parents, slots], n + 1, M, coeffs, t)
    return np.bincount(parents, weights=volumes, minlength=cubes.shape[0])


def family_partition_profile(
    family: FamilyRealization,
    coeffs: Coefficients,
    t: float,
    n: int,
    epsilon: float | None = None,
) -> PartitionProfile:
    """Color the cubes on ``H_t`` and compare each class's next-level volume with ``p`` times its own.

    A class is large when ``z > M^(-n(d-1)) n^(1+eps)``. ``p`` is the product of the
    member probabilities, the chance that a product child survives.

    Raises:
        LevelOutOfRangeError: level ``n + 1`` was not generated.
        UnsupportedModeError: ``d > 3``.
    """

    if family.d < 2:
        raise ValueError("partition profiles need d >= 2")
    if family.d > 3:
        raise UnsupportedModeError(f"exact slice volumes need d in {{2, 3}}, got d = {family.d}")
    if n + 1 > family.depth:
        raise LevelOutOfRangeError(n + 1, family.depth)
    eps = get_settings().simulation.sum_epsilon if epsilon is None else epsilon
    graph = dependency_graph(family, coeffs, t, n)
    own = cube_slice_volumes(graph.cubes, n, family.M, coeffs, t)
    nxt = retained_child_volumes(family, coeffs, t, graph.cubes, n)
    p = family.product_probability
    threshold = float(family.M) ** (-n * (family.d - 1)) * float(n) ** (1.0 + eps)
    classes = []
    for members in greedy_coloring(graph):
        z = math.fsum(own[members])
        Z = math.fsum(nxt[members])
        classes.append(
            ClassProfile(
                size=len(members),
                z=z,
                Z=Z,
                large=z > threshold,
                upper_holds=Z < (1.0 + eps) * p * z,
                lower_holds=Z > (1.0 - eps) * p * z,
            )
        )
    return PartitionProfile(
        n=n, t=t, epsilon=eps, p=p, threshold=threshold, max_degree=graph.max_degree, classes=classes
    )


@dataclass(frozen=True)
class VolumeCountRow:
    t: float
    count: int
    volume: float
    ratio: float | None


@dataclass(frozen=True)
class VolumeCountReport:
    """Cubes on each ``H_t`` against ``Z = M^(n(d-1)) max_t vol(H_t cap E_n)``."""

    n: int
    Z: float
    rows: list[VolumeCountRow]

    @property
    def max_ratio(self) -> float | None:
        ratios = [row.ratio for row in self.rows if row.ratio is not None]
        return max(ratios) if ratios else None

    def to_dict(self) -> dict[str, Any]:
        return {"n": self.n, "Z": self.Z, "max_ratio": self.max_ratio, "rows": [asdict(row) for row in self.rows]}


def volume_to_count_check(
    family: FamilyRealization,
    coeffs: Coefficients,
    n: int,
    t_grid: Sequence[float],
) -> VolumeCountReport:
    """Ratio is ``None`` for empty slices and when every slice on the grid is empty."""

    slices = [hyperplane_slice_volume(family, coeffs, float(t), n) for t in t_grid]
    scale = float(family.M) ** (n * (family.d - 1))
    Z = scale * max((item.volume for item in slices), default=0.0)
    rows = [
        VolumeCountRow(
            t=item.t,
            count=item.count,
            volume=item.volume,
            ratio=item.count / Z if item.count and Z > 0.0 else None,
        )
        for item in slices
    ]
    return VolumeCountReport(n=n, Z=Z, rows=rows)


__all__ = [
    "ClassProfile",
    "PartitionProfile",
    "VolumeCountReport",
    "VolumeCountRow",
    "family_partition_profile",
    "retained_child_volumes",
    "volume_to_count_check",
]
