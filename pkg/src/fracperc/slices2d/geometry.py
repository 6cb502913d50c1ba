"""Line-square incidence primitives.

Chords are clipped with the parametric (Liang-Barsky) slab method against the open cube.
A line that only touches a face or a corner gets length 0; a chord shorter than
``slack * side`` counts as a touch.
"""

from __future__ import annotations

import numpy as np

from fracperc.core import CubeIndex
from fracperc.settings import get_settings

from .lines import Line


def _slack(slack: float | None) -> float:
    return get_settings().simulation.incidence_slack if slack is None else slack


def clip_lengths(
    px: np.ndarray | float,
    py: np.ndarray | float,
    cos_a: np.ndarray | float,
    sin_a: np.ndarray | float,
    lo_x: np.ndarray,
    lo_y: np.ndarray,
    side: float,
    slack: float,
) -> np.ndarray:
    """Chord lengths of lines through ``(px, py)`` with direction ``(cos_a, sin_a)``.

    Every argument broadcasts; boxes are ``[lo_x, lo_x + side] x [lo_y, lo_y + side]``.
    A zero direction component is treated as an exact axis-parallel line.
    """

    px, py, cos_a, sin_a, lo_x, lo_y = np.broadcast_arrays(
        np.asarray(px, dtype=np.float64),
        np.asarray(py, dtype=np.float64),
        np.asarray(cos_a, dtype=np.float64),
        np.asarray(sin_a, dtype=np.float64),
        np.asarray(lo_x, dtype=np.float64),
        np.asarray(lo_y, dtype=np.float64),
    )
    margin = slack * side
    t_lo = np.full(px.shape, -np.inf)
    t_hi = np.full(px.shape, np.inf)
    inside = np.ones(px.shape, dtype=bool)
    with np.errstate(divide="ignore", invalid="ignore"):
        for start, step, lower in ((px, cos_a, lo_x), (py, sin_a, lo_y)):
            upper = lower + side
            flat = step == 0.0
            inside &= ~flat | ((start > lower + margin) & (start < upper - margin))
            first = (lower - start) / step
            second = (upper - start) / step
            t_lo = np.where(flat, t_lo, np.maximum(t_lo, np.minimum(first, second)))
            t_hi = np.where(flat, t_hi, np.minimum(t_hi, np.maximum(first, second)))
    lengths = np.where(inside, np.clip(t_hi - t_lo, 0.0, None), 0.0)
    # both directions flat cannot happen for a unit direction vector
    lengths[~np.isfinite(lengths)] = 0.0
    lengths[lengths <= margin] = 0.0
    return lengths


def chord_lengths(coords: np.ndarray, n: int, M: int, line: Line, *, slack: float | None = None) -> np.ndarray:
    """Chord of ``line`` inside each level-``n`` cube of ``coords`` (shape ``(count, 2)``)."""

    coords = np.asarray(coords, dtype=np.int64).reshape(-1, 2)
    width = float(M**n)
    px, py = line.anchor
    cos_a, sin_a = line.direction
    return clip_lengths(px, py, cos_a, sin_a, coords[:, 0] / width, coords[:, 1] / width, 1.0 / width, _slack(slack))


def chord_length(cube: CubeIndex, line: Line, M: int = 2, *, slack: float | None = None) -> float:
    """Length of ``line`` inside the open cube; 0 when the line misses it or only touches its boundary."""

    if cube.d != 2:
        raise ValueError("chord_length is defined for planar cubes")
    return float(chord_lengths(np.asarray([cube.k]), cube.n, M, line, slack=slack)[0])


__all__ = ["chord_length", "chord_lengths", "clip_lengths"]
