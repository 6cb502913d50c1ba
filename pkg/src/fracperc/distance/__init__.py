"""Distance sets of fractal percolation realizations."""

from .pairs import distinct_offsets, offset_bounds, pair_distance_interval
from .sets import (
    DistanceCountProfile,
    DistanceProfile,
    distance_certificate,
    distance_count_profile,
    distance_set,
    self_distance_set,
)

__all__ = [
    "DistanceCountProfile",
    "DistanceProfile",
    "distance_certificate",
    "distance_count_profile",
    "distance_set",
    "distinct_offsets",
    "offset_bounds",
    "pair_distance_interval",
    "self_distance_set",
]
