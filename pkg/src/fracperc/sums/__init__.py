"""Algebraic sums of independent one-dimensional percolations and their hyperplane slices."""

from .adjust import adjust_conditions, adjust_probabilities
from .algebraic import algebraic_sum, brute_force_sum, interval_certificate, sum_levels, t_grid
from .dependency import DependencyGraph, build_dependency_graph, dependency_graph, greedy_coloring, is_independent
from .family import Coefficients, FamilyRealization, distinct_coordinate_bound, generate_family, product_volume
from .hyperplane import (
    LipschitzScan,
    SliceVolume,
    cube_slice_volumes,
    hyperplane_slice_volume,
    lipschitz_scan,
    matched_planar_line,
    slice_cubes,
    unit_cube_plane_areas,
)
from .intervals import Certificate, IntervalUnion, certificate_payload, certify
from .profile import PartitionProfile, VolumeCountReport, family_partition_profile, volume_to_count_check

__all__ = [
    "Certificate",
    "Coefficients",
    "DependencyGraph",
    "FamilyRealization",
    "IntervalUnion",
    "LipschitzScan",
    "PartitionProfile",
    "SliceVolume",
    "VolumeCountReport",
    "adjust_conditions",
    "adjust_probabilities",
    "algebraic_sum",
    "brute_force_sum",
    "build_dependency_graph",
    "certificate_payload",
    "certify",
    "cube_slice_volumes",
    "dependency_graph",
    "distinct_coordinate_bound",
    "family_partition_profile",
    "generate_family",
    "greedy_coloring",
    "hyperplane_slice_volume",
    "interval_certificate",
    "is_independent",
    "lipschitz_scan",
    "matched_planar_line",
    "product_volume",
    "slice_cubes",
    "sum_levels",
    "t_grid",
    "unit_cube_plane_areas",
    "volume_to_count_check",
]
