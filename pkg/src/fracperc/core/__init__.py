"""Fractal percolation realizations: construction, storage and counting."""

from .keyed import KeyedStream, derive_seed, keyed_hash, pack_indices, retain_mask
from .params import CubeIndex, PercolationParams
from .realization import Realization, generate, retained_count
from .stats import (
    BoxCountFit,
    box_count_fit,
    box_count_slope,
    extinction_probability,
    normalized_counts,
    survival_estimate,
    survival_probability,
    survives,
    theoretical_dimension,
)

__all__ = [
    "BoxCountFit",
    "CubeIndex",
    "KeyedStream",
    "PercolationParams",
    "Realization",
    "box_count_fit",
    "box_count_slope",
    "derive_seed",
    "extinction_probability",
    "generate",
    "keyed_hash",
    "normalized_counts",
    "pack_indices",
    "retain_mask",
    "retained_count",
    "survival_estimate",
    "survival_probability",
    "survives",
    "theoretical_dimension",
]
