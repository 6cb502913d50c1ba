"""Line-square incidence geometry on planar realizations."""

from .diagonal import (
    DiagonalEventEstimate,
    diagonal_event,
    diagonal_event_frequency,
    diagonal_hits,
    diagonal_hit_profile,
    diagonal_probability,
)
from .geometry import chord_length, chord_lengths, clip_lengths
from .growth import (
    GrowthConstants,
    GrowthDiagnostics,
    growth_diagnostics,
    in_growth_regime,
    max_rescaled_slice,
    measure_s_theta,
)
from .hoeffding import ChordSummands, HoeffdingCheck, UniformSummands, chord_summands, hoeffding_tail_check
from .lines import SQRT2, GridFamily, Line, LineGrid, dump_lines, line_grid, load_lines, shifted_lines
from .projection import projection_box_count, projection_counts, projection_slope
from .slices import IncidenceCertificate, incidence_certificate, level_chords, slice_count, slice_length

__all__ = [
    "ChordSummands",
    "DiagonalEventEstimate",
    "GridFamily",
    "GrowthConstants",
    "GrowthDiagnostics",
    "HoeffdingCheck",
    "IncidenceCertificate",
    "Line",
    "LineGrid",
    "SQRT2",
    "UniformSummands",
    "chord_length",
    "chord_lengths",
    "chord_summands",
    "clip_lengths",
    "diagonal_event",
    "diagonal_event_frequency",
    "diagonal_hit_profile",
    "diagonal_hits",
    "diagonal_probability",
    "dump_lines",
    "growth_diagnostics",
    "hoeffding_tail_check",
    "in_growth_regime",
    "incidence_certificate",
    "level_chords",
    "line_grid",
    "load_lines",
    "max_rescaled_slice",
    "measure_s_theta",
    "projection_box_count",
    "projection_counts",
    "projection_slope",
    "shifted_lines",
    "slice_count",
    "slice_length",
]
