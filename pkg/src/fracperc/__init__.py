"""fracperc: finite-level geometry of fractal (Mandelbrot) percolation.

This package builds M-adic percolation realizations and computes, level by level, slice
lengths and line-hit counts, projections, algebraic sums and distance sets, together with
the experiment harness that turns those quantities into reproducible statistical checks.
"""
