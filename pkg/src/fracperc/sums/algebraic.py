"""Level-``n`` approximations of the algebraic sum ``a_1 E_1 + ... + a_d E_d``."""

from __future__ import annotations

import logging
import math

import numpy as np

from fracperc.errors import BudgetExceededError
from fracperc.observability import get_observability
from fracperc.settings import get_settings

from .family import Coefficients, FamilyRealization
from .intervals import Certificate, IntervalUnion, certify

LOGGER = logging.getLogger("fracperc.sums.algebraic")


def _check_dimensions(family: FamilyRealization, coeffs: Coefficients) -> None:
    if coeffs.d != family.d:
        raise ValueError(f"{coeffs.d} coefficients for a family of {family.d} members")


def member_intervals(indices: np.ndarray, a: float, n: int, M: int) -> tuple[np.ndarray, np.ndarray]:
    """Endpoints ``a k M^-n`` and ``a (k + 1) M^-n`` of the scaled member cubes.

    ``k / M^n`` is a correctly rounded quotient of exact integers, so a child endpoint
    never crosses its parent's in floating point.
    """

    width = float(M**n)
    return a * (indices / width), a * ((indices + 1) / width)


def algebraic_sum(
    family: FamilyRealization,
    coeffs: Coefficients,
    n: int,
    *,
    budget: int | None = None,
    tolerance: float | None = None,
) -> IntervalUnion:
    """Union over retained product cubes ``x`` of ``[a.x - rho, a.x + rho]``, ``rho = sum(a) M^-n / 2``.

    Computed as iterated Minkowski sums of the merged member unions; every stage is merged
    before the next member is added, so the work tracks the number of distinct intervals
    rather than the number of product cubes.

    Raises:
        BudgetExceededError: an intermediate stage would pair more intervals than
            ``budget`` (default ``settings.budget.max_product_cubes``).
    """

    _check_dimensions(family, coeffs)
    indices = family.member_indices(n)
    if any(index.size == 0 for index in indices):
        return IntervalUnion.empty()
    settings = get_settings()
    limit = budget if budget is not None else settings.budget.max_product_cubes
    merge = settings.simulation.merge_tolerance * coeffs.total if tolerance is None else tolerance
    lo, hi = member_intervals(indices[0], coeffs.a[0], n, family.M)
    total = IntervalUnion.from_arrays(lo, hi, tolerance=merge)
    for index, a in zip(indices[1:], coeffs.a[1:]):
        lo, hi = member_intervals(index, a, n, family.M)
        member = IntervalUnion.from_arrays(lo, hi, tolerance=merge)
        pairs = len(total) * len(member)
        if pairs > limit:
            raise BudgetExceededError("product cubes", pairs, limit)
        total = total.minkowski_sum(member.lo, member.hi, tolerance=merge)
    LOGGER.debug("algebraic sum level=%d intervals=%d length=%.6g", n, len(total), total.total_length)
    return total


def brute_force_sum(family: FamilyRealization, coeffs: Coefficients, n: int) -> IntervalUnion:
    """Reference enumeration over every product cube center."""

    _check_dimensions(family, coeffs)
    cubes = family.product_cubes(n)
    if cubes.shape[0] == 0:
        return IntervalUnion.empty()
    width = float(family.M**n)
    centers = (cubes + 0.5) / width @ coeffs.array
    rho = coeffs.total / (2.0 * width)
    return IntervalUnion.from_arrays(centers - rho, centers + rho, tolerance=get_settings().simulation.merge_tolerance)


def interval_certificate(
    family: FamilyRealization,
    coeffs: Coefficients,
    depth: int,
    min_len: float,
    *,
    budget: int | None = None,
) -> Certificate:
    """Longest interval inside :func:`algebraic_sum` at every level ``0..depth``."""

    family.check_level(depth)
    observability = get_observability(component="sums.algebraic")
    with observability.timed("sums.certificate", level=logging.DEBUG, depth=depth, d=family.d) as extra:
        unions = (algebraic_sum(family, coeffs, n, budget=budget) for n in range(depth + 1))
        _, certificate = certify(unions, min_len)
        extra.update(length=certificate.length, found=certificate.found)
    return certificate


def sum_levels(family: FamilyRealization, coeffs: Coefficients, depth: int) -> list[IntervalUnion]:
    return [algebraic_sum(family, coeffs, n) for n in range(depth + 1)]


def t_grid(coeffs: Coefficients, n: int, M: int, exponent: float | None = None) -> np.ndarray:
    """``sum(a) j / M^m`` for ``j = 0..M^m`` with ``m = ceil(exponent n)``; nested in ``n``."""

    gamma = get_settings().simulation.t_grid_exponent if exponent is None else exponent
    if gamma < 0.0:
        raise ValueError("t-grid exponent must be non-negative")
    m = math.ceil(gamma * n - 1e-12)
    steps = M**m
    limit = get_settings().budget.max_grid_lines
    if steps + 1 > limit:
        raise BudgetExceededError("t-grid points", steps + 1, limit)
    return coeffs.total * (np.arange(steps + 1, dtype=np.float64) / float(steps))


__all__ = [
    "algebraic_sum",
    "brute_force_sum",
    "interval_certificate",
    "member_intervals",
    "sum_levels",
    "t_grid",
]
