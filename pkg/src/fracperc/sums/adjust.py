"""Lowering retention probabilities into the regime where the sum argument applies.

Given ``p`` with ``prod p_i > M^(1-d)`` and every ``p_i > 1/M``, find ``q`` with

* ``prod q_i > M^(1-d)``,
* ``prod_{i != j} q_i < M^(2-d)`` for every ``j``,
* ``1/M < q_i <= p_i``.
"""

from __future__ import annotations

import logging
import math
from typing import Sequence

import numpy as np
from scipy import optimize

from fracperc.errors import InfeasibleProbabilitiesError

LOGGER = logging.getLogger("fracperc.sums.adjust")

BISECT_XTOL = 1e-12
BISECT_MAXITER = 200


def _validate(probs: Sequence[float], M: int) -> np.ndarray:
    p = np.asarray(probs, dtype=np.float64)
    d = p.size
    if d < 2:
        raise InfeasibleProbabilitiesError("adjustment needs at least two probabilities")
    if M < 2:
        raise InfeasibleProbabilitiesError(f"M must be at least 2, got {M}")
    if np.any(p > 1.0) or np.any(p <= 1.0 / M):
        raise InfeasibleProbabilitiesError(f"every probability must lie in (1/M, 1], got {p.tolist()}")
    if math.prod(p.tolist()) <= float(M) ** (1 - d):
        raise InfeasibleProbabilitiesError(
            f"product {math.prod(p.tolist()):.6g} does not exceed M^(1-d) = {float(M) ** (1 - d):.6g}"
        )
    return p


def adjust_probabilities(probs: Sequence[float], M: int) -> tuple[float, ...]:
    """Constructive choice of ``q``; the result is returned in the input order.

    Raises:
        InfeasibleProbabilitiesError: the preconditions on ``probs`` fail.
    """

    p = _validate(probs, M)
    d = p.size
    order = np.argsort(p, kind="stable")
    ranked = p[order]
    smallest, rest = float(ranked[0]), ranked[1:]
    upper = float(M) ** (2 - d)
    if math.prod(rest.tolist()) < upper:
        LOGGER.debug("adjust: already in regime")
        return tuple(float(value) for value in p)

    low_root = float(M) ** (-1.0 + 1.0 / d)
    if smallest > low_root:
        delta = (low_root + float(M) ** (-1.0 + 1.0 / (d - 1))) / 2.0
        LOGGER.debug("adjust: equalized at delta=%.17g", delta)
        return tuple(min(delta, smallest) for _ in range(d))

    lower = float(M) ** (1 - d) / smallest
    target = math.sqrt(lower * upper)

    def excess(t: float) -> float:
        return math.prod((t * rest + (1.0 - t) * smallest).tolist()) - target

    t0 = optimize.bisect(excess, 0.0, 1.0, xtol=BISECT_XTOL, maxiter=BISECT_MAXITER)
    LOGGER.debug("adjust: interpolated at t0=%.17g", t0)
    adjusted = np.empty(d)
    adjusted[order[0]] = smallest
    adjusted[order[1:]] = t0 * rest + (1.0 - t0) * smallest
    return tuple(float(value) for value in adjusted)


def adjust_conditions(
    probs: Sequence[float],
    q: Sequence[float],
    M: int,
    *,
    tolerance: float = 1e-9,
) -> dict[str, bool]:
    """Which conclusions ``q`` satisfies, each checked with slack ``tolerance``."""

    p = np.asarray(probs, dtype=np.float64)
    values = np.asarray(q, dtype=np.float64)
    d = values.size
    total = math.prod(values.tolist())
    leave_one_out = [math.prod(np.delete(values, j).tolist()) for j in range(d)]
    return {
        "product_above": total > float(M) ** (1 - d) - tolerance,
        "partial_products_below": all(item < float(M) ** (2 - d) + tolerance for item in leave_one_out),
        "within_range": bool(np.all(values > 1.0 / M - tolerance) and np.all(values <= p + tolerance)),
    }


__all__ = ["adjust_conditions", "adjust_probabilities"]
