"""Charge-order scheduling: waiting-cost accounting and the optimal rotation.

The waiting cost of a rotation order is the sum, over every beam after the
first, of the beam's device count times the charging time already spent on
earlier beams (plus order-invariant initial delays).  The minimizing order
charges beams in descending ratio of device count to charging time, which is
Smith's rule with weights I_j and processing times T_j.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

BRUTE_FORCE_LIMIT = 10


@dataclass(frozen=True)
class RotationOrder:
    order: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.order) != list(range(len(self.order))):
            raise ValueError("not a permutation of beam indices")


@dataclass(frozen=True)
class WaitingCostReport:
    total: float
    average: float
    per_beam_start: tuple[float, ...]


def waiting_cost(
    order: RotationOrder,
    counts,
    times,
    initial_delays=None,
) -> WaitingCostReport:
    """Total and per-device average waiting cost of a rotation order.

    ``counts[j]`` devices sit in beam j and wait for all beams charged before
    j in the order; ``initial_delays`` add an order-invariant offset.
    """
    counts = np.asarray(counts, dtype=float)
    times = np.asarray(times, dtype=float)
    n = len(counts)
    if len(times) != n or len(order.order) != n:
        raise ValueError("counts, times and order must have the same length")
    if np.any(counts < 0) or np.any(times < 0):
        raise ValueError("counts and times must be non-negative")
    delays = np.zeros(n) if initial_delays is None else np.asarray(initial_delays, dtype=float)
    if len(delays) != n:
        raise ValueError("initial_delays must have one entry per beam")
    total_devices = counts.sum()
    if total_devices == 0:
        raise ValueError("no devices to serve")

    perm = np.asarray(order.order)
    elapsed = np.concatenate([[0.0], np.cumsum(times[perm])[:-1]])
    total = delays.sum() + float(np.dot(counts[perm][1:], elapsed[1:]))
    starts = tuple(elapsed + delays[perm])
    return WaitingCostReport(total=total, average=total / total_devices, per_beam_start=starts)


def optimal_order(counts, times) -> RotationOrder:
    """Rotation order minimizing waiting cost: descending count/time ratio.

    Beams needing zero charging time but holding devices go first (infinite
    ratio); ties break on ascending beam index.
    """
    counts = np.asarray(counts, dtype=float)
    times = np.asarray(times, dtype=float)
    if np.any((times <= 0) & (counts > 0) & (times < 0)):
        raise ValueError("negative charging time")
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = np.where(times > 0, counts / np.where(times > 0, times, 1.0), 0.0)
        ratios = np.where((times == 0) & (counts > 0), np.inf, ratios)
    idx = sorted(range(len(counts)), key=lambda j: (-ratios[j], j))
    return RotationOrder(order=tuple(idx))


def rotation_cost(order: RotationOrder, counts, times) -> float:
    """Order-dependent part of the waiting cost (initial delays excluded)."""
    counts = np.asarray(counts, dtype=float)
    times = np.asarray(times, dtype=float)
    perm = np.asarray(order.order)
    elapsed = np.concatenate([[0.0], np.cumsum(times[perm])[:-1]])
    return float(np.dot(counts[perm][1:], elapsed[1:]))


def brute_force_order(counts, times) -> tuple[RotationOrder, float]:
    """Exhaustive minimizer of the order-dependent waiting cost (test oracle)."""
    n = len(counts)
    if n > BRUTE_FORCE_LIMIT:
        raise ValueError(f"brute force limited to {BRUTE_FORCE_LIMIT} beams")
    cs = [float(c) for c in counts]
    ts = [float(t) for t in times]
    best_cost = np.inf
    best_perm = None
    for perm in itertools.permutations(range(n)):
        cost = 0.0
        elapsed = 0.0
        for m in range(1, n):
            elapsed += ts[perm[m - 1]]
            cost += cs[perm[m]] * elapsed
            if cost >= best_cost:
                break
        if cost < best_cost:
            best_cost = cost
            best_perm = perm
    return RotationOrder(best_perm), best_cost
