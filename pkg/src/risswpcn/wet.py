"""Downlink energy transfer: beam patterns, stitched rotation plans, harvesting.

The energy beam swept over the service half-space is the classic uniform
array factor in sin-angle space.  A rotation plan stitches beams so adjacent
power-threshold edges touch; the threshold search scans candidate thresholds
and keeps the ones whose final beam lands cleanly at broadside (small
stitching residual).  Charging times derive from the worst device per beam
under the total received power across a full rotation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.signal import find_peaks


@dataclass(frozen=True)
class Beam:
    """One rotation slot: pointing direction and its threshold-level widths."""

    direction: float
    gamma: float
    width_left: float
    width_right: float


@dataclass
class BeamPlan:
    """Ordered beams covering [-pi/2, pi/2] for one stitching threshold."""

    beams: list[Beam]
    n_elements: int
    coverage_residual: float = 0.0

    @property
    def n_beams(self) -> int:
        return len(self.beams)

    @property
    def directions(self) -> np.ndarray:
        return np.array([b.direction for b in self.beams])


@dataclass(frozen=True)
class EhModel:
    """Sigmoidal RF harvesting curve, zero at zero input, saturating at m_s watts."""

    a: float = 132.8
    b: float = 0.01181
    m_s: float = 0.02337

    @property
    def x(self) -> float:
        eab = math.exp(self.a * self.b)
        return eab / (1.0 + eab)

    @property
    def y(self) -> float:
        return self.m_s / math.exp(self.a * self.b)


@dataclass
class DeviceCluster:
    """Per-beam device deployment: angles (rad), distances (m), common demand (J)."""

    angles: list[np.ndarray]
    distances: list[np.ndarray]
    demand: float

    @property
    def counts(self) -> np.ndarray:
        return np.array([len(a) for a in self.angles])

    def __post_init__(self):
        if len(self.angles) != len(self.distances):
            raise ValueError("angles and distances must list the same beams")
        for a, d in zip(self.angles, self.distances):
            if len(a) != len(d):
                raise ValueError("each device needs an angle and a distance")


def beam_gain(direction: float, omega, n_elements: int):
    """Normalized array-factor amplitude toward ``omega`` for a beam at ``direction``.

    ``sin(N x)/(N sin x)`` with ``x = (pi/2)(sin omega - sin direction)``;
    the removable singularities evaluate through their limit.
    """
    x = 0.5 * np.pi * (np.sin(omega) - np.sin(direction))
    sx = np.sin(x)
    singular = np.abs(sx) < 1e-9
    safe = np.where(singular, 1.0, sx)
    ratio = np.sin(n_elements * x) / (n_elements * safe)
    limit = np.cos(n_elements * x) / np.cos(x)
    out = np.where(singular, limit, ratio)
    return float(out) if np.isscalar(omega) else out


def _halfwidth_u(gamma: float, n_elements: int) -> float:
    """Offset w in sin-angle space where the squared pattern first drops to gamma."""

    def pattern_sq(w):
        x = 0.5 * np.pi * w
        if abs(math.sin(x)) < 1e-15:
            return 1.0
        return (math.sin(n_elements * x) / (n_elements * math.sin(x))) ** 2

    lo, hi = 0.0, 2.0 / n_elements  # first null of the kernel
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if pattern_sq(mid) >= gamma:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-16:
            break
    return 0.5 * (lo + hi)


def beam_widths(
    direction: float,
    gamma: float,
    n_elements: int,
    scan_resolution: float = 1e-9,
) -> tuple[float, float]:
    """Widths of the contiguous region around ``direction`` with squared gain >= gamma.

    Bisected from the mainlobe peak outward in sin-angle space (where the
    pattern is symmetric), then mapped back to angle; refined well below
    ``scan_resolution``.  The interval clips to the visible region.
    """
    if not 0.0 < gamma < 1.0:
        raise ValueError("gamma must lie strictly inside (0, 1)")
    del scan_resolution  # bisection converges to machine precision
    w = _halfwidth_u(gamma, n_elements)
    u0 = math.sin(direction)
    left = math.asin(max(u0 - w, -1.0))
    right = math.asin(min(u0 + w, 1.0))
    return direction - left, right - direction


def stitch_beams(
    gamma: float,
    n_elements: int,
    guard_delta: float = 1e-3,
) -> tuple[list[float], float]:
    """Stitch beams from the right edge of the visible region toward broadside.

    The first beam's right threshold edge touches pi/2; each further beam's
    right edge meets the previous beam's left edge.  Stops once the uncovered
    boundary enters the broadside region and reports the terminal residual
    (distance to a perfect even fit or to a perfect extra broadside beam).
    Returns half-space directions (descending, a trailing 0.0 when a
    broadside beam fits best) and the residual in radians.
    """
    if not 0.0 < gamma < 1.0:
        raise ValueError("gamma must lie strictly inside (0, 1)")
    w = _halfwidth_u(gamma, n_elements)
    dirs_u: list[float] = []
    u = 1.0 - w
    b_obs = u - w
    for _ in range(10 * n_elements + 10):
        if u <= 0.0:
            break
        dirs_u.append(u)
        b_obs = u - w
        if b_obs <= w or b_obs <= 0.0:
            break
        u = b_obs - w
    b_obs_cl = max(b_obs, -1.0)
    res_even = abs(math.asin(b_obs_cl))
    res_center = abs(math.asin(b_obs_cl) - math.asin(w))
    directions = [math.asin(v) for v in dirs_u]
    if res_center < res_even:
        directions.append(0.0)
    return directions, min(res_even, res_center)


def _mirror(directions: list[float]) -> list[float]:
    full = sorted({round(d, 15) for d in directions} | {round(-d, 15) for d in directions})
    return [float(d) for d in full]


def build_plan(gamma: float, n_elements: int, guard_delta: float = 1e-3) -> BeamPlan:
    """Full-space plan at threshold ``gamma``: stitched half-space mirrored across 0."""
    half, _ = stitch_beams(gamma, n_elements, guard_delta)
    beams = []
    for d in _mirror(half):
        wl, wr = beam_widths(d, gamma, n_elements)
        beams.append(Beam(direction=d, gamma=gamma, width_left=wl, width_right=wr))
    plan = BeamPlan(beams=beams, n_elements=n_elements)
    plan.coverage_residual = _max_edge_gap(plan)
    return plan


def _max_edge_gap(plan: BeamPlan) -> float:
    gap = 0.0
    for prev, nxt in zip(plan.beams, plan.beams[1:]):
        gap = max(gap, (nxt.direction - nxt.width_left) - (prev.direction + prev.width_right))
    return max(gap, 0.0)


def threshold_search(
    interval: tuple[float, float] = (0.2, 0.8),
    coarse_len: int = 200,
    fine_len: int = 50,
    n_elements: int = 16,
    max_fine_iters: int = 10,
    guard_delta: float = 1e-3,
) -> list[tuple[float, BeamPlan]]:
    """Locate stitching thresholds whose residual nearly vanishes.

    Coarse scan of the residual over the interval, peak-pick its reciprocal
    (strict local maxima, prominence at least twice the median), then refine
    each peak on shrinking sub-intervals until the residual converges.
    Returns (gamma_peak, plan) pairs sorted by gamma; empty when the interval
    holds no interior peak.
    """
    lo, hi = interval
    if not 0.0 < lo < hi < 1.0:
        raise ValueError("need 0 < interval start < interval end < 1")

    def residual(g: float) -> float:
        return stitch_beams(g, n_elements, guard_delta)[1]

    grid = np.linspace(lo, hi, coarse_len + 1)
    res = np.array([residual(g) for g in grid])
    inv = 1.0 / (res + 1e-18)
    peaks, _ = find_peaks(inv, prominence=2.0 * float(np.median(inv)))
    found: list[tuple[float, BeamPlan]] = []
    step = (hi - lo) / coarse_len
    for idx in peaks:
        g_peak = float(grid[idx])
        r_prev = float(res[idx])
        delta = step
        for _ in range(max_fine_iters):
            sub = np.linspace(g_peak - delta, g_peak + delta, fine_len + 1)
            sub = sub[(sub > 0.0) & (sub < 1.0)]
            sub_res = np.array([residual(g) for g in sub])
            best = int(np.argmin(sub_res))
            g_peak = float(sub[best])
            r_new = float(sub_res[best])
            delta = 2.0 * delta / fine_len
            if abs(r_new - r_prev) < 1e-3 * max(r_prev, 1e-300):
                r_prev = r_new
                break
            r_prev = r_new
        if any(abs(g_peak - g0) < 2 * step / fine_len for g0, _ in found):
            continue
        found.append((g_peak, build_plan(g_peak, n_elements, guard_delta)))
    return sorted(found, key=lambda t: t[0])


def harvest(model: EhModel, input_power):
    """Harvested power (W) for RF input power (W) under the nonlinear model."""
    p = np.asarray(input_power, dtype=float)
    if np.any(p < 0):
        raise ValueError("input power must be non-negative")
    out = model.m_s / (model.x * (1.0 + np.exp(-model.a * (p - model.b)))) - model.y
    return float(out) if np.isscalar(input_power) else out


def total_gain(plan: BeamPlan, omega, n_elements: int | None = None):
    """Sum of squared beam gains toward ``omega`` over every beam of the plan."""
    if not plan.beams:
        raise ValueError("plan holds no beams")
    n = plan.n_elements if n_elements is None else n_elements
    om = np.atleast_1d(np.asarray(omega, dtype=float))
    acc = np.zeros_like(om)
    for b in plan.beams:
        acc += beam_gain(b.direction, om, n) ** 2
    return float(acc[0]) if np.isscalar(omega) else acc


def received_power(
    plan: BeamPlan,
    angles: np.ndarray,
    distance_gains: np.ndarray,
    tx_power: float,
    n_total: int,
    hap_antennas: int,
    pathloss_h2r: float,
) -> np.ndarray:
    """Per-device, per-beam RF input power matrix (devices x beams)."""
    gains = np.stack(
        [beam_gain(b.direction, angles, plan.n_elements) ** 2 for b in plan.beams], axis=-1
    )
    scale = tx_power * n_total**2 * hap_antennas * pathloss_h2r
    return scale * gains * np.asarray(distance_gains)[:, None]


def charging_times(
    plan: BeamPlan,
    clusters: DeviceCluster,
    tx_power: float,
    n_total: int,
    hap_antennas: int,
    pathloss_h2r: float,
) -> np.ndarray:
    """Charging time per beam: the worst device's demand over its total
    received power across the full rotation.  Empty beams charge for zero time."""
    if len(clusters.angles) != plan.n_beams:
        raise ValueError("cluster beam count must match the plan")
    times = np.zeros(plan.n_beams)
    scale = tx_power * n_total**2 * hap_antennas * pathloss_h2r
    for j, (ang, dist_gain) in enumerate(zip(clusters.angles, clusters.distances)):
        if len(ang) == 0:
            continue
        ftot = total_gain(plan, np.asarray(ang))
        denom = scale * ftot * np.asarray(dist_gain)
        if np.any(denom <= 0.0):
            raise ValueError("device sits in a null of every beam")
        times[j] = float(np.max(clusters.demand / denom))
    return times


def harvested_energy(
    plan: BeamPlan,
    times: np.ndarray,
    angles: np.ndarray,
    distance_gains: np.ndarray,
    eh: EhModel,
    tx_power: float,
    n_total: int,
    hap_antennas: int,
    pathloss_h2r: float,
) -> np.ndarray:
    """Energy (J) each device collects over one rotation, harvesting per beam slot."""
    p_in = received_power(plan, angles, distance_gains, tx_power, n_total, hap_antennas, pathloss_h2r)
    return harvest(eh, p_in) @ np.asarray(times)


def slot_charging_times(
    plan: BeamPlan,
    clusters: DeviceCluster,
    tx_power: float,
    n_total: int,
    hap_antennas: int,
    pathloss_h2r: float,
) -> np.ndarray:
    """Charging time per beam sized so the beam's own slot alone meets the
    worst in-beam device's demand.  All devices of a beam start and finish
    charging together, so the slot length follows the device with the least
    own-beam received power."""
    if len(clusters.angles) != plan.n_beams:
        raise ValueError("cluster beam count must match the plan")
    times = np.zeros(plan.n_beams)
    scale = tx_power * n_total**2 * hap_antennas * pathloss_h2r
    for j, (ang, dist_gain) in enumerate(zip(clusters.angles, clusters.distances)):
        if len(ang) == 0:
            continue
        own = beam_gain(plan.beams[j].direction, np.asarray(ang), plan.n_elements) ** 2
        denom = scale * own * np.asarray(dist_gain)
        if np.any(denom <= 0.0):
            raise ValueError("device sits in a null of its own beam")
        times[j] = float(np.max(clusters.demand / denom))
    return times


def slot_harvested_energy(
    plan: BeamPlan,
    times: np.ndarray,
    clusters: DeviceCluster,
    eh: EhModel,
    tx_power: float,
    n_total: int,
    hap_antennas: int,
    pathloss_h2r: float,
) -> np.ndarray:
    """Energy (J) per device when each device charges only during its own
    beam's slot; devices concatenate in beam order."""
    scale = tx_power * n_total**2 * hap_antennas * pathloss_h2r
    energies = []
    for j, (ang, dist_gain) in enumerate(zip(clusters.angles, clusters.distances)):
        if len(ang) == 0:
            continue
        own = beam_gain(plan.beams[j].direction, np.asarray(ang), plan.n_elements) ** 2
        energies.append(harvest(eh, scale * own * np.asarray(dist_gain)) * times[j])
    return np.concatenate(energies) if energies else np.array([])
