"""Uplink information-transfer designs and evaluation.

Three reflection designs are provided: the closed-form target alignment, the
interference-suppressing design obtained from the lifted relaxation plus
rank refinement, and its robust variant that widens each interference null
across an elevation interval.  All designs operate on estimated angles; the
evaluation always runs on true channels.

The lifted solve returns a (near) rank-one matrix whose principal
eigenvector, renormalized to unit modulus, gives the reflection phases.
A final penalized power ascent on the phase torus tightens the suppression
caps to their contract tolerance; near-null caps make the lifted problem
progressively degenerate for first-order solvers, so the ascent is what
guarantees the cap inequalities on the returned configuration.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .arrays import (
    AngleTriple,
    ChannelSet,
    UpaGeometry,
    spatial_frequencies,
    steer_ula,
    steer_upa,
)
from .sdp import IrmParams, StructuredSdp, irm_refine, principal_component, rank_one_defect, solve_sdr

CAP_SLACK = 1e-3  # accepted relative overshoot of a suppression cap
POLISH_MARGIN = 2e-4  # relative cap headroom targeted by the phase ascent


class DesignError(RuntimeError):
    """Design pipeline failure carrying the solver status."""

    def __init__(self, status: str, message: str):
        super().__init__(message)
        self.status = status


@dataclass(frozen=True)
class SourceGeometry:
    """One uplink source: incidence angles, distance to the surface, transmit power."""

    angles: AngleTriple
    distance: float
    tx_power: float


@dataclass
class UplinkScenario:
    """Static uplink description; index 0 of any per-source list is the target."""

    geometry: UpaGeometry
    hap_antennas: int
    angles_g: AngleTriple
    target: SourceGeometry
    interferers: list[SourceGeometry]
    noise_power: float
    suppression_caps: list[float]
    receive_power: float = 1.0

    def __post_init__(self):
        if self.noise_power <= 0:
            raise ValueError("noise power must be positive")
        if len(self.suppression_caps) != len(self.interferers):
            raise ValueError("one suppression cap per interferer required")
        if any(t < 0 for t in self.suppression_caps):
            raise ValueError("suppression caps must be non-negative")

    def true_estimates(self) -> "AngleEstimates":
        return AngleEstimates(
            target=self.target.angles,
            interferers=tuple(s.angles for s in self.interferers),
        )


@dataclass(frozen=True)
class AngleEstimates:
    """Angles the designer believes in (possibly corrupted by sensing error)."""

    target: AngleTriple
    interferers: tuple[AngleTriple, ...]


@dataclass
class PhaseConfig:
    """Surface phases (unit modulus per element) and receive beamformer."""

    theta: np.ndarray
    v: np.ndarray

    def validate(self, receive_power: float):
        if np.max(np.abs(np.abs(self.theta) - 1.0)) > 1e-9:
            raise ValueError("reflection coefficients must be unit modulus")
        if abs(np.linalg.norm(self.v) ** 2 - receive_power) > 1e-9:
            raise ValueError("beamformer norm inconsistent with receive power")


@dataclass(frozen=True)
class SensingError:
    """Uniform elevation estimation error of half-width xi (radians)."""

    xi: float
    applies_to: str = "both"

    def __post_init__(self):
        if self.xi < 0:
            raise ValueError("error half-width must be non-negative")
        if self.applies_to not in ("target", "interferers", "both"):
            raise ValueError("applies_to must be target, interferers or both")


@dataclass(frozen=True)
class SinrReport:
    signal_power: float
    interference_powers: tuple[float, ...]
    sinr: float
    capacity: float


@dataclass
class DesignInfo:
    """Diagnostics of one suppression design."""

    solver_status: str
    relaxation_objective: float
    rank_defect: float
    amplitude_defect: float
    target_power: float
    interference_powers: tuple[float, ...]
    polish_rounds: int


def _perturbed(angles: AngleTriple, shift: float) -> AngleTriple:
    ele = min(max(angles.elevation + shift, -math.pi / 2), math.pi / 2)
    return AngleTriple(angles.azimuth, ele, angles.departure)


def apply_sensing_error(
    estimates: AngleEstimates, error: SensingError, rng: np.random.Generator
) -> AngleEstimates:
    """Corrupt estimated elevations with independent uniform errors."""
    target = estimates.target
    interferers = list(estimates.interferers)
    if error.applies_to in ("target", "both"):
        target = _perturbed(target, rng.uniform(-error.xi, error.xi))
    if error.applies_to in ("interferers", "both"):
        interferers = [
            _perturbed(a, rng.uniform(-error.xi, error.xi)) for a in interferers
        ]
    return AngleEstimates(target=target, interferers=tuple(interferers))


def device_steering(geom: UpaGeometry, angles: AngleTriple) -> np.ndarray:
    f = spatial_frequencies(angles)
    return steer_upa(geom, f.vartheta, f.phi)


def aligned_design(scenario: UplinkScenario, estimates: AngleEstimates) -> PhaseConfig:
    """Closed-form alignment: conjugate-match the cascaded target channel."""
    fg = spatial_frequencies(scenario.angles_g)
    beta = steer_ula(scenario.hap_antennas, fg.varpi)
    v = math.sqrt(scenario.receive_power) * beta.conj() / np.linalg.norm(beta)
    alpha_g = steer_upa(scenario.geometry, fg.vartheta, fg.phi)
    alpha_d = device_steering(scenario.geometry, estimates.target)
    theta = (alpha_g * alpha_d).conj()
    return PhaseConfig(theta=theta, v=v)


def orthogonality_check(
    target: AngleTriple, interferer: AngleTriple, geom: UpaGeometry, tol: float = 1e-9
) -> bool:
    """True when the aligned pattern has an exact null toward the interferer.

    Either array axis may supply the null: the cosine-azimuth difference
    hitting a multiple of 2/n_x, or the sin-azimuth*sin-elevation difference
    hitting a multiple of 2/n_y (multiples of the full array length excluded,
    those are grating alignments, not nulls).
    """

    def axis_null(diff: float, n: int) -> bool:
        m = diff * n / 2.0
        k = round(m)
        return k >= 1 and k % n != 0 and abs(diff - 2.0 * k / n) <= tol

    dx = abs(math.cos(target.azimuth) - math.cos(interferer.azimuth))
    dy = abs(
        math.sin(target.azimuth) * math.sin(target.elevation)
        - math.sin(interferer.azimuth) * math.sin(interferer.elevation)
    )
    return axis_null(dx, geom.n_x) or axis_null(dy, geom.n_y)


def _dirichlet_sq(delta: float, n: int) -> float:
    half = 0.5 * delta
    if abs(math.sin(half)) < 1e-12:
        return float(n * n)
    return (math.sin(n * half) / math.sin(half)) ** 2


def interference_power_closed(
    target: AngleTriple,
    interferer: AngleTriple,
    geom: UpaGeometry,
    hap_antennas: int,
    receive_power: float = 1.0,
) -> float:
    """Interference power (pre path loss) under the aligned design.

    Product of the squared array factors of the two axes evaluated at the
    spatial-frequency differences, scaled by the beamforming power and the
    number of receive antennas.
    """
    f_d = spatial_frequencies(target)
    f_k = spatial_frequencies(interferer)
    return (
        receive_power
        * hap_antennas
        * _dirichlet_sq(f_d.phi - f_k.phi, geom.n_x)
        * _dirichlet_sq(f_d.vartheta - f_k.vartheta, geom.n_y)
    )


def _al_ascent(theta0, a_d, a_mat, gram, cap_levels, max_rounds, inner_iters):
    """One augmented-Lagrangian run from a fixed start; returns (theta, feasible, obj)."""
    n = len(a_d)
    m = a_mat.shape[0]
    theta = theta0 / np.abs(theta0)
    lam = np.zeros(m)
    sigma = float(n)
    best = None
    best_obj = -1.0
    stagnant = 0
    infeasible_rounds = 0
    for _ in range(max_rounds):
        prev = theta
        for it in range(inner_iters):
            z = a_mat @ theta
            viol = np.maximum(np.abs(z) ** 2 - cap_levels, 0.0)
            weights = lam + sigma * viol
            drive = a_d.conj() * (a_d @ theta)
            if weights.any():
                drive = drive - a_mat.conj().T @ (weights * z)
                sw = np.sqrt(weights)
                shift = float(
                    np.linalg.eigvalsh(gram * np.outer(sw, sw))[-1]
                ) + 1e-9 * n
            else:
                shift = 0.0
            cand = drive + shift * theta
            mags = np.abs(cand)
            theta = np.where(mags > 1e-30, cand / np.where(mags > 1e-30, mags, 1.0), theta)
            if it % 25 == 24:
                if np.max(np.abs(theta - prev)) < 1e-12:
                    break
                prev = theta
        cap_vals = np.abs(a_mat @ theta) ** 2
        overshoot = cap_vals - cap_levels
        lam = np.maximum(lam + sigma * overshoot, 0.0)
        if np.all(overshoot <= 0.0):
            obj = abs(a_d @ theta) ** 2
            if obj > best_obj * (1 + 1e-12):
                best_obj = obj
                best = theta.copy()
                stagnant = 0
            else:
                stagnant += 1
            if stagnant >= 2:
                break
        else:
            infeasible_rounds += 1
            if infeasible_rounds % 3 == 0 and sigma < 1e9 * n:
                sigma *= 4.0
    if best is None:
        return theta, False, -1.0
    return best, True, best_obj


def _polish_unit_modulus(
    theta: np.ndarray,
    a_d: np.ndarray,
    cap_vectors: list[np.ndarray],
    cap_levels: np.ndarray,
    extra_starts: tuple = (),
    max_rounds: int = 60,
    inner_iters: int = 2000,
) -> tuple[np.ndarray, int]:
    """Augmented-Lagrangian power ascent on the phase torus.

    Maximizes |a_d^T theta|^2 subject to |a_k^T theta|^2 <= level_k via
    shifted power iterations on the multiplier-weighted combination (smooth
    quadratic hinge) with exact spectral shifts from the cap Gram matrix.
    Runs from the supplied start, the plain aligned phases and any extra
    candidates, keeping the best feasible result (raw or ascended).
    """
    m = len(cap_vectors)
    if m == 0:
        return a_d.conj().astype(complex), 0
    a_mat = np.stack(cap_vectors)
    gram = a_mat @ a_mat.conj().T
    starts = [theta, a_d.conj()] + [s for s in extra_starts if s is not None]
    outcomes = []
    for s in starts:
        s = s / np.abs(s)
        if np.all(np.abs(a_mat @ s) ** 2 <= cap_levels):
            outcomes.append((s, True, abs(a_d @ s) ** 2))
        outcomes.append(_al_ascent(s, a_d, a_mat, gram, cap_levels, max_rounds, inner_iters))
    feasible = [o for o in outcomes if o[1]]
    if feasible:
        winner = max(feasible, key=lambda o: o[2])
        return winner[0], len(feasible)
    return outcomes[0][0], 0


def _split_column_sums(u: np.ndarray, n_x: int, phi: float) -> np.ndarray:
    """Unit-modulus phases realizing x-weighted column sums u (|u_q| <= n_x).

    For each column, n_x unit phasors (pre-twisted by the x-axis increment)
    fan out symmetrically around arg(u_q) so they sum to exactly u_q.
    """
    n_y = len(u)
    theta = np.empty((n_x, n_y), dtype=complex)
    args = np.where(np.abs(u) > 0, np.angle(u), 0.0)
    mags = np.minimum(np.abs(u), n_x)
    for q in range(n_y):
        if n_x % 2 == 0:
            gamma = math.acos(min(max(mags[q] / n_x, -1.0), 1.0))
            half = n_x // 2
            phases = np.concatenate(
                [np.full(half, args[q] + gamma), np.full(half, args[q] - gamma)]
            )
        else:
            if n_x == 1:
                phases = np.array([args[q]])
            else:
                gamma = math.acos(min(max((mags[q] - 1.0) / (n_x - 1), -1.0), 1.0))
                half = (n_x - 1) // 2
                phases = np.concatenate(
                    [
                        [args[q]],
                        np.full(half, args[q] + gamma),
                        np.full(half, args[q] - gamma),
                    ]
                )
        theta[:, q] = np.exp(1j * (phases - phi * np.arange(n_x)))
    return theta.reshape(-1)


def _coplanar_optimum(
    n_x: int,
    n_y: int,
    phi: float,
    y_target: float,
    y_caps: np.ndarray,
    levels: np.ndarray,
) -> np.ndarray | None:
    """Globally optimal coplanar design via the convex column-sum program.

    When every source shares the azimuth plane, cap and target powers depend
    on the phases only through the x-weighted column sums u with |u_q| <= n_x.
    Maximizing the target under cap magnitudes is then a small convex QCQP
    (solved with SLSQP on the real embedding), and the sums are afterwards
    realized exactly by symmetric phasor splitting.
    """
    if n_x < 2 and levels.size:
        return None
    a_d = np.exp(1j * y_target * np.arange(n_y))
    a_caps = np.stack([np.exp(1j * f * np.arange(n_y)) for f in y_caps])

    def to_complex(x):
        return x[:n_y] + 1j * x[n_y:]

    def objective(x):
        u = to_complex(x)
        val = a_d @ u
        grad = np.concatenate([-np.real(a_d), -(-np.imag(a_d))])
        return -float(val.real), grad

    constraints = []
    for k in range(len(levels)):
        m_vec = a_caps[k]
        lvl = float(levels[k])

        def cap_fun(x, m_vec=m_vec, lvl=lvl):
            g = m_vec @ to_complex(x)
            return lvl - float(abs(g) ** 2)

        def cap_jac(x, m_vec=m_vec):
            g = m_vec @ to_complex(x)
            cg = np.conj(g) * m_vec
            return -np.concatenate([2 * np.real(cg), -2 * np.imag(cg)])

        constraints.append({"type": "ineq", "fun": cap_fun, "jac": cap_jac})
    box = float(n_x) ** 2

    def box_fun(x):
        u = to_complex(x)
        return box - (np.real(u) ** 2 + np.imag(u) ** 2)

    def box_jac(x):
        jac = np.zeros((n_y, 2 * n_y))
        jac[np.arange(n_y), np.arange(n_y)] = -2 * x[:n_y]
        jac[np.arange(n_y), n_y + np.arange(n_y)] = -2 * x[n_y:]
        return jac

    constraints.append({"type": "ineq", "fun": box_fun, "jac": box_jac})
    u0 = 0.0 * a_d.conj()
    x0 = np.concatenate([np.real(u0), np.imag(u0)])
    res = minimize(
        objective,
        x0,
        jac=True,
        method="SLSQP",
        constraints=constraints,
        options={"maxiter": 400, "ftol": 1e-14},
    )
    u = to_complex(res.x)
    # force strict cap feasibility; scaling stays inside the convex set
    mags = np.abs(a_caps @ u)
    radii = np.sqrt(levels)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = np.where(mags > 0, radii / np.maximum(mags, 1e-300), np.inf)
    scale = min(1.0, float(np.min(ratios)) if len(ratios) else 1.0)
    u = u * scale
    return _split_column_sums(u, n_x, phi)


def _suppression_design(
    scenario: UplinkScenario,
    estimates: AngleEstimates,
    cap_entries: list[tuple[AngleTriple, float]],
    irm_params: IrmParams,
    tol: float,
    max_iterations: int,
) -> tuple[PhaseConfig, DesignInfo]:
    geom = scenario.geometry
    n = geom.n
    m_ant = scenario.hap_antennas
    p = scenario.receive_power

    alpha_d = device_steering(geom, estimates.target)
    cap_vecs: list[np.ndarray] = []
    cap_taus: list[float] = []
    cap_freqs: list = []
    for ang, tau in cap_entries:
        vec = device_steering(geom, ang)
        for i, seen in enumerate(cap_vecs):
            if np.max(np.abs(seen - vec)) < 1e-7:
                cap_taus[i] = min(cap_taus[i], tau * p)
                break
        else:
            cap_vecs.append(vec)
            cap_taus.append(tau * p)
            cap_freqs.append(spatial_frequencies(ang))

    # a cap on the target direction itself below the alignment optimum is
    # reported as unsatisfiable rather than silently trading the target away
    for vec, tau in zip(cap_vecs, cap_taus):
        if np.max(np.abs(vec - alpha_d)) < 1e-7 and tau < p * m_ant * n**2:
            raise DesignError(
                "infeasible", "interferer coincides with the target direction"
            )

    problem = StructuredSdp(
        objective=np.outer(alpha_d, alpha_d.conj()),
        diag_value=m_ant * p,
        trace_caps=[
            (np.outer(a, a.conj()), tau) for a, tau in zip(cap_vecs, cap_taus)
        ],
    )
    relaxed = solve_sdr(problem, tol=tol, max_iterations=max_iterations)
    if relaxed.status == "infeasible":
        raise DesignError("infeasible", "suppression caps are unsatisfiable")
    refined = irm_refine(
        problem,
        relaxed,
        irm_params,
        tol=tol,
        max_iterations=max_iterations,
        total_iterations=max_iterations,
    )
    if refined.status == "infeasible":
        raise DesignError("infeasible", "suppression caps are unsatisfiable")

    top_val, top_vec = principal_component(refined.c_matrix)
    mags = np.abs(top_vec)
    amp_defect = float(np.max(np.abs(mags * math.sqrt(n) - 1.0)))
    safe = np.where(mags > 1e-12, top_vec, 1.0)
    theta_h = (safe / np.abs(safe)).conj()

    # per-element cap levels on |a_k^T theta|^2, with polish headroom
    levels = np.array([tau / m_ant * (1.0 - POLISH_MARGIN) for tau in cap_taus])
    f_d = spatial_frequencies(estimates.target)
    coplanar = None
    if cap_freqs and all(abs(f.phi - f_d.phi) < 1e-9 for f in cap_freqs):
        coplanar = _coplanar_optimum(
            geom.n_x,
            geom.n_y,
            f_d.phi,
            f_d.vartheta,
            np.array([f.vartheta for f in cap_freqs]),
            levels,
        )
    if coplanar is not None and np.all(
        np.abs(np.stack(cap_vecs) @ coplanar) ** 2 <= levels * (1 + 1e-6) + 1e-15
    ):
        # column-sum reduction is exact for coplanar sources, so this
        # candidate is the global optimum; no torus ascent can beat it
        theta_h, rounds = coplanar, 0
    else:
        theta_h, rounds = _polish_unit_modulus(
            theta_h, alpha_d, cap_vecs, levels, extra_starts=(coplanar,)
        )

    achieved_int = tuple(
        p * m_ant * abs(a @ theta_h) ** 2 for a in cap_vecs
    )
    target_power = p * m_ant * abs(alpha_d @ theta_h) ** 2
    tol_abs = 1e-12 * p * m_ant * n**2
    caps_ok = all(
        val <= tau * (1.0 + CAP_SLACK) + tol_abs
        for val, tau in zip(achieved_int, cap_taus)
    )
    if not caps_ok:
        raise DesignError("max_iters", "suppression caps not met within tolerance")

    fg = spatial_frequencies(scenario.angles_g)
    alpha_g = steer_upa(geom, fg.vartheta, fg.phi)
    beta = steer_ula(m_ant, fg.varpi)
    v = math.sqrt(p) * beta.conj() / np.linalg.norm(beta)
    config = PhaseConfig(theta=alpha_g.conj() * theta_h, v=v)
    info = DesignInfo(
        solver_status=refined.status,
        relaxation_objective=relaxed.objective_value,
        rank_defect=rank_one_defect(refined.c_matrix),
        amplitude_defect=amp_defect,
        target_power=target_power,
        interference_powers=achieved_int,
        polish_rounds=rounds,
    )
    return config, info


def build_eli_detailed(
    scenario: UplinkScenario,
    estimates: AngleEstimates,
    irm_params: IrmParams = IrmParams(),
    tol: float = 1e-6,
    max_iterations: int = 4000,
) -> tuple[PhaseConfig, DesignInfo]:
    """Interference-suppressing design with diagnostics."""
    if not scenario.interferers:
        raise ValueError("suppression design needs at least one interferer")
    entries = list(zip(estimates.interferers, scenario.suppression_caps))
    return _suppression_design(scenario, estimates, entries, irm_params, tol, max_iterations)


def build_eli(
    scenario: UplinkScenario,
    estimates: AngleEstimates,
    irm_params: IrmParams = IrmParams(),
    tol: float = 1e-6,
    max_iterations: int = 4000,
) -> PhaseConfig:
    """Interference-suppressing reflection design from estimated angles."""
    return build_eli_detailed(scenario, estimates, irm_params, tol, max_iterations)[0]


def build_robust_detailed(
    scenario: UplinkScenario,
    estimates: AngleEstimates,
    delta: float,
    grid_l: int = 11,
    irm_params: IrmParams = IrmParams(),
    tol: float = 1e-6,
    max_iterations: int = 4000,
) -> tuple[PhaseConfig, DesignInfo]:
    """Widened-null design: each interference cap expands to an elevation grid."""
    if grid_l < 2:
        raise ValueError("need at least two grid points per interferer")
    if delta <= 0:
        raise ValueError("widening half-width must be positive")
    if not scenario.interferers:
        raise ValueError("suppression design needs at least one interferer")
    entries = []
    for ang, tau in zip(estimates.interferers, scenario.suppression_caps):
        # centre offset first so a collapsed grid dedupes onto the exact angle
        for off in sorted(np.linspace(-delta, delta, grid_l), key=abs):
            entries.append((_perturbed(ang, float(off)), tau))
    return _suppression_design(scenario, estimates, entries, irm_params, tol, max_iterations)


def build_robust(
    scenario: UplinkScenario,
    estimates: AngleEstimates,
    delta: float,
    grid_l: int = 11,
    irm_params: IrmParams = IrmParams(),
    tol: float = 1e-6,
    max_iterations: int = 4000,
) -> PhaseConfig:
    return build_robust_detailed(
        scenario, estimates, delta, grid_l, irm_params, tol, max_iterations
    )[0]


def evaluate_sinr(
    scenario: UplinkScenario, config: PhaseConfig, channels: ChannelSet
) -> SinrReport:
    """Link metrics of a configuration on (true) channels.

    The signal and each interference term combine transmit power, both hop
    path losses and the squared cascaded beamforming amplitude.
    """
    if len(channels.h) != 1 + len(scenario.interferers):
        raise ValueError("channel set inconsistent with scenario sources")
    gv = channels.g @ config.v  # (N,); v^T G^T x equals (G v)^T x
    amps = [abs(np.dot(gv * config.theta, hk)) ** 2 for hk in channels.h]
    sources = [scenario.target] + scenario.interferers
    powers = [
        src.tx_power * channels.pathloss_h2r * channels.pathloss_r2u[k] * amps[k]
        for k, src in enumerate(sources)
    ]
    signal = powers[0]
    interference = tuple(powers[1:])
    sinr = signal / (sum(interference) + scenario.noise_power)
    return SinrReport(
        signal_power=signal,
        interference_powers=interference,
        sinr=sinr,
        capacity=math.log2(1.0 + sinr),
    )


def tau_heuristic(noise_power: float, interferer_tx: float, cascaded_pathloss: float) -> float:
    """Suppression threshold (dB) balancing residual interference against noise."""
    if noise_power <= 0 or interferer_tx <= 0 or cascaded_pathloss <= 0:
        raise ValueError("all inputs must be positive")
    return 9.5 * math.log10(noise_power / (interferer_tx * cascaded_pathloss)) - 7.5
