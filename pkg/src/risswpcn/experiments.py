"""Seeded Monte Carlo experiment runners and CSV emission.

Every runner is a pure function of (config, seed): per-trial random streams
derive from (master seed, experiment id, trial index), so repeated runs are
byte-identical and growing the trial count never reshuffles earlier trials.
Solver failures inside a sweep cell are recorded as ``status`` rows and the
sweep continues.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import __version__
from .arrays import AngleTriple, ChannelSet, PathLossModel, UpaGeometry, los_channels, path_loss, rician_mix
from .config import ScenarioConfig
from .scheduling import RotationOrder, optimal_order, rotation_cost
from .uplink import (
    AngleEstimates,
    DesignError,
    SensingError,
    SourceGeometry,
    UplinkScenario,
    aligned_design,
    apply_sensing_error,
    build_eli,
    build_robust,
    evaluate_sinr,
    tau_heuristic,
)
from .wet import (
    DeviceCluster,
    EhModel,
    harvested_energy,
    slot_charging_times,
    slot_harvested_energy,
    threshold_search,
)

EXPERIMENT_IDS = {
    "uplink-rician": 1,
    "uplink-error": 2,
    "uplink-distance-tau": 3,
    "wet-beams": 4,
    "wet-sensing": 5,
}

DEFAULT_TRIALS = {
    "uplink-rician": 100,
    "uplink-error": 100,
    "uplink-distance-tau": 1,
    "wet-beams": 200,
    "wet-sensing": 500,
}

AGGREGATE = "aggregate"


@dataclass(frozen=True)
class ResultRow:
    experiment: str
    seed: int
    param: str
    param_value: float
    metric: str
    value: float
    trial: int | str


@dataclass
class RunResult:
    rows: list[ResultRow]
    cells: int
    failures: int

    @property
    def failure_fraction(self) -> float:
        return self.failures / self.cells if self.cells else 0.0


def trial_rng(seed: int, experiment: str, trial: int) -> np.random.Generator:
    ss = np.random.SeedSequence([seed, EXPERIMENT_IDS[experiment], trial])
    return np.random.Generator(np.random.PCG64(ss))


def resolved_trials(config: ScenarioConfig, experiment: str) -> int:
    if config.trials is not None:
        return config.trials
    base = DEFAULT_TRIALS[experiment]
    # full-scale geometry trades Monte Carlo density for solver cost
    return max(10, base // 2) if config.full else base


def _fmt(value) -> str:
    if isinstance(value, str):
        return value
    return format(float(value), ".17g")


def emit_csv(rows: list[ResultRow], path) -> None:
    """Write rows as UTF-8 CSV, deterministically sorted, 17 significant digits."""
    lines = [
        ",".join(
            [
                r.experiment,
                str(r.seed),
                r.param,
                _fmt(r.param_value),
                r.metric,
                _fmt(r.value),
                str(r.trial),
            ]
        )
        for r in rows
    ]
    body = "\n".join(["experiment,seed,param,param_value,metric,value,trial"] + sorted(lines))
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(body + "\n")
    except OSError as err:
        raise OSError(f"cannot write results to {path}: {err}") from err


def write_manifest(path, experiment: str, config: ScenarioConfig) -> None:
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(f"experiment: {experiment}\n")
            fh.write(f"config_sha256: {config.digest()}\n")
            fh.write(f"seed: {config.seed}\n")
            fh.write(f"version: risswpcn {__version__}\n")
    except OSError as err:
        raise OSError(f"cannot write manifest to {path}: {err}") from err


def _pathloss_model(config: ScenarioConfig) -> PathLossModel:
    return PathLossModel(
        ref_loss_db_at_1m=config.ref_loss_db, exponent=config.pathloss_exponent
    )


def _uplink_scenario(config: ScenarioConfig, taus_linear: list[float], d_r2i: float | None = None) -> UplinkScenario:
    azi = math.radians(config.hap_azi_deg)
    d_i = config.d_r2i if d_r2i is None else d_r2i
    interferers = [
        SourceGeometry(
            AngleTriple(math.pi / 2, math.radians(e), 0.0), d_i, config.uplink_tx_w
        )
        for e in config.interferer_eles_deg
    ]
    return UplinkScenario(
        geometry=UpaGeometry(config.geometry_nx, config.geometry_ny),
        hap_antennas=config.hap_antennas,
        angles_g=AngleTriple(
            azi, math.radians(config.hap_ele_deg), math.radians(config.hap_dep_deg)
        ),
        target=SourceGeometry(
            AngleTriple(math.pi / 2, math.radians(config.target_ele_deg), 0.0),
            config.d_r2t,
            config.uplink_tx_w,
        ),
        interferers=interferers[: len(taus_linear)],
        noise_power=config.noise_w,
        suppression_caps=list(taus_linear),
        receive_power=config.receive_power,
    )


def _los_channels(scenario: UplinkScenario, config: ScenarioConfig) -> ChannelSet:
    plm = _pathloss_model(config)
    ch = los_channels(
        scenario.geometry,
        scenario.hap_antennas,
        scenario.angles_g,
        [scenario.target.angles] + [s.angles for s in scenario.interferers],
    )
    ch.pathloss_h2r = path_loss(plm, config.d_r2h)
    ch.pathloss_r2u = [
        path_loss(plm, s.distance) for s in [scenario.target] + scenario.interferers
    ]
    return ch


def run_capacity_vs_rician(config: ScenarioConfig) -> RunResult:
    """Mean capacity of the aligned and suppressing designs across Rician factors."""
    experiment = "uplink-rician"
    trials = resolved_trials(config, experiment)
    rows: list[ResultRow] = []
    cells = 0
    failures = 0

    designs = {"ALI": None}
    taus = [config.tau_linear(t) for t in config.tau_db_grid]
    base = _uplink_scenario(config, [taus[0]] * len(config.interferer_eles_deg))
    estimates = base.true_estimates()
    designs["ALI"] = aligned_design(base, estimates)
    eli_designs = {}
    for tau_db in config.tau_db_grid:
        cells += 1
        label = f"ELI:tau{tau_db:+g}dB"
        scenario = _uplink_scenario(
            config, [config.tau_linear(tau_db)] * len(config.interferer_eles_deg)
        )
        try:
            eli_designs[label] = (
                build_eli(
                    scenario,
                    estimates,
                    tol=config.solver_tol,
                    max_iterations=config.solver_budget,
                ),
                scenario,
            )
        except DesignError:
            failures += 1
            rows.append(
                ResultRow(experiment, config.seed, "tau_db", tau_db, f"status:{label}", 1.0, AGGREGATE)
            )

    los = _los_channels(base, config)
    capacities: dict[tuple[float, str], list[float]] = {}
    for trial in range(trials):
        rng = trial_rng(config.seed, experiment, trial)
        for kappa in config.kappa_grid:
            g = rician_mix(los.g, kappa, rng)
            h = [rician_mix(hk, kappa, rng) for hk in los.h]
            drawn = ChannelSet(
                g=g, h=h, pathloss_h2r=los.pathloss_h2r, pathloss_r2u=list(los.pathloss_r2u)
            )
            variants = {"ALI": (designs["ALI"], base)}
            variants.update(eli_designs)
            for label, (cfg_design, scen) in variants.items():
                cap = evaluate_sinr(scen, cfg_design, drawn).capacity
                rows.append(
                    ResultRow(experiment, config.seed, "kappa", kappa, f"capacity:{label}", cap, trial)
                )
                capacities.setdefault((kappa, label), []).append(cap)
    for (kappa, label), vals in capacities.items():
        rows.append(
            ResultRow(
                experiment, config.seed, "kappa", kappa, f"capacity:{label}",
                float(np.mean(vals)), AGGREGATE,
            )
        )
    return RunResult(rows=rows, cells=max(cells, 1), failures=failures)


def run_capacity_vs_error(config: ScenarioConfig) -> RunResult:
    """Capacity under uniform angle-estimation error for all design variants."""
    experiment = "uplink-error"
    trials = resolved_trials(config, experiment)
    rows: list[ResultRow] = []
    cells = 0
    failures = 0
    tau = config.tau_linear(config.fig6_tau_db)
    scenario = _uplink_scenario(config, [tau] * len(config.interferer_eles_deg))
    truth = scenario.true_estimates()
    los = _los_channels(scenario, config)
    delta = math.radians(config.robust_delta_deg)
    designed_xis = set(config.designed_xi_deg)

    def design_all(estimates: AngleEstimates, xi_deg: float):
        nonlocal cells, failures
        out = {"ALI": aligned_design(scenario, estimates)}
        if xi_deg in designed_xis:
            for label, builder in (
                ("ELI", lambda: build_eli(scenario, estimates, tol=config.solver_tol, max_iterations=config.solver_budget)),
                (
                    "R-ELI",
                    lambda: build_robust(
                        scenario, estimates, delta, config.robust_grid_l,
                        tol=config.solver_tol, max_iterations=config.solver_budget,
                    ),
                ),
            ):
                cells += 1
                try:
                    out[label] = builder()
                except DesignError:
                    failures += 1
                    rows.append(
                        ResultRow(experiment, config.seed, "xi_deg", xi_deg, f"status:{label}", 1.0, AGGREGATE)
                    )
        return out

    capacities: dict[tuple[float, str], list[float]] = {}
    zero_xi_cache = design_all(truth, 0.0) if 0.0 in set(config.xi_deg_grid) else None
    for xi_deg in config.xi_deg_grid:
        if xi_deg == 0.0:
            for label, cfg_design in zero_xi_cache.items():
                cap = evaluate_sinr(scenario, cfg_design, los).capacity
                for trial in range(trials):
                    rows.append(
                        ResultRow(experiment, config.seed, "xi_deg", xi_deg, f"capacity:{label}", cap, trial)
                    )
                capacities[(xi_deg, label)] = [cap] * trials
            continue
        error = SensingError(xi=math.radians(xi_deg))
        for trial in range(trials):
            # dedicated substream per error width so the grid can change freely
            sub = np.random.Generator(
                np.random.PCG64(
                    np.random.SeedSequence(
                        [config.seed, EXPERIMENT_IDS[experiment], trial, int(round(xi_deg * 1e6))]
                    )
                )
            )
            corrupted = apply_sensing_error(truth, error, sub)
            for label, cfg_design in design_all(corrupted, xi_deg).items():
                cap = evaluate_sinr(scenario, cfg_design, los).capacity
                rows.append(
                    ResultRow(experiment, config.seed, "xi_deg", xi_deg, f"capacity:{label}", cap, trial)
                )
                capacities.setdefault((xi_deg, label), []).append(cap)
    for (xi_deg, label), vals in capacities.items():
        rows.append(
            ResultRow(
                experiment, config.seed, "xi_deg", xi_deg, f"capacity:{label}",
                float(np.mean(vals)), AGGREGATE,
            )
        )
    return RunResult(rows=rows, cells=max(cells, 1), failures=failures)


def run_capacity_vs_distance_tau(config: ScenarioConfig) -> RunResult:
    """Capacity surface over interferer distance and suppression threshold."""
    experiment = "uplink-distance-tau"
    rows: list[ResultRow] = []
    cells = 0
    failures = 0
    plm = _pathloss_model(config)

    designs = {}
    for tau_db in config.fig7_tau_db_grid:
        cells += 1
        scenario = _uplink_scenario(config, [config.tau_linear(tau_db)], d_r2i=config.d_r2i)
        try:
            designs[tau_db] = build_eli(
                scenario,
                scenario.true_estimates(),
                tol=config.solver_tol,
                max_iterations=config.solver_budget,
            )
        except DesignError:
            failures += 1
            rows.append(
                ResultRow(experiment, config.seed, "tau_db", tau_db, "status:ELI", 1.0, AGGREGATE)
            )

    for dist in config.fig7_distances_m:
        caps_per_tau = {}
        for tau_db, cfg_design in designs.items():
            scenario = _uplink_scenario(config, [config.tau_linear(tau_db)], d_r2i=dist)
            ch = _los_channels(scenario, config)
            cap = evaluate_sinr(scenario, cfg_design, ch).capacity
            caps_per_tau[tau_db] = cap
            rows.append(
                ResultRow(experiment, config.seed, "d_r2i_m", dist, f"capacity:tau{tau_db:+g}dB", cap, 0)
            )
            rows.append(
                ResultRow(
                    experiment, config.seed, "d_r2i_m", dist, f"capacity:tau{tau_db:+g}dB", cap, AGGREGATE
                )
            )
        if caps_per_tau:
            argmax_tau = max(caps_per_tau, key=caps_per_tau.get)
            cascade = path_loss(plm, config.d_r2h) * path_loss(plm, dist)
            predicted = tau_heuristic(config.noise_w, config.uplink_tx_w, cascade)
            rows.append(
                ResultRow(experiment, config.seed, "d_r2i_m", dist, "tau_argmax_db", argmax_tau, AGGREGATE)
            )
            rows.append(
                ResultRow(experiment, config.seed, "d_r2i_m", dist, "tau_heuristic_db", predicted, AGGREGATE)
            )
    return RunResult(rows=rows, cells=max(cells, 1), failures=failures)


def _wet_constants(config: ScenarioConfig):
    plm = _pathloss_model(config)
    n_total = config.full_n_x * config.full_n_y
    return plm, n_total, path_loss(plm, config.d_r2h), EhModel()


def run_wet_beams(config: ScenarioConfig) -> RunResult:
    """Average and worst harvested energy across stitched plans (equal slots)."""
    experiment = "wet-beams"
    trials = resolved_trials(config, experiment)
    rows: list[ResultRow] = []
    plm, n_total, pl_h2r, eh = _wet_constants(config)
    plans = threshold_search(
        tuple(config.wet_search_interval),
        config.wet_coarse_len,
        config.wet_fine_len,
        config.wet_n_x,
    )
    stats: dict[tuple[int, str], list[float]] = {}
    for trial in range(trials):
        rng = trial_rng(config.seed, experiment, trial)
        angles = rng.uniform(-np.pi / 2, np.pi / 2, config.wet_devices)
        radii = rng.choice(np.asarray(config.wet_radii_m), config.wet_devices)
        gains = path_loss(plm, radii)
        for _, plan in plans:
            times = np.full(plan.n_beams, 1.0 / plan.n_beams)
            energy = harvested_energy(
                plan, times, angles, gains, eh,
                config.downlink_tx_w, n_total, config.hap_antennas, pl_h2r,
            )
            mean_e, min_e = float(energy.mean()), float(energy.min())
            rows.append(
                ResultRow(experiment, config.seed, "n_beams", plan.n_beams, "energy_mean_j", mean_e, trial)
            )
            rows.append(
                ResultRow(experiment, config.seed, "n_beams", plan.n_beams, "energy_min_j", min_e, trial)
            )
            stats.setdefault((plan.n_beams, "energy_mean_j"), []).append(mean_e)
            stats.setdefault((plan.n_beams, "energy_min_j"), []).append(min_e)
    for (n_beams, metric), vals in stats.items():
        rows.append(
            ResultRow(experiment, config.seed, "n_beams", n_beams, metric, float(np.mean(vals)), AGGREGATE)
        )
    return RunResult(rows=rows, cells=max(len(plans), 1), failures=0)


def run_wet_sensing_gain(config: ScenarioConfig) -> RunResult:
    """Worst harvested energy and waiting cost, sensing-aided vs blind."""
    experiment = "wet-sensing"
    trials = resolved_trials(config, experiment)
    rows: list[ResultRow] = []
    plm, n_total, pl_h2r, eh = _wet_constants(config)
    plans = threshold_search(
        tuple(config.wet_search_interval),
        config.wet_coarse_len,
        config.wet_fine_len,
        config.wet_n_x,
    )
    matching = [p for _, p in plans if p.n_beams == config.wet_target_beams]
    if not matching:
        raise RuntimeError(
            f"threshold search found no {config.wet_target_beams}-beam plan"
        )
    plan = matching[0]
    n_beams = plan.n_beams
    radii = np.asarray(config.wet_radii_m)
    stats: dict[tuple[int, str], list[float]] = {}

    for trial in range(trials):
        rng = trial_rng(config.seed, experiment, trial)
        for n_max in config.wet_n_max_grid:
            counts = rng.integers(1, n_max + 1, size=n_beams)
            angles, gains = [], []
            for j, beam in enumerate(plan.beams):
                lo = beam.direction - beam.width_left
                hi = beam.direction + beam.width_right
                angles.append(rng.uniform(lo, hi, counts[j]))
                gains.append(path_loss(plm, rng.choice(radii, counts[j])))
            cluster = DeviceCluster(angles=angles, distances=gains, demand=config.wet_demand_j)
            times = slot_charging_times(
                plan, cluster, config.downlink_tx_w, n_total, config.hap_antennas, pl_h2r
            )
            uniform = np.full(n_beams, times.mean())
            e_sensing = slot_harvested_energy(
                plan, times, cluster, eh, config.downlink_tx_w, n_total, config.hap_antennas, pl_h2r
            )
            e_blind = slot_harvested_energy(
                plan, uniform, cluster, eh, config.downlink_tx_w, n_total, config.hap_antennas, pl_h2r
            )
            total_devices = counts.sum()
            cost_opt = rotation_cost(optimal_order(counts, times), counts, times) / total_devices
            cost_seq = rotation_cost(
                RotationOrder(tuple(range(n_beams))), counts, uniform
            ) / total_devices
            count_only = RotationOrder(
                tuple(sorted(range(n_beams), key=lambda j: (-counts[j], j)))
            )
            cost_cnt = rotation_cost(count_only, counts, times) / total_devices
            metrics = {
                "worst_energy_j:sensing": float(e_sensing.min()),
                "worst_energy_j:baseline": float(e_blind.min()),
                "waiting_cost_s:sensing": float(cost_opt),
                "waiting_cost_s:baseline": float(cost_seq),
                "waiting_cost_s:count_only": float(cost_cnt),
            }
            for metric, value in metrics.items():
                rows.append(
                    ResultRow(experiment, config.seed, "n_max", n_max, metric, value, trial)
                )
                stats.setdefault((n_max, metric), []).append(value)

    for (n_max, metric), vals in stats.items():
        rows.append(
            ResultRow(experiment, config.seed, "n_max", n_max, metric, float(np.mean(vals)), AGGREGATE)
        )
    for n_max in config.wet_n_max_grid:
        ws = np.mean(stats[(n_max, "worst_energy_j:sensing")])
        wb = np.mean(stats[(n_max, "worst_energy_j:baseline")])
        cs = np.mean(stats[(n_max, "waiting_cost_s:sensing")])
        cb = np.mean(stats[(n_max, "waiting_cost_s:baseline")])
        cc = np.mean(stats[(n_max, "waiting_cost_s:count_only")])
        rows.append(
            ResultRow(
                experiment, config.seed, "n_max", n_max,
                "worst_energy_improvement_pct", float((ws - wb) / wb * 100.0), AGGREGATE,
            )
        )
        rows.append(
            ResultRow(
                experiment, config.seed, "n_max", n_max,
                "waiting_cost_reduction_pct", float((cb - cs) / cb * 100.0), AGGREGATE,
            )
        )
        rows.append(
            ResultRow(
                experiment, config.seed, "n_max", n_max,
                "waiting_cost_reduction_count_only_pct", float((cb - cc) / cb * 100.0), AGGREGATE,
            )
        )
    return RunResult(rows=rows, cells=max(len(config.wet_n_max_grid), 1), failures=0)


RUNNERS = {
    "uplink-rician": run_capacity_vs_rician,
    "uplink-error": run_capacity_vs_error,
    "uplink-distance-tau": run_capacity_vs_distance_tau,
    "wet-beams": run_wet_beams,
    "wet-sensing": run_wet_sensing_gain,
}
