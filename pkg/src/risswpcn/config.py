"""Experiment configuration: defaults, JSON loading and unit conversions.

All dB/dBm values are converted to linear watts exactly once, here; the
numerical modules only ever see linear quantities.  Desk-scale defaults keep
the uplink sweeps at an 8x8 surface; ``full`` switches the uplink geometry
to the 16x16 surface at reduced Monte Carlo density.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import asdict, dataclass, field, replace


def db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


def dbm_to_watts(dbm: float) -> float:
    return 10.0 ** (dbm / 10.0) * 1e-3


@dataclass
class ScenarioConfig:
    """Every knob of the experiment harness (angles in degrees, powers as noted)."""

    # geometry
    n_x: int = 8
    n_y: int = 8
    full_n_x: int = 16
    full_n_y: int = 16
    hap_antennas: int = 4
    # distances (meters)
    d_r2h: float = 20.0
    d_r2t: float = 10.0
    d_r2i: float = 10.0
    # powers
    uplink_tx_w: float = 15.5e-3
    downlink_tx_w: float = 4.0
    noise_dbm: float = -80.0
    receive_power: float = 1.0
    # path loss
    ref_loss_db: float = 30.0
    pathloss_exponent: float = 2.2
    # angles (degrees; azimuth plane pi/2 for all sources)
    target_ele_deg: float = 12.1
    interferer_eles_deg: list[float] = field(default_factory=lambda: [21.3, -12.5])
    hap_azi_deg: float = 90.0
    hap_ele_deg: float = 17.2
    hap_dep_deg: float = 22.9
    # uplink sweeps
    tau_db_grid: list[float] = field(default_factory=lambda: [-20.0, 40.0])
    kappa_grid: list[float] = field(default_factory=lambda: [0.0, 1.0, 10.0, 100.0, 1e12])
    xi_deg_grid: list[float] = field(
        default_factory=lambda: [0.0, 0.5, 1.0, 1.5, 2.0, 3.0, 4.0, 6.0, 8.0, 10.0]
    )
    designed_xi_deg: list[float] = field(default_factory=lambda: [0.0, 1.0])
    fig6_tau_db: float = -20.0
    robust_delta_deg: float = 1.0
    robust_grid_l: int = 11
    fig7_tau_db_grid: list[float] = field(
        default_factory=lambda: [6.0, 11.0, 16.0, 21.0, 26.0, 31.0, 36.0]
    )
    fig7_distances_m: list[float] = field(default_factory=lambda: [10.0, 50.0, 100.0])
    # solver budgets
    solver_tol: float = 1e-6
    solver_iterations: int = 1200
    solver_iterations_full: int = 2000
    # downlink energy transfer
    wet_n_x: int = 16
    wet_search_interval: list[float] = field(default_factory=lambda: [0.2, 0.8])
    wet_coarse_len: int = 200
    wet_fine_len: int = 50
    wet_target_beams: int = 16
    wet_devices: int = 50
    wet_radii_m: list[float] = field(default_factory=lambda: [3.0, 5.0, 7.0])
    wet_demand_j: float = 1.35e-3
    wet_n_max_grid: list[int] = field(default_factory=lambda: [10, 20, 30, 40, 50])
    # Monte Carlo
    trials: int | None = None
    seed: int = 12345
    full: bool = False

    @property
    def noise_w(self) -> float:
        return dbm_to_watts(self.noise_dbm)

    @property
    def geometry_nx(self) -> int:
        return self.full_n_x if self.full else self.n_x

    @property
    def geometry_ny(self) -> int:
        return self.full_n_y if self.full else self.n_y

    @property
    def solver_budget(self) -> int:
        return self.solver_iterations_full if self.full else self.solver_iterations

    def tau_linear(self, tau_db: float) -> float:
        return db_to_linear(tau_db)

    def angle_rad(self, deg: float) -> float:
        return math.radians(deg)

    def to_dict(self) -> dict:
        return asdict(self)

    def digest(self) -> str:
        return hashlib.sha256(
            json.dumps(self.to_dict(), sort_keys=True).encode()
        ).hexdigest()


def load_config(path: str | None, overrides: dict | None = None) -> ScenarioConfig:
    """Build the configuration from an optional JSON file plus overrides."""
    data: dict = {}
    if path is not None:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
        if not isinstance(data, dict):
            raise ValueError(f"config {path} must hold a JSON object")
    config = ScenarioConfig()
    known = set(config.to_dict())
    unknown = set(data) - known
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    config = replace(config, **data)
    if overrides:
        config = replace(config, **overrides)
    return config
