"""RISS-assisted wireless powered communication network simulation library."""

__version__ = "0.1.0"

from .arrays import (
    AngleTriple,
    ChannelSet,
    PathLossModel,
    SpatialFrequencies,
    UpaGeometry,
    los_channels,
    path_loss,
    rician_mix,
    spatial_frequencies,
    steer_ula,
    steer_upa,
)
from .config import ScenarioConfig, load_config
from .scheduling import (
    RotationOrder,
    WaitingCostReport,
    brute_force_order,
    optimal_order,
    rotation_cost,
    waiting_cost,
)
from .sdp import (
    IrmParams,
    PsdSolution,
    StructuredSdp,
    irm_refine,
    principal_component,
    rank_one_defect,
    solve_sdr,
)
from .uplink import (
    AngleEstimates,
    DesignError,
    PhaseConfig,
    SensingError,
    SinrReport,
    SourceGeometry,
    UplinkScenario,
    aligned_design,
    apply_sensing_error,
    build_eli,
    build_eli_detailed,
    build_robust,
    build_robust_detailed,
    evaluate_sinr,
    interference_power_closed,
    orthogonality_check,
    tau_heuristic,
)
from .wet import (
    Beam,
    BeamPlan,
    DeviceCluster,
    EhModel,
    beam_gain,
    beam_widths,
    build_plan,
    charging_times,
    harvest,
    harvested_energy,
    slot_charging_times,
    slot_harvested_energy,
    stitch_beams,
    threshold_search,
    total_gain,
)

__all__ = [
    "AngleEstimates",
    "AngleTriple",
    "Beam",
    "BeamPlan",
    "ChannelSet",
    "DesignError",
    "DeviceCluster",
    "EhModel",
    "IrmParams",
    "PathLossModel",
    "PhaseConfig",
    "PsdSolution",
    "RotationOrder",
    "ScenarioConfig",
    "SensingError",
    "SinrReport",
    "SourceGeometry",
    "SpatialFrequencies",
    "StructuredSdp",
    "UpaGeometry",
    "UplinkScenario",
    "WaitingCostReport",
    "aligned_design",
    "apply_sensing_error",
    "beam_gain",
    "beam_widths",
    "brute_force_order",
    "build_eli",
    "build_eli_detailed",
    "build_plan",
    "build_robust",
    "build_robust_detailed",
    "charging_times",
    "evaluate_sinr",
    "harvest",
    "harvested_energy",
    "interference_power_closed",
    "irm_refine",
    "load_config",
    "los_channels",
    "optimal_order",
    "orthogonality_check",
    "path_loss",
    "principal_component",
    "rank_one_defect",
    "rician_mix",
    "rotation_cost",
    "slot_charging_times",
    "slot_harvested_energy",
    "solve_sdr",
    "spatial_frequencies",
    "steer_ula",
    "steer_upa",
    "stitch_beams",
    "tau_heuristic",
    "threshold_search",
    "total_gain",
    "waiting_cost",
]
