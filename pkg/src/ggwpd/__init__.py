"""Gaussian wave packet dynamics on the kicked rotor.

Complex saddle-point propagation (with branch-tracked prefactors),
off-center real-trajectory sums, and linearized wave-packet dynamics,
validated against exact quantum propagation on the discretized torus.
The free-particle submodule (``ggwpd.free_particle``) provides the
closed-form oracle for which all three methods are exact.
"""
from . import free_particle
from .errors import (
    CausticError,
    ConfigError,
    ConvergenceError,
    GgwpdError,
    NumericalError,
    RunawayError,
)
from .experiment import (
    PRESETS,
    ExperimentConfig,
    ScenarioSetup,
    SweepRow,
    config_from_dict,
    emit_csv,
    emit_report,
    load_config,
    packets_for,
    prepare_scenario,
    preset,
    read_csv,
    run_sweep,
)
from .floquet import discretize_packet, floquet_matrix, grid_hbar, quantum_correlation
from .packets import (
    ComplexPhasePoint,
    GaussianPacket,
    ResidualPair,
    bra_norm_exponent,
    gaussian_overlap,
    ket_norm_exponent,
    manifold_point,
    packet_evaluate,
    residuals,
)
from .rotor import (
    ComplexTrajectory,
    ManifoldCurve,
    RotorParams,
    SeedTrajectory,
    curve_to_csv,
    find_seeds,
    inverse_map_step,
    iterate_map,
    map_step,
    propagate,
    propagate_curve,
    shearing_manifold,
    stable_manifold,
    unstable_manifold,
)
from .semiclassics import (
    BranchPhase,
    CorrelationResult,
    OffCenterContribution,
    SaddleContribution,
    SaddleTrajectory,
    branch_sqrt,
    find_position_saddle,
    find_saddle,
    ggwpd_correlation,
    ggwpd_wavefunction,
    linearized_correlation,
    newton_step,
    offcenter_contribution,
    offcenter_correlation,
    saddle_contribution,
    wavefunction_contribution,
)

__version__ = "0.1.0"

__all__ = [
    "BranchPhase",
    "CausticError",
    "ComplexPhasePoint",
    "ComplexTrajectory",
    "ConfigError",
    "ConvergenceError",
    "CorrelationResult",
    "ExperimentConfig",
    "GaussianPacket",
    "GgwpdError",
    "ManifoldCurve",
    "NumericalError",
    "OffCenterContribution",
    "PRESETS",
    "ResidualPair",
    "RotorParams",
    "RunawayError",
    "SaddleContribution",
    "SaddleTrajectory",
    "ScenarioSetup",
    "SeedTrajectory",
    "SweepRow",
    "bra_norm_exponent",
    "branch_sqrt",
    "config_from_dict",
    "curve_to_csv",
    "discretize_packet",
    "emit_csv",
    "emit_report",
    "find_position_saddle",
    "find_saddle",
    "find_seeds",
    "floquet_matrix",
    "free_particle",
    "gaussian_overlap",
    "ggwpd_correlation",
    "ggwpd_wavefunction",
    "grid_hbar",
    "inverse_map_step",
    "iterate_map",
    "ket_norm_exponent",
    "linearized_correlation",
    "load_config",
    "manifold_point",
    "map_step",
    "newton_step",
    "offcenter_contribution",
    "offcenter_correlation",
    "packet_evaluate",
    "packets_for",
    "prepare_scenario",
    "preset",
    "propagate",
    "propagate_curve",
    "quantum_correlation",
    "read_csv",
    "residuals",
    "run_sweep",
    "saddle_contribution",
    "shearing_manifold",
    "stable_manifold",
    "unstable_manifold",
    "wavefunction_contribution",
]
