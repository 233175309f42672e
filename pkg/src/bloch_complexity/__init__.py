"""Geometric quality metrics of two-level quantum evolutions on the Bloch sphere."""

from .complexity import (
    ComplexityReport,
    Shape,
    VolumeReport,
    accessed_volume,
    accessible_volume,
    classify_shape,
    complexity,
    complexity_length_scale,
    complexity_report,
    instantaneous_volume,
    volume_profile,
)
from .curvature import (
    CurvatureSample,
    curvature_oracle,
    curvature_profile,
    curvature_stationary,
    curvature_timevarying,
)
from .errors import *  # noqa: F401,F403
from .metrics import (
    EfficiencyProfile,
    efficiency_profile,
    energy_uncertainty,
    geodesic_efficiency,
    path_length,
    spectral_norm,
    speed_efficiency,
    unit_efficiency_hamiltonian,
)
from .propagation import (
    PropagationConfig,
    evolve,
    propagate_numeric,
    propagate_stationary,
    trajectory,
    travel_time,
    unwrap_angles,
)
from .scenarios import (
    FIXTURES,
    FamilySpec,
    MetricReport,
    analyze,
    analyze_transfer,
    family_axis,
    family_hamiltonian,
    run_fixture,
    sweep_alpha,
)
from .states import (
    AngleTrack,
    BlochVector,
    FieldSpec,
    PureState,
    SphericalAngles,
    Trajectory,
    angles_from_state,
    bloch_from_state,
    fs_geodesic_distance,
    infidelity,
    physically_equal,
    state_from_angles,
    state_from_bloch,
)

__version__ = "0.1.0"
