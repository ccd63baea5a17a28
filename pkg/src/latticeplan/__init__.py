"""Lattice-based deterministic sample sets with completeness guarantees,
plus an implicit A* planner for multi-disc worlds built on them."""

from .completeness import (
    CompletenessParams,
    NeighborTemplate,
    SampleSet,
    build_sample_set,
    derive_params,
    neighbor_template,
)
from .complexity import (
    ComplexityReport,
    annuli_gamma_oracle,
    ball_volume,
    cc_bounds,
    exact_cc,
    exact_sample_complexity,
    leading_sample_term,
    reports_to_csv,
    sweep_report,
    theta_bar,
    xi,
    zeta,
)
from .geometry import (
    Circle,
    ClearanceResult,
    Polygon,
    RobotTeam,
    Scenario,
    Workspace,
    config_clearance,
    cspace_box,
    is_config_free,
    is_segment_free,
)
from .lattices import (
    CapacityError,
    Family,
    LatticePoint,
    LatticeSpec,
    build_embedding_T,
    build_generator,
    build_spec,
    covering_radius,
    enumerate_ball,
    enumerate_box,
    householder_P,
    quad_norm,
)
from .planner import (
    PlannerConfig,
    PlanOutcome,
    ScenarioError,
    SearchStats,
    matched_count,
    plan_glo,
    plan_loc,
    r_rnd,
    random_samples,
    select_delta,
)
from .scenario import ResultFile, ScenarioFile, parse_scenario, serialize_scenario

__version__ = "0.1.0"
