"""gridfeas: feasibility and stability analysis of DC power grids with
constant-power loads.

Decides whether a demand vector is feasible, computes the unique long-term
voltage semi-stable operating point by numerical continuation, and produces
machine-checkable infeasibility certificates and feasibility-region
boundary traces.
"""

from .errors import (
    DisconnectedGraph,
    GridfeasError,
    InvalidSpec,
    LambdaNotInLambda,
    LambdaNotInLambda1,
    LoadSubgraphReducible,
    NoConvergence,
    NoCrossingFound,
    NonPositiveNu,
    NonPositiveVoltage,
    NotIrreducible,
    NotSemiStable,
    NotSingleLoad,
    NotSymmetric,
    NotTwoLoads,
    NotZMatrix,
    OracleScaleExceeded,
    StepSizeUnderflow,
)
from .feasibility import (
    BoundaryVertex,
    ContinuationTrace,
    FeasibilityVerdict,
    HalfspaceCertificate,
    LmiCertificate,
    LmiVerdict,
    RayCrossing,
    TraceSample,
    VerdictKind,
    assemble_lmi,
    boundary_scan,
    certify_infeasible,
    halfspace_value,
    ray_boundary,
    solve_operating_point,
)
from .grid import (
    GridModel,
    GridSpec,
    LineSpec,
    NodeSpec,
    build_model,
    load_grid,
    parse_grid,
    split_load_components,
    validate_connectivity,
)
from .powerflow import (
    Dissipation,
    OperatingPoint,
    OracleConfig,
    PMax,
    demand_of,
    dissipation,
    enumerate_solutions,
    eval_injection,
    jacobian,
    p_max,
    residual_of,
    solve_single_load,
)
from .report import build_analysis_report, dumps17, verify_report
from .specmat import (
    MatrixClass,
    MClass,
    PerronData,
    classify,
    is_irreducible,
    is_positive_definite,
    is_positive_semidefinite,
    is_z_matrix,
    min_real_eigenvalue,
    perron,
)
from .stability import (
    Lambda1Position,
    StabilityClass,
    StabilityParam,
    classify_point,
    h_of,
    in_lambda1,
    param_to_voltage,
    phi,
    sample_lambda1,
    voltage_to_param,
)

__version__ = "0.1.0"
