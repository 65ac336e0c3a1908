"""treeconfig: tree configurations in fractal atomic measures.

Builds finite atomic measures on IFS attractors, evaluates annulus-kernel
tree-configuration integrals (brute force and by leaf peeling), constructs
nested pigeonhole good sets with certified mass bounds, searches distance
graphs for injective tree embeddings, and runs deterministic parameter
scans that detect the viable gap interval.
"""

from .embedding import (
    EmbeddingWitness,
    FeasibilityTables,
    SearchResult,
    extract_embedding,
    feasibility_dp,
    verify_witness,
)
from .errors import (
    DegenerateRadiiError,
    EmptyRestrictionError,
    InternalConsistencyError,
    ResourceCapError,
    StageFailureError,
    TreeConfigError,
    ValidationError,
)
from .integrals import (
    IntegralResult,
    StageStats,
    chain_neighborhood_mass,
    integral_bruteforce,
    integral_peel,
)
from .kernels import (
    FieldValues,
    KernelParams,
    annulus_sums,
    convolve_field,
    field_norms,
    kernel_weight,
)
from .measures import (
    AtomicMeasure,
    FrostmanReport,
    IFSSpec,
    ball_mass,
    build_ifs_measure,
    estimate_frostman,
    restrict_measure,
)
from .pigeonhole import (
    GoodSet,
    GoodSetChain,
    LevelProfile,
    chebyshev_profile,
    good_set,
    nested_good_sets,
)
from .scan import ScanConfig, ScanReport, ScanRow, emit_report, scan_interval
from .trees import (
    PeelRound,
    PeelSchedule,
    TerminalPair,
    TreeGraph,
    compute_peel_schedule,
    path_tree,
    star_tree,
    validate_tree,
)

__version__ = "0.1.0"

__all__ = [
    "AtomicMeasure",
    "DegenerateRadiiError",
    "EmbeddingWitness",
    "EmptyRestrictionError",
    "FeasibilityTables",
    "FieldValues",
    "FrostmanReport",
    "GoodSet",
    "GoodSetChain",
    "IFSSpec",
    "IntegralResult",
    "InternalConsistencyError",
    "KernelParams",
    "LevelProfile",
    "PeelRound",
    "PeelSchedule",
    "ResourceCapError",
    "ScanConfig",
    "ScanReport",
    "ScanRow",
    "SearchResult",
    "StageFailureError",
    "StageStats",
    "TerminalPair",
    "TreeConfigError",
    "TreeGraph",
    "ValidationError",
    "annulus_sums",
    "ball_mass",
    "build_ifs_measure",
    "chain_neighborhood_mass",
    "chebyshev_profile",
    "compute_peel_schedule",
    "convolve_field",
    "emit_report",
    "estimate_frostman",
    "extract_embedding",
    "feasibility_dp",
    "field_norms",
    "good_set",
    "integral_bruteforce",
    "integral_peel",
    "kernel_weight",
    "nested_good_sets",
    "path_tree",
    "restrict_measure",
    "scan_interval",
    "star_tree",
    "validate_tree",
    "verify_witness",
]
