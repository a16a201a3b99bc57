"""Two-sided bounds for the three-pole pluricomplex Green function in
the bidisk, an exact finite-dimensional reduction of the corresponding
Lempert function, a numeric refutation chain for below-threshold
candidates, and the transfer of both bounds to the Euclidean ball.
"""

from .ball_transfer import (
    GapResult,
    ball_margin,
    gap_verdict,
    green_upper_in_ball,
    in_ball,
    lempert_lower_in_ball,
)
from .certificate import (
    ChainParams,
    ChainStep,
    ChainTrace,
    DisproofReport,
    Thresholds,
    check_chain,
    compute_thresholds,
    disprove_below_threshold,
)
from .disk_geometry import (
    BlaschkeProduct,
    as_closed_disk_point,
    as_disk_point,
    blaschke_eval,
    mobius,
    pseudo_dist,
)
from .errors import (
    ChainInconsistency,
    CoincidentPoint,
    ContainmentFailed,
    CounterexampleFound,
    DegenerateNodes,
    DegenerateTarget,
    InfeasibleProblem,
    InvalidDiskPoint,
    NoFeasiblePoint,
    NotInBall,
    OutsideRegime,
    PlurigapError,
    PoleHit,
    PreimageOutsideDisk,
    SectorViolation,
)
from .green_bounds import (
    BoundReport,
    green_lower_oracle,
    poletsky_disk_bound,
    sandwich,
)
from .lempert_search import (
    CandidateData,
    FeasibilityResult,
    SearchConfig,
    SearchOutcome,
    disk_residual,
    feasible,
    objective,
    search,
)
from .neil_disk import (
    NeilDisk,
    PoleConfig,
    build_neil,
    containment_check,
    eval_neil,
    green_upper_from_neil,
    in_sector,
)
from .pick_interpolation import (
    FactorizedDisk,
    SchurInterpolant,
    TwoPointProblem,
    assemble_disk,
    compute_w_values,
    pick_feasible,
    solve_two_point,
)

__version__ = "0.1.0"

__all__ = [
    "BlaschkeProduct",
    "BoundReport",
    "CandidateData",
    "ChainInconsistency",
    "ChainParams",
    "ChainStep",
    "ChainTrace",
    "CoincidentPoint",
    "ContainmentFailed",
    "CounterexampleFound",
    "DegenerateNodes",
    "DegenerateTarget",
    "DisproofReport",
    "FactorizedDisk",
    "FeasibilityResult",
    "GapResult",
    "InfeasibleProblem",
    "InvalidDiskPoint",
    "NeilDisk",
    "NoFeasiblePoint",
    "NotInBall",
    "OutsideRegime",
    "PlurigapError",
    "PoleConfig",
    "PoleHit",
    "PreimageOutsideDisk",
    "SchurInterpolant",
    "SearchConfig",
    "SearchOutcome",
    "SectorViolation",
    "Thresholds",
    "TwoPointProblem",
    "as_closed_disk_point",
    "as_disk_point",
    "assemble_disk",
    "ball_margin",
    "blaschke_eval",
    "build_neil",
    "check_chain",
    "compute_thresholds",
    "compute_w_values",
    "containment_check",
    "disk_residual",
    "disprove_below_threshold",
    "eval_neil",
    "feasible",
    "gap_verdict",
    "green_lower_oracle",
    "green_upper_from_neil",
    "green_upper_in_ball",
    "in_ball",
    "in_sector",
    "lempert_lower_in_ball",
    "mobius",
    "objective",
    "pick_feasible",
    "poletsky_disk_bound",
    "pseudo_dist",
    "sandwich",
    "search",
    "solve_two_point",
]
