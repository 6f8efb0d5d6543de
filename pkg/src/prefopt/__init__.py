"""prefopt: preference-based group-decision optimization.

Performance values are mapped through actor-owned preference curves,
aggregated with a z-normalized weighted centroid, and searched with an
intergenerational genetic algorithm; a brute-force oracle validates the
search on desk-scale instances.
"""

from .aggregation import (
    ScoreTable,
    WeightMatrix,
    afine_aggregate,
    validate_weights,
    z_normalize,
)
from .curves import AffineCurve, PreferenceCurve, build_linear_curve, eval_curve
from .model import (
    Actor,
    CandidateEvaluation,
    HardConstraint,
    ProblemDefinition,
    check_acceptability,
    check_feasibility,
    evaluate_candidate,
    evaluate_capability,
)
from .solver import GaConfig, RunResult, solve

__version__ = "0.1.0"

__all__ = [
    "ScoreTable", "WeightMatrix", "afine_aggregate", "validate_weights", "z_normalize",
    "AffineCurve", "PreferenceCurve", "build_linear_curve", "eval_curve",
    "Actor", "CandidateEvaluation", "HardConstraint", "ProblemDefinition",
    "check_acceptability", "check_feasibility", "evaluate_candidate", "evaluate_capability",
    "GaConfig", "RunResult", "solve",
    "__version__",
]
