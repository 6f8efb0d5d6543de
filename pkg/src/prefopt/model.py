"""Problem container and per-candidate evaluation pipeline.

A problem bundles what the system can do (capability evaluator), what is
physically allowed (hard constraints), what the actors want (preference
curves and weights), and what they still accept (minimum preference
thresholds). Candidate evaluation runs domain -> capability ->
feasibility -> curves -> acceptability, short-circuiting on infeasibility
so hard violations never leak into the preference domain.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping

from .aggregation import ColumnKey, WeightMatrix
from .curves import AffineCurve, PreferenceCurve
from .errors import CapabilityError, DomainError, InstanceError

TIMELESS = "timeless"
FIXED_HORIZON = "fixed_horizon"
EXPLICIT_T = "explicit_t"

EQUALITY_TOL = 1e-9  # equality constraints become two opposing inequalities

CurveLike = PreferenceCurve | AffineCurve


@dataclass(frozen=True)
class HardConstraint:
    """Named inequality g(x) <= 0; positive margin means violated."""

    name: str
    margin_fn: Callable[[object], float]
    domain: bool = False  # domain constraints gate capability evaluation

    def margin(self, x) -> float:
        return float(self.margin_fn(x))


def equality_constraints(name: str, fn: Callable[[object], float],
                         tol: float = EQUALITY_TOL) -> tuple[HardConstraint, HardConstraint]:
    """h(x) = 0 represented as h <= tol and -h <= tol."""
    return (
        HardConstraint(f"{name}+", lambda x: fn(x) - tol),
        HardConstraint(f"{name}-", lambda x: -fn(x) - tol),
    )


@dataclass(frozen=True)
class Actor:
    """One decision-making stakeholder: curves and weights per criterion."""

    actor_id: str
    curves: Mapping[str, CurveLike]           # criterion id -> curve
    weights: Mapping[str, float]              # criterion id -> local weight
    thresholds: Mapping[str, float] = field(default_factory=dict)  # min acceptable P


@dataclass(frozen=True)
class ProblemDefinition:
    """The full design-decision problem over a decision vector x."""

    kind: str
    criteria: tuple[str, ...]                 # criterion ids, index-aligned with capability output
    capability: Callable[[object], tuple[float, ...]]
    hard_constraints: tuple[HardConstraint, ...]
    actors: tuple[Actor, ...]
    parameters: object = None                 # opaque exogenous bundle
    time_mode: str = TIMELESS
    horizon: float | None = None
    encode_x: Callable[[object], tuple] = tuple  # canonical, lexicographically ordered encoding

    def __post_init__(self):
        seen = set()
        for actor in self.actors:
            if actor.actor_id in seen:
                raise InstanceError(f"duplicate actor id {actor.actor_id!r}")
            seen.add(actor.actor_id)
            for cid in list(actor.curves) + list(actor.weights) + list(actor.thresholds):
                if cid not in self.criteria:
                    raise InstanceError(
                        f"actor {actor.actor_id!r} references unknown criterion {cid!r}"
                    )
            for cid, p_bar in actor.thresholds.items():
                # affine-transformed columns carry thresholds on the transformed scale
                if isinstance(actor.curves.get(cid), PreferenceCurve) \
                        and not 0.0 <= p_bar <= 100.0:
                    raise InstanceError(f"threshold {p_bar} outside [0, 100]")
            for cid, w in actor.weights.items():
                if w != 0.0 and cid not in actor.curves:
                    raise InstanceError(
                        f"actor {actor.actor_id!r} weights criterion {cid!r} but defines no curve"
                    )

    @property
    def columns(self) -> tuple[ColumnKey, ...]:
        """Scored (actor, criterion) pairs: every pair with a declared curve."""
        return tuple(
            (a.actor_id, cid) for a in self.actors for cid in self.criteria if cid in a.curves
        )

    def weight_matrix(self) -> WeightMatrix:
        entries = {
            (a.actor_id, cid): w
            for a in self.actors
            for cid, w in a.weights.items()
            if w != 0.0
        }
        return WeightMatrix(entries)

    def thresholds_by_column(self) -> dict[ColumnKey, float]:
        return {
            (a.actor_id, cid): a.thresholds.get(cid, 0.0)
            for a in self.actors
            for cid in self.criteria
            if cid in a.curves
        }


@dataclass(frozen=True)
class FeasibilityReport:
    violations: tuple[tuple[str, float], ...]  # (constraint name, positive margin)

    @property
    def feasible(self) -> bool:
        return not self.violations

    def names(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.violations)


@dataclass(frozen=True)
class AcceptabilityReport:
    violations: tuple[tuple[ColumnKey, float], ...]  # (column, P - P_bar margin, negative)

    @property
    def acceptable(self) -> bool:
        return not self.violations


@dataclass(frozen=True)
class CandidateEvaluation:
    x: object
    f_values: tuple[float, ...] | None
    p_values: dict[ColumnKey, float] | None   # present only when feasible
    feasibility: FeasibilityReport
    acceptability: AcceptabilityReport | None
    clamped_columns: tuple[ColumnKey, ...] = ()

    @property
    def feasible(self) -> bool:
        return self.feasibility.feasible

    @property
    def acceptable(self) -> bool:
        return self.acceptability is not None and self.acceptability.acceptable


def evaluate_capability(problem: ProblemDefinition, x) -> tuple[float, ...]:
    """Performance vector F(x, y); raises DomainError outside declared bounds."""
    for c in problem.hard_constraints:
        if c.domain and c.margin(x) > 0.0:
            raise DomainError(f"domain bound violated: {c.name}")
    f = tuple(float(v) for v in problem.capability(x))
    if len(f) != len(problem.criteria):
        raise CapabilityError(
            f"capability returned {len(f)} values for {len(problem.criteria)} criteria"
        )
    return f


def check_feasibility(problem: ProblemDefinition, x) -> FeasibilityReport:
    """Evaluate every hard constraint; feasible iff no positive margin."""
    violations = []
    for c in problem.hard_constraints:
        m = c.margin(x)
        if m > 0.0:
            violations.append((c.name, m))
    return FeasibilityReport(tuple(violations))


def check_acceptability(p_values: Mapping[ColumnKey, float],
                        thresholds: Mapping[ColumnKey, float]) -> AcceptabilityReport:
    """List every (actor, criterion) whose preference falls below its threshold.

    The boundary P == P_bar is acceptable.
    """
    violations = []
    for key, p_bar in thresholds.items():
        p = p_values[key]
        if p < p_bar:
            violations.append((key, p - p_bar))
    return AcceptabilityReport(tuple(violations))


def evaluate_candidate(problem: ProblemDefinition, x) -> CandidateEvaluation:
    """Full pipeline for one candidate; infeasible candidates carry no scores."""
    feasibility = check_feasibility(problem, x)
    if not feasibility.feasible:
        return CandidateEvaluation(x, None, None, feasibility, None)
    f = evaluate_capability(problem, x)
    by_criterion = dict(zip(problem.criteria, f))
    p_values: dict[ColumnKey, float] = {}
    clamped = []
    for actor in problem.actors:
        for cid, curve in actor.curves.items():
            p, was_clamped = curve.evaluate_flagged(by_criterion[cid])
            p_values[(actor.actor_id, cid)] = p
            if was_clamped:
                clamped.append((actor.actor_id, cid))
    acceptability = check_acceptability(p_values, problem.thresholds_by_column())
    return CandidateEvaluation(x, f, p_values, feasibility, acceptability, tuple(clamped))


# --- capability registry -----------------------------------------------------
#
# Built-in demo problems register a builder under a kind name so problem files
# can instantiate them without this module importing any demo code.

_BUILDERS: dict[str, Callable] = {}


def register_problem_kind(kind: str, builder: Callable) -> None:
    _BUILDERS[kind] = builder


def problem_builder(kind: str) -> Callable:
    try:
        return _BUILDERS[kind]
    except KeyError:
        raise InstanceError(
            f"unknown problem kind {kind!r}; registered: {sorted(_BUILDERS)}"
        ) from None


def registered_kinds() -> tuple[str, ...]:
    return tuple(sorted(_BUILDERS))
