"""Brute-force reference for desk-scale instances.

Exhaustively enumerates the feasible decision space, scores every
candidate with the problem's preference structure, z-normalizes the
acceptable set jointly, and reports the true argmax plus per-criterion
extrema. No pruning: this module must stay obviously correct, because it
is the ground truth the search engine is validated against.

Enumeration order is lexicographic over the canonical decision encoding,
so first-best tie-breaking matches the solver's tie rule.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .aggregation import ScoreTable, afine_aggregate, z_normalize
from .alloc.constraints import check_constraints
from .alloc.evaluate import capability as alloc_capability
from .alloc.instance import AllocInstance, Schedule
from .alloc.problem import estimate_enumeration_size
from .errors import BudgetError, InstanceError
from .model import ProblemDefinition
from .windfarm import (
    WindfarmParams,
    decision_grid,
    evaluate_performance,
    grid_size,
    is_feasible,
)

WINDFARM_GRID_BUDGET = 1_000_000
ALLOC_BUDGET = 100_000


@dataclass(frozen=True)
class EnumerationReport:
    problem_kind: str
    candidates: tuple                      # (x, f_vector) for every feasible candidate
    total_enumerated: int
    feasible_count: int
    acceptable_count: int
    extrema: dict[str, tuple[float, float]]  # over the feasible set
    best_index: int | None                 # index into acceptable subset ordering
    best_x: object | None
    best_Z: float | None
    acceptable_indices: tuple[int, ...]    # indices into candidates
    z_scores: np.ndarray | None            # Z per acceptable candidate
    _key_to_row: dict

    def z_of(self, problem: ProblemDefinition, x) -> float:
        """Z of a candidate under this report's joint normalization.

        The candidate must be a member of the acceptable set.
        """
        key = problem.encode_x(x)
        row = self._key_to_row.get(key)
        if row is None:
            raise InstanceError("candidate is not in the oracle's acceptable set")
        return float(self.z_scores[row])

    def contains(self, problem: ProblemDefinition, x) -> bool:
        return problem.encode_x(x) in self._key_to_row


def _score_report(problem: ProblemDefinition, kind: str,
                  feasible: list, total: int, criteria: Sequence[str]) -> EnumerationReport:
    if feasible:
        fs = np.array([f for _, f in feasible], dtype=float)
        extrema = {c: (float(fs[:, i].min()), float(fs[:, i].max()))
                   for i, c in enumerate(criteria)}
    else:
        extrema = {c: (float("nan"), float("nan")) for c in criteria}

    columns = problem.columns
    thresholds = problem.thresholds_by_column()
    curve_by_column = {
        (a.actor_id, cid): curve for a in problem.actors for cid, curve in a.curves.items()
    }
    crit_index = {c: i for i, c in enumerate(criteria)}

    acceptable_indices = []
    p_rows = []
    for idx, (x, f) in enumerate(feasible):
        p = [curve_by_column[col].evaluate(f[crit_index[col[1]]]) for col in columns]
        if all(pv >= thresholds[col] for pv, col in zip(p, columns)):
            acceptable_indices.append(idx)
            p_rows.append(p)

    best_index = best_x = best_z = None
    z_scores = None
    key_to_row: dict = {}
    if p_rows:
        if len(p_rows) >= 2:
            table = ScoreTable(columns, np.array(p_rows))
            z_scores = afine_aggregate(z_normalize(table), problem.weight_matrix())
        else:
            z_scores = np.zeros(1)
        for row, idx in enumerate(acceptable_indices):
            key_to_row[problem.encode_x(feasible[idx][0])] = row
        best_row = 0
        for row in range(1, len(z_scores)):
            if z_scores[row] > z_scores[best_row]:
                best_row = row
        best_index = best_row
        best_x = feasible[acceptable_indices[best_row]][0]
        best_z = float(z_scores[best_row])

    return EnumerationReport(
        problem_kind=kind,
        candidates=tuple(feasible),
        total_enumerated=total,
        feasible_count=len(feasible),
        acceptable_count=len(p_rows),
        extrema=extrema,
        best_index=best_index,
        best_x=best_x,
        best_Z=best_z,
        acceptable_indices=tuple(acceptable_indices),
        z_scores=z_scores,
        _key_to_row=key_to_row,
    )


# --- wind farm -----------------------------------------------------------------

def enumerate_windfarm(problem: ProblemDefinition, grid_step: float) -> EnumerationReport:
    """Full cross product of the integer fleet domains and the geometry grid."""
    params: WindfarmParams = problem.parameters
    total = grid_size(grid_step)
    if total > WINDFARM_GRID_BUDGET:
        raise BudgetError(f"grid of {total} points exceeds {WINDFARM_GRID_BUDGET}")
    feasible = []
    for x in decision_grid(grid_step):
        if not is_feasible(x, params):
            continue
        feasible.append((x, evaluate_performance(x, params)))
    return _score_report(problem, "windfarm", feasible, total, problem.criteria)


# --- vessel allocation -----------------------------------------------------------

def enumerate_feasible_alloc(instance: AllocInstance) -> Iterator[tuple[Schedule, tuple]]:
    """Yield every feasible schedule with its capability vector, in
    lexicographic order of the canonical schedule encoding.

    For fixed starts, locations, and assignments, the sequencing variables
    are forced: the single-path and strict start-order constraints leave each
    vessel exactly one chain, its roles sorted by parent start time. Equal
    parent starts on one vessel admit no valid chain, so those combinations
    are skipped as infeasible.
    """
    act_index = {a: i for i, a in enumerate(instance.activities)}
    start_ranges = [range(instance.start_window[a][0], instance.start_window[a][1] + 1)
                    for a in instance.activities]
    maint = instance.maint_activities
    loc_options = [instance.maint_locations[a] for a in maint]
    role_domains = [instance.vessel_domain[r] for r in instance.roles]

    for starts in itertools.product(*start_ranges):
        start = dict(zip(instance.activities, starts))
        for locs in itertools.product(*loc_options):
            maint_location = dict(zip(maint, locs))
            for vessels in itertools.product(*role_domains):
                assignment = dict(zip(instance.roles, vessels))
                chains = {}
                tie = False
                for v in instance.vessels:
                    mine = [r for r in instance.roles if assignment[r] == v]
                    mine.sort(key=lambda r: (start[instance.parent_activity[r]],
                                             act_index[instance.parent_activity[r]]))
                    for r, rp in zip(mine, mine[1:]):
                        a, ap = instance.parent_activity[r], instance.parent_activity[rp]
                        if a != ap and start[a] == start[ap]:
                            tie = True
                    chains[v] = mine
                if tie:
                    continue
                links = []
                sequence_start = {r: 0 for r in instance.roles}
                for v, chain in chains.items():
                    if chain:
                        sequence_start[chain[0]] = 1
                        links.extend(zip(chain, chain[1:]))
                links = tuple(links)
                speed_options = [instance.speeds[assignment[r]] for r, _ in links]
                for speeds in itertools.product(*speed_options):
                    schedule = Schedule(
                        start=start,
                        maint_location=maint_location,
                        vessel=assignment,
                        links=links,
                        sequence_start=dict(sequence_start),
                        speed=dict(zip(links, speeds)),
                    )
                    if check_constraints(schedule, instance).ok:
                        yield schedule, alloc_capability(schedule, instance)


def enumerate_alloc(problem: ProblemDefinition, budget: int = ALLOC_BUDGET) -> EnumerationReport:
    """Exhaustive report over every schedule passing the constraint check."""
    instance: AllocInstance = problem.parameters
    estimate = estimate_enumeration_size(instance)
    if estimate > budget:
        raise BudgetError(f"estimated {estimate} schedules exceeds budget {budget}")
    feasible = list(enumerate_feasible_alloc(instance))
    return _score_report(problem, "alloc", feasible, estimate, problem.criteria)
