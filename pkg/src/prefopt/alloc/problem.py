"""Vessel-allocation demo wired into the generic problem container.

Two actors with opposed interests: operations weights mobilisation/standby
cost (f2), commercial weights portfolio make-span (f4). Both prefer less,
so the default curves are descending linear between the per-criterion
extrema of the feasible schedule space.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from ..curves import build_linear_curve
from ..errors import DegenerateIntervalError
from ..model import Actor, HardConstraint, ProblemDefinition, register_problem_kind
from .constraints import FAMILY_NAMES, check_constraints
from .decoder import decode, key_length
from .evaluate import capability
from .instance import AllocInstance, Schedule

CRITERIA = ("distance", "cost", "fuel", "makespan")

DEFAULT_WEIGHTS = {
    ("operations", "cost"): 0.5,
    ("commercial", "makespan"): 0.5,
}

ENUMERATION_BUDGET = 100_000


@dataclass(frozen=True)
class AnchorReport:
    bounds: Mapping[str, tuple[float, float]]
    method: str          # "enumeration" | "sampling"
    n: int               # candidates enumerated or samples drawn


def estimate_enumeration_size(instance: AllocInstance) -> int:
    """Upper bound on schedules the exhaustive oracle would visit."""
    size = 1
    for a in instance.activities:
        lo, hi = instance.start_window[a]
        size *= hi - lo + 1
    for a in instance.maint_activities:
        size *= len(instance.maint_locations[a])
    for r in instance.roles:
        size *= max(1, len(instance.vessel_domain[r]))
    max_speeds = max(len(instance.speeds[v]) for v in instance.vessels)
    size *= max_speeds ** max(0, len(instance.roles) - 1)
    return size


def preference_anchors(instance: AllocInstance, *,
                       budget: int = ENUMERATION_BUDGET,
                       sample_size: int = 2000,
                       rng_seed: int = 0) -> AnchorReport:
    """Per-criterion (f_min, f_max): exact extrema where enumeration is
    tractable, otherwise bounds from decoded random samples."""
    if estimate_enumeration_size(instance) <= budget:
        from ..oracle import enumerate_feasible_alloc  # deferred: oracle imports this package
        rows = list(enumerate_feasible_alloc(instance))
        fs = np.array([f for _, f in rows]) if rows else np.zeros((0, len(CRITERIA)))
        n = len(rows)
        method = "enumeration"
    else:
        rng = np.random.default_rng(rng_seed)
        samples = [decode(instance, rng.random(key_length(instance)))
                   for _ in range(sample_size)]
        fs = np.array([capability(s, instance) for s in samples])
        n = sample_size
        method = "sampling"
    if len(fs) == 0:
        raise DegenerateIntervalError("no feasible schedule: cannot anchor preference curves")
    bounds = {c: (float(fs[:, i].min()), float(fs[:, i].max()))
              for i, c in enumerate(CRITERIA)}
    return AnchorReport(bounds, method, n)


def _family_constraints(instance: AllocInstance) -> tuple[HardConstraint, ...]:
    # one report per candidate shared across the 14 family margins
    memo: dict = {"key": None, "report": None}

    def report_for(schedule: Schedule):
        key = schedule.sort_key(instance)
        if memo["key"] != key:
            memo["key"] = key
            memo["report"] = check_constraints(schedule, instance)
        return memo["report"]

    def margin(family: int):
        return lambda s: float(len(report_for(s).violations.get(family, ())))

    return tuple(
        HardConstraint(f"g{fam}_{FAMILY_NAMES[fam]}", margin(fam), domain=(fam == 0))
        for fam in sorted(FAMILY_NAMES)
    )


def build_problem(instance: AllocInstance | None = None, *,
                  weights: Mapping[tuple[str, str], float] | None = None,
                  thresholds: Mapping[tuple[str, str], float] | None = None,
                  bounds: Mapping[str, tuple[float, float]] | None = None,
                  ) -> ProblemDefinition:
    from .instance import fixture_instance
    instance = instance or fixture_instance()
    if bounds is None:
        bounds = preference_anchors(instance).bounds
    weights = dict(weights) if weights is not None else dict(DEFAULT_WEIGHTS)
    thresholds = dict(thresholds or {})

    curves = {}
    for c in CRITERIA:
        f_min, f_max = bounds[c]
        if not f_min < f_max:
            raise DegenerateIntervalError(f"criterion {c!r} is constant over the schedule space")
        curves[c] = build_linear_curve(f_min, f_max, ascending=False)

    actors = []
    for k in sorted({a for a, _ in weights}):
        local = {c: w for (ak, c), w in weights.items() if ak == k}
        actors.append(Actor(
            actor_id=k,
            curves={c: curves[c] for c in local},
            weights=local,
            thresholds={c: thresholds.get((k, c), 0.0) for c in local},
        ))

    return ProblemDefinition(
        kind="alloc",
        criteria=CRITERIA,
        capability=lambda s: capability(s, instance),
        hard_constraints=_family_constraints(instance),
        actors=tuple(actors),
        parameters=instance,
        encode_x=lambda s: s.sort_key(instance),
    )


register_problem_kind("alloc", build_problem)
