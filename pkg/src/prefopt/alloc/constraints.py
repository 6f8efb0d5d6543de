"""Feasibility check for allocation schedules: families g0 through g13.

Each family is evaluated independently and reports its offending tuples,
so a violation never masks another. Family summary:

  g0  domain bounds on every decision component
  g1  roles of one activity go to distinct vessels
  g2  an activity starts only after its predecessor finished
  g3  at most one successor per role
  g4  at most one predecessor per role
  g5  no self-loops
  g6  sequenced roles share a vessel
  g7  no transitions between roles of the same activity (they run in parallel)
  g8  sequenced roles are ordered by parent start time
  g9  enough travel time between consecutive roles (at the vessel's top speed)
  g10 exactly one sequence start per vessel with roles
  g11 exactly one sequence end per vessel with roles
  g12 each vessel's roles form one continuous path
  g13 link speeds come from the assigned vessel's admissible set

g10-g12 are stated per vessel; a vessel with no roles satisfies them
vacuously.
"""

from __future__ import annotations

from dataclasses import dataclass

from .evaluate import role_locations, sailing_duration
from .instance import AllocInstance, Schedule

FAMILY_NAMES = {
    0: "domain",
    1: "distinct_vessels_per_activity",
    2: "predecessor_finished",
    3: "single_successor",
    4: "single_predecessor",
    5: "no_self_loop",
    6: "same_vessel_when_sequenced",
    7: "no_links_within_activity",
    8: "sequence_follows_start_order",
    9: "travel_time_respected",
    10: "one_sequence_start_per_vessel",
    11: "one_sequence_end_per_vessel",
    12: "single_path_per_vessel",
    13: "speed_in_vessel_set",
}


@dataclass(frozen=True)
class ConstraintReport:
    violations: dict[int, tuple]  # family id -> offending tuples

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def families(self) -> tuple[int, ...]:
        return tuple(sorted(self.violations))

    def describe(self) -> list[str]:
        return [
            f"g{fam} {FAMILY_NAMES[fam]}: {len(items)} offending tuple(s)"
            for fam, items in sorted(self.violations.items())
        ]


def check_constraints(schedule: Schedule, instance: AllocInstance) -> ConstraintReport:
    v: dict[int, list] = {}

    def hit(family: int, item) -> None:
        v.setdefault(family, []).append(item)

    roles = instance.roles
    linked = set(schedule.links)
    out_deg = {r: 0 for r in roles}
    in_deg = {r: 0 for r in roles}
    for r, rp in linked:
        out_deg[r] += 1
        in_deg[rp] += 1

    # g0: domain bounds
    s_lo, s_hi = instance.speed_band
    for a in instance.activities:
        lo, hi = instance.start_window[a]
        t = schedule.start.get(a)
        if t is None or not lo <= t <= hi or int(t) != t:
            hit(0, ("start", a, t))
    for a in instance.maint_activities:
        if schedule.maint_location.get(a) not in instance.maint_locations[a]:
            hit(0, ("maint_location", a, schedule.maint_location.get(a)))
    for r in roles:
        if schedule.vessel.get(r) not in instance.vessel_domain[r]:
            hit(0, ("vessel", r, schedule.vessel.get(r)))
    for r, flag in schedule.sequence_start.items():
        if flag not in (0, 1):
            hit(0, ("sequence_start", r, flag))
    for pair in linked:
        if pair[0] not in out_deg or pair[1] not in out_deg:
            hit(0, ("link", *pair))
            continue
        s = schedule.speed.get(pair)
        if s is None or not s_lo <= s <= s_hi:
            hit(0, ("speed", *pair, s))

    # g1: within one activity, all roles on distinct vessels
    for a in instance.activities:
        rs = instance.activity_roles(a)
        for i, r in enumerate(rs):
            for rp in rs[i + 1:]:
                assigned = schedule.vessel.get(r)
                if assigned is not None and assigned == schedule.vessel.get(rp):
                    hit(1, (a, r, rp))

    # g2: predecessor finished before start (missing starts are g0 violations)
    for a in instance.activities:
        pred = instance.predecessor.get(a)
        if pred is not None and a in schedule.start and pred in schedule.start:
            gap = schedule.start[a] - (schedule.start[pred] + instance.duration[pred])
            if gap < 0:
                hit(2, (a, pred, gap))

    # g3/g4: at most one successor and predecessor
    for r in roles:
        if out_deg[r] > 1:
            hit(3, (r, out_deg[r]))
        if in_deg[r] > 1:
            hit(4, (r, in_deg[r]))

    # g5: no self-loops
    for r, rp in linked:
        if r == rp:
            hit(5, (r,))

    # g6: sequenced roles on the same vessel
    for r, rp in linked:
        if r != rp and schedule.vessel.get(r) != schedule.vessel.get(rp):
            hit(6, (r, rp))

    # g7: no links between roles of one activity
    for r, rp in linked:
        if r != rp and instance.parent_activity[r] == instance.parent_activity[rp]:
            hit(7, (r, rp))

    # g8: links follow parent start order strictly
    for r, rp in linked:
        if r not in instance.parent_activity or rp not in instance.parent_activity:
            continue
        a, ap = instance.parent_activity[r], instance.parent_activity[rp]
        if a not in schedule.start or ap not in schedule.start:
            continue
        if a != ap and not schedule.start[a] < schedule.start[ap]:
            hit(8, (r, rp, schedule.start[a], schedule.start[ap]))

    # g9: sufficient travel time at the vessel's maximum speed
    for r, rp in linked:
        if r == rp or schedule.vessel.get(r) != schedule.vessel.get(rp):
            continue
        if schedule.vessel.get(r) not in instance.speeds:
            continue  # unknown vessel: already a g0 violation
        a, ap = instance.parent_activity[r], instance.parent_activity[rp]
        if a not in schedule.start or ap not in schedule.start:
            continue
        vmax = instance.max_speed(schedule.vessel[r])
        try:
            _, end_loc = role_locations(schedule, instance, r)
            start_loc, _ = role_locations(schedule, instance, rp)
        except KeyError:
            continue  # missing maintenance location: already a g0 violation
        theta = sailing_duration(instance, end_loc, start_loc, vmax)
        shortfall = (schedule.start[a] + instance.duration[a] + theta) - schedule.start[ap]
        if shortfall > 0:
            hit(9, (r, rp, shortfall))

    # g10/g11/g12: per-vessel path structure
    for vessel in instance.vessels:
        mine = [r for r in roles if schedule.vessel.get(r) == vessel]
        if not mine:
            continue  # unused vessel: vacuously compliant
        starts = [r for r in mine if in_deg[r] == 0]
        ends = [r for r in mine if out_deg[r] == 0]
        if len(starts) != 1:
            hit(10, (vessel, tuple(starts)))
        if len(ends) != 1:
            hit(11, (vessel, tuple(ends)))
        n_links = sum(1 for r, rp in linked if schedule.vessel.get(r) == vessel)
        if n_links != max(0, len(mine) - 1):
            hit(12, (vessel, n_links, len(mine)))

    # g13: link speed from the assigned vessel's admissible set
    for r, rp in linked:
        vessel = schedule.vessel.get(r)
        if vessel not in instance.speeds:
            continue  # unknown vessel: already a g0 violation
        s = schedule.speed.get((r, rp))
        if s not in instance.speeds[vessel]:
            hit(13, (r, rp, s))

    return ConstraintReport({fam: tuple(items) for fam, items in v.items()})
