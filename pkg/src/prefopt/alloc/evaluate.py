"""Sailing/cost helpers and the four capability functions.

f1 mobilisation distance, f2 mobilisation + standby cost, f3 fuel
consumption, f4 portfolio make-span. All transition sums run over the
sequenced role pairs only.
"""

from __future__ import annotations

import math

from ..errors import DomainError, InstanceError
from .instance import MAINT, TOW, AllocInstance, Schedule

_CEIL_EPS = 1e-9


def sailing_duration(instance: AllocInstance, origin: str, dest: str, speed: float) -> int:
    """Whole sailing days: ceil(distance / (24 * speed))."""
    if speed <= 0:
        raise DomainError(f"sailing speed must be positive, got {speed}")
    d = instance.distance(origin, dest)
    return max(0, math.ceil(d / (24.0 * speed) - _CEIL_EPS))


def role_locations(schedule: Schedule, instance: AllocInstance, role: str) -> tuple[str, str]:
    """(start, end) location of a role: towing endpoints are fixed parameters,
    maintenance happens in place at the chosen location."""
    a = instance.parent_activity[role]
    kind = instance.activity_kind.get(a)
    if kind == TOW:
        return instance.tow_start[a], instance.tow_end[a]
    if kind == MAINT:
        loc = schedule.maint_location[a]
        return loc, loc
    raise InstanceError(f"activity {a!r} is neither towing nor maintenance")


def transition_time(schedule: Schedule, instance: AllocInstance, r: str, rp: str) -> int:
    """Days between the end of r's parent activity and the start of rp's."""
    a, ap = instance.parent_activity[r], instance.parent_activity[rp]
    return schedule.start[ap] - (schedule.start[a] + instance.duration[a])


def fuel_rate_at(instance: AllocInstance, vessel: str, speed: float) -> float:
    try:
        return instance.fuel_rate[vessel][speed]
    except KeyError:
        raise InstanceError(
            f"vessel {vessel!r} has no fuel rate for speed {speed}"
        ) from None


def transition_cost(instance: AllocInstance, vessel: str, origin: str, dest: str,
                    speed: float, delta: float) -> float:
    """Cost to move a vessel between consecutive roles.

    Full mobilisation rate plus fuel while sailing, discounted standby rate
    over the rest of the transition gap.
    """
    theta = sailing_duration(instance, origin, dest, speed)
    mob = instance.mob_rate[vessel]
    standby = instance.standby_discount[vessel] * mob
    fuel = instance.fuel_price[vessel] * fuel_rate_at(instance, vessel, speed)
    return theta * (mob + fuel - standby) + standby * delta


def capability(schedule: Schedule, instance: AllocInstance) -> tuple[float, float, float, float]:
    """(f1, f2, f3, f4) for one schedule."""
    f1 = 0.0
    f2 = 0.0
    f3 = 0.0
    for r, rp in schedule.links:
        _, end_loc = role_locations(schedule, instance, r)
        start_loc, _ = role_locations(schedule, instance, rp)
        v = schedule.vessel[r]
        s = schedule.speed[(r, rp)]
        delta = transition_time(schedule, instance, r, rp)
        f1 += instance.distance(end_loc, start_loc)
        f2 += transition_cost(instance, v, end_loc, start_loc, s, delta)
        f3 += fuel_rate_at(instance, v, s) * sailing_duration(instance, end_loc, start_loc, s)
    ends = [schedule.start[a] + instance.duration[a] for a in instance.activities]
    starts = [schedule.start[a] for a in instance.activities]
    f4 = float(max(ends) - min(starts))
    return (f1, f2, f3, f4)
