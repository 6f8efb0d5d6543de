"""Random-key decoder producing feasible schedules by construction.

Key layout (one segment per decision aspect):
  [vessel choice per role | start offset per activity | location choice per
   maintenance activity | speed choice per role | priority per activity]

Construction: vessels are picked per role with rotation repair so roles of
one activity land on distinct vessels; activities are then scheduled
serially in provisional-start order (predecessor-gated), each start pushed
forward until the predecessor gap and the assigned vessels' travel times
are respected. Per vessel, its roles chain in scheduling order, which
matches final start order. If a start window is exceeded the decoder
retries with earliest feasible starts, then with deadline ordering, then
rotates the vessel choice of the blocking activity; a bounded ladder, after
which the instance is declared unsatisfiable for these keys.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..errors import ConstructionError
from ..solver.encoding import KeyEncoding
from .evaluate import sailing_duration
from .instance import AllocInstance, Schedule, TOW


def key_length(instance: AllocInstance) -> int:
    return (2 * len(instance.roles) + 2 * len(instance.activities)
            + len(instance.maint_activities))


def _segments(instance: AllocInstance, keys: np.ndarray):
    n_r, n_a = len(instance.roles), len(instance.activities)
    n_m = len(instance.maint_activities)
    k = np.clip(np.asarray(keys, dtype=float), 0.0, 1.0 - 1e-12)
    vessel = dict(zip(instance.roles, k[:n_r]))
    start = dict(zip(instance.activities, k[n_r:n_r + n_a]))
    loc = dict(zip(instance.maint_activities, k[n_r + n_a:n_r + n_a + n_m]))
    speed = dict(zip(instance.roles, k[n_r + n_a + n_m:2 * n_r + n_a + n_m]))
    prio = dict(zip(instance.activities, k[2 * n_r + n_a + n_m:]))
    return vessel, start, loc, speed, prio


def _pick(options: Sequence, key: float) -> object:
    return options[int(key * len(options))]


def _assign_vessels(instance: AllocInstance, vessel_keys, rotation) -> dict[str, str]:
    assignment = {}
    for a in instance.activities:
        used = set()
        for r in instance.activity_roles(a):
            dom = instance.vessel_domain[r]
            if not dom:
                raise ConstructionError(f"role {r!r} has an empty vessel domain")
            base = int(vessel_keys[r] * len(dom)) + rotation.get(r, 0)
            for j in range(len(dom)):
                cand = dom[(base + j) % len(dom)]
                if cand not in used:
                    assignment[r] = cand
                    used.add(cand)
                    break
            else:
                raise ConstructionError(
                    f"activity {a!r} needs {len(instance.activity_roles(a))} distinct "
                    f"vessels but role {r!r} has none left"
                )
    return assignment


@dataclass
class _Failure:
    activity: str
    blocking_roles: tuple[str, ...]


def _schedule_starts(instance: AllocInstance, assignment: dict[str, str],
                     provisional: dict[str, int], maint_loc: dict[str, str],
                     priority: dict[str, float],
                     use_provisional: bool, deadline_order: bool):
    """Serial scheduling; returns (starts, chains) or a _Failure."""

    def start_loc(role: str) -> str:
        a = instance.parent_activity[role]
        if instance.activity_kind[a] == TOW:
            return instance.tow_start[a]
        return maint_loc[a]

    def end_loc(role: str) -> str:
        a = instance.parent_activity[role]
        if instance.activity_kind[a] == TOW:
            return instance.tow_end[a]
        return maint_loc[a]

    if deadline_order:
        rank = {a: (instance.start_window[a][1], priority[a], i)
                for i, a in enumerate(instance.activities)}
    else:
        rank = {a: (provisional[a], priority[a], i)
                for i, a in enumerate(instance.activities)}

    starts: dict[str, int] = {}
    chains: dict[str, list[str]] = {v: [] for v in instance.vessels}
    pending = set(instance.activities)
    while pending:
        ready = [a for a in pending
                 if instance.predecessor.get(a) is None
                 or instance.predecessor[a] in starts]
        a = min(ready, key=lambda b: rank[b])
        lo, hi = instance.start_window[a]
        t = max(lo, provisional[a]) if use_provisional else lo
        pred = instance.predecessor.get(a)
        if pred is not None:
            t = max(t, starts[pred] + instance.duration[pred])
        blocking = []
        for r in instance.activity_roles(a):
            chain = chains[assignment[r]]
            if chain:
                tail = chain[-1]
                ta = instance.parent_activity[tail]
                vmax = instance.max_speed(assignment[r])
                theta = sailing_duration(instance, end_loc(tail), start_loc(r), vmax)
                bound = max(starts[ta] + 1, starts[ta] + instance.duration[ta] + theta)
                if bound > t:
                    t = bound
                blocking.append(tail)
        if t > hi:
            return _Failure(a, tuple(blocking))
        starts[a] = int(t)
        for r in instance.activity_roles(a):
            chains[assignment[r]].append(r)
        pending.remove(a)
    return starts, chains


def decode(instance: AllocInstance, keys: np.ndarray) -> Schedule:
    """Total decoding of a key vector into a feasible schedule."""
    vessel_k, start_k, loc_k, speed_k, prio_k = _segments(instance, keys)

    provisional = {}
    for a in instance.activities:
        lo, hi = instance.start_window[a]
        provisional[a] = lo + int(start_k[a] * (hi - lo + 1))
    maint_loc = {a: _pick(instance.maint_locations[a], loc_k[a])
                 for a in instance.maint_activities}

    rotation: dict[str, int] = {}
    max_rotations = sum(len(instance.vessel_domain[r]) for r in instance.roles) + 1
    failure = None
    for _ in range(max_rotations):
        assignment = _assign_vessels(instance, vessel_k, rotation)
        for use_prov, by_deadline in ((True, False), (False, False), (False, True)):
            result = _schedule_starts(instance, assignment, provisional, maint_loc,
                                      prio_k, use_prov, by_deadline)
            if not isinstance(result, _Failure):
                starts, chains = result
                return _finish(instance, assignment, starts, chains, maint_loc, speed_k)
            failure = result
        # rotate the vessel choices of the blocked activity and try again
        for r in instance.activity_roles(failure.activity):
            rotation[r] = rotation.get(r, 0) + 1
        if not instance.activity_roles(failure.activity):
            break
    raise ConstructionError(
        f"no feasible schedule for these keys: activity {failure.activity!r} "
        f"cannot start inside its window (blocked by {failure.blocking_roles})"
    )


def _finish(instance, assignment, starts, chains, maint_loc, speed_k) -> Schedule:
    links = []
    speed = {}
    sequence_start = {r: 0 for r in instance.roles}
    for v, chain in chains.items():
        if not chain:
            continue
        sequence_start[chain[0]] = 1
        for r, rp in zip(chain, chain[1:]):
            links.append((r, rp))
            options = instance.speeds[v]
            speed[(r, rp)] = options[int(speed_k[r] * len(options))]
    return Schedule(
        start=starts,
        maint_location=maint_loc,
        vessel=assignment,
        links=tuple(links),
        sequence_start=sequence_start,
        speed=speed,
    )


def encode_schedule(instance: AllocInstance, schedule: Schedule) -> np.ndarray:
    """Key vector that decodes back to the given feasible schedule."""
    keys = []
    for r in instance.roles:
        dom = instance.vessel_domain[r]
        keys.append((dom.index(schedule.vessel[r]) + 0.5) / len(dom))
    for a in instance.activities:
        lo, hi = instance.start_window[a]
        keys.append((schedule.start[a] - lo + 0.5) / (hi - lo + 1))
    for a in instance.maint_activities:
        cands = instance.maint_locations[a]
        keys.append((cands.index(schedule.maint_location[a]) + 0.5) / len(cands))
    successor = dict(schedule.links)
    for r in instance.roles:
        if r in successor:
            options = instance.speeds[schedule.vessel[r]]
            idx = options.index(schedule.speed[(r, successor[r])])
            keys.append((idx + 0.5) / len(options))
        else:
            keys.append(0.0)
    order = sorted(instance.activities,
                   key=lambda a: (schedule.start[a], instance.activities.index(a)))
    rank = {a: i for i, a in enumerate(order)}
    for a in instance.activities:
        keys.append((rank[a] + 0.5) / len(instance.activities))
    return np.array(keys, dtype=float)


def alloc_encoding(instance: AllocInstance) -> KeyEncoding:
    return KeyEncoding(
        length=key_length(instance),
        decoder=lambda keys: decode(instance, keys),
        encoder=lambda schedule: encode_schedule(instance, schedule),
    )
