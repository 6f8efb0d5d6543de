"""Vessel-allocation instance data and schedule representation.

An instance bundles the sets (vessels, activities, roles, locations) and
the exogenous parameter tables: activity durations and start windows,
towing endpoints, candidate maintenance locations, precedence, role
parents and vessel domains, the sailing-distance matrix, and per-vessel
mobilisation rates, fuel tables, admissible speeds, fuel prices, and
standby discounts.

Time is integer days throughout: sailing durations are day-ceilinged, so
integer start times keep every temporal check exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from ..errors import InstanceError

TOW = "tow"
MAINT = "maint"


@dataclass(frozen=True)
class AllocInstance:
    vessels: tuple[str, ...]
    activities: tuple[str, ...]
    activity_kind: Mapping[str, str]                  # tow | maint
    roles: tuple[str, ...]
    locations: tuple[str, ...]
    duration: Mapping[str, int]                       # days per activity
    start_window: Mapping[str, tuple[int, int]]       # inclusive day window
    tow_start: Mapping[str, str]                      # towing activity -> origin
    tow_end: Mapping[str, str]                        # towing activity -> destination
    maint_locations: Mapping[str, tuple[str, ...]]    # maintenance activity -> candidates
    predecessor: Mapping[str, str | None]
    parent_activity: Mapping[str, str]                # role -> activity
    vessel_domain: Mapping[str, tuple[str, ...]]      # role -> admissible vessels
    distance_nm: Mapping[tuple[str, str], float]
    mob_rate: Mapping[str, float]                     # currency per day per vessel
    fuel_rate: Mapping[str, Mapping[float, float]]    # vessel -> speed -> tonnes per day
    speeds: Mapping[str, tuple[float, ...]]           # admissible speeds, ascending
    fuel_price: Mapping[str, float]
    standby_discount: Mapping[str, float]             # in [0, 1]

    def __post_init__(self):
        self.validate()

    # -- derived ---------------------------------------------------------------

    @property
    def tow_activities(self) -> tuple[str, ...]:
        return tuple(a for a in self.activities if self.activity_kind[a] == TOW)

    @property
    def maint_activities(self) -> tuple[str, ...]:
        return tuple(a for a in self.activities if self.activity_kind[a] == MAINT)

    def activity_roles(self, a: str) -> tuple[str, ...]:
        return tuple(r for r in self.roles if self.parent_activity[r] == a)

    def max_speed(self, v: str) -> float:
        return self.speeds[v][-1]

    def distance(self, origin: str, dest: str) -> float:
        return self.distance_nm[(origin, dest)]

    # -- validation --------------------------------------------------------------

    def validate(self) -> None:
        locs = set(self.locations)
        acts = set(self.activities)
        for a in self.activities:
            kind = self.activity_kind.get(a)
            if kind not in (TOW, MAINT):
                raise InstanceError(f"activity {a!r} has unknown kind {kind!r}")
            if self.duration.get(a) is None or self.duration[a] < 0:
                raise InstanceError(f"activity {a!r} needs a nonnegative duration")
            if int(self.duration[a]) != self.duration[a]:
                raise InstanceError(f"activity {a!r} duration must be whole days")
            lo, hi = self.start_window[a]
            if not (0 <= lo <= hi) or int(lo) != lo or int(hi) != hi:
                raise InstanceError(f"activity {a!r} has invalid start window [{lo}, {hi}]")
            if kind == TOW:
                if self.tow_start.get(a) not in locs or self.tow_end.get(a) not in locs:
                    raise InstanceError(f"towing activity {a!r} needs start and end locations")
            else:
                cands = self.maint_locations.get(a, ())
                if not cands or any(l not in locs for l in cands):
                    raise InstanceError(f"maintenance activity {a!r} needs candidate locations")
            pred = self.predecessor.get(a)
            if pred is not None and pred not in acts:
                raise InstanceError(f"activity {a!r} has unknown predecessor {pred!r}")
        self._check_predecessors_acyclic()
        for r in self.roles:
            if self.parent_activity.get(r) not in acts:
                raise InstanceError(f"role {r!r} has no parent activity")
            dom = self.vessel_domain.get(r)
            if dom is None or any(v not in self.vessels for v in dom):
                raise InstanceError(f"role {r!r} has an invalid vessel domain")
        for l in self.locations:
            for m in self.locations:
                d = self.distance_nm.get((l, m))
                if d is None or d < 0:
                    raise InstanceError(f"distance {l!r}->{m!r} missing or negative")
                if l == m and d != 0:
                    raise InstanceError(f"distance {l!r}->{l!r} must be zero")
        for v in self.vessels:
            if self.mob_rate.get(v, -1) < 0:
                raise InstanceError(f"vessel {v!r} needs a nonnegative mobilisation rate")
            spd = self.speeds.get(v, ())
            if not spd or any(s <= 0 for s in spd) or list(spd) != sorted(spd):
                raise InstanceError(f"vessel {v!r} needs ascending positive speeds")
            for s in spd:
                if self.fuel_rate.get(v, {}).get(s, -1) < 0:
                    raise InstanceError(f"vessel {v!r} misses a fuel rate for speed {s}")
            if self.fuel_price.get(v, -1) < 0:
                raise InstanceError(f"vessel {v!r} needs a nonnegative fuel price")
            if not 0.0 <= self.standby_discount.get(v, -1) <= 1.0:
                raise InstanceError(f"vessel {v!r} standby discount must lie in [0, 1]")

    def _check_predecessors_acyclic(self) -> None:
        for a in self.activities:
            seen = set()
            node = a
            while node is not None:
                if node in seen:
                    raise InstanceError(f"predecessor cycle through activity {a!r}")
                seen.add(node)
                node = self.predecessor.get(node)

    # -- global speed band -------------------------------------------------------

    @property
    def speed_band(self) -> tuple[float, float]:
        all_speeds = [s for v in self.vessels for s in self.speeds[v]]
        return (min(all_speeds), max(all_speeds))


@dataclass(frozen=True)
class Schedule:
    """One allocation decision: starts, locations, assignment, sequencing, speeds."""

    start: Mapping[str, int]                          # x1: activity -> start day
    maint_location: Mapping[str, str]                 # x2: maintenance activity -> location
    vessel: Mapping[str, str]                         # x3: role -> vessel
    links: tuple[tuple[str, str], ...]                # x4: (role, successor role) pairs
    sequence_start: Mapping[str, int]                 # x5: role -> 1 if first in sequence
    speed: Mapping[tuple[str, str], float]            # x6: link -> sailing speed

    def sort_key(self, instance: AllocInstance) -> tuple:
        """Canonical lexicographic encoding; total order over schedules.

        Missing or unknown entries map to -1 sentinels so malformed schedules
        still have a stable key (their domain violations are reported by the
        constraint checker, not here).
        """
        role_idx = {r: i for i, r in enumerate(instance.roles)}
        loc_idx = {l: i for i, l in enumerate(instance.locations)}
        vessel_idx = {v: i for i, v in enumerate(instance.vessels)}
        pairs = sorted(((role_idx.get(r, -1), role_idx.get(rp, -1)), (r, rp))
                       for r, rp in self.links)
        return (
            tuple(int(self.start.get(a, -1)) for a in instance.activities),
            tuple(loc_idx.get(self.maint_location.get(a), -1)
                  for a in instance.maint_activities),
            tuple(vessel_idx.get(self.vessel.get(r), -1) for r in instance.roles),
            tuple(ip for ip, _ in pairs),
            tuple(float(self.speed.get(np, -1.0)) for _, np in pairs),
        )

    def to_json_dict(self) -> dict:
        return {
            "start": {a: int(t) for a, t in sorted(self.start.items())},
            "maint_location": dict(sorted(self.maint_location.items())),
            "vessel": dict(sorted(self.vessel.items())),
            "links": [list(pair) for pair in sorted(self.links)],
            "sequence_start": {r: int(b) for r, b in sorted(self.sequence_start.items())},
            "speed": [[r, rp, float(s)] for (r, rp), s in sorted(self.speed.items())],
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "Schedule":
        return cls(
            start={a: int(t) for a, t in d["start"].items()},
            maint_location=dict(d["maint_location"]),
            vessel=dict(d["vessel"]),
            links=tuple((r, rp) for r, rp in d["links"]),
            sequence_start={r: int(b) for r, b in d["sequence_start"].items()},
            speed={(r, rp): float(s) for r, rp, s in d["speed"]},
        )


def _symmetric_distances(locations: Sequence[str],
                         pairs: Mapping[tuple[str, str], float]) -> dict:
    out = {}
    for l in locations:
        for m in locations:
            if l == m:
                out[(l, m)] = 0.0
            elif (l, m) in pairs:
                out[(l, m)] = float(pairs[(l, m)])
            else:
                out[(l, m)] = float(pairs[(m, l)])
    return out


def fixture_instance() -> AllocInstance:
    """Desk-scale instance: 2 vessels, 3 activities (2 towing + 1 maintenance),
    4 roles, 4 locations. Small enough for exhaustive enumeration."""
    locations = ("l0", "l1", "l2", "l3")
    return AllocInstance(
        vessels=("v0", "v1"),
        activities=("a0", "a1", "a2"),
        activity_kind={"a0": TOW, "a1": TOW, "a2": MAINT},
        roles=("r0", "r1", "r2", "r3"),
        locations=locations,
        duration={"a0": 3, "a1": 2, "a2": 4},
        start_window={"a0": (0, 3), "a1": (4, 8), "a2": (5, 12)},
        tow_start={"a0": "l0", "a1": "l1"},
        tow_end={"a0": "l1", "a1": "l2"},
        maint_locations={"a2": ("l2", "l3")},
        predecessor={"a0": None, "a1": "a0", "a2": None},
        parent_activity={"r0": "a0", "r1": "a1", "r2": "a1", "r3": "a2"},
        vessel_domain={r: ("v0", "v1") for r in ("r0", "r1", "r2", "r3")},
        distance_nm=_symmetric_distances(locations, {
            ("l0", "l1"): 120.0,
            ("l0", "l2"): 240.0,
            ("l0", "l3"): 360.0,
            ("l1", "l2"): 120.0,
            ("l1", "l3"): 240.0,
            ("l2", "l3"): 96.0,
        }),
        mob_rate={"v0": 1000.0, "v1": 1400.0},
        fuel_rate={"v0": {5.0: 2.0, 10.0: 5.0}, "v1": {8.0: 3.0, 12.0: 7.0}},
        speeds={"v0": (5.0, 10.0), "v1": (8.0, 12.0)},
        fuel_price={"v0": 500.0, "v1": 450.0},
        standby_discount={"v0": 0.4, "v1": 0.5},
    )


def stress_instance() -> AllocInstance:
    """Larger instance for performance smoke tests only (not oracle-tractable)."""
    locations = tuple(f"p{i}" for i in range(6))
    vessels = tuple(f"s{i}" for i in range(4))
    activities, kinds, durations, windows = [], {}, {}, {}
    tow_start, tow_end, maint_locs, pred = {}, {}, {}, {}
    parent, domains = {}, {}
    roles = []
    for i in range(8):
        a = f"job{i}"
        activities.append(a)
        durations[a] = 2 + (i % 3)
        windows[a] = (2 * i, 2 * i + 14)
        pred[a] = f"job{i - 1}" if i % 4 == 3 else None
        if i % 3 == 2:
            kinds[a] = MAINT
            maint_locs[a] = (locations[i % 6], locations[(i + 2) % 6])
        else:
            kinds[a] = TOW
            tow_start[a] = locations[i % 6]
            tow_end[a] = locations[(i + 1) % 6]
        n_roles = 2 if i % 4 == 0 else 1
        for j in range(n_roles):
            r = f"job{i}_r{j}"
            roles.append(r)
            parent[r] = a
            domains[r] = vessels
    pairs = {}
    for i, l in enumerate(locations):
        for j, m in enumerate(locations):
            if i < j:
                pairs[(l, m)] = 60.0 * abs(i - j)
    return AllocInstance(
        vessels=vessels,
        activities=tuple(activities),
        activity_kind=kinds,
        roles=tuple(roles),
        locations=locations,
        duration=durations,
        start_window=windows,
        tow_start=tow_start,
        tow_end=tow_end,
        maint_locations=maint_locs,
        predecessor=pred,
        parent_activity=parent,
        vessel_domain=domains,
        distance_nm=_symmetric_distances(locations, pairs),
        mob_rate={v: 900.0 + 150.0 * i for i, v in enumerate(vessels)},
        fuel_rate={v: {6.0: 2.5, 9.0: 4.0, 13.0: 6.5} for v in vessels},
        speeds={v: (6.0, 9.0, 13.0) for v in vessels},
        fuel_price={v: 480.0 for v in vessels},
        standby_discount={v: 0.5 for v in vessels},
    )
