"""Floating wind-farm installation planning demo.

Decision vector: fleet composition (small vessels, large vessels, crane
barges) plus anchor geometry (diameter, penetration length). Four
performance criteria: installation duration, total cost, fleet
alternative-deployment risk, and CO2 emissions. Two actors split the
weights: the energy service provider cares about duration and emissions,
the marine contractor about cost and fleet utilization.

The published duration model is an external discrete-event simulation;
here it is replaced by a deterministic cycle surrogate (load up to deck
capacity, fixed transit, install at rate, anchors shared pro-rata to
installation rate) that keeps duration coupled to cost and emissions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

from .curves import build_linear_curve
from .errors import CapabilityError, DegenerateIntervalError, InstanceError
from .model import Actor, HardConstraint, ProblemDefinition, register_problem_kind
from .solver.encoding import grid_axis

CRITERIA = ("duration", "cost", "utilization", "emissions")

# Table-driven domain bounds: (name, lo, hi, is_integer)
DOMAIN = (
    ("small_vessels", 0, 3, True),
    ("large_vessels", 0, 2, True),
    ("crane_barges", 0, 2, True),
    ("anchor_diameter", 1.5, 4.0, False),
    ("anchor_penetration", 2.0, 8.0, False),
)

_CEIL_EPS = 1e-9


@dataclass(frozen=True)
class WindfarmDecision:
    small_vessels: int
    large_vessels: int
    crane_barges: int
    anchor_diameter: float
    anchor_penetration: float

    def astuple(self) -> tuple:
        return (self.small_vessels, self.large_vessels, self.crane_barges,
                self.anchor_diameter, self.anchor_penetration)

    @classmethod
    def from_tuple(cls, x: Sequence[float]) -> "WindfarmDecision":
        return cls(int(round(x[0])), int(round(x[1])), int(round(x[2])),
                   float(x[3]), float(x[4]))

    @property
    def fleet_counts(self) -> tuple[int, int, int]:
        return (self.small_vessels, self.large_vessels, self.crane_barges)


@dataclass(frozen=True)
class VesselClassSpec:
    name: str
    install_rate: float        # anchors per day
    deck_capacity: int         # anchors on deck per load
    day_rate: float            # currency per day
    emission_rate: float       # tCO2 per day
    alt_deployment_prob: float  # chance the vessel was better used elsewhere

    def __post_init__(self):
        if self.install_rate < 0 or self.deck_capacity <= 0 or self.day_rate < 0 \
                or self.emission_rate < 0 or not 0.0 <= self.alt_deployment_prob <= 1.0:
            raise InstanceError(f"invalid vessel class spec {self.name!r}")


@dataclass(frozen=True)
class WindfarmParams:
    n_anchors: int
    transit_time_days: float
    working_force_kn: float          # F_a
    resistance_coeff: float          # R_a = coeff * diameter * penetration**2
    anchor_cost_coeff: float         # unit cost = coeff * diameter * penetration
    small: VesselClassSpec
    large: VesselClassSpec
    barge: VesselClassSpec

    def __post_init__(self):
        if self.n_anchors <= 0:
            raise InstanceError("n_anchors must be positive")
        if self.transit_time_days < 0 or self.working_force_kn < 0:
            raise InstanceError("negative transit time or working force")

    def classes(self) -> tuple[VesselClassSpec, VesselClassSpec, VesselClassSpec]:
        return (self.small, self.large, self.barge)


def default_params() -> WindfarmParams:
    """Desk-scale fixture parameters (documented units: days, kN, tCO2)."""
    return WindfarmParams(
        n_anchors=48,
        transit_time_days=1.0,
        working_force_kn=1500.0,
        resistance_coeff=10.0,
        anchor_cost_coeff=180.0,
        small=VesselClassSpec("small", install_rate=2.0, deck_capacity=12,
                              day_rate=5000.0, emission_rate=4.0, alt_deployment_prob=0.10),
        large=VesselClassSpec("large", install_rate=4.0, deck_capacity=24,
                              day_rate=11000.0, emission_rate=9.0, alt_deployment_prob=0.25),
        barge=VesselClassSpec("barge", install_rate=3.0, deck_capacity=18,
                              day_rate=8000.0, emission_rate=6.0, alt_deployment_prob=0.15),
    )


def _fleet(x: WindfarmDecision, params: WindfarmParams) -> list[VesselClassSpec]:
    counts = x.fleet_counts
    fleet = []
    for spec, count in zip(params.classes(), counts):
        fleet.extend([spec] * count)
    return fleet


def simulate_installation(x: WindfarmDecision, params: WindfarmParams
                          ) -> tuple[float, list[tuple[str, float]]]:
    """Cycle surrogate for the installation campaign.

    Anchors are shared across the fleet pro-rata to installation rate; each
    vessel then works in load/transit/install cycles (batch limited by deck
    capacity, one fixed transit per cycle). Returns total duration f1 (days,
    the slowest vessel) and per-vessel busy times.
    """
    fleet = _fleet(x, params)
    total_rate = sum(v.install_rate for v in fleet)
    if not fleet or total_rate <= 0.0:
        raise CapabilityError("fleet has zero installation capacity")
    busy: list[tuple[str, float]] = []
    for v in fleet:
        share = params.n_anchors * v.install_rate / total_rate
        cycles = math.ceil(share / v.deck_capacity - _CEIL_EPS)
        t = cycles * params.transit_time_days + share / v.install_rate
        busy.append((v.name, t))
    f1 = max(t for _, t in busy)
    return f1, busy


def anchor_unit_cost(x: WindfarmDecision, params: WindfarmParams) -> float:
    # material volume proxy: diameter * penetration
    return params.anchor_cost_coeff * x.anchor_diameter * x.anchor_penetration


def installation_cost(x: WindfarmDecision, params: WindfarmParams,
                      t_vessel: Sequence[tuple[str, float]]) -> float:
    """f2: anchor Capex plus day-rate Opex over each vessel's busy time."""
    day_rates = {v.name: v.day_rate for v in params.classes()}
    capex = params.n_anchors * anchor_unit_cost(x, params)
    opex = sum(day_rates[name] * t for name, t in t_vessel)
    return capex + opex


def fleet_utilization(x: WindfarmDecision, params: WindfarmParams) -> float:
    """f3: combined probability that some selected vessel was better deployed elsewhere."""
    miss = 1.0
    for v in _fleet(x, params):
        miss *= (1.0 - v.alt_deployment_prob)
    return 1.0 - miss


def emissions(x: WindfarmDecision, params: WindfarmParams,
              t_vessel: Sequence[tuple[str, float]]) -> float:
    """f4: summed time-dependent emissions of the selected fleet."""
    rates = {v.name: v.emission_rate for v in params.classes()}
    return sum(rates[name] * t for name, t in t_vessel)


def anchor_resistance(diameter: float, penetration: float, params: WindfarmParams) -> float:
    """Holding capacity surrogate, monotone in both anchor dimensions."""
    return params.resistance_coeff * diameter * penetration ** 2


def evaluate_performance(x: WindfarmDecision, params: WindfarmParams) -> tuple[float, ...]:
    f1, t_vessel = simulate_installation(x, params)
    return (
        f1,
        installation_cost(x, params, t_vessel),
        fleet_utilization(x, params),
        emissions(x, params, t_vessel),
    )


# --- feasibility --------------------------------------------------------------

def domain_margin(x: WindfarmDecision) -> float:
    """Positive when any Table-domain bound (or integrality) is broken."""
    worst = 0.0
    for (name, lo, hi, is_int), value in zip(DOMAIN, x.astuple()):
        worst = max(worst, lo - value, value - hi)
        if is_int:
            worst = max(worst, abs(value - round(value)))
    return worst


def fleet_margin(x: WindfarmDecision) -> float:
    """At least one vessel: 1 - (x1 + x2 + x3) <= 0."""
    return 1.0 - sum(x.fleet_counts)


def resistance_margin(x: WindfarmDecision, params: WindfarmParams) -> float:
    """Working force must not exceed anchor resistance: F_a - R_a <= 0."""
    return params.working_force_kn - anchor_resistance(
        x.anchor_diameter, x.anchor_penetration, params)


def windfarm_constraints(params: WindfarmParams) -> tuple[HardConstraint, ...]:
    return (
        HardConstraint("domain", domain_margin, domain=True),
        HardConstraint("min_fleet", fleet_margin),
        HardConstraint("anchor_holding", lambda x: resistance_margin(x, params)),
    )


def is_feasible(x: WindfarmDecision, params: WindfarmParams) -> bool:
    return domain_margin(x) <= 0 and fleet_margin(x) <= 0 and resistance_margin(x, params) <= 0


# --- decision grid ------------------------------------------------------------


def grid_size(grid_step: float) -> int:
    diam = grid_axis(DOMAIN[3][1], DOMAIN[3][2], grid_step)
    pen = grid_axis(DOMAIN[4][1], DOMAIN[4][2], grid_step)
    return 4 * 3 * 3 * len(diam) * len(pen)


def decision_grid(grid_step: float):
    """Cross product of integer fleet domains and the anchored-geometry grid,
    yielded in lexicographic order."""
    diam = grid_axis(DOMAIN[3][1], DOMAIN[3][2], grid_step)
    pen = grid_axis(DOMAIN[4][1], DOMAIN[4][2], grid_step)
    for x1 in range(4):
        for x2 in range(3):
            for x3 in range(3):
                for x4 in diam:
                    for x5 in pen:
                        yield WindfarmDecision(x1, x2, x3, x4, x5)


def performance_bounds(params: WindfarmParams, grid_step: float
                       ) -> dict[str, tuple[float, float]]:
    """Per-criterion (min, max) over the feasible decision grid.

    The surrogates are monotone in the continuous variables, so grid extrema
    coincide with the true extrema over the box.
    """
    # duration/utilization/emissions depend on fleet counts only; cache per fleet
    lo = {c: math.inf for c in CRITERIA}
    hi = {c: -math.inf for c in CRITERIA}
    fleet_cache: dict[tuple[int, int, int], tuple[float, list, float, float]] = {}
    any_feasible = False
    for x in decision_grid(grid_step):
        if not is_feasible(x, params):
            continue
        any_feasible = True
        key = x.fleet_counts
        if key not in fleet_cache:
            f1, t_vessel = simulate_installation(x, params)
            fleet_cache[key] = (f1, t_vessel, fleet_utilization(x, params),
                                emissions(x, params, t_vessel))
        f1, t_vessel, f3, f4 = fleet_cache[key]
        f = (f1, installation_cost(x, params, t_vessel), f3, f4)
        for c, v in zip(CRITERIA, f):
            lo[c] = min(lo[c], v)
            hi[c] = max(hi[c], v)
    if not any_feasible:
        raise CapabilityError("no feasible decision on the grid; cannot anchor curves")
    return {c: (lo[c], hi[c]) for c in CRITERIA}


# --- problem assembly ---------------------------------------------------------

DEFAULT_WEIGHTS = {
    ("energy_provider", "duration"): 0.25,
    ("energy_provider", "emissions"): 0.25,
    ("contractor", "cost"): 0.25,
    ("contractor", "utilization"): 0.25,
}


def build_problem(params: WindfarmParams | None = None, *,
                  anchor_grid_step: float = 0.1,
                  weights: Mapping[tuple[str, str], float] | None = None,
                  thresholds: Mapping[tuple[str, str], float] | None = None,
                  bounds: Mapping[str, tuple[float, float]] | None = None,
                  ) -> ProblemDefinition:
    """Two-actor problem with descending linear curves over observed extrema.

    Less duration, cost, deployment risk, and emissions are all preferred, so
    every default curve is descending over [f_min, f_max] computed on the
    anchor grid.
    """
    params = params or default_params()
    bounds = dict(bounds) if bounds is not None else performance_bounds(params, anchor_grid_step)
    weights = dict(weights) if weights is not None else dict(DEFAULT_WEIGHTS)
    thresholds = dict(thresholds or {})

    curves = {}
    for c in CRITERIA:
        f_min, f_max = bounds[c]
        if not f_min < f_max:
            raise DegenerateIntervalError(f"criterion {c!r} is constant over the feasible grid")
        curves[c] = build_linear_curve(f_min, f_max, ascending=False)

    actor_ids = sorted({k for k, _ in weights})
    actors = []
    for k in actor_ids:
        local = {c: w for (ak, c), w in weights.items() if ak == k}
        actors.append(Actor(
            actor_id=k,
            curves={c: curves[c] for c in local},
            weights=local,
            thresholds={c: thresholds.get((k, c), 0.0) for c in local},
        ))

    def capability(x) -> tuple[float, ...]:
        if not isinstance(x, WindfarmDecision):
            x = WindfarmDecision.from_tuple(x)
        return evaluate_performance(x, params)

    return ProblemDefinition(
        kind="windfarm",
        criteria=CRITERIA,
        capability=capability,
        hard_constraints=windfarm_constraints(params),
        actors=tuple(actors),
        parameters=params,
        encode_x=lambda x: x.astuple() if isinstance(x, WindfarmDecision) else tuple(x),
    )


def encoding(grid_step: float | None = None):
    """Mixed genotype over the Table-domain bounds.

    With a grid step the continuous anchor dimensions snap to the same grid
    the enumeration oracle uses, so both search the same finite space.
    """
    from .solver.encoding import FloatGene, IntGene, MixedEncoding
    genes = (
        IntGene(0, 3), IntGene(0, 2), IntGene(0, 2),
        FloatGene(DOMAIN[3][1], DOMAIN[3][2], grid_step),
        FloatGene(DOMAIN[4][1], DOMAIN[4][2], grid_step),
    )
    return MixedEncoding(
        genes,
        wrap=WindfarmDecision.from_tuple,
        unwrap=lambda x: x.astuple() if isinstance(x, WindfarmDecision) else tuple(x),
    )


register_problem_kind("windfarm", build_problem)
