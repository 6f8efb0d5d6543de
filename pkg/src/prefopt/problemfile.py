"""Versioned problem/override/result file formats.

One self-describing JSON format (schema shipped with the package) covers
problems, what-if overrides, and results; traces go to CSV. Unknown
fields are rejected so fixture files stay diff-able and mistakes surface
early. All (actor, criterion) pairs serialize as "actor:criterion" keys.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from importlib import resources
from typing import Mapping

import jsonschema

from . import alloc as alloc_mod
from . import windfarm as windfarm_mod
from .aggregation import WEIGHT_SUM_TOL
from .curves import AffineCurve, PreferenceCurve, build_linear_curve
from .errors import PrefoptError, ProblemFileError
from .model import Actor, ProblemDefinition, problem_builder
from .solver import GaConfig, RunResult

FORMAT_VERSION = "1"


def canonical_json_bytes(doc) -> bytes:
    """Stable byte serialization: sorted keys, minimal separators, newline end.

    Non-finite floats are rejected outright: emitting NaN would produce
    invalid JSON for strict consumers (browsers included).
    """
    return (json.dumps(doc, sort_keys=True, separators=(",", ":"),
                       ensure_ascii=False, allow_nan=False)
            + "\n").encode("utf-8")


def finite_or_none(value: float) -> float | None:
    """NaN/inf map to null in serialized documents."""
    return float(value) if math.isfinite(value) else None


def _schema(name: str) -> dict:
    with resources.files("prefopt.schemas").joinpath(name).open("r", encoding="utf-8") as fh:
        return json.load(fh)


def _validate_schema(doc, schema: dict, path: str | None) -> None:
    validator = jsonschema.Draft202012Validator(schema)
    errors = sorted(validator.iter_errors(doc), key=lambda e: e.json_path)
    if errors:
        e = errors[0]
        raise ProblemFileError(f"{e.json_path}: {e.message}", path=path, location=e.json_path)


def _load_json(path) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise ProblemFileError(f"file not found: {path}", path=str(path)) from None
    except json.JSONDecodeError as e:
        raise ProblemFileError(
            f"invalid JSON: {e.msg}", path=str(path), location=f"line {e.lineno}:{e.colno}"
        ) from None


# --- capability payload schemas ------------------------------------------------

_VESSEL_CLASS_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["install_rate", "deck_capacity", "day_rate", "emission_rate",
                 "alt_deployment_prob"],
    "properties": {
        "install_rate": {"type": "number", "minimum": 0},
        "deck_capacity": {"type": "integer", "minimum": 1},
        "day_rate": {"type": "number", "minimum": 0},
        "emission_rate": {"type": "number", "minimum": 0},
        "alt_deployment_prob": {"type": "number", "minimum": 0, "maximum": 1},
    },
}

WINDFARM_CAPABILITY_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["params"],
    "properties": {
        "anchor_grid_step": {"type": "number", "exclusiveMinimum": 0},
        "params": {
            "type": "object",
            "additionalProperties": False,
            "required": ["n_anchors", "transit_time_days", "working_force_kn",
                         "resistance_coeff", "anchor_cost_coeff", "vessel_classes"],
            "properties": {
                "n_anchors": {"type": "integer", "minimum": 1},
                "transit_time_days": {"type": "number", "minimum": 0},
                "working_force_kn": {"type": "number", "minimum": 0},
                "resistance_coeff": {"type": "number", "exclusiveMinimum": 0},
                "anchor_cost_coeff": {"type": "number", "minimum": 0},
                "vessel_classes": {
                    "type": "object",
                    "additionalProperties": False,
                    "required": ["small", "large", "barge"],
                    "properties": {
                        "small": _VESSEL_CLASS_SCHEMA,
                        "large": _VESSEL_CLASS_SCHEMA,
                        "barge": _VESSEL_CLASS_SCHEMA,
                    },
                },
            },
        },
    },
}

ALLOC_CAPABILITY_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["instance"],
    "properties": {
        "instance": {
            "type": "object",
            "additionalProperties": False,
            "required": ["vessels", "locations", "activities", "roles",
                         "distance_nm", "vessel_specs"],
            "properties": {
                "vessels": {"type": "array", "items": {"type": "string"}, "minItems": 1},
                "locations": {"type": "array", "items": {"type": "string"}, "minItems": 1},
                "activities": {
                    "type": "array",
                    "minItems": 1,
                    "items": {
                        "type": "object",
                        "additionalProperties": False,
                        "required": ["id", "kind", "duration", "window"],
                        "properties": {
                            "id": {"type": "string"},
                            "kind": {"enum": ["tow", "maint"]},
                            "duration": {"type": "integer", "minimum": 0},
                            "window": {
                                "type": "array",
                                "items": {"type": "integer", "minimum": 0},
                                "minItems": 2, "maxItems": 2,
                            },
                            "predecessor": {"type": ["string", "null"]},
                            "from": {"type": "string"},
                            "to": {"type": "string"},
                            "locations": {"type": "array", "items": {"type": "string"}},
                        },
                    },
                },
                "roles": {
                    "type": "array",
                    "minItems": 1,
                    "items": {
                        "type": "object",
                        "additionalProperties": False,
                        "required": ["id", "activity", "vessels"],
                        "properties": {
                            "id": {"type": "string"},
                            "activity": {"type": "string"},
                            "vessels": {"type": "array", "items": {"type": "string"}},
                        },
                    },
                },
                "distance_nm": {
                    "type": "array",
                    "items": {"type": "array", "items": {"type": "number", "minimum": 0}},
                },
                "vessel_specs": {
                    "type": "object",
                    "additionalProperties": {
                        "type": "object",
                        "additionalProperties": False,
                        "required": ["mob_rate", "speeds", "fuel_rates", "fuel_price",
                                     "standby_discount"],
                        "properties": {
                            "mob_rate": {"type": "number", "minimum": 0},
                            "speeds": {"type": "array", "minItems": 1,
                                       "items": {"type": "number", "exclusiveMinimum": 0}},
                            "fuel_rates": {"type": "array", "minItems": 1,
                                           "items": {"type": "number", "minimum": 0}},
                            "fuel_price": {"type": "number", "minimum": 0},
                            "standby_discount": {"type": "number", "minimum": 0, "maximum": 1},
                        },
                    },
                },
            },
        },
    },
}

CUSTOM_CAPABILITY_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["builder"],
    "properties": {
        "builder": {"type": "string"},
        "config": {"type": "object"},
    },
}


# --- document <-> domain object conversions --------------------------------------

def windfarm_params_from_document(doc: dict) -> windfarm_mod.WindfarmParams:
    classes = doc["vessel_classes"]
    return windfarm_mod.WindfarmParams(
        n_anchors=doc["n_anchors"],
        transit_time_days=doc["transit_time_days"],
        working_force_kn=doc["working_force_kn"],
        resistance_coeff=doc["resistance_coeff"],
        anchor_cost_coeff=doc["anchor_cost_coeff"],
        small=windfarm_mod.VesselClassSpec("small", **classes["small"]),
        large=windfarm_mod.VesselClassSpec("large", **classes["large"]),
        barge=windfarm_mod.VesselClassSpec("barge", **classes["barge"]),
    )


def windfarm_params_to_document(params: windfarm_mod.WindfarmParams) -> dict:
    def cls(spec):
        return {
            "install_rate": spec.install_rate,
            "deck_capacity": spec.deck_capacity,
            "day_rate": spec.day_rate,
            "emission_rate": spec.emission_rate,
            "alt_deployment_prob": spec.alt_deployment_prob,
        }
    return {
        "n_anchors": params.n_anchors,
        "transit_time_days": params.transit_time_days,
        "working_force_kn": params.working_force_kn,
        "resistance_coeff": params.resistance_coeff,
        "anchor_cost_coeff": params.anchor_cost_coeff,
        "vessel_classes": {"small": cls(params.small), "large": cls(params.large),
                           "barge": cls(params.barge)},
    }


def alloc_instance_from_document(doc: dict) -> alloc_mod.AllocInstance:
    locations = tuple(doc["locations"])
    activities = tuple(a["id"] for a in doc["activities"])
    kinds, duration, window = {}, {}, {}
    tow_start, tow_end, maint_locations, predecessor = {}, {}, {}, {}
    for a in doc["activities"]:
        aid = a["id"]
        kinds[aid] = a["kind"]
        duration[aid] = a["duration"]
        window[aid] = tuple(a["window"])
        predecessor[aid] = a.get("predecessor")
        if a["kind"] == "tow":
            if "from" not in a or "to" not in a:
                raise ProblemFileError(f"towing activity {aid!r} needs 'from' and 'to'")
            tow_start[aid], tow_end[aid] = a["from"], a["to"]
        else:
            if not a.get("locations"):
                raise ProblemFileError(f"maintenance activity {aid!r} needs 'locations'")
            maint_locations[aid] = tuple(a["locations"])
    roles = tuple(r["id"] for r in doc["roles"])
    parent = {r["id"]: r["activity"] for r in doc["roles"]}
    domain = {r["id"]: tuple(r["vessels"]) for r in doc["roles"]}
    matrix = doc["distance_nm"]
    if len(matrix) != len(locations) or any(len(row) != len(locations) for row in matrix):
        raise ProblemFileError("distance_nm must be a square matrix over locations")
    distance = {(l, m): float(matrix[i][j])
                for i, l in enumerate(locations) for j, m in enumerate(locations)}
    specs = doc["vessel_specs"]
    vessels = tuple(doc["vessels"])
    for v in vessels:
        if v not in specs:
            raise ProblemFileError(f"vessel {v!r} has no spec entry")
        if len(specs[v]["fuel_rates"]) != len(specs[v]["speeds"]):
            raise ProblemFileError(f"vessel {v!r}: fuel_rates must align with speeds")
    return alloc_mod.AllocInstance(
        vessels=vessels,
        activities=activities,
        activity_kind=kinds,
        roles=roles,
        locations=locations,
        duration=duration,
        start_window=window,
        tow_start=tow_start,
        tow_end=tow_end,
        maint_locations=maint_locations,
        predecessor=predecessor,
        parent_activity=parent,
        vessel_domain=domain,
        distance_nm=distance,
        mob_rate={v: float(specs[v]["mob_rate"]) for v in vessels},
        fuel_rate={v: dict(zip(map(float, specs[v]["speeds"]),
                               map(float, specs[v]["fuel_rates"]))) for v in vessels},
        speeds={v: tuple(float(s) for s in specs[v]["speeds"]) for v in vessels},
        fuel_price={v: float(specs[v]["fuel_price"]) for v in vessels},
        standby_discount={v: float(specs[v]["standby_discount"]) for v in vessels},
    )


def alloc_instance_to_document(inst: alloc_mod.AllocInstance) -> dict:
    activities = []
    for a in inst.activities:
        entry = {
            "id": a,
            "kind": inst.activity_kind[a],
            "duration": int(inst.duration[a]),
            "window": [int(inst.start_window[a][0]), int(inst.start_window[a][1])],
            "predecessor": inst.predecessor.get(a),
        }
        if inst.activity_kind[a] == "tow":
            entry["from"] = inst.tow_start[a]
            entry["to"] = inst.tow_end[a]
        else:
            entry["locations"] = list(inst.maint_locations[a])
        activities.append(entry)
    return {
        "vessels": list(inst.vessels),
        "locations": list(inst.locations),
        "activities": activities,
        "roles": [{"id": r, "activity": inst.parent_activity[r],
                   "vessels": list(inst.vessel_domain[r])} for r in inst.roles],
        "distance_nm": [[inst.distance_nm[(l, m)] for m in inst.locations]
                        for l in inst.locations],
        "vessel_specs": {
            v: {
                "mob_rate": inst.mob_rate[v],
                "speeds": list(inst.speeds[v]),
                "fuel_rates": [inst.fuel_rate[v][s] for s in inst.speeds[v]],
                "fuel_price": inst.fuel_price[v],
                "standby_discount": inst.standby_discount[v],
            } for v in inst.vessels
        },
    }


# --- problem assembly ------------------------------------------------------------

@dataclass(frozen=True)
class LoadedProblem:
    document: dict
    problem: ProblemDefinition
    encoding: object
    config: GaConfig
    seed: int

    @property
    def kind(self) -> str:
        return self.document["problem_kind"]


def _column_key(text: str) -> tuple[str, str]:
    if ":" not in text:
        raise ProblemFileError(f"expected 'actor:criterion', got {text!r}")
    actor, criterion = text.split(":", 1)
    return actor, criterion


def _column_text(key: tuple[str, str]) -> str:
    return f"{key[0]}:{key[1]}"


def _build_actors(doc: dict, criteria: tuple[str, ...],
                  bounds: Mapping[str, tuple[float, float]]) -> tuple[Actor, ...]:
    actors = []
    total_weight = 0.0
    for actor_doc in doc["actors"]:
        curves, weights, thresholds = {}, {}, {}
        for criterion, entry in actor_doc["criteria"].items():
            if criterion not in criteria:
                raise ProblemFileError(
                    f"actor {actor_doc['id']!r} references unknown criterion {criterion!r}"
                )
            curve_doc = entry.get("curve", {"auto": {"direction": "descending"}})
            if "auto" in curve_doc:
                f_min, f_max = bounds[criterion]
                curves[criterion] = build_linear_curve(
                    f_min, f_max, ascending=curve_doc["auto"]["direction"] == "ascending")
            else:
                curves[criterion] = PreferenceCurve(
                    tuple((float(f), float(p)) for f, p in curve_doc["breakpoints"]),
                    curve_doc.get("direction", "free"),
                )
            weights[criterion] = float(entry["weight"])
            thresholds[criterion] = float(entry.get("threshold", 0.0))
            total_weight += weights[criterion]
        actors.append(Actor(actor_doc["id"], curves, weights, thresholds))
    if abs(total_weight - 1.0) > WEIGHT_SUM_TOL:
        raise ProblemFileError(
            f"actor weights must sum to 1, got {total_weight} "
            f"(deviation {total_weight - 1.0:+g})"
        )
    return tuple(actors)


def _ga_config(doc: dict, seed: int) -> GaConfig:
    solver = {k: v for k, v in doc.get("solver", {}).items() if k != "encoding_grid_step"}
    return GaConfig(rng_seed=seed, **solver)


def build_loaded_problem(doc: dict, path: str | None = None) -> LoadedProblem:
    _validate_schema(doc, _schema("problem.schema.json"), path)
    kind = doc["problem_kind"]
    seed = doc["seed"]
    try:
        if kind == "windfarm":
            _validate_schema(doc["capability"], WINDFARM_CAPABILITY_SCHEMA, path)
            params = windfarm_params_from_document(doc["capability"]["params"])
            grid_step = doc["capability"].get("anchor_grid_step", 0.1)
            bounds = windfarm_mod.performance_bounds(params, grid_step)
            actors = _build_actors(doc, windfarm_mod.CRITERIA, bounds)
            base = windfarm_mod.build_problem(params, bounds=bounds)
            problem = ProblemDefinition(
                kind="windfarm", criteria=windfarm_mod.CRITERIA,
                capability=base.capability, hard_constraints=base.hard_constraints,
                actors=actors, parameters=params, encode_x=base.encode_x,
            )
            encoding = windfarm_mod.encoding(
                doc.get("solver", {}).get("encoding_grid_step"))
        elif kind == "alloc":
            _validate_schema(doc["capability"], ALLOC_CAPABILITY_SCHEMA, path)
            instance = alloc_instance_from_document(doc["capability"]["instance"])
            bounds = alloc_mod.preference_anchors(instance).bounds
            actors = _build_actors(doc, alloc_mod.CRITERIA, bounds)
            base = alloc_mod.build_problem(instance, bounds=bounds)
            problem = ProblemDefinition(
                kind="alloc", criteria=alloc_mod.CRITERIA,
                capability=base.capability, hard_constraints=base.hard_constraints,
                actors=actors, parameters=instance, encode_x=base.encode_x,
            )
            encoding = alloc_mod.alloc_encoding(instance)
        else:  # custom: a registered builder owns problem and encoding
            _validate_schema(doc["capability"], CUSTOM_CAPABILITY_SCHEMA, path)
            builder = problem_builder(doc["capability"]["builder"])
            problem, encoding = builder(doc)
    except PrefoptError:
        raise
    except (KeyError, TypeError, ValueError) as e:
        raise ProblemFileError(f"invalid problem document: {e}", path=path) from e
    return LoadedProblem(doc, problem, encoding, _ga_config(doc, seed), seed)


def load_problem_file(path) -> LoadedProblem:
    return build_loaded_problem(_load_json(path), path=str(path))


# --- what-if overrides --------------------------------------------------------------

def load_overrides_file(path) -> dict:
    doc = _load_json(path)
    validate_overrides(doc, path=str(path))
    return doc


def validate_overrides(doc: dict, path: str | None = None) -> None:
    _validate_schema(doc, _schema("overrides.schema.json"), path)


def apply_overrides(problem: ProblemDefinition, overrides: dict) -> ProblemDefinition:
    """New problem with replaced weights, patched thresholds, and replaced or
    affine-transformed curves. An affine transform rescales that column's
    acceptability threshold along with the curve, preserving the comparison."""
    curve_over = {_column_key(k): v for k, v in overrides.get("curves", {}).items()}
    threshold_over = {_column_key(k): float(v)
                      for k, v in overrides.get("thresholds", {}).items()}
    weight_over = None
    if "weights" in overrides:
        weight_over = {_column_key(k): float(v) for k, v in overrides["weights"].items()}
        total = sum(weight_over.values())
        if abs(total - 1.0) > WEIGHT_SUM_TOL:
            raise ProblemFileError(f"override weights must sum to 1, got {total}")

    known_columns = set(problem.columns)
    for key in list(curve_over) + list(threshold_over) + list(weight_over or {}):
        if key not in known_columns:
            raise ProblemFileError(f"override references unknown column {_column_text(key)!r}")

    actors = []
    for actor in problem.actors:
        curves = dict(actor.curves)
        thresholds = dict(actor.thresholds)
        weights = dict(actor.weights)
        for (aid, criterion), spec in curve_over.items():
            if aid != actor.actor_id:
                continue
            if "affine" in spec:
                scale = float(spec["affine"]["scale"])
                offset = float(spec["affine"].get("offset", 0.0))
                curves[criterion] = AffineCurve(curves[criterion], scale, offset)
                thresholds[criterion] = scale * thresholds.get(criterion, 0.0) + offset
            else:
                curves[criterion] = PreferenceCurve(
                    tuple((float(f), float(p)) for f, p in spec["breakpoints"]),
                    spec.get("direction", "free"),
                )
        for (aid, criterion), value in threshold_over.items():
            if aid == actor.actor_id:
                thresholds[criterion] = value
        if weight_over is not None:
            weights = {c: 0.0 for c in weights}
            for (aid, criterion), w in weight_over.items():
                if aid == actor.actor_id:
                    weights[criterion] = w
        actors.append(Actor(actor.actor_id, curves, weights, thresholds))

    return ProblemDefinition(
        kind=problem.kind, criteria=problem.criteria, capability=problem.capability,
        hard_constraints=problem.hard_constraints, actors=tuple(actors),
        parameters=problem.parameters, time_mode=problem.time_mode,
        horizon=problem.horizon, encode_x=problem.encode_x,
    )


# --- results -------------------------------------------------------------------------

def serialize_decision(kind: str, x) -> dict:
    if kind == "windfarm":
        return {
            "small_vessels": x.small_vessels,
            "large_vessels": x.large_vessels,
            "crane_barges": x.crane_barges,
            "anchor_diameter": x.anchor_diameter,
            "anchor_penetration": x.anchor_penetration,
        }
    if kind == "alloc":
        return x.to_json_dict()
    return {"x": list(x)}


def result_document(kind: str, seed: int, problem: ProblemDefinition,
                    result: RunResult) -> dict:
    ev = result.best_evaluation
    return {
        "format_version": FORMAT_VERSION,
        "problem_kind": kind,
        "seed": seed,
        "best_x": serialize_decision(kind, result.best_x),
        "best_Z": result.best_Z,
        "f_values": dict(zip(problem.criteria, ev.f_values)),
        "preferences": {_column_text(k): v for k, v in sorted(ev.p_values.items())},
        "feasible": ev.feasible,
        "acceptable": ev.acceptable,
        "acceptability_violations": [
            [_column_text(k), margin] for k, margin in ev.acceptability.violations
        ],
        "evaluations": result.evaluations,
        "generations": result.generations,
        "terminated_by": result.terminated_by,
        "trace": [[r.generation, finite_or_none(r.best_Z), finite_or_none(r.mean_Z),
                   r.feasible_count] for r in result.trace],
    }


def whatif_document(base_doc: dict, whatif_doc: dict, overrides: dict) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "overrides": overrides,
        "base": base_doc,
        "whatif": whatif_doc,
        "delta": {
            "best_Z": whatif_doc["best_Z"] - base_doc["best_Z"],
            "best_x_changed": whatif_doc["best_x"] != base_doc["best_x"],
        },
    }


# --- fixture documents -----------------------------------------------------------------

def fixture_problem_document(kind: str, seed: int = 7) -> dict:
    """Checked-in fixture files for both demo problems."""
    if kind == "windfarm":
        return {
            "format_version": FORMAT_VERSION,
            "problem_kind": "windfarm",
            "capability": {
                "params": windfarm_params_to_document(windfarm_mod.default_params()),
                "anchor_grid_step": 0.1,
            },
            "actors": [
                {"id": "energy_provider", "criteria": {
                    "duration": {"weight": 0.25,
                                 "curve": {"auto": {"direction": "descending"}}},
                    "emissions": {"weight": 0.25,
                                  "curve": {"auto": {"direction": "descending"}}},
                }},
                {"id": "contractor", "criteria": {
                    "cost": {"weight": 0.25,
                             "curve": {"auto": {"direction": "descending"}}},
                    "utilization": {"weight": 0.25,
                                    "curve": {"auto": {"direction": "descending"}}},
                }},
            ],
            "solver": {"encoding_grid_step": 0.1},
            "seed": seed,
        }
    if kind == "alloc":
        return {
            "format_version": FORMAT_VERSION,
            "problem_kind": "alloc",
            "capability": {
                "instance": alloc_instance_to_document(alloc_mod.fixture_instance()),
            },
            "actors": [
                {"id": "operations", "criteria": {
                    "cost": {"weight": 0.5,
                             "curve": {"auto": {"direction": "descending"}}},
                }},
                {"id": "commercial", "criteria": {
                    "makespan": {"weight": 0.5,
                                 "curve": {"auto": {"direction": "descending"}}},
                }},
            ],
            "solver": {},
            "seed": seed,
        }
    raise ProblemFileError(f"no fixture for kind {kind!r}")
