from .constraints import FAMILY_NAMES, ConstraintReport, check_constraints
from .decoder import alloc_encoding, decode, encode_schedule, key_length
from .evaluate import (
    capability,
    role_locations,
    sailing_duration,
    transition_cost,
    transition_time,
)
from .instance import AllocInstance, Schedule, fixture_instance, stress_instance
from .problem import (
    CRITERIA,
    AnchorReport,
    build_problem,
    estimate_enumeration_size,
    preference_anchors,
)

__all__ = [
    "FAMILY_NAMES", "ConstraintReport", "check_constraints",
    "alloc_encoding", "decode", "encode_schedule", "key_length",
    "capability", "role_locations", "sailing_duration", "transition_cost", "transition_time",
    "AllocInstance", "Schedule", "fixture_instance", "stress_instance",
    "CRITERIA", "AnchorReport", "build_problem", "estimate_enumeration_size",
    "preference_anchors",
]
