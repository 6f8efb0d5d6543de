"""Piecewise-linear preference curves.

A curve maps an actor-independent performance value onto a 0..100
preference scale. The best and worst performance anchors carry scores
100 and 0; everything in between is interpolated along the breakpoints
chosen by the actor (linear, convex, concave, free-form -- anything
piecewise-linear).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import CurveValidationError, DegenerateIntervalError

ASCENDING = "ascending"
DESCENDING = "descending"
FREE = "free"

_DIRECTIONS = (ASCENDING, DESCENDING, FREE)


@dataclass(frozen=True)
class PreferenceCurve:
    """Piecewise-linear map from performance value to preference in [0, 100].

    breakpoints: ordered (performance, preference) pairs, strictly increasing
    in performance. Exactly one breakpoint scores 100 (the "best" anchor) and
    exactly one scores 0 (the "worst" anchor); both must sit at the curve's
    endpoints so the reference interval is spanned by the anchors.
    """

    breakpoints: tuple[tuple[float, float], ...]
    direction: str = FREE

    def __post_init__(self):
        _validate_breakpoints(self.breakpoints, self.direction)

    @property
    def f_values(self) -> tuple[float, ...]:
        return tuple(f for f, _ in self.breakpoints)

    @property
    def reference_interval(self) -> tuple[float, float]:
        """(f_loc, f_upc): performance at the 100-anchor, then at the 0-anchor."""
        best = next(f for f, p in self.breakpoints if p == 100.0)
        worst = next(f for f, p in self.breakpoints if p == 0.0)
        return (best, worst)

    def evaluate(self, f_value: float) -> float:
        return self.evaluate_flagged(f_value)[0]

    def evaluate_flagged(self, f_value: float) -> tuple[float, bool]:
        """Evaluate the curve; the flag reports out-of-range clamping."""
        pts = self.breakpoints
        if f_value <= pts[0][0]:
            return pts[0][1], f_value < pts[0][0]
        if f_value >= pts[-1][0]:
            return pts[-1][1], f_value > pts[-1][0]
        # invariant: pts[lo][0] < f_value < pts[-1][0]
        for (f0, p0), (f1, p1) in zip(pts, pts[1:]):
            if f_value <= f1:
                t = (f_value - f0) / (f1 - f0)
                return p0 + t * (p1 - p0), False
        raise AssertionError("unreachable: breakpoints are strictly increasing")


def _validate_breakpoints(pts: Sequence[tuple[float, float]], direction: str) -> None:
    if direction not in _DIRECTIONS:
        raise CurveValidationError(f"unknown direction {direction!r}")
    if len(pts) < 2:
        raise CurveValidationError("curve needs at least two breakpoints")
    fs = [f for f, _ in pts]
    ps = [p for _, p in pts]
    for a, b in zip(fs, fs[1:]):
        if not b > a:
            raise CurveValidationError(
                f"breakpoint performance values must be strictly increasing, got {a} then {b}"
            )
    for p in ps:
        if not 0.0 <= p <= 100.0:
            raise CurveValidationError(f"preference {p} outside [0, 100]")
    if ps.count(100.0) != 1 or ps.count(0.0) != 1:
        raise CurveValidationError("curve needs exactly one 100-anchor and one 0-anchor")
    # Anchors sit at the endpoints; interior points stay strictly between.
    if {ps[0], ps[-1]} != {0.0, 100.0}:
        raise CurveValidationError("0- and 100-anchors must be the endpoint breakpoints")
    if direction == ASCENDING and any(b < a for a, b in zip(ps, ps[1:])):
        raise CurveValidationError("ascending curve has a decreasing segment")
    if direction == DESCENDING and any(b > a for a, b in zip(ps, ps[1:])):
        raise CurveValidationError("descending curve has an increasing segment")


def eval_curve(curve: PreferenceCurve, f_value: float) -> float:
    """Preference score for a performance value (clamped at curve ends)."""
    return curve.evaluate(f_value)


def build_linear_curve(f_min: float, f_max: float, ascending: bool = True) -> PreferenceCurve:
    """Two-breakpoint linear curve over [f_min, f_max].

    Ascending scores f_min at 0 and f_max at 100; descending reverses.
    """
    if not f_min < f_max:
        raise DegenerateIntervalError(f"need f_min < f_max, got [{f_min}, {f_max}]")
    if ascending:
        return PreferenceCurve(((f_min, 0.0), (f_max, 100.0)), ASCENDING)
    return PreferenceCurve(((f_min, 100.0), (f_max, 0.0)), DESCENDING)


@dataclass(frozen=True)
class AffineCurve:
    """A preference curve composed with an admissible affine map a*P + b, a > 0.

    Affine maps are the only scale transformations that preserve preference
    meaning, so re-expressing an actor's curve this way must never change the
    aggregated ranking. Used by what-if overrides and invariance checks.
    """

    base: PreferenceCurve
    scale: float = 1.0
    offset: float = 0.0

    def __post_init__(self):
        if not self.scale > 0:
            raise CurveValidationError(f"affine scale must be positive, got {self.scale}")

    @property
    def reference_interval(self) -> tuple[float, float]:
        return self.base.reference_interval

    def evaluate(self, f_value: float) -> float:
        return self.scale * self.base.evaluate(f_value) + self.offset

    def evaluate_flagged(self, f_value: float) -> tuple[float, bool]:
        p, clamped = self.base.evaluate_flagged(f_value)
        return self.scale * p + self.offset, clamped
