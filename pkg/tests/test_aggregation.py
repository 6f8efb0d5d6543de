import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from prefopt.aggregation import (
    ScoreTable,
    WeightMatrix,
    afine_aggregate,
    validate_weights,
    z_normalize,
)
from prefopt.errors import InsufficientCandidatesError, WeightSchemaError

C1 = ("k1", "f1")
C2 = ("k2", "f2")


def table(columns, rows):
    return ScoreTable(tuple(columns), np.array(rows, dtype=float))


class TestZNormalize:
    def test_two_point_column(self):
        z = z_normalize(table([C1], [[0.0], [100.0]]))
        assert z.values[:, 0] == pytest.approx([-1.0, 1.0], abs=1e-12)

    def test_constant_column_guard(self):
        z = z_normalize(table([C1], [[42.0], [42.0], [42.0]]))
        assert np.all(z.values == 0.0)

    def test_three_point_column(self):
        # population std of [0, 50, 100] is sqrt(5000/3)
        z = z_normalize(table([C1], [[0.0], [50.0], [100.0]]))
        expected = 50.0 / math.sqrt(5000.0 / 3.0)
        assert z.values[:, 0] == pytest.approx([-expected, 0.0, expected], abs=1e-12)
        assert expected == pytest.approx(1.2247, abs=1e-4)

    def test_single_row_rejected(self):
        with pytest.raises(InsufficientCandidatesError):
            z_normalize(table([C1], [[1.0]]))

    def test_moments(self):
        rng = np.random.default_rng(3)
        z = z_normalize(table([C1, C2], rng.uniform(0, 100, size=(40, 2))))
        assert abs(z.values.mean(axis=0)).max() < 1e-10
        assert abs(z.values.std(axis=0) - 1.0).max() < 1e-10


class TestValidateWeights:
    def test_first_demo_weights_valid(self):
        report = validate_weights({("k1", "f1"): 0.25, ("k1", "f4"): 0.25,
                                   ("k2", "f2"): 0.25, ("k2", "f3"): 0.25})
        assert report.ok

    def test_second_demo_weights_valid(self):
        report = validate_weights({("k1", "f2"): 0.5, ("k2", "f4"): 0.5})
        assert report.ok

    def test_sum_violation_reported(self):
        report = validate_weights({("k1", "f1"): 0.9})
        assert not report.ok
        assert report.sum_deviation == pytest.approx(-0.1, abs=1e-12)

    def test_negative_entries_reported(self):
        report = validate_weights({("k1", "f1"): 1.2, ("k2", "f1"): -0.2})
        assert not report.ok
        assert report.negative_entries == (("k2", "f1"),)

    def test_weight_matrix_enforces_validity(self):
        with pytest.raises(WeightSchemaError):
            WeightMatrix({("k1", "f1"): 0.9})


class TestAfineAggregate:
    def test_single_weight_reduces_to_column(self):
        t = z_normalize(table([C1, C2], [[0, 5], [50, 9], [100, 2]]))
        z = afine_aggregate(t, WeightMatrix({C1: 1.0}))
        assert z == pytest.approx(list(t.values[:, 0]), abs=0)

    def test_symmetric_columns_cancel(self):
        t = table([C1, C2], [[1.0, -1.0], [-1.0, 1.0]])
        z = afine_aggregate(t, WeightMatrix({C1: 0.5, C2: 0.5}))
        assert z == pytest.approx([0.0, 0.0], abs=0)

    def test_hand_computed_weighted_sum(self):
        zt = z_normalize(table([C1, C2], [[0, 0], [50, 100], [100, 50]]))
        z = afine_aggregate(zt, WeightMatrix({C1: 0.5, C2: 0.5}))
        s = math.sqrt(5000.0 / 3.0)
        sd2 = np.array([0, 100, 50]).std()
        expected = [
            0.5 * (-50 / s) + 0.5 * ((0 - 50) / sd2),
            0.5 * 0.0 + 0.5 * ((100 - 50) / sd2),
            0.5 * (50 / s) + 0.5 * 0.0,
        ]
        assert z == pytest.approx(expected, abs=1e-12)

    def test_unknown_weight_column_rejected(self):
        t = table([C1], [[0.0], [1.0]])
        with pytest.raises(WeightSchemaError):
            afine_aggregate(t, WeightMatrix({("k9", "f9"): 1.0}))


@given(
    scale=st.floats(0.1, 10.0),
    offset=st.floats(-50.0, 50.0),
    rows=st.lists(st.tuples(st.floats(0, 100), st.floats(0, 100)), min_size=2, max_size=30),
)
@settings(max_examples=200)
def test_affine_invariance_of_z_scores(scale, offset, rows):
    """Rescaling one column by a*P + b (a > 0) leaves its z-scores unchanged.

    Transform ranges match the admissible-transformation sweep of the
    acceptance suite; the 1e-12 tolerance presumes preference-scale
    conditioning (an offset orders of magnitude above the column spread
    amplifies float cancellation beyond it).
    """
    base = table([C1, C2], rows)
    transformed = table([C1, C2], [[scale * a + offset, b] for a, b in rows])
    z0 = z_normalize(base).values
    z1 = z_normalize(transformed).values
    assert np.allclose(z0, z1, atol=1e-12)
    w = WeightMatrix({C1: 0.5, C2: 0.5})
    Z0 = afine_aggregate(z_normalize(base), w)
    Z1 = afine_aggregate(z_normalize(transformed), w)
    assert np.allclose(Z0, Z1, atol=1e-12)
    # argmax is preserved whenever it is unique beyond the float tolerance;
    # exact ties fall to the solver's lexicographic tie-break instead
    top = np.argmax(Z0)
    runner_up = np.max(np.delete(Z0, top)) if len(Z0) > 1 else -np.inf
    if Z0[top] - runner_up > 1e-9:
        assert np.argmax(Z1) == top


@given(
    alpha=st.floats(0, 1),
    rows=st.lists(st.tuples(st.floats(0, 100), st.floats(0, 100)), min_size=2, max_size=20),
)
@settings(max_examples=200)
def test_weighted_centroid_linearity(alpha, rows):
    zt = z_normalize(table([C1, C2], rows))
    w1 = WeightMatrix({C1: 1.0})
    w2 = WeightMatrix({C2: 1.0})
    blend = WeightMatrix({C1: alpha, C2: 1.0 - alpha})
    lhs = afine_aggregate(zt, blend)
    rhs = alpha * afine_aggregate(zt, w1) + (1 - alpha) * afine_aggregate(zt, w2)
    assert np.allclose(lhs, rhs, atol=1e-12)
