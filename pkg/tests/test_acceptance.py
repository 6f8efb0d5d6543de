"""Acceptance suite: one test per release criterion, tolerances pinned.

Run with `pytest -s tests/test_acceptance.py` to see one PASS line per
criterion. Budgets are chosen so the whole suite stays desk-scale.
"""

import json
import subprocess
import sys
import time
from pathlib import Path

import numpy as np
import pytest

from prefopt import windfarm
from prefopt.aggregation import ScoreTable, WeightMatrix, afine_aggregate, z_normalize
from prefopt.alloc import (
    build_problem as build_alloc_problem,
    check_constraints,
    decode,
    key_length,
    stress_instance,
)
from prefopt.curves import build_linear_curve, eval_curve
from prefopt.model import check_acceptability
from prefopt.problemfile import apply_overrides, canonical_json_bytes, fixture_problem_document
from prefopt.solver import GaConfig, solve

FIXTURES = Path(__file__).resolve().parent.parent / "problems"

# small but honest search budget for the repeated-solve criteria
LEAN = dict(population_size=24, max_generations=15, stall_generations=6)


def ok(message):
    print(f"\nACCEPTANCE PASS: {message}")


class TestOracleArgmaxEquivalence:
    def test_alloc_fixture_19_of_20_seeds(self, alloc_problem, alloc_report, alloc_keys):
        hits = 0
        for seed in range(1, 21):
            t0 = time.perf_counter()
            result = solve(alloc_problem, GaConfig(rng_seed=seed), alloc_keys)
            elapsed = time.perf_counter() - t0
            assert elapsed < 60.0, f"seed {seed} took {elapsed:.1f}s"
            z = alloc_report.z_of(alloc_problem, result.best_x)
            hits += abs(z - alloc_report.best_Z) <= 1e-9
        assert hits >= 19
        ok(f"oracle argmax equivalence on alloc fixture: {hits}/20 seeds")


class TestSingleObjectiveReduction:
    @pytest.mark.parametrize("column,index", [
        (("operations", "cost"), 1),
        (("commercial", "makespan"), 3),
    ])
    def test_exact_oracle_minimum_20_of_20(self, alloc_instance, alloc_report,
                                           alloc_keys, column, index):
        problem = build_alloc_problem(alloc_instance, weights={column: 1.0},
                                      bounds=alloc_report.extrema)
        fs = np.array([f for _, f in alloc_report.candidates])
        target = fs[:, index].min()
        for seed in range(1, 21):
            result = solve(problem, GaConfig(rng_seed=seed), alloc_keys)
            f = problem.capability(result.best_x)
            assert f[index] == target, f"seed {seed}: {f[index]} != {target}"
        ok(f"single-objective reduction on {column[1]}: exact oracle minimum, 20/20 seeds")


class TestAffineInvariance:
    def _sweep(self, problem, encoding, columns, seed, trials_per_column):
        config = GaConfig(rng_seed=seed, **LEAN)
        base = solve(problem, config, encoding)
        base_key = problem.encode_x(base.best_x)
        rng = np.random.default_rng(2024)
        exceptions = 0
        for actor_id, criterion in columns:
            for _ in range(trials_per_column):
                a = float(rng.uniform(0.1, 10.0))
                b = float(rng.uniform(-50.0, 50.0))
                transformed = apply_overrides(problem, {
                    "format_version": "1",
                    "curves": {f"{actor_id}:{criterion}":
                               {"affine": {"scale": a, "offset": b}}},
                })
                result = solve(transformed, config, encoding)
                if problem.encode_x(result.best_x) != base_key:
                    exceptions += 1
        return exceptions

    def test_alloc_fixture_zero_exceptions(self, alloc_problem, alloc_keys):
        exceptions = self._sweep(alloc_problem, alloc_keys,
                                 alloc_problem.columns, seed=5, trials_per_column=100)
        assert exceptions == 0
        ok("affine invariance on alloc fixture: 0 exceptions in 200 transforms")

    def test_windfarm_fixture_zero_exceptions(self, windfarm_coarse_problem):
        encoding = windfarm.encoding(grid_step=6.0)
        exceptions = self._sweep(windfarm_coarse_problem, encoding,
                                 windfarm_coarse_problem.columns, seed=5,
                                 trials_per_column=100)
        assert exceptions == 0
        ok("affine invariance on wind-farm fixture: 0 exceptions in 400 transforms")


class TestDecoderSoundness:
    def test_thousand_vectors_per_fixture(self, alloc_instance):
        for name, instance in (("fixture", alloc_instance),
                               ("stress", stress_instance())):
            rng = np.random.default_rng(42)
            n = key_length(instance)
            for i in range(1000):
                schedule = decode(instance, rng.random(n))
                report = check_constraints(schedule, instance)
                assert report.ok, f"{name} vector {i}: families {report.families}"
        ok("decoder soundness: 1000/1000 feasible decodes on both instances")


class TestAggregationUnitSuite:
    def test_z_moments_linearity_anchoring(self):
        rng = np.random.default_rng(7)
        cols = (("k1", "c1"), ("k2", "c2"))
        table = ScoreTable(cols, rng.uniform(0, 100, size=(64, 2)))
        z = z_normalize(table)
        assert np.abs(z.values.mean(axis=0)).max() < 1e-10
        assert np.abs(z.values.std(axis=0) - 1.0).max() < 1e-10

        for alpha in np.linspace(0.0, 1.0, 11):
            blend = WeightMatrix({cols[0]: alpha, cols[1]: 1.0 - alpha})
            lhs = afine_aggregate(z, blend)
            rhs = alpha * afine_aggregate(z, WeightMatrix({cols[0]: 1.0})) + \
                (1 - alpha) * afine_aggregate(z, WeightMatrix({cols[1]: 1.0}))
            assert np.abs(lhs - rhs).max() < 1e-12

        for lo, hi, ascending in ((0.0, 10.0, True), (-5.0, 3.0, False), (2.5, 97.5, True)):
            curve = build_linear_curve(lo, hi, ascending)
            best, worst = curve.reference_interval
            assert eval_curve(curve, best) == 100.0
            assert eval_curve(curve, worst) == 0.0
        ok("aggregation unit suite: z-moments, centroid linearity, exact anchoring")


class TestWindfarmFeasibility:
    def test_feasible_best_and_exact_coarse_argmax(self, windfarm_params,
                                                   windfarm_coarse_problem,
                                                   windfarm_coarse_report):
        encoding = windfarm.encoding(grid_step=6.0)
        oracle_best = windfarm_coarse_report.best_x.astuple()
        for seed in range(1, 21):
            result = solve(windfarm_coarse_problem, GaConfig(rng_seed=seed), encoding)
            x = result.best_x
            assert windfarm.fleet_margin(x) <= 0
            assert windfarm.resistance_margin(x, windfarm_params) <= 0
            assert x.astuple() == oracle_best, f"seed {seed}"
        ok("wind-farm feasibility and exact 144-grid argmax agreement: 20/20 seeds")


class TestDeterminism:
    def test_processes_and_service_byte_identical(self, tmp_path):
        problem_path = FIXTURES / "alloc.fixture.json"
        outs = []
        for run in ("r1", "r2"):
            out = tmp_path / run
            proc = subprocess.run(
                [sys.executable, "-m", "prefopt.cli", "--problem", str(problem_path),
                 "--seed", "17", "--out", str(out)],
                capture_output=True, text=True,
            )
            assert proc.returncode == 0, proc.stderr
            outs.append((out / "result.json").read_bytes())
        assert outs[0] == outs[1]

        from fastapi.testclient import TestClient
        from prefopt.service import create_app
        doc = json.loads(problem_path.read_bytes())
        with TestClient(create_app(tmp_path / "svc")) as client:
            pid = client.post("/v1/problems", json=doc).json()["problem_id"]
            rid = client.post("/v1/runs", json={"problem_id": pid,
                                                "seed": 17}).json()["run_id"]
            deadline = time.time() + 120
            while time.time() < deadline:
                record = client.get(f"/v1/runs/{rid}").json()
                if record["status"] in ("done", "failed"):
                    break
                time.sleep(0.05)
            assert record["status"] == "done"
            assert canonical_json_bytes(record["result"]) == outs[0]
        ok("determinism: two processes and CLI-vs-service byte-identical")


class TestAcceptabilityMonotonicity:
    def test_thousand_randomized_trials(self):
        rng = np.random.default_rng(99)
        columns = [("k1", "a"), ("k1", "b"), ("k2", "a")]
        for _ in range(1000):
            n = int(rng.integers(2, 30))
            p_rows = [
                {c: float(rng.uniform(0, 100)) for c in columns} for _ in range(n)
            ]
            base = {c: float(rng.uniform(0, 100)) for c in columns}
            raised = dict(base)
            bump = columns[int(rng.integers(len(columns)))]
            raised[bump] = float(min(100.0, base[bump] + rng.uniform(0, 50)))
            accept_base = {i for i, p in enumerate(p_rows)
                           if check_acceptability(p, base).acceptable}
            accept_raised = {i for i, p in enumerate(p_rows)
                             if check_acceptability(p, raised).acceptable}
            assert accept_raised <= accept_base
        ok("acceptability monotonicity: 1000/1000 randomized trials")
