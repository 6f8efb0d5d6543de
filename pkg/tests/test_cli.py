import json
import subprocess
import sys
from pathlib import Path

import pytest

from prefopt.cli import main
from prefopt.problemfile import canonical_json_bytes, fixture_problem_document

FIXTURES = Path(__file__).resolve().parent.parent / "problems"


def run_cli(args):
    return subprocess.run(
        [sys.executable, "-m", "prefopt.cli", *args],
        capture_output=True, text=True,
    )


@pytest.fixture(scope="module")
def alloc_fixture_path():
    return str(FIXTURES / "alloc.fixture.json")


class TestSolve:
    def test_solve_writes_result_and_trace(self, tmp_path, alloc_fixture_path):
        code = main(["--problem", alloc_fixture_path, "--seed", "7",
                     "--out", str(tmp_path)])
        assert code == 0
        doc = json.loads((tmp_path / "result.json").read_bytes())
        assert doc["feasible"] and doc["acceptable"]
        assert doc["problem_kind"] == "alloc" and doc["seed"] == 7
        trace = (tmp_path / "trace.csv").read_text().splitlines()
        assert trace[0] == "generation,best_Z,mean_Z,feasible_count"
        assert len(trace) == len(doc["trace"]) + 1

    def test_best_solution_is_in_feasible_acceptable_space(self, tmp_path,
                                                           alloc_fixture_path,
                                                           alloc_problem, alloc_report):
        main(["--problem", alloc_fixture_path, "--seed", "3", "--out", str(tmp_path)])
        doc = json.loads((tmp_path / "result.json").read_bytes())
        from prefopt.alloc import Schedule, check_constraints, fixture_instance
        schedule = Schedule.from_json_dict(doc["best_x"])
        assert check_constraints(schedule, fixture_instance()).ok
        assert alloc_report.contains(alloc_problem, schedule)

    def test_missing_file_is_input_error(self, tmp_path):
        assert main(["--problem", str(tmp_path / "nope.json")]) == 2

    def test_invalid_document_is_input_error(self, tmp_path):
        bad = fixture_problem_document("alloc")
        bad["actors"][0]["criteria"]["cost"]["weight"] = 0.2
        path = tmp_path / "bad.json"
        path.write_bytes(canonical_json_bytes(bad))
        assert main(["--problem", str(path)]) == 2

    def test_exhaustion_is_exit_three(self, tmp_path):
        doc = fixture_problem_document("windfarm")
        doc["capability"]["anchor_grid_step"] = 6.0
        doc["solver"] = {"encoding_grid_step": 6.0, "population_size": 20,
                         "max_generations": 6}
        for actor in doc["actors"]:
            for crit, entry in actor["criteria"].items():
                if crit in ("duration", "cost"):
                    entry["threshold"] = 100.0
        path = tmp_path / "conflicting.json"
        path.write_bytes(canonical_json_bytes(doc))
        assert main(["--problem", str(path), "--out", str(tmp_path)]) == 3


class TestOracleMode:
    def test_oracle_report(self, tmp_path, alloc_fixture_path):
        code = main(["--problem", alloc_fixture_path, "--oracle", "--out", str(tmp_path)])
        assert code == 0
        doc = json.loads((tmp_path / "oracle.json").read_bytes())
        assert doc["feasible_count"] == 4576
        assert doc["best_Z"] == pytest.approx(2.007708908527534, abs=1e-12)


class TestWhatIf:
    def test_identity_override_reproduces_base(self, tmp_path, alloc_fixture_path):
        identity = tmp_path / "identity.json"
        identity.write_bytes(canonical_json_bytes({"format_version": "1"}))
        code = main(["--problem", alloc_fixture_path, "--seed", "7",
                     "--whatif", str(identity), "--out", str(tmp_path)])
        assert code == 0
        doc = json.loads((tmp_path / "whatif.json").read_bytes())
        assert doc["base"]["best_x"] == doc["whatif"]["best_x"]
        assert not doc["delta"]["best_x_changed"]

    def test_weight_shift_matches_oracle_extremum(self, tmp_path, alloc_fixture_path,
                                                  alloc_report):
        import numpy as np
        override = tmp_path / "cost_only.json"
        override.write_bytes(canonical_json_bytes(
            {"format_version": "1", "weights": {"operations:cost": 1.0}}))
        code = main(["--problem", alloc_fixture_path, "--seed", "7",
                     "--whatif", str(override), "--out", str(tmp_path)])
        assert code == 0
        doc = json.loads((tmp_path / "whatif.json").read_bytes())
        fs = np.array([f for _, f in alloc_report.candidates])
        assert doc["whatif"]["f_values"]["cost"] == fs[:, 1].min()

    def test_invalid_override_weight_sum(self, tmp_path, alloc_fixture_path):
        override = tmp_path / "bad.json"
        override.write_bytes(canonical_json_bytes(
            {"format_version": "1", "weights": {"operations:cost": 0.7}}))
        assert main(["--problem", alloc_fixture_path, "--whatif", str(override),
                     "--out", str(tmp_path)]) == 2

    def test_threshold_raise_changes_or_exhausts(self, tmp_path, alloc_fixture_path):
        override = tmp_path / "strict.json"
        override.write_bytes(canonical_json_bytes(
            {"format_version": "1",
             "thresholds": {"operations:cost": 100.0, "commercial:makespan": 100.0}}))
        code = main(["--problem", alloc_fixture_path, "--seed", "7",
                     "--whatif", str(override), "--out", str(tmp_path)])
        assert code in (0, 3)


class TestProcessDeterminism:
    def test_two_processes_byte_identical(self, tmp_path, alloc_fixture_path):
        out1, out2 = tmp_path / "r1", tmp_path / "r2"
        for out in (out1, out2):
            proc = run_cli(["--problem", alloc_fixture_path, "--seed", "11",
                            "--out", str(out)])
            assert proc.returncode == 0, proc.stderr
        assert (out1 / "result.json").read_bytes() == (out2 / "result.json").read_bytes()
        assert (out1 / "trace.csv").read_bytes() == (out2 / "trace.csv").read_bytes()
