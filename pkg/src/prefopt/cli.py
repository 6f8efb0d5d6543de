"""Command-line entry point.

Exit codes are a stable contract: 0 success, 2 input error, 3 no
feasible-acceptable solution. All randomness flows from the problem
file's seed (or --seed); results and traces are written as versioned
JSON / CSV so runs are diff-able and reproducible.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .errors import (
    BudgetError,
    InfeasibilityExhaustedError,
    PrefoptError,
    ProblemFileError,
)
from .problemfile import (
    apply_overrides,
    canonical_json_bytes,
    load_overrides_file,
    load_problem_file,
    result_document,
    serialize_decision,
    whatif_document,
)
from .solver import GaConfig, solve

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NO_SOLUTION = 3


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="prefopt",
        description="Solve a preference-based group-decision problem "
                    "(or enumerate it exhaustively) from a problem file.",
    )
    parser.add_argument("--problem", required=True, help="problem file (JSON)")
    parser.add_argument("--seed", type=int, default=None,
                        help="override the problem file's seed")
    parser.add_argument("--oracle", action="store_true",
                        help="run the exhaustive enumeration oracle instead of the GA")
    parser.add_argument("--whatif", default=None, metavar="OVERRIDES",
                        help="overrides file; solve base and override side by side")
    parser.add_argument("--out", default=".", help="output directory")
    parser.add_argument("--trace", default=None, help="trace CSV path")
    return parser


def _write(path: Path, payload: bytes) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(payload)


def _solve_document(loaded, seed: int) -> dict:
    config = GaConfig(**{**loaded.config.__dict__, "rng_seed": seed})
    result = solve(loaded.problem, config, loaded.encoding)
    return result_document(loaded.kind, seed, loaded.problem, result)


def _run_oracle(loaded, out_dir: Path) -> int:
    from . import oracle
    if loaded.kind == "windfarm":
        step = loaded.document.get("solver", {}).get("encoding_grid_step") \
            or loaded.document["capability"].get("anchor_grid_step", 0.1)
        report = oracle.enumerate_windfarm(loaded.problem, step)
    elif loaded.kind == "alloc":
        report = oracle.enumerate_alloc(loaded.problem)
    else:
        print("oracle mode supports only the built-in problem kinds", file=sys.stderr)
        return EXIT_INPUT
    from .problemfile import finite_or_none
    doc = {
        "format_version": "1",
        "problem_kind": loaded.kind,
        "total_enumerated": report.total_enumerated,
        "feasible_count": report.feasible_count,
        "acceptable_count": report.acceptable_count,
        "extrema": {c: [finite_or_none(v[0]), finite_or_none(v[1])]
                    for c, v in report.extrema.items()},
        "best_x": serialize_decision(loaded.kind, report.best_x)
        if report.best_x is not None else None,
        "best_Z": report.best_Z,
    }
    _write(out_dir / "oracle.json", canonical_json_bytes(doc))
    print(f"oracle: {report.feasible_count} feasible / {report.total_enumerated} enumerated")
    if report.best_x is not None:
        print(f"best_Z = {report.best_Z!r}")
        print(f"best_x = {doc['best_x']}")
    else:
        print("no feasible-acceptable candidate")
    return EXIT_OK


def _print_summary(doc: dict) -> None:
    print(f"best_Z = {doc['best_Z']!r}")
    print(f"best_x = {doc['best_x']}")
    print(f"f = {doc['f_values']}")
    status = "feasible" if doc["feasible"] else "infeasible"
    status += ", acceptable" if doc["acceptable"] else ", not acceptable"
    print(f"status: {status}; {doc['evaluations']} evaluations, "
          f"{doc['generations']} generations ({doc['terminated_by']})")


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    out_dir = Path(args.out)
    try:
        loaded = load_problem_file(args.problem)
    except ProblemFileError as e:
        where = f" [{e.location}]" if e.location else ""
        print(f"error: {e}{where}", file=sys.stderr)
        return EXIT_INPUT

    seed = args.seed if args.seed is not None else loaded.seed
    try:
        if args.oracle:
            return _run_oracle(loaded, out_dir)

        if args.whatif:
            overrides = load_overrides_file(args.whatif)
            problem2 = apply_overrides(loaded.problem, overrides)
            base_doc = _solve_document(loaded, seed)
            config = GaConfig(**{**loaded.config.__dict__, "rng_seed": seed})
            result2 = solve(problem2, config, loaded.encoding)
            over_doc = result_document(loaded.kind, seed, problem2, result2)
            comparison = whatif_document(base_doc, over_doc, overrides)
            _write(out_dir / "whatif.json", canonical_json_bytes(comparison))
            print("base:")
            _print_summary(base_doc)
            print("what-if:")
            _print_summary(over_doc)
            print(f"delta best_Z = {comparison['delta']['best_Z']!r}; "
                  f"best_x changed: {comparison['delta']['best_x_changed']}")
            return EXIT_OK

        doc = _solve_document(loaded, seed)
        _write(out_dir / "result.json", canonical_json_bytes(doc))
        trace_path = Path(args.trace) if args.trace else out_dir / "trace.csv"
        trace_path.parent.mkdir(parents=True, exist_ok=True)
        with open(trace_path, "w", encoding="utf-8") as fh:
            fh.write("generation,best_Z,mean_Z,feasible_count\n")
            for gen, best_z, mean_z, feas in doc["trace"]:
                cells = ("" if v is None else repr(v) for v in (best_z, mean_z))
                fh.write(f"{gen},{','.join(cells)},{feas}\n")
        _print_summary(doc)
        return EXIT_OK

    except ProblemFileError as e:
        where = f" [{e.location}]" if e.location else ""
        print(f"error: {e}{where}", file=sys.stderr)
        return EXIT_INPUT
    except InfeasibilityExhaustedError as e:
        print(f"no solution: {e} {e.diagnostics}", file=sys.stderr)
        return EXIT_NO_SOLUTION
    except BudgetError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except PrefoptError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
