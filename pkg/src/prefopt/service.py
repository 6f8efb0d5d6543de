"""HTTP service: problem upload, solve runs, run inspection, what-if re-solves.

Storage is a content-addressed record store on local disk (problems and
run records as canonical JSON files); runs execute on a single FIFO
worker so results stay deterministic and byte-identical to CLI runs of
the same (problem, config, seed) triple. Error bodies carry machine
codes mirroring the CLI exit contract: input_error (2), no_solution (3).
"""

from __future__ import annotations

import hashlib
import json
import os
import queue
import threading
from datetime import datetime, timezone
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .errors import InfeasibilityExhaustedError, PrefoptError, ProblemFileError
from .problemfile import (
    apply_overrides,
    build_loaded_problem,
    canonical_json_bytes,
    result_document,
    validate_overrides,
)
from .solver import GaConfig, solve

API_PREFIX = "/v1"


def _hash(doc) -> str:
    return hashlib.sha256(canonical_json_bytes(doc)).hexdigest()[:24]


class RecordStore:
    """Write-once JSON records; run records are rewritten only until done."""

    def __init__(self, root: Path):
        self.root = Path(root)
        (self.root / "problems").mkdir(parents=True, exist_ok=True)
        (self.root / "runs").mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()

    def _path(self, kind: str, record_id: str) -> Path:
        return self.root / kind / f"{record_id}.json"

    def write(self, kind: str, record_id: str, doc: dict) -> None:
        path = self._path(kind, record_id)
        tmp = path.with_suffix(".tmp")
        with self._lock:
            tmp.write_bytes(canonical_json_bytes(doc))
            os.replace(tmp, path)

    def read(self, kind: str, record_id: str) -> dict | None:
        path = self._path(kind, record_id)
        if not path.exists():
            return None
        return json.loads(path.read_bytes())

    def ids(self, kind: str) -> list[str]:
        return sorted(p.stem for p in (self.root / kind).glob("*.json"))


class RunWorker:
    """Executes queued runs serially in FIFO order."""

    def __init__(self, store: RecordStore):
        self.store = store
        self.queue: "queue.Queue[str]" = queue.Queue()
        self.thread = threading.Thread(target=self._loop, daemon=True)
        self.thread.start()

    def enqueue(self, run_id: str) -> None:
        self.queue.put(run_id)

    def _loop(self) -> None:
        while True:
            run_id = self.queue.get()
            try:
                self._execute(run_id)
            except Exception as e:  # defensive: a worker crash must not kill the queue
                record = self.store.read("runs", run_id)
                if record is not None:
                    record["status"] = "failed"
                    record["error"] = {"code": "internal_error", "detail": str(e)}
                    self.store.write("runs", run_id, record)
            finally:
                self.queue.task_done()

    def _execute(self, run_id: str) -> None:
        record = self.store.read("runs", run_id)
        if record is None or record["status"] not in ("queued", "running"):
            return
        record["status"] = "running"
        self.store.write("runs", run_id, record)
        try:
            problem_doc = self.store.read("problems", record["problem_id"])
            loaded = build_loaded_problem(problem_doc)
            problem = loaded.problem
            if record.get("overrides"):
                problem = apply_overrides(problem, record["overrides"])
            config_doc = {**{k: v for k, v in (loaded.document.get("solver", {})).items()
                             if k != "encoding_grid_step"},
                          **(record.get("config") or {})}
            config = GaConfig(rng_seed=record["seed"], **config_doc)
            result = solve(problem, config, loaded.encoding)
            record["result"] = result_document(loaded.kind, record["seed"], problem, result)
            record["status"] = "done"
        except InfeasibilityExhaustedError as e:
            record["status"] = "failed"
            record["error"] = {"code": "no_solution", "detail": str(e),
                               "diagnostics": e.diagnostics}
        except PrefoptError as e:
            record["status"] = "failed"
            record["error"] = {"code": "input_error", "detail": str(e)}
        self.store.write("runs", run_id, record)


def _error(status: int, code: str, detail, location: str | None = None) -> JSONResponse:
    body = {"code": code, "detail": detail}
    if location:
        body["location"] = location
    return JSONResponse(body, status_code=status)


def create_app(data_dir: str | Path | None = None) -> FastAPI:
    data_dir = Path(data_dir or os.environ.get("PREFOPT_DATA", "prefopt-data"))
    store = RecordStore(data_dir)
    worker = RunWorker(store)
    app = FastAPI(title="prefopt service", version="1")
    app.state.store = store
    app.state.worker = worker

    # resume work interrupted by a restart
    for run_id in store.ids("runs"):
        record = store.read("runs", run_id)
        if record and record["status"] in ("queued", "running"):
            record["status"] = "queued"
            store.write("runs", run_id, record)
            worker.enqueue(run_id)

    @app.get(f"{API_PREFIX}/health")
    def health():
        return {"status": "ok"}

    @app.post(f"{API_PREFIX}/problems", status_code=201)
    async def create_problem(request: Request):
        try:
            doc = await request.json()
        except json.JSONDecodeError as e:
            return _error(422, "input_error", f"invalid JSON: {e.msg}")
        try:
            build_loaded_problem(doc)  # full validation, including semantic checks
        except ProblemFileError as e:
            return _error(422, "input_error", str(e), e.location)
        except PrefoptError as e:
            return _error(422, "input_error", str(e))
        problem_id = _hash(doc)
        if store.read("problems", problem_id) is None:
            store.write("problems", problem_id, doc)
        return {"problem_id": problem_id}

    @app.get(API_PREFIX + "/problems/{problem_id}")
    def get_problem(problem_id: str):
        doc = store.read("problems", problem_id)
        if doc is None:
            return _error(404, "not_found", f"unknown problem {problem_id}")
        return doc

    def _new_run(problem_id: str, seed: int, config: dict,
                 overrides: dict | None, base_run_id: str | None):
        run_id = _hash({
            "problem_id": problem_id, "seed": seed, "config": config,
            "overrides": overrides, "base_run_id": base_run_id,
        })
        existing = store.read("runs", run_id)
        if existing is not None:
            if existing["status"] == "done":
                return JSONResponse(
                    {"code": "duplicate_run", "run_id": run_id,
                     "detail": "identical run already completed"},
                    status_code=409,
                ), run_id
            return {"run_id": run_id}, run_id
        record = {
            "run_id": run_id,
            "problem_id": problem_id,
            "seed": seed,
            "config": config,
            "overrides": overrides,
            "base_run_id": base_run_id,
            "status": "queued",
            "created_at": datetime.now(timezone.utc).isoformat(),
            "result": None,
            "error": None,
        }
        store.write("runs", run_id, record)
        worker.enqueue(run_id)
        return {"run_id": run_id}, run_id

    @app.post(f"{API_PREFIX}/runs", status_code=201)
    async def start_run(request: Request):
        body = await request.json()
        problem_id = body.get("problem_id")
        if not problem_id or store.read("problems", problem_id) is None:
            return _error(404, "not_found", f"unknown problem {problem_id!r}")
        problem_doc = store.read("problems", problem_id)
        seed = body.get("seed", problem_doc["seed"])
        config = body.get("config") or {}
        if not isinstance(seed, int):
            return _error(422, "input_error", "seed must be an integer")
        try:
            GaConfig(rng_seed=seed, **config)
        except (PrefoptError, TypeError) as e:
            return _error(422, "input_error", f"invalid config: {e}")
        response, _ = _new_run(problem_id, seed, config, None, None)
        return response

    @app.get(API_PREFIX + "/runs/{run_id}")
    def get_run(run_id: str, trace_offset: int | None = None, trace_limit: int | None = None):
        record = store.read("runs", run_id)
        if record is None:
            return _error(404, "not_found", f"unknown run {run_id}")
        if record.get("result") and (trace_offset is not None or trace_limit is not None):
            trace = record["result"]["trace"]
            lo = trace_offset or 0
            hi = lo + trace_limit if trace_limit is not None else None
            record = {**record, "result": {**record["result"], "trace": trace[lo:hi],
                                           "trace_total": len(trace)}}
        return record

    @app.post(API_PREFIX + "/runs/{run_id}/whatif", status_code=201)
    async def whatif(run_id: str, request: Request):
        base = store.read("runs", run_id)
        if base is None:
            return _error(404, "not_found", f"unknown run {run_id}")
        if base["status"] != "done":
            return _error(409, "base_not_done",
                          f"base run status is {base['status']!r}")
        overrides = await request.json()
        try:
            validate_overrides(overrides)
            problem_doc = store.read("problems", base["problem_id"])
            loaded = build_loaded_problem(problem_doc)
            merged = _merge_overrides(base.get("overrides"), overrides)
            apply_overrides(loaded.problem, merged)  # validate against the problem
        except ProblemFileError as e:
            return _error(422, "input_error", str(e), e.location)
        except PrefoptError as e:
            return _error(422, "input_error", str(e))
        response, _ = _new_run(base["problem_id"], base["seed"], base.get("config") or {},
                               merged, run_id)
        return response

    return app


def _merge_overrides(base: dict | None, new: dict) -> dict:
    """What-ifs chain: a what-if of a what-if layers its overrides on top."""
    if not base:
        return new
    merged = {"format_version": "1"}
    for section in ("weights", "thresholds", "curves"):
        values = dict(base.get(section, {}))
        values.update(new.get(section, {}))
        if values:
            merged[section] = values
    return merged

