"""HTTP service exposing validate/solve/compare/sweep to the web UI.

Solves are asynchronous: submitting one returns a job id and the client
polls.  Scenarios are content-addressed by hash in a local store directory,
so re-uploading an identical document gives the same id and repeated
identical requests are deduplicated (409) unless forced.
"""

from __future__ import annotations

import json
import os
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from fastapi import Body, FastAPI, HTTPException, Query
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from . import analysis
from .formulation import build_milp, check_plan_invariants, decode
from .generate import paper_workload, preset_costs, list_presets, sec2_combined, sec2_video
from .model import (
    Scenario,
    ScenarioFormatError,
    scenario_from_dict,
    scenario_hash,
    scenario_to_dict,
    validate,
)
from .solver import NodeBudgetExceeded, solve_milp

JOB_KINDS = ("solve", "compare", "sweep")


@dataclass
class JobRecord:
    id: str
    kind: str
    scenario_hash: str
    status: str = "queued"          # queued -> running -> done | failed
    result: dict | None = None
    error: str | None = None
    created_at: float = 0.0
    started_at: float | None = None
    finished_at: float | None = None

    def to_dict(self) -> dict:
        out = {
            "id": self.id,
            "kind": self.kind,
            "scenario": self.scenario_hash,
            "status": self.status,
            "created_at": self.created_at,
            "started_at": self.started_at,
            "finished_at": self.finished_at,
        }
        if self.status == "done":
            out["result"] = self.result
        if self.status == "failed":
            out["error"] = self.error
        return out


_ALLOWED_TRANSITIONS = {
    ("queued", "running"),
    ("running", "done"),
    ("running", "failed"),
}


class JobStore:
    """In-memory job table with monotone status transitions."""

    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._jobs: dict[str, JobRecord] = {}
        self._dedup: dict[tuple[str, str, str], str] = {}
        self._counter = 0

    def create(self, kind: str, s_hash: str, params_key: str,
               force: bool) -> tuple[JobRecord, bool]:
        with self._lock:
            key = (s_hash, kind, params_key)
            existing = self._dedup.get(key)
            if existing is not None and not force:
                return self._jobs[existing], False
            self._counter += 1
            job = JobRecord(id=f"job-{self._counter}", kind=kind,
                            scenario_hash=s_hash, created_at=time.time())
            self._jobs[job.id] = job
            self._dedup[key] = job.id
            return job, True

    def get(self, job_id: str) -> JobRecord | None:
        with self._lock:
            return self._jobs.get(job_id)

    def transition(self, job_id: str, status: str, *, result: dict | None = None,
                   error: str | None = None) -> None:
        with self._lock:
            job = self._jobs[job_id]
            if (job.status, status) not in _ALLOWED_TRANSITIONS:
                raise RuntimeError(
                    f"illegal job transition {job.status} -> {status}")
            job.status = status
            if status == "running":
                job.started_at = time.time()
            else:
                job.finished_at = time.time()
            job.result = result
            job.error = error


def _preset_catalog() -> list[dict]:
    entries = []
    for name in list_presets():
        costs = preset_costs(name)
        entries.append({
            "id": f"costs/{name}",
            "kind": "cost-preset",
            "description": costs.description,
            "per_kind": {k.value: {"fixed": e.fixed, "var": e.var, "elas": e.elas}
                         for k, e in costs.per_kind.items()},
            "parameters": costs.parameters,
        })
    entries.append({
        "id": "toy-sec2",
        "kind": "scenario",
        "description": "Two-platform teaching scenario: one Video class, "
                       "flexible hardware vs cloud.",
        "scenario": scenario_to_dict(sec2_video()),
    })
    entries.append({
        "id": "sec2-combined",
        "kind": "scenario",
        "description": "Video plus latency-bound Voice; hybrid provisioning.",
        "scenario": scenario_to_dict(sec2_combined()),
    })
    entries.append({
        "id": "paper-workload",
        "kind": "scenario",
        "description": "Abilene 11-PoP workload: 4 classes, 8 NFs, gravity "
                       "traffic with jitter.",
        "scenario": scenario_to_dict(paper_workload()),
    })
    return entries


def create_app(store_dir: str | None = None, max_workers: int | None = None) -> FastAPI:
    store_dir = store_dir or os.environ.get("NFVPLAN_STORE", "./nfvplan-store")
    os.makedirs(store_dir, exist_ok=True)
    if max_workers is None:
        max_workers = int(os.environ.get("NFVPLAN_WORKERS", "2"))
    app = FastAPI(title="nfvplan", version="0.1.0")
    # The UI is served same-origin in production; permissive CORS keeps
    # the vite dev server and headless UI tests working against localhost.
    app.add_middleware(CORSMiddleware, allow_origins=["*"],
                       allow_methods=["*"], allow_headers=["*"])
    jobs = JobStore()
    pool = ThreadPoolExecutor(max_workers=max_workers)

    def scenario_path(s_hash: str) -> str:
        return os.path.join(store_dir, f"{s_hash}.json")

    def load_stored(s_hash: str) -> Scenario:
        path = scenario_path(s_hash)
        if not os.path.exists(path):
            raise HTTPException(status_code=404,
                                detail=f"unknown scenario id {s_hash!r}")
        with open(path, "r", encoding="utf-8") as fh:
            return scenario_from_dict(json.load(fh))

    @app.post("/scenarios", status_code=201)
    def upload_scenario(doc: dict = Body(...)):
        try:
            scenario = scenario_from_dict(doc)
        except ScenarioFormatError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        violations = validate(scenario)
        if violations:
            return JSONResponse(status_code=400, content={
                "violations": [
                    {"entity": v.entity, "rule": v.rule, "detail": v.detail}
                    for v in violations
                ],
            })
        s_hash = scenario_hash(scenario)
        path = scenario_path(s_hash)
        if not os.path.exists(path):
            with open(path, "w", encoding="utf-8") as fh:
                json.dump(scenario_to_dict(scenario), fh, sort_keys=True)
        return {"id": s_hash, "violations": []}

    @app.get("/scenarios/{s_hash}")
    def get_scenario(s_hash: str):
        return scenario_to_dict(load_stored(s_hash))

    def submit(kind: str, s_hash: str, params: dict, force: bool, runner):
        params_key = json.dumps(params, sort_keys=True)
        job, created = jobs.create(kind, s_hash, params_key, force)
        if not created:
            raise HTTPException(
                status_code=409,
                detail={"message": "identical job already submitted",
                        "job_id": job.id})

        def run():
            jobs.transition(job.id, "running")
            try:
                result = runner()
            except Exception as exc:  # surfaced to the polling client
                jobs.transition(job.id, "failed", error=str(exc))
                return
            jobs.transition(job.id, "done", result=result)

        pool.submit(run)
        return {"job_id": job.id}

    @app.post("/solve/{s_hash}", status_code=202)
    def solve(s_hash: str, force: bool = Query(False),
              body: dict = Body(default={})):
        scenario = load_stored(s_hash)
        node_budget = int(body.get("node_budget", 200_000))

        def runner():
            problem, vi = build_milp(scenario)
            try:
                solution = solve_milp(problem, node_budget=node_budget)
            except NodeBudgetExceeded as exc:
                raise RuntimeError(str(exc))
            if solution.status != "optimal":
                return {"status": "infeasible"}
            plan = decode(scenario, vi, solution)
            check_plan_invariants(scenario, vi, solution, plan)
            return {"status": "optimal", "cost_total": plan.cost_total,
                    "plan": plan.to_dict(), "nodes": solution.node_count}

        return submit("solve", s_hash, {"node_budget": node_budget}, force, runner)

    @app.post("/compare/{s_hash}", status_code=202)
    def compare(s_hash: str, force: bool = Query(False),
                body: dict = Body(default={})):
        scenario = load_stored(s_hash)
        node_budget = int(body.get("node_budget", 200_000))

        def runner():
            report = analysis.compare_models(scenario, node_budget=node_budget,
                                             label=s_hash)
            return analysis.comparison_to_dict(report)

        return submit("compare", s_hash, {"node_budget": node_budget}, force,
                      runner)

    @app.post("/sweep/{s_hash}", status_code=202)
    def do_sweep(s_hash: str, force: bool = Query(False),
                 body: dict = Body(...)):
        scenario = load_stored(s_hash)
        try:
            spec = analysis.SweepSpec(
                parameter=body["parameter"],
                values=tuple(float(v) for v in body["values"]),
                base_scenario=s_hash)
        except (KeyError, TypeError, ValueError) as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        node_budget = int(body.get("node_budget", 200_000))

        def runner():
            points = analysis.sweep(spec, scenario, node_budget=node_budget)
            return analysis.sweep_to_dict(spec, points)

        params = {"parameter": spec.parameter, "values": list(spec.values),
                  "node_budget": node_budget}
        return submit("sweep", s_hash, params, force, runner)

    @app.get("/jobs/{job_id}")
    def get_job(job_id: str):
        job = jobs.get(job_id)
        if job is None:
            raise HTTPException(status_code=404, detail=f"unknown job {job_id!r}")
        return job.to_dict()

    @app.get("/presets")
    def presets():
        return _preset_catalog()

    ui_dir = os.environ.get("NFVPLAN_UI_DIR", "")
    if ui_dir and os.path.isdir(ui_dir):
        app.mount("/ui", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app


def main() -> None:
    import uvicorn

    host = os.environ.get("NFVPLAN_HOST", "127.0.0.1")
    port = int(os.environ.get("NFVPLAN_PORT", "8787"))
    uvicorn.run(create_app(), host=host, port=port)


if __name__ == "__main__":
    main()
