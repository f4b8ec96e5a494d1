"""Scheduler-extender HTTP service: filter + prioritize over the wire.

Stateless by design: cluster state arrives in each request body, so replaying
a recorded request yields an identical response and horizontal scaling is
trivial. Scores quantize closeness to integers 0-100 (half-up); the full
closeness values ride along to 6 decimals for audit.

Endpoints:
    POST /api/v1/filter      capacity feasibility split
    POST /api/v1/prioritize  TOPSIS scores, best first
    GET  /healthz            version, active scheme, uptime

Errors: 400 malformed body, 422 empty node list, 409 no feasible node; all
carry a machine-readable {"error": ...} document. Unknown request fields are
ignored, never fatal.
"""

import json
import logging
import os
import time

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from . import __version__
from .config import ENV_SCHEME, load_config
from .errors import ConfigError, NoFeasibleNodes
from .model import feasible_nodes, resolve_scheme_name, schedule

logger = logging.getLogger("greenpod.service")


class NodeDoc(BaseModel):
    name: str
    category: str = "Default"
    vcpus: float
    memory_gb: float
    allocated_cpu: float = 0.0
    allocated_memory_gb: float = 0.0
    speed_factor: float | None = None
    power_scale: float | None = None


class PodDoc(BaseModel):
    name: str
    workload_class: str = "Medium"
    cpu_request: float | None = None
    memory_request_gb: float | None = None
    work_units: float | None = None


class FilterBody(BaseModel):
    pod: PodDoc
    nodes: list[NodeDoc]


class PrioritizeBody(FilterBody):
    scheme: str | None = None


class ServiceSettings:
    """Active configuration; swapped atomically on reload."""

    def __init__(self, config_path=None, scheme=None):
        self.config = load_config(config_path)
        self.scheme_name = resolve_scheme_name(
            scheme or os.environ.get(ENV_SCHEME) or "general"
        )
        self.config_path = config_path


def _doc_dict(doc_model):
    return {k: v for k, v in doc_model.model_dump().items() if v is not None}


def _parse_request(body, settings):
    config = settings.config
    pod = config.pod_from_doc(_doc_dict(body.pod))
    nodes = [config.node_from_doc(_doc_dict(n)) for n in body.nodes]
    return pod, nodes


def _score(closeness):
    return int(closeness * 100.0 + 0.5)


def create_app(config_path=None, scheme=None):
    app = FastAPI(title="greenpod-extender", version=__version__)
    app.state.settings = ServiceSettings(config_path=config_path, scheme=scheme)
    app.state.started = time.time()

    @app.exception_handler(RequestValidationError)
    async def malformed(request, exc):
        return JSONResponse(
            status_code=400,
            content={"error": "malformed_request", "detail": str(exc.errors())},
        )

    @app.exception_handler(ConfigError)
    async def bad_domain(request, exc):
        return JSONResponse(status_code=400, content={"error": "invalid_document", "detail": str(exc)})

    @app.post("/api/v1/filter")
    async def handle_filter(body: FilterBody):
        settings = app.state.settings
        if not body.nodes:
            return JSONResponse(status_code=422, content={"error": "empty_node_list"})
        pod, nodes = _parse_request(body, settings)
        feasible, rejected = feasible_nodes(pod, nodes)
        return {"feasible": [n.name for n in feasible], "rejected": rejected}

    @app.post("/api/v1/prioritize")
    async def handle_prioritize(body: PrioritizeBody):
        settings = app.state.settings
        if not body.nodes:
            return JSONResponse(status_code=422, content={"error": "empty_node_list"})
        pod, nodes = _parse_request(body, settings)
        scheme_name = resolve_scheme_name(body.scheme) if body.scheme else settings.scheme_name
        scheme = settings.config.scheme(scheme_name)
        started = time.perf_counter()
        try:
            decision = schedule(pod, nodes, scheme, config=settings.config)
        except NoFeasibleNodes as exc:
            return JSONResponse(
                status_code=409,
                content={"error": "no_feasible_node", "rejected": exc.rejected},
            )
        result = decision.rank_result
        request_index = {name: i for i, name in enumerate(result.alternatives)}
        entries = [
            {"node": name, "score": _score(c), "closeness": round(float(c), 6)}
            for name, c in zip(result.alternatives, result.closeness)
        ]
        entries.sort(key=lambda e: (-e["score"], request_index[e["node"]]))
        latency_ms = (time.perf_counter() - started) * 1000.0
        logger.info(
            json.dumps(
                {
                    "event": "prioritize",
                    "pod": pod.name,
                    "chosen_node": decision.chosen_node,
                    "scheme": scheme_name,
                    "closeness": {e["node"]: e["closeness"] for e in entries},
                    "latency_ms": round(latency_ms, 3),
                }
            )
        )
        return {
            "scheme": scheme_name,
            "best": decision.chosen_node,
            "scores": entries,
            "rejected": decision.filtered_out,
        }

    @app.get("/healthz")
    async def handle_health():
        settings = app.state.settings
        return {
            "status": "ok",
            "version": __version__,
            "scheme": settings.scheme_name,
            "uptime_s": round(time.time() - app.state.started, 3),
        }

    return app


def reload_settings(app, config_path=None, scheme=None):
    """Swap the active configuration; readers see old or new, never a mix."""
    app.state.settings = ServiceSettings(config_path=config_path, scheme=scheme)


def serve(host="0.0.0.0", port=8080, config_path=None, scheme=None):
    import uvicorn

    uvicorn.run(create_app(config_path=config_path, scheme=scheme), host=host, port=port)
