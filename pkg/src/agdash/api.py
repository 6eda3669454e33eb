"""HTTP API serving the analyst views.

Endpoints are stateless and fully parameterized; identical GETs against the
same Complete run return byte-identical bodies. Error responses share one
schema: {"error": {"code": ..., "message": ...}}.

Routes
    GET  /health
    POST /runs?policy=&gap_threshold=&merge_min_count=      (body: alert file)
    GET  /runs
    GET  /runs/{run_id}
    GET  /runs/{run_id}/graph      ?attacker_ip&victim_ip&service&micro&from_ts&to_ts&layout
    GET  /runs/{run_id}/redirect   same parameters; highlights the chosen micro
    GET  /runs/{run_id}/timeline   ?perspective&host&from_ts&to_ts
    GET  /runs/{run_id}/matrix     ?attacker_ip&victim_ip&service&micro&from_ts&to_ts
    GET  /runs/{run_id}/nodes/{node_key}/signatures?page=&sort=&order=
    GET  /config
    PUT  /config
"""

from __future__ import annotations

import json
from typing import Optional

from fastapi import FastAPI, Request, Response
from fastapi.responses import JSONResponse

from . import __version__
from .alerts import ParsePolicy, parse_timestamp
from .errors import (
    AgdashError,
    ConfigError,
    EmptyNodeSetError,
    FormatError,
    NotFound,
    NotReady,
    RecordError,
    ValidationError,
)
from .graph import (
    FilterSpec,
    LayoutMethod,
    assign_layout_levels,
    filter_graph,
    graph_document,
    parse_key,
)
from .pipeline import AnalysisOptions, analyze_bytes
from .stages import MicroAIS
from .store import AnalysisRun, Store
from .timeline import Perspective, build_timeline, timeline_document
from .urgency import UrgencyConfig, build_matrix, matrix_document, zero_matrix

SIGNATURE_PAGE_SIZE = 100

_SIGNATURE_COLUMNS = {
    "signature", "start_ts", "end_ts", "attacker_ip", "victim_ip", "frequency",
}


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message


def _stable_json(payload: dict, status_code: int = 200) -> Response:
    body = json.dumps(payload, separators=(",", ":"), allow_nan=False)
    return Response(content=body, status_code=status_code, media_type="application/json")


def _run_doc(run: AnalysisRun) -> dict:
    return {
        "run_id": run.run_id,
        "status": run.status.value,
        "created_at": run.created_at,
        "filename": run.filename,
        "counts": {
            "alerts": run.alert_count,
            "skipped": run.skipped_count,
            "episodes": run.episode_count,
            "nodes": run.node_count,
            "edges": run.edge_count,
            "objective_graphs": run.objective_count,
        },
        "options": {
            "gap_threshold": run.gap_threshold,
            "merge_min_count": run.merge_min_count,
        },
    }


def _parse_window(from_ts: Optional[str], to_ts: Optional[str]):
    if from_ts is None and to_ts is None:
        return None
    if from_ts is None or to_ts is None:
        raise ApiError(400, "invalid_filter", "time window needs both from_ts and to_ts")
    try:
        t0, t1 = parse_timestamp(from_ts), parse_timestamp(to_ts)
    except ValueError as exc:
        raise ApiError(400, "invalid_filter", f"bad timestamp: {exc}") from exc
    if t1 < t0:
        raise ApiError(400, "invalid_filter", "to_ts precedes from_ts")
    return (t0, t1)


def _parse_filter(
    attacker_ip: Optional[str],
    victim_ip: Optional[str],
    service: Optional[str],
    micro: Optional[str],
    from_ts: Optional[str],
    to_ts: Optional[str],
) -> FilterSpec:
    if micro is not None:
        try:
            MicroAIS(micro)
        except ValueError as exc:
            raise ApiError(400, "invalid_filter", f"unknown micro stage: {micro!r}") from exc
    return FilterSpec(
        attacker_ip=attacker_ip,
        victim_ip=victim_ip,
        service=service,
        micro=micro,
        window=_parse_window(from_ts, to_ts),
    )


def _filter_doc(spec: FilterSpec) -> dict:
    return {
        "attacker_ip": spec.attacker_ip,
        "victim_ip": spec.victim_ip,
        "service": spec.service,
        "micro": spec.micro,
        "window": [spec.window[0].isoformat(), spec.window[1].isoformat()]
        if spec.window
        else None,
    }


def create_app(store: Optional[Store] = None) -> FastAPI:
    app = FastAPI(title="agdash", version=__version__)
    app.state.store = store if store is not None else Store()

    def _store() -> Store:
        return app.state.store

    @app.exception_handler(ApiError)
    async def handle_api_error(_req: Request, exc: ApiError):
        return JSONResponse(
            status_code=exc.status,
            content={"error": {"code": exc.code, "message": exc.message}},
        )

    @app.exception_handler(AgdashError)
    async def handle_domain_error(_req: Request, exc: AgdashError):
        status, code = 500, "internal"
        if isinstance(exc, NotFound):
            status, code = 404, "not_found"
        elif isinstance(exc, NotReady):
            status, code = 409, "not_ready"
        elif isinstance(exc, (FormatError, RecordError)):
            status, code = 422, "format_error"
        elif isinstance(exc, ConfigError):
            status, code = 400, "invalid_config"
        elif isinstance(exc, ValidationError):
            status, code = 400, "validation"
        return JSONResponse(
            status_code=status, content={"error": {"code": code, "message": str(exc)}}
        )

    @app.get("/health")
    def health():
        return _stable_json(
            {"service": "agdash", "version": __version__, "runs": _store().run_count()}
        )

    @app.post("/runs")
    async def upload(
        request: Request,
        policy: str = "skip",
        gap_threshold: float = 300.0,
        merge_min_count: int = 5,
        filename: str = "upload.json",
    ):
        body = await request.body()
        if not body.strip():
            raise ApiError(422, "empty_body", "alert upload is empty")
        try:
            parse_policy = ParsePolicy(policy)
        except ValueError as exc:
            raise ApiError(400, "validation", f"unknown policy {policy!r}") from exc
        if gap_threshold <= 0 or merge_min_count < 1:
            raise ApiError(400, "validation", "gap_threshold must be > 0 and merge_min_count >= 1")
        outcome = analyze_bytes(
            body,
            filename,
            _store(),
            AnalysisOptions(
                policy=parse_policy,
                gap_threshold=gap_threshold,
                merge_min_count=merge_min_count,
            ),
        )
        doc = _run_doc(outcome.run)
        doc["created"] = outcome.created
        return _stable_json(doc, status_code=201 if outcome.created else 200)

    @app.get("/runs")
    def list_runs():
        return _stable_json({"runs": [_run_doc(r) for r in _store().list_runs()]})

    @app.get("/runs/{run_id}")
    def get_run(run_id: str):
        return _stable_json(_run_doc(_store().get_run(run_id)))

    def _graph_response(run_id: str, spec: FilterSpec, layout: str, highlight: Optional[str]):
        try:
            method = LayoutMethod(layout)
        except ValueError as exc:
            raise ApiError(400, "validation", f"unknown layout {layout!r}") from exc
        snapshot = _store().load_analysis(run_id)
        view = filter_graph(snapshot.graph, spec)
        levels = assign_layout_levels(view, method)
        return _stable_json(
            {
                "run_id": run_id,
                "filter": _filter_doc(spec),
                "layout": method.value,
                "highlight_micro": highlight,
                "graph": graph_document(view, levels=levels, highlight_micro=highlight),
            }
        )

    @app.get("/runs/{run_id}/graph")
    def get_graph(
        run_id: str,
        attacker_ip: Optional[str] = None,
        victim_ip: Optional[str] = None,
        service: Optional[str] = None,
        micro: Optional[str] = None,
        from_ts: Optional[str] = None,
        to_ts: Optional[str] = None,
        layout: str = LayoutMethod.HUBSIZE.value,
    ):
        spec = _parse_filter(attacker_ip, victim_ip, service, micro, from_ts, to_ts)
        return _graph_response(run_id, spec, layout, highlight=None)

    @app.get("/runs/{run_id}/redirect")
    def redirect_to_graph(
        run_id: str,
        attacker_ip: Optional[str] = None,
        victim_ip: Optional[str] = None,
        service: Optional[str] = None,
        micro: Optional[str] = None,
        from_ts: Optional[str] = None,
        to_ts: Optional[str] = None,
        layout: str = LayoutMethod.HUBSIZE.value,
    ):
        spec = _parse_filter(attacker_ip, victim_ip, service, micro, from_ts, to_ts)
        return _graph_response(run_id, spec, layout, highlight=spec.micro)

    @app.get("/runs/{run_id}/timeline")
    def get_timeline(
        run_id: str,
        perspective: str = Perspective.ATTACKER.value,
        host: Optional[str] = None,
        from_ts: Optional[str] = None,
        to_ts: Optional[str] = None,
    ):
        try:
            view = Perspective(perspective)
        except ValueError as exc:
            raise ApiError(400, "validation", f"unknown perspective {perspective!r}") from exc
        window = _parse_window(from_ts, to_ts)
        snapshot = _store().load_analysis(run_id)
        lanes, segments = build_timeline(snapshot.sequences, view, host=host, window=window)
        doc = timeline_document(lanes, segments)
        doc.update(
            {
                "run_id": run_id,
                "perspective": view.value,
                "host": host,
                "window": [window[0].isoformat(), window[1].isoformat()] if window else None,
            }
        )
        return _stable_json(doc)

    @app.get("/runs/{run_id}/matrix")
    def get_matrix(
        run_id: str,
        attacker_ip: Optional[str] = None,
        victim_ip: Optional[str] = None,
        service: Optional[str] = None,
        micro: Optional[str] = None,
        from_ts: Optional[str] = None,
        to_ts: Optional[str] = None,
    ):
        spec = _parse_filter(attacker_ip, victim_ip, service, micro, from_ts, to_ts)
        snapshot = _store().load_analysis(run_id)
        config = _store().get_current_config()
        try:
            matrix = build_matrix(snapshot.graph, snapshot.episodes, config, spec)
            empty = False
        except EmptyNodeSetError:
            matrix = zero_matrix(config)
            empty = True
        doc = matrix_document(matrix)
        doc.update({"run_id": run_id, "filter": _filter_doc(spec), "empty_node_set": empty})
        return _stable_json(doc)

    @app.get("/runs/{run_id}/nodes/{node_key}/signatures")
    def node_signatures(
        run_id: str,
        node_key: str,
        page: int = 1,
        sort: str = "start_ts",
        order: str = "asc",
    ):
        if page < 1:
            raise ApiError(400, "validation", "page starts at 1")
        if sort not in _SIGNATURE_COLUMNS:
            raise ApiError(400, "validation", f"cannot sort by {sort!r}")
        if order not in ("asc", "desc"):
            raise ApiError(400, "validation", "order must be asc or desc")
        rows = _store().node_signature_table(run_id, parse_key(node_key))
        rows.sort(key=lambda r: getattr(r, sort), reverse=(order == "desc"))
        start = (page - 1) * SIGNATURE_PAGE_SIZE
        page_rows = rows[start : start + SIGNATURE_PAGE_SIZE]
        return _stable_json(
            {
                "run_id": run_id,
                "node_key": node_key,
                "page": page,
                "page_size": SIGNATURE_PAGE_SIZE,
                "total_rows": len(rows),
                "rows": [
                    {
                        "signature": r.signature,
                        "start_ts": r.start_ts.isoformat(),
                        "end_ts": r.end_ts.isoformat(),
                        "attacker_ip": r.attacker_ip,
                        "victim_ip": r.victim_ip,
                        "frequency": r.frequency,
                    }
                    for r in page_rows
                ],
            }
        )

    @app.get("/config")
    def get_config():
        return _stable_json(_store().get_current_config().to_document())

    @app.put("/config")
    async def put_config(request: Request):
        try:
            doc = json.loads(await request.body())
        except json.JSONDecodeError as exc:
            raise ApiError(400, "invalid_config", f"config body is not JSON: {exc}") from exc
        config = UrgencyConfig.from_document(doc)  # ConfigError -> 400, state unchanged
        accepted = _store().set_current_config(config)
        return _stable_json(accepted.to_document())

    return app
