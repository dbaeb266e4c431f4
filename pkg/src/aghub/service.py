"""HTTP surface.

The two documented read endpoints keep their exact URL shapes:

    GET /api_meta_data?path={path}&key={key}
    GET /api_list_sub_items?path={path}&key={key}

Everything else under /api_* is plumbing that gives the CLI and the web
UI full parity with the catalog, index, provenance, and execution
modules.  All JSON responses are canonical (sorted keys, no
insignificant whitespace), so equal server state produces byte-identical
bodies.  Keys ride in the ``key`` query parameter (paper shape) or the
``X-Api-Key`` header.
"""

from __future__ import annotations

import hmac
from pathlib import Path
from typing import Any, Dict, List, Optional

from fastapi import Depends, FastAPI, Query, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field
from starlette.exceptions import HTTPException as StarletteHTTPException

from .canonical import canonical_bytes
from .config import ServiceConfig
from .errors import AghubError, InvalidFilterError, UnauthorizedError
from .execution import ArgSpec
from .hub import Hub
from .index import QueryFilter
from .provenance import render_dot

ERROR_HTTP: Dict[str, tuple[int, str]] = {
    "not-found": (404, "not_found"),
    "unknown-entity": (404, "not_found"),
    "missing-parent": (404, "not_found"),
    "unauthorized": (401, "unauthorized"),
    "permission-denied": (403, "unauthorized"),
    "path-conflict": (409, "conflict"),
    "duplicate-username": (409, "conflict"),
    "duplicate-member": (409, "conflict"),
    "already-terminal": (409, "conflict"),
}
# anything unmapped is a caller mistake
DEFAULT_ERROR = (400, "bad_request")


def cjson(payload: Any, status_code: int = 200) -> Response:
    return Response(
        content=canonical_bytes(payload),
        status_code=status_code,
        media_type="application/json",
    )


def error_response(code: str, message: str, status_code: int) -> Response:
    return cjson({"error": {"code": code, "message": message}}, status_code)


# -- request bodies ---------------------------------------------------------


class MkdirRequest(BaseModel):
    path: str
    mode: str = "data"


class UpdateMetaRequest(BaseModel):
    path: str
    patch: Dict[str, Any]


class VisibilityRequest(BaseModel):
    path: str
    privilege: str


class DeleteRequest(BaseModel):
    path: str


class MoveRequest(BaseModel):
    src: str
    dst: str


class CollectionRequest(BaseModel):
    action: str  # create | add | remove
    path: str
    member: Optional[str] = None


class ArgSpecModel(BaseModel):
    name: str
    kind: str
    required: bool = False
    default: Any = None


class ArgspecRequest(BaseModel):
    tool: str
    argspec: List[ArgSpecModel] = Field(default_factory=list)
    executor_profile: str = "python3"


class RunRequest(BaseModel):
    tool: str
    bindings: Dict[str, Any] = Field(default_factory=dict)
    output_mode: str = "data"


class CancelRequest(BaseModel):
    run_id: str


class CreateUserRequest(BaseModel):
    username: str


def create_app(hub: Hub, admin_key: str) -> FastAPI:
    app = FastAPI(title="aghub", docs_url=None, redoc_url=None)
    app.state.hub = hub

    def request_key(request: Request) -> str:
        return request.query_params.get("key") or request.headers.get("X-Api-Key") or ""

    def require_user(request: Request) -> str:
        user = hub.catalog.user_by_key(request_key(request))
        if user is None:
            raise UnauthorizedError("missing or invalid key")
        return user

    def require_admin(request: Request) -> None:
        if not hmac.compare_digest(request_key(request), admin_key):
            raise UnauthorizedError("admin key required")

    @app.exception_handler(AghubError)
    async def _aghub_error(request: Request, exc: AghubError) -> Response:
        status, code = ERROR_HTTP.get(exc.code, DEFAULT_ERROR)
        return error_response(code, f"{exc.code}: {exc.message}", status)

    @app.exception_handler(RequestValidationError)
    async def _validation_error(request: Request, exc: RequestValidationError) -> Response:
        return error_response("bad_request", str(exc.errors()[:1]), 400)

    @app.exception_handler(StarletteHTTPException)
    async def _http_error(request: Request, exc: StarletteHTTPException) -> Response:
        code = {401: "unauthorized", 404: "not_found", 409: "conflict"}.get(
            exc.status_code, "bad_request" if exc.status_code < 500 else "internal"
        )
        return error_response(code, str(exc.detail), exc.status_code)

    @app.exception_handler(Exception)
    async def _internal_error(request: Request, exc: Exception) -> Response:
        return error_response("internal", exc.__class__.__name__, 500)

    # -- documented endpoints (bit-exact URL shapes) -----------------------

    @app.get("/api_meta_data")
    def api_meta_data(path: str, user: str = Depends(require_user)) -> Response:
        doc = hub.catalog.get_metadata(path, user)
        return cjson(doc.to_doc())

    @app.get("/api_list_sub_items")
    def api_list_sub_items(path: str, user: str = Depends(require_user)) -> Response:
        docs = hub.catalog.list_children(path, user)
        return cjson([d.to_doc() for d in docs])

    # -- search -------------------------------------------------------------

    @app.get("/api_search")
    def api_search(
        q: str = "",
        k: int = 10,
        mode: Optional[str] = None,
        format: Optional[str] = None,
        category: Optional[str] = None,
        label: Optional[List[str]] = Query(default=None),
        privilege: Optional[str] = None,
        realtime: Optional[bool] = None,
        time_from: Optional[float] = Query(default=None, alias="from"),
        time_to: Optional[float] = Query(default=None, alias="to"),
        bbox: Optional[str] = None,
        user: str = Depends(require_user),
    ) -> Response:
        if (time_from is None) != (time_to is None):
            raise InvalidFilterError("time range needs both from and to")
        spatial = None
        if bbox is not None:
            parts = bbox.split(",")
            if len(parts) != 4:
                raise InvalidFilterError("bbox must be min_lat,min_lon,max_lat,max_lon")
            try:
                vals = [float(p) for p in parts]
            except ValueError:
                raise InvalidFilterError("bbox values must be numbers") from None
            spatial = dict(zip(("min_lat", "min_lon", "max_lat", "max_lon"), vals))
        flt = QueryFilter(
            mode=mode,
            format=format,
            category=category,
            labels=frozenset(label) if label else None,
            privilege=privilege,
            realtime=realtime,
            time_range=(time_from, time_to) if time_from is not None else None,
            spatial_bbox=spatial,
        )
        hits = hub.index.search(q, flt, k, user)
        points = hub.index.project_2d([h.entity_id for h in hits]) if hits else []
        geo_marks = []
        for hit in hits:
            doc = hub.catalog.doc_by_id(hit.entity_id)
            if doc is None or doc.geo is None:
                continue
            if "lat" in doc.geo:
                lat, lon = doc.geo["lat"], doc.geo["lon"]
            else:
                lat = (doc.geo["min_lat"] + doc.geo["max_lat"]) / 2
                lon = (doc.geo["min_lon"] + doc.geo["max_lon"]) / 2
            geo_marks.append(
                {"entity_id": hit.entity_id, "lat": lat, "lon": lon,
                 "mode": hit.mode, "path": hit.path}
            )
        return cjson(
            {
                "hits": [h.to_doc() for h in hits],
                "projection": [p.to_doc() for p in points],
                "geo": geo_marks,
            }
        )

    # -- file management ------------------------------------------------------

    @app.post("/api_upload")
    async def api_upload(
        request: Request,
        path: str,
        mode: str = "data",
        user: str = Depends(require_user),
    ) -> Response:
        body = await request.body()
        hub.catalog.upload_entity(user, path, mode, body)
        doc = hub.catalog.get_metadata(path, user)
        return cjson(doc.to_doc(), 201)

    @app.post("/api_mkdir")
    def api_mkdir(req: MkdirRequest, user: str = Depends(require_user)) -> Response:
        if req.mode == "collection":
            hub.catalog.create_collection(user, req.path)
        else:
            hub.catalog.create_folder(user, req.path, req.mode)
        return cjson(hub.catalog.get_metadata(req.path, user).to_doc(), 201)

    @app.get("/api_content")
    def api_content(path: str, user: str = Depends(require_user)) -> Response:
        data = hub.catalog.read_content(path, user)
        return Response(content=data, media_type="application/octet-stream")

    @app.post("/api_update_meta")
    def api_update_meta(req: UpdateMetaRequest, user: str = Depends(require_user)) -> Response:
        patch = dict(req.patch)
        if "time_range" in patch and isinstance(patch["time_range"], list):
            patch["time_range"] = tuple(patch["time_range"])
        doc = hub.catalog.update_metadata(user, req.path, patch)
        return cjson(doc.to_doc())

    @app.post("/api_visibility")
    def api_visibility(req: VisibilityRequest, user: str = Depends(require_user)) -> Response:
        affected = hub.catalog.set_visibility(user, req.path, req.privilege)
        return cjson({"affected": affected})

    @app.post("/api_delete")
    def api_delete(req: DeleteRequest, user: str = Depends(require_user)) -> Response:
        removed = hub.catalog.delete_entity(user, req.path)
        return cjson({"removed": removed})

    @app.post("/api_move")
    def api_move(req: MoveRequest, user: str = Depends(require_user)) -> Response:
        doc = hub.catalog.move_entity(user, req.src, req.dst)
        return cjson(doc.to_doc())

    @app.post("/api_copy")
    def api_copy(req: MoveRequest, user: str = Depends(require_user)) -> Response:
        entity_id = hub.catalog.copy_entity(user, req.src, req.dst)
        return cjson({"entity_id": entity_id}, 201)

    # -- collections ---------------------------------------------------------

    @app.post("/api_collection")
    def api_collection(req: CollectionRequest, user: str = Depends(require_user)) -> Response:
        if req.action == "create":
            entity_id = hub.catalog.create_collection(user, req.path)
            return cjson({"entity_id": entity_id}, 201)
        if req.action == "add":
            hub.catalog.add_member(user, req.path, req.member or "")
        elif req.action == "remove":
            hub.catalog.remove_member(user, req.path, req.member or "")
        else:
            raise InvalidFilterError(f"unknown collection action {req.action!r}")
        members = hub.catalog.collection_members(req.path, user)
        return cjson({"members": [m.to_doc() for m in members]})

    @app.get("/api_collection")
    def api_collection_get(path: str, user: str = Depends(require_user)) -> Response:
        doc = hub.catalog.get_metadata(path, user)
        members = hub.catalog.collection_members(path, user)
        return cjson(
            {"collection": doc.to_doc(), "members": [m.to_doc() for m in members]}
        )

    # -- tools and runs ---------------------------------------------------------

    @app.post("/api_argspec")
    def api_argspec(req: ArgspecRequest, user: str = Depends(require_user)) -> Response:
        spec = hub.runner.set_tool_argspec(
            user,
            req.tool,
            [ArgSpec(a.name, a.kind, a.required, a.default) for a in req.argspec],
            executor_profile=req.executor_profile,
        )
        return cjson(spec.to_doc())

    @app.get("/api_argspec")
    def api_argspec_get(tool: str, user: str = Depends(require_user)) -> Response:
        return cjson(hub.runner.get_tool_spec(tool, user).to_doc())

    @app.post("/api_run")
    def api_run(req: RunRequest, user: str = Depends(require_user)) -> Response:
        record = hub.runner.launch_run(user, req.tool, req.bindings, req.output_mode)
        return cjson(record.to_doc(), 202)

    @app.get("/api_run_status")
    def api_run_status(run_id: str, user: str = Depends(require_user)) -> Response:
        return cjson(hub.runner.get_run(run_id, user).to_doc())

    @app.get("/api_runs")
    def api_runs(tool: str, user: str = Depends(require_user)) -> Response:
        records = hub.runner.list_runs(tool, user)
        return cjson([r.to_doc() for r in records])

    @app.post("/api_run_cancel")
    def api_run_cancel(req: CancelRequest, user: str = Depends(require_user)) -> Response:
        return cjson(hub.runner.cancel_run(user, req.run_id).to_doc())

    # -- provenance -------------------------------------------------------------

    @app.get("/api_pipeline")
    def api_pipeline(path: str, depth: int = 5, user: str = Depends(require_user)) -> Response:
        doc = hub.catalog.get_metadata(path, user)
        view = hub.provenance.pipeline_of(doc.entity_id, depth)
        payload = view.to_doc()
        payload["dot"] = render_dot(view)
        return cjson(payload)

    # -- accounts ----------------------------------------------------------------

    @app.post("/api_create_user")
    def api_create_user(req: CreateUserRequest, request: Request) -> Response:
        require_admin(request)
        account = hub.catalog.create_user(req.username)
        return cjson({"username": account.username, "api_key": account.api_key}, 201)

    @app.get("/api_whoami")
    def api_whoami(user: str = Depends(require_user)) -> Response:
        return cjson({"username": user})

    ui_dist = Path(__file__).resolve().parent.parent.parent / "frontend" / "dist"
    if ui_dist.is_dir():
        app.mount("/ui", StaticFiles(directory=ui_dist, html=True), name="ui")

    return app


def create_app_from_config(config: ServiceConfig) -> FastAPI:
    hub = Hub(
        config.data_root,
        profiles=config.profiles,
        max_workers=config.max_workers,
    )
    return create_app(hub, config.resolve_admin_key())
