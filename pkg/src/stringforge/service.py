"""HTTP front end for profiling sessions.

Thin layer over :class:`~stringforge.sessions.SessionStore`: endpoints parse
the request, call the store, and return its JSON as-is, so the CLI and the
service can never disagree about payload shapes.  Failures surface as
``{"error", "detail"}`` bodies with 4xx status codes.
"""
from __future__ import annotations

import csv
import io
import json

from fastapi import FastAPI, Request, Response
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from . import __version__
from .sessions import PREVIEW_LIMIT, SessionError, SessionStore


class TargetRequest(BaseModel):
    pattern: "str | None" = None
    cluster_id: "str | None" = None
    k: int = 5


class RepairRequest(BaseModel):
    source: str
    index: int


def _rows_from_request(body: bytes, content_type: str, column: "str | None"):
    """Decode the uploaded column: JSON rows, a CSV column, or plain lines."""
    kind = (content_type or "text/plain").split(";")[0].strip().lower()
    try:
        text = body.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise SessionError(f"request body is not valid UTF-8: {exc}") from exc

    if kind == "application/json":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SessionError(f"request body is not valid JSON: {exc}") from exc
        if not isinstance(doc, dict) or not isinstance(doc.get("rows"), list):
            raise SessionError('JSON body must be an object with a "rows" list')
        return doc["rows"], doc.get("column") or column

    if kind == "text/csv":
        records = list(csv.reader(io.StringIO(text)))
        if not records:
            raise SessionError("CSV body has no header row")
        header, *data = records
        if column is not None:
            if column not in header:
                raise SessionError(
                    f"CSV has no column {column!r}; columns are {header}"
                )
            idx = header.index(column)
        else:
            idx = 0
            column = header[0] if header else "column1"
        rows = [rec[idx] if idx < len(rec) else "" for rec in data]
        return rows, column

    if kind in ("text/plain", ""):
        return text.splitlines(), column

    raise SessionError(f"unsupported content type {content_type!r}")


def create_app(store: "SessionStore | None" = None) -> FastAPI:
    app = FastAPI(title="stringforge", version=__version__)
    app.state.store = store if store is not None else SessionStore()
    # The web UI is served separately (static files), so the API must allow
    # cross-origin calls.  Sessions carry no credentials; a wildcard is fine.
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(SessionError)
    async def session_error(_request: Request, exc: SessionError) -> JSONResponse:
        return JSONResponse(
            status_code=exc.http_status,
            content={"error": exc.code, "detail": str(exc)},
        )

    @app.post("/sessions", status_code=201)
    async def create_session(request: Request, column: "str | None" = None) -> dict:
        body = await request.body()
        rows, column = _rows_from_request(
            body, request.headers.get("content-type", ""), column
        )
        session = app.state.store.create(rows, column or "column1")
        return app.state.store.hierarchy_json(session.session_id)

    @app.get("/sessions/{session_id}/hierarchy")
    async def get_hierarchy(session_id: str) -> dict:
        return app.state.store.hierarchy_json(session_id)

    @app.post("/sessions/{session_id}/target")
    async def set_target(session_id: str, req: TargetRequest) -> dict:
        return app.state.store.set_target(
            session_id,
            pattern_text=req.pattern,
            cluster_id=req.cluster_id,
            k=req.k,
        )

    @app.get("/sessions/{session_id}/program")
    async def get_program(session_id: str) -> dict:
        return app.state.store.program_json(session_id)

    @app.get("/sessions/{session_id}/preview")
    async def preview(
        session_id: str,
        limit: int = PREVIEW_LIMIT,
        branch: "int | None" = None,
    ) -> dict:
        return app.state.store.preview(session_id, limit=limit, branch=branch)

    @app.post("/sessions/{session_id}/repair")
    async def repair(session_id: str, req: RepairRequest) -> dict:
        return app.state.store.repair(session_id, req.source, req.index)

    @app.get("/sessions/{session_id}/export")
    async def export(session_id: str, format: str = "script") -> Response:
        media_type, payload = app.state.store.export(session_id, format)
        return Response(content=payload, media_type=media_type)

    return app
