"""Read-only HTTP API over a snapshot directory.

Every response is a pure function of the snapshot contents; there are no
mutation endpoints and no state beyond the snapshot loaded at startup.
Unknown users/topics answer 404, malformed queries 400, both with a JSON
``{"error": ...}`` body.
"""

from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse

from .risk import SCOPES, Window, parse_timestamp
from .snapshot import Snapshot, load_snapshot

MAX_PAGE_SIZE = 500
DEFAULT_PAGE_SIZE = 50


class ApiError(Exception):
    def __init__(self, status: int, message: str):
        self.status = status
        self.message = message
        super().__init__(message)


def parse_window_param(raw: str) -> Window:
    """Window query syntax: ``<start ISO-8601>/<end ISO-8601>``."""
    parts = raw.split("/")
    if len(parts) != 2:
        raise ApiError(400, "window must be '<start ISO-8601>/<end ISO-8601>'")
    try:
        return Window(parse_timestamp(parts[0]), parse_timestamp(parts[1]))
    except ValueError as exc:
        raise ApiError(400, f"bad window: {exc}") from exc


def create_app(snapshot: Snapshot, cors_origin: str | None = None, ui_dir=None) -> FastAPI:
    app = FastAPI(title="topicgrids", openapi_url=None)

    if cors_origin:
        from fastapi.middleware.cors import CORSMiddleware

        app.add_middleware(
            CORSMiddleware,
            allow_origins=[o.strip() for o in cors_origin.split(",")],
            allow_methods=["GET"],
            allow_headers=["*"],
        )

    @app.exception_handler(ApiError)
    async def api_error_handler(_: Request, exc: ApiError):
        return JSONResponse(status_code=exc.status, content={"error": exc.message})

    @app.exception_handler(RequestValidationError)
    async def validation_handler(_: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400, content={"error": str(exc.errors()[:1])})

    @app.get("/api/meta")
    def meta():
        m = snapshot.manifest
        return {
            "format_version": m["format_version"],
            "k": m["k"],
            "h": m["h"],
            "window": m["window"],
            "benchmark_start": m["benchmark_start"],
            "entry_count": m["entry_count"],
            "vocabulary_size": m["vocabulary_size"],
        }

    @app.get("/api/users")
    def users():
        return {
            "users": [
                {"id": u["id"], "group": u["group"], "entries": u["entries"]}
                for u in snapshot.users()
            ]
        }

    @app.get("/api/users/{user_id}/grids")
    def grids(user_id: str, window: str | None = None):
        win = parse_window_param(window) if window is not None else None
        try:
            return snapshot.gridset_payload(user_id, win)
        except KeyError:
            raise ApiError(404, f"unknown user {user_id!r}")

    @app.get("/api/topics/{k}")
    def topic(k: int):
        try:
            return snapshot.topic_payload(k)
        except KeyError:
            raise ApiError(404, f"unknown topic {k}")

    @app.get("/api/topics/{k}/accesses")
    def accesses(
        k: int,
        user: str | None = None,
        scope: str | None = None,
        offset: int = 0,
        limit: int = DEFAULT_PAGE_SIZE,
    ):
        if scope is not None and scope not in SCOPES:
            raise ApiError(400, f"unknown scope {scope!r}, expected one of {list(SCOPES)}")
        if scope is not None and user is None:
            raise ApiError(400, "scope filtering requires a user")
        if offset < 0:
            raise ApiError(400, "offset must be >= 0")
        if not 1 <= limit <= MAX_PAGE_SIZE:
            raise ApiError(400, f"limit must be in [1, {MAX_PAGE_SIZE}]")
        if user is not None and not snapshot.has_user(user):
            raise ApiError(404, f"unknown user {user!r}")
        try:
            return snapshot.accesses(k, user=user, scope=scope, offset=offset, limit=limit)
        except KeyError:
            raise ApiError(404, f"unknown topic {k}")

    if ui_dir:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=Path(ui_dir), html=True), name="ui")

    return app


def serve_api(
    snapshot_dir,
    port: int = 8000,
    host: str = "127.0.0.1",
    cors_origin: str | None = None,
    ui_dir=None,
) -> None:
    import uvicorn

    app = create_app(load_snapshot(snapshot_dir), cors_origin=cors_origin, ui_dir=ui_dir)
    uvicorn.run(app, host=host, port=port, log_level="info")
