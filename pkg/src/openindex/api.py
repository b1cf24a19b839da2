"""Read-only HTTP/JSON service over an open store.

Endpoints: ``/`` (counts and version), ``/{kind}`` (filtered lists with
offset or cursor paging), ``/{kind}/{key}`` (lookup by short id, id URL,
or a namespaced external id such as ``doi:10.1/x``). Responses are
serialized by hand in the fixed record key order, so a given store state
always produces byte-identical bodies.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import metadata
from typing import Any

from fastapi import FastAPI, Request, Response
from fastapi.middleware.cors import CORSMiddleware

from .idnorm import InvalidIdError
from .ids import EntityKind, IdParseError, parse_id
from .model import to_record
from .query import FilterError, parse_filter, parse_sort
from .store import CursorError, StoreHandle


@dataclass
class ApiConfig:
    host: str = "127.0.0.1"
    port: int = 8000
    base_url: str = "https://openalex.org"
    per_page_default: int = 25
    per_page_max: int = 200
    max_connections: int = 100

    def __post_init__(self) -> None:
        if not 1 <= self.per_page_default <= self.per_page_max:
            raise ValueError("page size limits require max >= default >= 1")
        self.base_url = self.base_url.rstrip("/")


_NAMESPACES = {
    "doi": EntityKind.WORK,
    "orcid": EntityKind.AUTHOR,
    "issn": EntityKind.VENUE,
    "ror": EntityKind.INSTITUTION,
    "wikidata": EntityKind.CONCEPT,
}

_JSON_TYPE = "application/json; charset=utf-8"


def _engine_version() -> str:
    try:
        return metadata.version("openindex")
    except metadata.PackageNotFoundError:
        return "0.0.0"


def _dumps(payload: Any) -> str:
    return json.dumps(payload, ensure_ascii=False, separators=(",", ":"))


def _json_response(payload: Any, status: int = 200) -> Response:
    return Response(_dumps(payload), status_code=status, media_type=_JSON_TYPE)


def _error(status: int, code: str, message: str) -> Response:
    return _json_response({"error": code, "message": message}, status)


def create_app(
    handle: StoreHandle,
    config: ApiConfig | None = None,
    *,
    gui_dir: str | None = None,
) -> FastAPI:
    config = config or ApiConfig()
    app = FastAPI(openapi_url=None, docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["GET"],
        allow_headers=["*"],
    )
    if gui_dir:
        # Mounted first so the catch-all kind routes cannot shadow it.
        from fastapi.staticfiles import StaticFiles

        app.mount("/gui", StaticFiles(directory=gui_dir, html=True), name="gui")

    def render(entity: Any) -> dict:
        record = to_record(entity)
        record["id"] = f"{config.base_url}/{record['id']}"
        return record

    @app.get("/")
    def root() -> Response:
        stats = handle.stats()
        payload = {
            "kinds": [kind.plural for kind in EntityKind],
            "counts": stats["counts"],
            "version": _engine_version(),
            "dump_created_date": stats["last_dump_created"],
        }
        return _json_response(payload)

    @app.get("/{kind_path}")
    def list_entities(kind_path: str, request: Request) -> Response:
        try:
            kind = EntityKind.from_plural(kind_path)
        except ValueError:
            return _error(404, "not_found", f"unknown entity kind {kind_path!r}")
        params = request.query_params
        unknown = set(params) - {"filter", "sort", "page", "per-page", "per_page", "cursor"}
        if unknown:
            return _error(
                400, "bad_request", f"unknown query parameter {sorted(unknown)[0]!r}"
            )
        raw_per_page = params.get("per-page") or params.get("per_page")
        per_page = config.per_page_default
        if raw_per_page is not None:
            try:
                per_page = int(raw_per_page)
            except ValueError:
                return _error(400, "bad_request", f"per-page {raw_per_page!r} is not an integer")
        if not 1 <= per_page <= config.per_page_max:
            return _error(
                400, "bad_request", f"per-page must be between 1 and {config.per_page_max}"
            )
        page = 1
        raw_page = params.get("page")
        if raw_page is not None:
            try:
                page = int(raw_page)
            except ValueError:
                return _error(400, "bad_request", f"page {raw_page!r} is not an integer")
        cursor = params.get("cursor")
        try:
            filter_expr = parse_filter(kind, params.get("filter"))
            sort_spec = parse_sort(kind, params.get("sort"))
            result = handle.list_entities(
                kind,
                filter_expr=filter_expr,
                sort=sort_spec,
                page=page,
                per_page=per_page,
                cursor=cursor,
            )
        except CursorError as exc:
            return _error(400, "bad_cursor", str(exc))
        except FilterError as exc:
            return _error(400, "bad_request", str(exc))
        payload = {
            "meta": {
                "count": result.total,
                "page": None if cursor is not None else page,
                "per_page": per_page,
                "next_cursor": result.next_cursor,
            },
            "results": [render(e) for e in result.results],
        }
        return _json_response(payload)

    @app.get("/{kind_path}/{key:path}")
    def get_entity(kind_path: str, key: str) -> Response:
        try:
            kind = EntityKind.from_plural(kind_path)
        except ValueError:
            return _error(404, "not_found", f"unknown entity kind {kind_path!r}")
        if not key:
            return _error(400, "bad_request", "empty entity key")

        namespace, sep, rest = key.partition(":")
        if sep and namespace.lower() in _NAMESPACES:
            namespace = namespace.lower()
            expected = _NAMESPACES[namespace]
            if expected is not kind:
                return _error(
                    400,
                    "bad_request",
                    f"namespace {namespace}: resolves {expected.plural}, not {kind.plural}",
                )
            try:
                entity = handle.get_by_ceid(kind, rest)
            except InvalidIdError as exc:
                return _error(400, "bad_request", str(exc))
            if entity is None:
                return _error(404, "not_found", f"no {kind.value} with {namespace} {rest!r}")
            return _json_response(render(entity))

        try:
            entity_id = parse_id(key)
        except IdParseError as exc:
            return _error(400, "bad_request", str(exc))
        if entity_id.kind is not kind:
            return _error(
                400,
                "bad_request",
                f"{key!r} is a {entity_id.kind.value} id, not a {kind.value} id",
            )
        entity = handle.get_by_id(entity_id)
        if entity is None:
            return _error(404, "not_found", f"no such {kind.value}: {entity_id.short}")
        return _json_response(render(entity))

    return app


def serve(
    handle: StoreHandle,
    config: ApiConfig | None = None,
    *,
    gui_dir: str | None = None,
) -> None:
    """Run the service until interrupted; optionally mounts the static GUI
    bundle under /gui."""
    import uvicorn

    config = config or ApiConfig()
    app = create_app(handle, config, gui_dir=gui_dir)
    uvicorn.run(
        app,
        host=config.host,
        port=config.port,
        limit_concurrency=config.max_connections,
        log_level="warning",
    )
