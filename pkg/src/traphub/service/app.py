"""HTTP API over the store and analytics: ingestion, queries, the tool
registry endpoints, and the device command downlink.

Every JSON response body is canonical JSON (sorted keys, no whitespace,
shortest float form) so clients can byte-compare against library results.
Auth is a single optional static bearer token (TRAPHUB_TOKEN).
"""

from __future__ import annotations

import os
from dataclasses import replace
from datetime import datetime

from fastapi import FastAPI, Request, Response, UploadFile, Form
from ..errors import (
    BadParameter,
    TraphubError,
    UnknownDevice,
    UnknownRecording,
)
from ..ingest import parse_recording_filename, parse_tabular
from ..model import RecordingKind, parse_timestamp
from ..store import CommandKind, ReadingFilter, Store
from .canonical import canonical_json
from .manifest import build_manifest
from .registry import TOOLS, ToolSpec, parse_params

__all__ = ["create_app"]

_PAYLOAD_MEDIA = {"wav": "audio/wav", "mp3": "audio/mpeg", "jpg": "image/jpeg"}


def _json(document, status_code: int = 200) -> Response:
    return Response(
        content=canonical_json(document),
        status_code=status_code,
        media_type="application/json",
    )


def create_app(store: Store, auth_token: str | None = None) -> FastAPI:
    app = FastAPI(title="traphub", docs_url=None, redoc_url=None)
    token = auth_token if auth_token is not None else os.environ.get("TRAPHUB_TOKEN")

    @app.middleware("http")
    async def bearer_auth(request: Request, call_next):
        if token and request.url.path.startswith("/api/"):
            supplied = request.headers.get("authorization", "")
            if supplied != f"Bearer {token}":
                return _json(
                    {"error": "unauthorized", "field": None, "message": "bad bearer token"},
                    status_code=401,
                )
        return await call_next(request)

    @app.exception_handler(TraphubError)
    async def traphub_error(request: Request, exc: TraphubError):
        status = 404 if isinstance(exc, (UnknownDevice, UnknownRecording)) else 400
        return _json(exc.to_document(), status_code=status)

    # -- ingestion ---------------------------------------------------------------

    @app.post("/api/ingest/readings")
    async def ingest_readings(request: Request):
        body = await request.body()
        readings, report = parse_tabular(body.decode("utf-8"))
        inserted = store.insert_readings(readings)
        doc = report.to_document()
        doc["inserted"] = inserted
        return _json(doc)

    @app.post("/api/ingest/recordings/{kind}")
    async def ingest_recording(
        kind: str, filename: str = Form(...), payload: UploadFile = Form(...),
        device: str = Form(""),
    ):
        try:
            rec_kind = RecordingKind(kind)
        except ValueError:
            raise BadParameter(
                f"unknown recording kind {kind!r}, expected one of "
                f"{[k.value for k in RecordingKind]}",
                "kind",
            ) from None
        asset = parse_recording_filename(filename, rec_kind)
        if device:
            asset = replace(asset, device=device)
        blob = await payload.read()
        asset_id = store.register_recording(asset, blob)
        return _json({"asset_id": asset_id})

    # -- devices and raw data ------------------------------------------------------

    @app.get("/api/devices")
    async def list_devices():
        return _json([d.to_document() for d in store.devices()])

    @app.get("/api/devices/{device_id}/readings")
    async def device_readings(
        device_id: str, start: str | None = None, end: str | None = None,
        hours: str | None = None,
    ):
        store.get_device(device_id)  # 404 if unknown
        time_range = None
        if start or end:
            lo = parse_timestamp(start) if start else datetime.min
            hi = parse_timestamp(end) if end else datetime.max
            time_range = (lo, hi)
        hour_set = None
        if hours:
            try:
                hour_set = frozenset(int(h) for h in hours.split(",") if h.strip())
            except ValueError:
                raise BadParameter("hours must be comma-separated integers", "hours") from None
        rows = store.query_readings(
            ReadingFilter(
                devices=frozenset({device_id}), time_range=time_range, hours_of_day=hour_set
            )
        )
        return _json([r.to_document() for r in rows])

    @app.get("/api/recordings")
    async def list_recordings(
        device: str | None = None, kind: str | None = None,
        start: str | None = None, end: str | None = None,
    ):
        rec_kind = None
        if kind:
            try:
                rec_kind = RecordingKind(kind)
            except ValueError:
                raise BadParameter(f"unknown recording kind {kind!r}", "kind") from None
        time_range = None
        if start or end:
            lo = parse_timestamp(start) if start else datetime.min
            hi = parse_timestamp(end) if end else datetime.max
            time_range = (lo, hi)
        items = store.list_recordings(device=device or None, kind=rec_kind, time_range=time_range)
        return _json(
            [{"asset_id": asset_id, **asset.to_document()} for asset_id, asset in items]
        )

    @app.get("/api/recordings/{recording_id}/payload")
    async def recording_payload(recording_id: str):
        asset = store.get_recording(recording_id)
        blob = store.get_payload(recording_id)
        media = _PAYLOAD_MEDIA.get(asset.container, "application/octet-stream")
        return Response(content=blob, media_type=media)

    # -- command downlink ------------------------------------------------------------

    @app.post("/api/devices/{device_id}/commands")
    async def post_command(device_id: str, request: Request):
        body = await request.json()
        command_name = body.get("command")
        try:
            command = CommandKind(command_name)
        except ValueError:
            raise BadParameter(
                f"unknown command {command_name!r}, expected one of "
                f"{[c.value for c in CommandKind]}",
                "command",
            ) from None
        payload = body.get("payload") or {}
        if not isinstance(payload, dict):
            raise BadParameter("payload must be an object", "payload")
        command_id = store.enqueue_command(device_id, command, payload)
        return _json({"command_id": command_id})

    @app.get("/api/devices/{device_id}/commands/poll")
    async def poll_commands(device_id: str):
        commands = store.poll_commands(device_id)
        return _json([c.to_document() for c in commands])

    # -- registry-driven analytics/DSP endpoints -----------------------------------------

    def _make_handler(tool: ToolSpec):
        async def handler(request: Request):
            raw = dict(request.query_params)
            raw.update(request.path_params)
            params = parse_params(tool, raw)
            return _json(tool.handler(store, params))

        handler.__name__ = f"tool_{tool.name.replace('-', '_')}"
        return handler

    for tool in TOOLS.values():
        app.get(tool.path)(_make_handler(tool))

    @app.get("/api/tools/manifest")
    async def tools_manifest():
        return _json(build_manifest())

    return app
