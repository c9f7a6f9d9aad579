"""Persistence and query of readings, recordings, and device commands.

Storage is in-memory indexes plus an append-only newline-delimited JSON log
(one self-describing tagged record per line, versioned header). Payload blobs
are content-addressed files next to the log. A store opened on the same data
directory replays the log and reconstructs the exact state.

Concurrency: one writer lock serializes all mutations; queries copy the
matching snapshot under the same lock, so a query started before a batch
commits sees none of that batch.
"""

from __future__ import annotations

import hashlib
import json
import threading
from dataclasses import dataclass, replace
from datetime import datetime
from enum import Enum
from pathlib import Path

from .errors import StorageFailure, UnknownDevice, UnknownRecording
from .model import (
    BBox,
    DeviceKind,
    DeviceRecord,
    GeoPoint,
    RecordingAsset,
    RecordingKind,
    TrapReading,
    format_timestamp,
)

LOG_FORMAT = "traphub-log"
LOG_VERSION = 1

__all__ = ["CommandKind", "DeviceCommand", "ReadingFilter", "Store"]


class CommandKind(str, Enum):
    POWER_ON = "power_on"
    POWER_OFF = "power_off"
    SET_SCHEDULE = "set_schedule"
    SET_DETECTION_THRESHOLD = "set_detection_threshold"
    SET_TIMEZONE = "set_timezone"


@dataclass
class DeviceCommand:
    device: str
    command: CommandKind
    payload: dict
    issued_at: datetime
    delivered: bool = False
    command_id: int | None = None

    def to_document(self) -> dict:
        return {
            "command_id": self.command_id,
            "device": self.device,
            "command": self.command.value,
            "payload": self.payload,
            "issued_at": format_timestamp(self.issued_at),
            "delivered": self.delivered,
        }


@dataclass(frozen=True)
class ReadingFilter:
    """Conjunction of optional clauses; an empty filter matches everything."""

    devices: frozenset[str] | None = None
    time_range: tuple[datetime, datetime] | None = None
    bbox: BBox | None = None
    hours_of_day: frozenset[int] | None = None

    def __post_init__(self):
        if self.time_range is not None:
            start, end = self.time_range
            if start >= end:
                raise StorageFailure("time_range start must precede end", field="time_range")

    def matches(self, r: TrapReading) -> bool:
        if self.devices is not None and r.device not in self.devices:
            return False
        if self.time_range is not None:
            start, end = self.time_range
            if not (start <= r.timestamp < end):
                return False
        if self.bbox is not None and not self.bbox.contains(r.lat, r.long):
            return False
        if self.hours_of_day is not None and r.hour not in self.hours_of_day:
            return False
        return True


def _reading_to_record(r: TrapReading) -> dict:
    return {"t": "reading", "v": r.to_document()}


def _reading_from_document(doc: dict) -> TrapReading:
    return TrapReading(
        timestamp=datetime.strptime(doc["timestamp"], "%Y-%m-%dT%H:%M"),
        counts=doc["counts"],
        temperature=doc["temperature"],
        humidity=doc["humidity"],
        lat=doc["lat"],
        long=doc["long"],
        device=doc["device"],
    )


def _asset_from_document(doc: dict) -> RecordingAsset:
    return RecordingAsset(
        kind=RecordingKind(doc["kind"]),
        timestamp=datetime.strptime(doc["timestamp"], "%Y-%m-%dT%H:%M:%S"),
        serial=doc["serial"],
        filename=doc["filename"],
        container=doc["container"],
        device=doc["device"],
        temperature=doc["temperature"],
        humidity=doc["humidity"],
        optical_intensity=doc["optical_intensity"],
        payload_ref=doc["payload_ref"],
    )


class Store:
    """Telemetry store; pass ``data_dir`` for durable (log-backed) operation."""

    def __init__(self, data_dir: str | Path | None = None):
        self._lock = threading.RLock()
        self._readings: dict[str, dict[datetime, TrapReading]] = {}
        self._devices: dict[str, DeviceRecord] = {}
        self._recordings: dict[str, RecordingAsset] = {}
        self._payloads: dict[str, bytes] = {}
        self._commands: list[DeviceCommand] = []
        self._next_command_id = 1
        self._log = None
        self._data_dir: Path | None = None
        if data_dir is not None:
            self._data_dir = Path(data_dir)
            self._data_dir.mkdir(parents=True, exist_ok=True)
            (self._data_dir / "payloads").mkdir(exist_ok=True)
            self._replay()
            self._log = open(self._data_dir / "store.log", "a", encoding="utf-8")
            if self._log.tell() == 0:
                self._append({"t": "header", "format": LOG_FORMAT, "version": LOG_VERSION})

    def close(self):
        with self._lock:
            if self._log:
                self._log.close()
                self._log = None

    # -- log plumbing ------------------------------------------------------------

    def _append(self, record: dict):
        if self._log is None:
            return
        try:
            self._log.write(json.dumps(record, separators=(",", ":"), sort_keys=True) + "\n")
            self._log.flush()
        except OSError as exc:
            raise StorageFailure(f"log append failed: {exc}") from exc

    def _replay(self):
        log_path = self._data_dir / "store.log"
        if not log_path.exists():
            return
        with open(log_path, encoding="utf-8") as fh:
            for line_no, line in enumerate(fh, start=1):
                line = line.strip()
                if not line:
                    continue
                try:
                    record = json.loads(line)
                except json.JSONDecodeError as exc:
                    raise StorageFailure(f"corrupt log line {line_no}: {exc}") from exc
                tag = record.get("t")
                if tag == "header":
                    if record.get("format") != LOG_FORMAT or record.get("version") != LOG_VERSION:
                        raise StorageFailure(f"unsupported log header: {record}")
                elif tag == "reading":
                    self._apply_reading(_reading_from_document(record["v"]))
                elif tag == "recording":
                    self._apply_recording(record["id"], _asset_from_document(record["v"]))
                elif tag == "command":
                    cmd = DeviceCommand(
                        device=record["v"]["device"],
                        command=CommandKind(record["v"]["command"]),
                        payload=record["v"]["payload"],
                        issued_at=datetime.strptime(record["v"]["issued_at"], "%Y-%m-%dT%H:%M"),
                        delivered=record["v"]["delivered"],
                        command_id=record["v"]["command_id"],
                    )
                    self._commands.append(cmd)
                    self._next_command_id = max(self._next_command_id, cmd.command_id + 1)
                elif tag == "delivery":
                    for cmd in self._commands:
                        if cmd.command_id == record["id"]:
                            cmd.delivered = True
                else:
                    raise StorageFailure(f"unknown log record tag {tag!r} at line {line_no}")

    # -- devices -------------------------------------------------------------------

    def _touch_device(
        self, device: str, kind: DeviceKind, position: GeoPoint | None, seen: datetime
    ):
        current = self._devices.get(device)
        if current is None:
            self._devices[device] = DeviceRecord(
                device=device, kind=kind, last_position=position, last_seen=seen
            )
            return
        if current.kind is not kind:
            raise StorageFailure(
                f"device {device!r} is registered as {current.kind.value}, "
                f"got {kind.value} data",
                field="device",
            )
        if current.last_seen is None or seen >= current.last_seen:
            self._devices[device] = replace(
                current, last_position=position or current.last_position, last_seen=seen
            )

    def devices(self) -> list[DeviceRecord]:
        with self._lock:
            return [self._devices[d] for d in sorted(self._devices)]

    def get_device(self, device: str) -> DeviceRecord:
        with self._lock:
            record = self._devices.get(device)
        if record is None:
            raise UnknownDevice(f"unknown device {device!r}", field="device")
        return record

    # -- readings ------------------------------------------------------------------

    def _apply_reading(self, reading: TrapReading):
        self._readings.setdefault(reading.device, {})[reading.timestamp] = reading
        self._touch_device(
            reading.device, DeviceKind.EFUNNEL, reading.position, reading.timestamp
        )

    def insert_readings(self, readings: list[TrapReading]) -> int:
        """Upsert a batch; (device, timestamp) keys are last-writer-wins."""
        with self._lock:
            for reading in readings:
                self._apply_reading(reading)
                self._append(_reading_to_record(reading))
        return len(readings)

    def query_readings(self, filter: ReadingFilter | None = None) -> list[TrapReading]:
        """Readings matching all filter clauses, sorted by (device, timestamp)."""
        filter = filter or ReadingFilter()
        with self._lock:
            snapshot = [
                r
                for device in self._readings.values()
                for r in device.values()
                if filter.matches(r)
            ]
        snapshot.sort(key=lambda r: (r.device, r.timestamp))
        return snapshot

    def reading_count(self) -> int:
        with self._lock:
            return sum(len(rows) for rows in self._readings.values())

    # -- recordings ------------------------------------------------------------------

    def _apply_recording(self, asset_id: str, asset: RecordingAsset):
        self._recordings[asset_id] = asset
        if asset.device:
            self._touch_device(asset.device, asset.kind.device_kind, None, asset.timestamp)

    @staticmethod
    def _asset_id(asset: RecordingAsset) -> str:
        key = f"{asset.kind.value}:{asset.device}:{asset.filename}"
        return hashlib.sha256(key.encode()).hexdigest()[:16]

    def register_recording(self, asset: RecordingAsset, payload: bytes) -> str:
        """Store an asset and its payload (content-addressed); returns the asset id.

        Re-registering the same (kind, device, filename) overwrites.
        """
        payload_key = hashlib.sha256(payload).hexdigest()
        stored = replace(asset, payload_ref=payload_key)
        asset_id = self._asset_id(stored)
        with self._lock:
            if self._data_dir is not None:
                blob = self._data_dir / "payloads" / payload_key
                if not blob.exists():
                    blob.write_bytes(payload)
            else:
                self._payloads[payload_key] = payload
            self._apply_recording(asset_id, stored)
            self._append({"t": "recording", "id": asset_id, "v": stored.to_document()})
        return asset_id

    def list_recordings(
        self,
        device: str | None = None,
        kind: RecordingKind | None = None,
        time_range: tuple[datetime, datetime] | None = None,
    ) -> list[tuple[str, RecordingAsset]]:
        """(asset id, asset) pairs, newest first."""
        with self._lock:
            items = list(self._recordings.items())
        out = []
        for asset_id, asset in items:
            if device is not None and asset.device != device:
                continue
            if kind is not None and asset.kind is not kind:
                continue
            if time_range is not None and not (time_range[0] <= asset.timestamp < time_range[1]):
                continue
            out.append((asset_id, asset))
        out.sort(key=lambda item: (item[1].timestamp, item[1].filename), reverse=True)
        return out

    def get_recording(self, asset_id: str) -> RecordingAsset:
        with self._lock:
            asset = self._recordings.get(asset_id)
        if asset is None:
            raise UnknownRecording(f"unknown recording {asset_id!r}", field="recording_id")
        return asset

    def get_payload(self, asset_id: str) -> bytes:
        asset = self.get_recording(asset_id)
        if self._data_dir is not None:
            blob = self._data_dir / "payloads" / asset.payload_ref
            if not blob.exists():
                raise StorageFailure(f"payload blob {asset.payload_ref} missing")
            return blob.read_bytes()
        return self._payloads[asset.payload_ref]

    # -- command downlink ---------------------------------------------------------------

    def enqueue_command(
        self, device: str, command: CommandKind, payload: dict | None = None,
        issued_at: datetime | None = None,
    ) -> int:
        """Queue a configuration command for a registered device; returns its id."""
        with self._lock:
            if device not in self._devices:
                raise UnknownDevice(f"unknown device {device!r}", field="device")
            cmd = DeviceCommand(
                device=device,
                command=command,
                payload=payload or {},
                issued_at=issued_at or datetime.now().replace(second=0, microsecond=0),
                command_id=self._next_command_id,
            )
            self._next_command_id += 1
            self._commands.append(cmd)
            self._append({"t": "command", "v": cmd.to_document()})
            return cmd.command_id

    def poll_commands(self, device: str) -> list[DeviceCommand]:
        """Undelivered commands for a device, in issue order, marked delivered.

        Each command is returned by exactly one poll.
        """
        with self._lock:
            if device not in self._devices:
                raise UnknownDevice(f"unknown device {device!r}", field="device")
            due = [c for c in self._commands if c.device == device and not c.delivered]
            for cmd in due:
                cmd.delivered = True
                self._append({"t": "delivery", "id": cmd.command_id})
            return [replace(c) for c in due]
