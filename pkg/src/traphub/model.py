"""Core domain types: trap readings, devices, recordings, analytics results.

All types are immutable values validated at construction; invalid raw input
raises a specific :mod:`traphub.errors` subclass, never a bare exception.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from datetime import date, datetime
from enum import Enum

from .errors import MalformedTimestamp, MissingField, OutOfRange

TEMPERATURE_RANGE = (-50.0, 60.0)
HUMIDITY_RANGE = (0.0, 100.0)

#: The seven tabular CSV columns, in canonical order.
TABULAR_COLUMNS = ("Timestamp", "Counts", "Temperature", "Humidity", "Lat", "Long", "Name")


class DeviceKind(str, Enum):
    EFUNNEL = "efunnel"
    TREEVIBE = "treevibe"
    WINGBEAT = "wingbeat"
    VISIONTRAP = "visiontrap"


class RecordingKind(str, Enum):
    VIBRATION = "vibration"
    WINGBEAT = "wingbeat"
    IMAGE = "image"

    @property
    def device_kind(self) -> DeviceKind:
        return _RECORDING_DEVICE_KIND[self]


_RECORDING_DEVICE_KIND = {
    RecordingKind.VIBRATION: DeviceKind.TREEVIBE,
    RecordingKind.WINGBEAT: DeviceKind.WINGBEAT,
    RecordingKind.IMAGE: DeviceKind.VISIONTRAP,
}


class Metric(str, Enum):
    COUNTS = "counts"
    TEMPERATURE = "temperature"
    HUMIDITY = "humidity"


@dataclass(frozen=True, slots=True)
class GeoPoint:
    lat: float
    long: float

    def __post_init__(self):
        if not (-90.0 <= self.lat <= 90.0):
            raise OutOfRange(f"latitude {self.lat!r} outside [-90, 90]", field="Lat")
        if not (-180.0 <= self.long <= 180.0):
            raise OutOfRange(f"longitude {self.long!r} outside [-180, 180]", field="Long")

    def to_document(self) -> dict:
        return {"lat": self.lat, "long": self.long}


@dataclass(frozen=True, slots=True)
class BBox:
    """Inclusive geographic bounding box."""

    lat_min: float
    lat_max: float
    long_min: float
    long_max: float

    def __post_init__(self):
        GeoPoint(self.lat_min, self.long_min)
        GeoPoint(self.lat_max, self.long_max)
        if self.lat_min > self.lat_max:
            raise OutOfRange("lat_min > lat_max", field="bbox")
        if self.long_min > self.long_max:
            raise OutOfRange("long_min > long_max", field="bbox")

    def contains(self, lat: float, long: float) -> bool:
        return self.lat_min <= lat <= self.lat_max and self.long_min <= long <= self.long_max

    def to_document(self) -> dict:
        return {
            "lat_min": self.lat_min,
            "lat_max": self.lat_max,
            "long_min": self.long_min,
            "long_max": self.long_max,
        }


@dataclass(frozen=True, slots=True)
class TrapReading:
    """One hourly row uploaded by an e-funnel trap (device-local civil time)."""

    timestamp: datetime
    counts: int
    temperature: float
    humidity: float
    lat: float
    long: float
    device: str

    def __post_init__(self):
        if self.timestamp.second != 0 or self.timestamp.microsecond != 0:
            raise MalformedTimestamp(
                f"reading timestamps have minute precision, got {self.timestamp!r}",
                field="Timestamp",
            )
        if self.counts < 0:
            raise OutOfRange(f"counts {self.counts} is negative", field="Counts")
        lo, hi = TEMPERATURE_RANGE
        if not (lo <= self.temperature <= hi):
            raise OutOfRange(
                f"temperature {self.temperature} outside [{lo}, {hi}]", field="Temperature"
            )
        lo, hi = HUMIDITY_RANGE
        if not (lo <= self.humidity <= hi):
            raise OutOfRange(f"humidity {self.humidity} outside [{lo}, {hi}]", field="Humidity")
        GeoPoint(self.lat, self.long)  # range check
        if not self.device:
            raise MissingField("device name is empty", field="Name")

    @property
    def position(self) -> GeoPoint:
        return GeoPoint(self.lat, self.long)

    @property
    def day(self) -> date:
        return self.timestamp.date()

    @property
    def hour(self) -> int:
        return self.timestamp.hour

    def to_document(self) -> dict:
        return {
            "timestamp": format_timestamp(self.timestamp),
            "counts": self.counts,
            "temperature": self.temperature,
            "humidity": self.humidity,
            "lat": self.lat,
            "long": self.long,
            "device": self.device,
        }


@dataclass(frozen=True, slots=True)
class DeviceRecord:
    device: str
    kind: DeviceKind
    last_position: GeoPoint | None = None
    timezone_offset_minutes: int | None = None
    last_seen: datetime | None = None

    def to_document(self) -> dict:
        return {
            "device": self.device,
            "kind": self.kind.value,
            "last_position": self.last_position.to_document() if self.last_position else None,
            "timezone_offset_minutes": self.timezone_offset_minutes,
            "last_seen": self.last_seen.isoformat(timespec="minutes") if self.last_seen else None,
        }


@dataclass(frozen=True, slots=True)
class RecordingAsset:
    """A recording file plus the metadata encoded in its filename.

    ``container`` is the filename extension; vibration probes upload either
    mp3 or wav and the extension must survive a parse/render round trip.
    """

    kind: RecordingKind
    timestamp: datetime
    serial: int
    filename: str
    container: str
    device: str = ""
    temperature: float | None = None
    humidity: float | None = None
    optical_intensity: float | None = None
    payload_ref: str | None = None

    def __post_init__(self):
        from .errors import InconsistentFields

        if self.serial < 0:
            raise InconsistentFields(f"serial {self.serial} is negative", field="serial")
        env = (self.temperature, self.humidity, self.optical_intensity)
        if self.kind is RecordingKind.WINGBEAT:
            if any(v is None for v in env):
                raise InconsistentFields(
                    "wingbeat recordings carry Temp/Hum/Opt fields", field="filename"
                )
            if self.optical_intensity < 0:
                raise InconsistentFields("optical intensity is non-negative", field="Opt")
        elif any(v is not None for v in env):
            raise InconsistentFields(
                f"{self.kind.value} recordings carry no Temp/Hum/Opt fields", field="filename"
            )

    def to_document(self) -> dict:
        return {
            "kind": self.kind.value,
            "timestamp": self.timestamp.isoformat(timespec="seconds"),
            "serial": self.serial,
            "filename": self.filename,
            "container": self.container,
            "device": self.device,
            "temperature": self.temperature,
            "humidity": self.humidity,
            "optical_intensity": self.optical_intensity,
            "payload_ref": self.payload_ref,
        }


@dataclass(frozen=True, slots=True)
class OutlierEvent:
    timestamp: datetime
    counts: int
    hour: int
    z_score: float
    hour_mean: float
    hour_std: float

    def to_document(self) -> dict:
        return {
            "timestamp": format_timestamp(self.timestamp),
            "counts": self.counts,
            "hour": self.hour,
            "z_score": self.z_score,
            "hour_mean": self.hour_mean,
            "hour_std": self.hour_std,
        }


@dataclass(frozen=True)
class HeatmapMatrix:
    """24 x D matrix of a metric; ``cells[hour][day_index]`` is None when no
    reading exists for that cell."""

    rows: tuple[int, ...]
    cols: tuple[date, ...]
    cells: tuple[tuple[float | None, ...], ...]
    metric: Metric
    scale_hint: tuple[float, float] | None = None

    def __post_init__(self):
        assert len(self.rows) == 24 and len(self.cells) == 24
        assert all(a < b for a, b in zip(self.cols, self.cols[1:]))

    def to_document(self) -> dict:
        return {
            "rows": list(self.rows),
            "cols": [d.isoformat() for d in self.cols],
            "cells": [list(row) for row in self.cells],
            "metric": self.metric.value,
            "scale_hint": list(self.scale_hint) if self.scale_hint else None,
        }


class StatTestKind(str, Enum):
    ANOVA_F = "anova_f"
    TWO_SAMPLE_T = "two_sample_t"
    PEARSON_R = "pearson_r"


@dataclass(frozen=True, slots=True)
class StatTestResult:
    statistic: float
    df: tuple[int, ...]
    p_value: float
    kind: StatTestKind

    def __post_init__(self):
        assert 0.0 <= self.p_value <= 1.0
        if self.kind is StatTestKind.PEARSON_R:
            assert -1.0 <= self.statistic <= 1.0

    def to_document(self) -> dict:
        return {
            "statistic": self.statistic,
            "df": list(self.df),
            "p_value": self.p_value,
            "kind": self.kind.value,
        }


# -- timestamp parsing / rendering -------------------------------------------

_TABLE_TS = re.compile(r"^(\d{2})-(\d{2})-(\d{2}) (\d{1,2}):(\d{2})$")
_ISO_TS = re.compile(r"^(\d{4})-(\d{2})-(\d{2})[T ](\d{2}):(\d{2})(?::(\d{2}))?$")


def parse_timestamp(text: str) -> datetime:
    """Parse a tabular timestamp into a minute-precision datetime.

    Accepts the device upload format ``DD-MM-YY H:MM`` (two-digit year in the
    2000s, hour may be a single digit) and ISO-8601 ``YYYY-MM-DD[T ]HH:MM[:SS]``
    with a zero seconds field.
    """
    text = text.strip()
    if not text:
        raise MalformedTimestamp("empty timestamp", field="Timestamp")
    m = _TABLE_TS.match(text)
    if m:
        day, month, yy, hour, minute = map(int, m.groups())
        try:
            return datetime(2000 + yy, month, day, hour, minute)
        except ValueError as exc:
            raise MalformedTimestamp(f"{text!r}: {exc}", field="Timestamp") from None
    m = _ISO_TS.match(text)
    if m:
        year, month, day, hour, minute = map(int, m.groups()[:5])
        second = int(m.group(6) or 0)
        if second != 0:
            raise MalformedTimestamp(
                f"{text!r}: readings have minute precision", field="Timestamp"
            )
        try:
            return datetime(year, month, day, hour, minute)
        except ValueError as exc:
            raise MalformedTimestamp(f"{text!r}: {exc}", field="Timestamp") from None
    raise MalformedTimestamp(f"unrecognized timestamp {text!r}", field="Timestamp")


def format_timestamp(ts: datetime) -> str:
    """Minute-precision ISO form used in every JSON document."""
    return ts.strftime("%Y-%m-%dT%H:%M")


def format_tabular_timestamp(ts: datetime) -> str:
    """Device upload form, e.g. ``01-06-23 8:00`` (hour unpadded)."""
    return f"{ts.day:02d}-{ts.month:02d}-{ts.year % 100:02d} {ts.hour}:{ts.minute:02d}"


# -- raw row validation --------------------------------------------------------


def _parse_number(raw: str, column: str) -> float:
    try:
        value = float(raw)
    except (TypeError, ValueError):
        raise OutOfRange(f"{column} value {raw!r} is not a number", field=column) from None
    if value != value or value in (float("inf"), float("-inf")):
        raise OutOfRange(f"{column} value {raw!r} is not finite", field=column)
    return value


def validate_reading(raw: dict[str, str]) -> TrapReading:
    """Validate one raw tabular row (column name -> raw string) into a reading.

    Raises MissingField / OutOfRange / MalformedTimestamp naming the offending
    column; never clamps values silently.
    """
    for column in TABULAR_COLUMNS:
        if raw.get(column) is None or str(raw.get(column)).strip() == "":
            raise MissingField(f"column {column!r} missing", field=column)

    ts = parse_timestamp(str(raw["Timestamp"]))
    counts_raw = str(raw["Counts"]).strip()
    try:
        counts = int(counts_raw)
    except ValueError:
        raise OutOfRange(
            f"Counts value {counts_raw!r} is not an integer", field="Counts"
        ) from None

    return TrapReading(
        timestamp=ts,
        counts=counts,
        temperature=_parse_number(str(raw["Temperature"]).strip(), "Temperature"),
        humidity=_parse_number(str(raw["Humidity"]).strip(), "Humidity"),
        lat=_parse_number(str(raw["Lat"]).strip(), "Lat"),
        long=_parse_number(str(raw["Long"]).strip(), "Long"),
        device=str(raw["Name"]).strip(),
    )


def render_reading(reading: TrapReading) -> dict[str, str]:
    """Canonical tabular field values; inverse of :func:`validate_reading`."""
    return {
        "Timestamp": format_tabular_timestamp(reading.timestamp),
        "Counts": str(reading.counts),
        "Temperature": repr(reading.temperature),
        "Humidity": repr(reading.humidity),
        "Lat": repr(reading.lat),
        "Long": repr(reading.long),
        "Name": reading.device,
    }


# re-exported for type annotations elsewhere
__all__ = [
    "BBox",
    "DeviceKind",
    "DeviceRecord",
    "GeoPoint",
    "HeatmapMatrix",
    "Metric",
    "OutlierEvent",
    "RecordingAsset",
    "RecordingKind",
    "StatTestKind",
    "StatTestResult",
    "TABULAR_COLUMNS",
    "TrapReading",
    "format_tabular_timestamp",
    "format_timestamp",
    "parse_timestamp",
    "render_reading",
    "validate_reading",
]
