"""Parsers for the tabular CSV upload format and the recording filename grammars.

Filename grammars (timestamp digits are positional year/month/day/hour/min/sec):

* vibration:  ``F_YYYYMMDDHHMMSS_<serial>.mp3``  (``.wav`` also accepted)
* wingbeat:   ``F_YYYYMMDDHHMMSS_<serial4>_Temp<t.t>_Hum<h.h>_Opt<oo.oo>.wav``
* image:      ``F_YYYYMMDDHHMMSS_<serial>.jpg``

Rendering is the exact inverse: parse/render round-trips are bit-exact.
"""

from __future__ import annotations

import csv
import io
import re
from dataclasses import dataclass, field
from datetime import datetime

from .errors import (
    GrammarMismatch,
    InconsistentFields,
    InvalidDate,
    MissingHeader,
    TraphubError,
)
from .model import (
    TABULAR_COLUMNS,
    RecordingAsset,
    RecordingKind,
    TrapReading,
    parse_timestamp,
    render_reading,
    validate_reading,
)

__all__ = [
    "IngestReport",
    "parse_timestamp",
    "parse_tabular",
    "render_tabular",
    "parse_recording_filename",
    "render_recording_filename",
]


@dataclass
class IngestReport:
    """Per-batch ingest outcome; accepted + len(rejected) == total data rows."""

    accepted: int = 0
    rejected: list[tuple[int, str]] = field(default_factory=list)
    device_set: set[str] = field(default_factory=set)

    def to_document(self) -> dict:
        return {
            "accepted": self.accepted,
            "rejected": [{"row": row, "error": msg} for row, msg in self.rejected],
            "devices": sorted(self.device_set),
        }


def parse_tabular(csv_text: str) -> tuple[list[TrapReading], IngestReport]:
    """Parse a collective CSV upload; bad rows are reported, never dropped silently.

    The header must contain all seven tabular columns (any order, extras
    ignored). Rejected row numbers are 1-based over the data rows.
    """
    reader = csv.reader(io.StringIO(csv_text))
    try:
        header = next(reader)
    except StopIteration:
        raise MissingHeader("empty input, no header row") from None
    header = [h.strip() for h in header]
    missing = [c for c in TABULAR_COLUMNS if c not in header]
    if missing:
        raise MissingHeader(f"header missing columns: {', '.join(missing)}", field=missing[0])
    index = {c: header.index(c) for c in TABULAR_COLUMNS}

    readings: list[TrapReading] = []
    report = IngestReport()
    for row_no, row in enumerate(reader, start=1):
        if not row or all(cell.strip() == "" for cell in row):
            continue  # blank line, not a data row
        raw = {c: row[i] if i < len(row) else "" for c, i in index.items()}
        try:
            reading = validate_reading(raw)
        except TraphubError as exc:
            report.rejected.append((row_no, f"{exc.code}: {exc.message}"))
            continue
        readings.append(reading)
        report.accepted += 1
        report.device_set.add(reading.device)
    return readings, report


def render_tabular(readings: list[TrapReading]) -> str:
    """Emit the canonical CSV form (header + one row per reading)."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(TABULAR_COLUMNS)
    for r in readings:
        row = render_reading(r)
        writer.writerow([row[c] for c in TABULAR_COLUMNS])
    return out.getvalue()


# -- recording filenames -------------------------------------------------------

_TS14 = r"(\d{4})(\d{2})(\d{2})(\d{2})(\d{2})(\d{2})"
# serials render as plain decimal, so leading zeros are rejected on parse
_SERIAL = r"(0|[1-9]\d*)"
_GRAMMARS = {
    RecordingKind.VIBRATION: re.compile(rf"^F_{_TS14}_{_SERIAL}\.(mp3|wav)$"),
    RecordingKind.WINGBEAT: re.compile(
        rf"^F_{_TS14}_(\d{{4}})_Temp(-?\d+\.\d)_Hum(\d+\.\d)_Opt(\d{{2,}}\.\d{{2}})\.(wav)$"
    ),
    RecordingKind.IMAGE: re.compile(rf"^F_{_TS14}_{_SERIAL}\.(jpg)$"),
}


def _timestamp_from_groups(groups: tuple[str, ...], name: str) -> datetime:
    year, month, day, hour, minute, second = (int(g) for g in groups[:6])
    try:
        return datetime(year, month, day, hour, minute, second)
    except ValueError as exc:
        raise InvalidDate(f"{name!r}: {exc}", field="timestamp") from None


def parse_recording_filename(name: str, kind: RecordingKind) -> RecordingAsset:
    """Parse a recording filename into an asset (payload_ref left unset)."""
    pattern = _GRAMMARS[kind]
    m = pattern.match(name)
    if not m:
        raise GrammarMismatch(
            f"{name!r} does not match the {kind.value} filename grammar", field="filename"
        )
    groups = m.groups()
    ts = _timestamp_from_groups(groups, name)
    if kind is RecordingKind.WINGBEAT:
        serial, temp, hum, opt, ext = groups[6:]
        return RecordingAsset(
            kind=kind,
            timestamp=ts,
            serial=int(serial),
            temperature=float(temp),
            humidity=float(hum),
            optical_intensity=float(opt),
            filename=name,
            container=ext,
        )
    serial, ext = groups[6:]
    return RecordingAsset(kind=kind, timestamp=ts, serial=int(serial), filename=name, container=ext)


def render_recording_filename(asset: RecordingAsset) -> str:
    """Render an asset back to its filename; exact inverse of the parser."""
    ts = asset.timestamp.strftime("%Y%m%d%H%M%S")
    kind = asset.kind
    if asset.container not in _ALLOWED_CONTAINERS[kind]:
        raise InconsistentFields(
            f"{kind.value} recordings use {sorted(_ALLOWED_CONTAINERS[kind])}, "
            f"got {asset.container!r}",
            field="container",
        )
    if kind is RecordingKind.WINGBEAT:
        if asset.serial > 9999:
            raise InconsistentFields(
                f"wingbeat serials are four digits, got {asset.serial}", field="serial"
            )
        return (
            f"F_{ts}_{asset.serial:04d}"
            f"_Temp{asset.temperature:.1f}_Hum{asset.humidity:.1f}"
            f"_Opt{asset.optical_intensity:05.2f}.{asset.container}"
        )
    return f"F_{ts}_{asset.serial}.{asset.container}"


_ALLOWED_CONTAINERS = {
    RecordingKind.VIBRATION: {"mp3", "wav"},
    RecordingKind.WINGBEAT: {"wav"},
    RecordingKind.IMAGE: {"jpg"},
}
