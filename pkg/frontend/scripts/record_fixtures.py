#!/usr/bin/env python3
"""Record deterministic API responses into tests/fixtures/.

The console's tests replay these documents; rerun after server-side changes:

    python3 frontend/scripts/record_fixtures.py
"""

import json
import sys
from datetime import date
from pathlib import Path

from fastapi.testclient import TestClient

from traphub.dsp import encode_wav
from traphub.service import create_app
from traphub.store import Store
from traphub.synthgen import FleetConfig, generate_fleet, generate_wingbeat

FIXTURES = Path(__file__).resolve().parent.parent / "tests" / "fixtures"

WING_NAME = "F_20230430001523_0000_Temp22.5_Hum54.9_Opt00.00.wav"


def main() -> int:
    store = Store()
    fleet = generate_fleet(
        FleetConfig(n_devices=5, start_date=date(2023, 6, 1), end_date=date(2023, 6, 15)),
        seed=99,
    )
    store.insert_readings(fleet.readings)
    client = TestClient(create_app(store))

    wav = encode_wav(generate_wingbeat(600.0, seed=99))
    upload = client.post(
        "/api/ingest/recordings/wingbeat",
        data={"filename": WING_NAME, "device": "900"},
        files={"payload": (WING_NAME, wav, "audio/wav")},
    )
    upload.raise_for_status()
    asset_id = upload.json()["asset_id"]

    bbox = "39.0,40.2,21.8,22.9"
    recordings = {
        "manifest.json": "/api/tools/manifest",
        "devices.json": "/api/devices",
        "readings-100.json": "/api/devices/100/readings",
        "readings-101.json": "/api/devices/101/readings",
        "locations.json": "/api/analytics/locations",
        "heatpoints.json": f"/api/analytics/heatpoints?bbox={bbox}",
        "outliers-100.json": "/api/analytics/outliers?device=100&k=2",
        "circadian-temperature.json": "/api/analytics/circadian?metric=temperature",
        "circadian-counts.json": "/api/analytics/circadian?metric=counts",
        "hourly-profile.json": "/api/analytics/hourly-profile",
        "correlation.json": "/api/analytics/correlation",
        "similarity-100-101.json": "/api/analytics/similarity?device_a=100&device_b=101",
        "dsp-analysis.json": f"/api/dsp/{asset_id}/analysis?ops=psd,spectrogram,fundamental,classify",
        "recordings.json": "/api/recordings?device=900",
    }
    FIXTURES.mkdir(parents=True, exist_ok=True)
    for name, path in recordings.items():
        response = client.get(path)
        response.raise_for_status()
        (FIXTURES / name).write_bytes(response.content)
        print(f"{name:32} <- {path}")
    (FIXTURES / "payload-wingbeat.wav").write_bytes(wav)
    meta = {"asset_id": asset_id, "paths": recordings}
    (FIXTURES / "meta.json").write_text(json.dumps(meta, indent=2, sort_keys=True))
    return 0


if __name__ == "__main__":
    sys.exit(main())
