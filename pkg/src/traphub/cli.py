"""Command-line interface: serve the API, ingest CSVs, generate synthetic
fleets, run analytics queries offline, and analyze recordings."""

from __future__ import annotations

import argparse
import json
import sys
from datetime import date
from pathlib import Path

from .errors import TraphubError
from .model import BBox
from .service.canonical import canonical_json
from .service.registry import TOOLS, parse_params
from .store import Store
from .synthgen import FleetConfig, generate_fleet, write_fleet_csv


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="traphub")
    sub = parser.add_subparsers(dest="command", required=True)

    serve = sub.add_parser("serve", help="run the HTTP API server")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    serve.add_argument("--data", default="traphub-data", help="data directory")
    serve.add_argument("--token", default=None, help="static bearer token")

    ingest = sub.add_parser("ingest", help="ingest a CSV file or a directory of CSVs")
    ingest.add_argument("path")
    ingest.add_argument("--data", default="traphub-data")

    gen = sub.add_parser("generate", help="write a synthetic fleet CSV (+ test WAVs)")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", default="synthetic", help="output directory")
    gen.add_argument("--config", default=None, help="JSON file overriding fleet defaults")
    gen.add_argument("--devices", type=int, default=None)
    gen.add_argument("--days", type=int, default=None)
    gen.add_argument("--wav", action="store_true", help="also write sample recordings")

    analyze = sub.add_parser(
        "analyze", help="run an analytics query against the local store"
    )
    analyze.add_argument("query", help=f"one of: {', '.join(sorted(TOOLS))}")
    analyze.add_argument("--data", default="traphub-data")
    analyze.add_argument(
        "params", nargs=argparse.REMAINDER,
        help="query parameters as --name value pairs",
    )

    dsp_cmd = sub.add_parser("dsp", help="analyze a local WAV file")
    dsp_cmd.add_argument("file")
    dsp_cmd.add_argument("--ops", default="psd,fundamental,classify")

    return parser


def _pairs_to_dict(tokens: list[str]) -> dict[str, str]:
    params = {}
    i = 0
    while i < len(tokens):
        token = tokens[i]
        if not token.startswith("--"):
            raise TraphubError(f"expected --name value pairs, got {token!r}")
        name = token[2:]
        if i + 1 >= len(tokens):
            raise TraphubError(f"parameter {name!r} is missing a value")
        params[name] = tokens[i + 1]
        i += 2
    return params


def _fleet_config(args) -> FleetConfig:
    overrides = {}
    if args.config:
        raw = json.loads(Path(args.config).read_text(encoding="utf-8"))
        for key in ("start_date", "end_date"):
            if key in raw:
                raw[key] = date.fromisoformat(raw[key])
        if "region" in raw:
            raw["region"] = BBox(**raw["region"])
        overrides.update(raw)
    if args.devices is not None:
        overrides["n_devices"] = args.devices
    if args.days is not None:
        start = overrides.get("start_date", FleetConfig.start_date)
        from datetime import timedelta

        overrides["end_date"] = start + timedelta(days=args.days)
    return FleetConfig(**overrides)


def _cmd_serve(args) -> int:
    import uvicorn

    from .service.app import create_app

    store = Store(args.data)
    app = create_app(store, auth_token=args.token)
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def _cmd_ingest(args) -> int:
    from .ingest import parse_tabular

    target = Path(args.path)
    files = sorted(target.glob("*.csv")) if target.is_dir() else [target]
    if not files:
        print(f"no CSV files under {target}", file=sys.stderr)
        return 1
    store = Store(args.data)
    total = {"accepted": 0, "rejected": 0}
    for f in files:
        readings, report = parse_tabular(f.read_text(encoding="utf-8"))
        store.insert_readings(readings)
        total["accepted"] += report.accepted
        total["rejected"] += len(report.rejected)
        for row, message in report.rejected:
            print(f"{f.name}:{row}: {message}", file=sys.stderr)
    print(canonical_json(total).decode())
    return 0


def _cmd_generate(args) -> int:
    config = _fleet_config(args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    fleet = generate_fleet(config, args.seed)
    csv_path = write_fleet_csv(fleet.readings, out / "readings.csv")
    written = [str(csv_path)]
    if fleet.injected:
        truth = out / "injected_outliers.json"
        truth.write_bytes(canonical_json([o.to_document() for o in fleet.injected]))
        written.append(str(truth))
    if args.wav:
        from .ingest import render_recording_filename
        from .model import RecordingAsset, RecordingKind
        from .synthgen import generate_wingbeat, generate_woodbore, write_wav_file

        first_ts = fleet.readings[0].timestamp
        wing = generate_wingbeat(600.0, seed=args.seed)
        wing_asset = RecordingAsset(
            kind=RecordingKind.WINGBEAT, timestamp=first_ts, serial=0,
            temperature=22.5, humidity=54.9, optical_intensity=0.0,
            filename="", container="wav",
        )
        wing_name = render_recording_filename(wing_asset)
        write_wav_file(wing, out / wing_name)
        bore, _ = generate_woodbore(seed=args.seed)
        bore_asset = RecordingAsset(
            kind=RecordingKind.VIBRATION, timestamp=first_ts, serial=1,
            filename="", container="wav",
        )
        bore_name = render_recording_filename(bore_asset)
        write_wav_file(bore, out / bore_name)
        written += [str(out / wing_name), str(out / bore_name)]
    print(canonical_json({"written": written, "rows": len(fleet.readings)}).decode())
    return 0


def _cmd_analyze(args) -> int:
    tool = TOOLS.get(args.query)
    if tool is None:
        print(f"unknown query {args.query!r}; known: {', '.join(sorted(TOOLS))}",
              file=sys.stderr)
        return 2
    raw = _pairs_to_dict(args.params)
    # REMAINDER swallows options placed after the query name
    data_dir = raw.pop("data", args.data)
    store = Store(data_dir)
    params = parse_params(tool, raw)
    document = tool.handler(store, params)
    print(canonical_json(document).decode())
    return 0


def _cmd_dsp(args) -> int:
    from .dsp import analyze_samples, decode_wav

    blob = Path(args.file).read_bytes()
    samples = decode_wav(blob)
    ops = [op.strip() for op in args.ops.split(",") if op.strip()]
    print(canonical_json(analyze_samples(samples, ops).to_document()).decode())
    return 0


_COMMANDS = {
    "serve": _cmd_serve,
    "ingest": _cmd_ingest,
    "generate": _cmd_generate,
    "analyze": _cmd_analyze,
    "dsp": _cmd_dsp,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except TraphubError as exc:
        print(canonical_json(exc.to_document()).decode(), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
