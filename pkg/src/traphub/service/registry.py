"""The tool registry: one entry per public analytics/DSP operation.

Each tool carries a typed parameter schema (names, semantic types, defaults,
ranges), a result outline, its endpoint path, and the handler. The HTTP
routes, the manifest, and the offline CLI all dispatch through this table,
so the three surfaces cannot drift apart.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime

from .. import analytics, dsp
from ..errors import BadParameter
from ..model import BBox, GeoPoint, Metric, parse_timestamp
from ..store import ReadingFilter, Store

__all__ = ["ParamSpec", "ToolSpec", "TOOLS", "parse_params"]


@dataclass(frozen=True)
class ParamSpec:
    name: str
    type: str  # integer | number | string | enum | datetime | hours | bbox | devices
    description: str
    required: bool = False
    default: object = None
    minimum: float | None = None
    maximum: float | None = None
    enum: tuple[str, ...] | None = None
    location: str = "query"  # query | path

    def to_document(self) -> dict:
        doc = {
            "name": self.name,
            "type": self.type,
            "description": self.description,
            "required": self.required,
            "location": self.location,
        }
        if self.default is not None:
            doc["default"] = self.default
        if self.minimum is not None:
            doc["minimum"] = self.minimum
        if self.maximum is not None:
            doc["maximum"] = self.maximum
        if self.enum is not None:
            doc["enum"] = list(self.enum)
        return doc


@dataclass(frozen=True)
class ToolSpec:
    name: str
    description: str
    path: str
    params: tuple[ParamSpec, ...]
    result: dict
    handler: object = field(compare=False)

    def to_document(self) -> dict:
        return {
            "name": self.name,
            "description": self.description,
            "endpoint": self.path,
            "method": "GET",
            "params": [p.to_document() for p in self.params],
            "result": self.result,
        }


def _parse_scalar(spec: ParamSpec, raw: str):
    if spec.type == "integer":
        try:
            value = int(raw)
        except ValueError:
            raise BadParameter(f"{spec.name} must be an integer, got {raw!r}", spec.name)
    elif spec.type == "number":
        try:
            value = float(raw)
        except ValueError:
            raise BadParameter(f"{spec.name} must be a number, got {raw!r}", spec.name)
    elif spec.type == "enum":
        if raw not in spec.enum:
            raise BadParameter(
                f"{spec.name} must be one of {list(spec.enum)}, got {raw!r}", spec.name
            )
        return raw
    elif spec.type == "datetime":
        try:
            return parse_timestamp(raw)
        except Exception:
            raise BadParameter(f"{spec.name} is not a timestamp: {raw!r}", spec.name) from None
    elif spec.type == "hours":
        try:
            hours = frozenset(int(h) for h in raw.split(",") if h.strip() != "")
        except ValueError:
            raise BadParameter(f"{spec.name} must be comma-separated hours", spec.name) from None
        if any(h < 0 or h > 23 for h in hours):
            raise BadParameter(f"{spec.name} hours must be in 0..23", spec.name)
        return hours
    elif spec.type == "bbox":
        parts = raw.split(",")
        if len(parts) != 4:
            raise BadParameter(
                f"{spec.name} must be lat_min,lat_max,long_min,long_max", spec.name
            )
        try:
            return BBox(*(float(p) for p in parts))
        except Exception as exc:
            raise BadParameter(f"{spec.name}: {exc}", spec.name) from None
    elif spec.type == "devices":
        return [d.strip() for d in raw.split(",") if d.strip()]
    else:  # string
        return raw
    if spec.minimum is not None and value < spec.minimum:
        raise BadParameter(f"{spec.name} must be >= {spec.minimum}", spec.name)
    if spec.maximum is not None and value > spec.maximum:
        raise BadParameter(f"{spec.name} must be <= {spec.maximum}", spec.name)
    return value


def parse_params(tool: ToolSpec, raw: dict[str, str]) -> dict:
    """Validate raw string parameters against the tool's schema."""
    known = {p.name for p in tool.params}
    for name in raw:
        if name not in known:
            raise BadParameter(f"unknown parameter {name!r} for {tool.name}", name)
    parsed = {}
    for spec in tool.params:
        if spec.name in raw and raw[spec.name] != "":
            parsed[spec.name] = _parse_scalar(spec, raw[spec.name])
        elif spec.required:
            raise BadParameter(f"missing required parameter {spec.name!r}", spec.name)
        elif spec.default is not None:
            parsed[spec.name] = _parse_scalar(spec, str(spec.default))
        else:
            parsed[spec.name] = None
    return parsed


# -- handlers -------------------------------------------------------------------


def _readings(store: Store, devices: list[str] | None = None):
    if devices:
        return store.query_readings(ReadingFilter(devices=frozenset(devices)))
    return store.query_readings()


def _extremes(store: Store, p: dict) -> dict:
    report = analytics.extremes(_readings(store), analytics.Granularity(p["granularity"]))
    return report.to_document()


def _adjacent(store: Store, p: dict) -> dict:
    return analytics.adjacency_report(_readings(store), p["threshold_km"]).to_document()


def _top(store: Store, p: dict) -> list:
    ranked = analytics.top_n_daily_mean(_readings(store), p["n"])
    return [{"device": d, "mean_daily_counts": m} for d, m in ranked]


def _circadian(store: Store, p: dict) -> dict:
    readings = _readings(store, [p["device"]] if p["device"] else None)
    return analytics.circadian_matrix(readings, Metric(p["metric"])).to_document()


def _locations(store: Store, p: dict) -> dict:
    locs = analytics.unique_locations(_readings(store))
    return {
        "count": len(locs),
        "locations": [
            {"point": point.to_document(), "devices": devs} for point, devs in locs
        ],
    }


def _heatpoints(store: Store, p: dict) -> list:
    points = analytics.heat_points(_readings(store), p["bbox"])
    return [{"point": point.to_document(), "weight": w} for point, w in points]


def _region_weekly(store: Store, p: dict) -> dict:
    return analytics.region_weekly_stats(_readings(store), p["bbox"], p["min_weekly"])


def _outliers(store: Store, p: dict) -> list:
    events = analytics.hourly_outliers(
        _readings(store, [p["device"]]), p["device"], p["hours"], p["k"]
    )
    return [e.to_document() for e in events]


def _similarity(store: Store, p: dict) -> dict:
    report = analytics.similarity_report(
        _readings(store, [p["device_a"]]), _readings(store, [p["device_b"]])
    )
    return report.to_document()


def _nearest(store: Store, p: dict) -> list:
    positions = analytics.device_positions(_readings(store))
    ranked = analytics.nearest_traps(positions, GeoPoint(p["lat"], p["long"]), p["k"])
    return [
        {"device": dev, "position": pos.to_document(), "distance_km": d}
        for dev, pos, d in ranked
    ]


def _binned(store: Store, p: dict) -> dict:
    return analytics.binned_response(_readings(store), Metric(p["variable"])).to_document()


def _hourly_profile(store: Store, p: dict) -> dict:
    return analytics.hourly_profile(_readings(store)).to_document()


def _correlation(store: Store, p: dict) -> dict:
    return analytics.correlation_matrix(_readings(store), p["devices"])


def _dsp_analysis(store: Store, p: dict) -> dict:
    asset = store.get_recording(p["recording_id"])
    samples = dsp.decode_recording(store.get_payload(p["recording_id"]), asset.container)
    ops = [op.strip() for op in p["ops"].split(",") if op.strip()]
    bad = [op for op in ops if op not in dsp.ANALYSIS_OPS]
    if bad:
        raise BadParameter(f"unknown analysis ops {bad}, valid: {list(dsp.ANALYSIS_OPS)}", "ops")
    return dsp.analyze_samples(samples, ops).to_document()


_HOUR_OF_DAY = "hour-of-day"

TOOLS: dict[str, ToolSpec] = {
    tool.name: tool
    for tool in [
        ToolSpec(
            name="extremes",
            description="Highest and lowest insect counts per hour, day, or week, "
            "with device and location.",
            path="/api/analytics/extremes",
            params=(
                ParamSpec(
                    "granularity", "enum", "aggregation period",
                    default="day", enum=("hour", "day", "week"),
                ),
            ),
            result={"type": "object", "description": "highest/lowest device, period, total"},
            handler=_extremes,
        ),
        ToolSpec(
            name="adjacent",
            description="Device pairs within a distance threshold plus a one-way "
            "ANOVA over the adjacent traps' counts.",
            path="/api/analytics/adjacent",
            params=(
                ParamSpec(
                    "threshold_km", "number", "pair distance cutoff in km",
                    default=1.0, minimum=0.0,
                ),
            ),
            result={"type": "object", "description": "pairs with distances; F/p or null"},
            handler=_adjacent,
        ),
        ToolSpec(
            name="top",
            description="Devices ranked by mean daily insect counts.",
            path="/api/analytics/top",
            params=(ParamSpec("n", "integer", "how many devices", default=10, minimum=1),),
            result={"type": "array", "description": "device & mean daily counts, descending"},
            handler=_top,
        ),
        ToolSpec(
            name="circadian",
            description="24 x days heatmap matrix of counts, temperature, or humidity.",
            path="/api/analytics/circadian",
            params=(
                ParamSpec(
                    "metric", "enum", "which metric fills the cells",
                    default="counts", enum=("counts", "temperature", "humidity"),
                ),
                ParamSpec("device", "string", "restrict to one device (optional)"),
            ),
            result={"type": "object", "description": "24xD matrix, day columns, scale hint"},
            handler=_circadian,
        ),
        ToolSpec(
            name="locations",
            description="Unique trap locations and the devices at each.",
            path="/api/analytics/locations",
            params=(),
            result={"type": "object", "description": "count plus location/device list"},
            handler=_locations,
        ),
        ToolSpec(
            name="heatpoints",
            description="Count-weighted points inside a bounding box for heatmap overlays.",
            path="/api/analytics/heatpoints",
            params=(
                ParamSpec(
                    "bbox", "bbox", "lat_min,lat_max,long_min,long_max", required=True
                ),
            ),
            result={"type": "array", "description": "points with summed-count weights"},
            handler=_heatpoints,
        ),
        ToolSpec(
            name="region-weekly-stats",
            description="Mean/std of temperature and humidity over rows from "
            "(device, week) cells that exceeded a weekly count total.",
            path="/api/analytics/region-weekly-stats",
            params=(
                ParamSpec("bbox", "bbox", "region bounds", required=True),
                ParamSpec(
                    "min_weekly", "number", "weekly count threshold",
                    default=100.0, minimum=0.0,
                ),
            ),
            result={"type": "object", "description": "temperature/humidity mean & std"},
            handler=_region_weekly,
        ),
        ToolSpec(
            name="outliers",
            description="High-side hourly count outliers for one device, each "
            f"{_HOUR_OF_DAY} treated independently (mean + k*std rule).",
            path="/api/analytics/outliers",
            params=(
                ParamSpec("device", "string", "device id", required=True),
                ParamSpec("hours", "hours", "comma-separated hours to analyze (default: all)"),
                ParamSpec("k", "number", "std-deviation multiplier", default=3.0, minimum=0.0),
            ),
            result={"type": "array", "description": "outlier events with z-scores"},
            handler=_outliers,
        ),
        ToolSpec(
            name="similarity",
            description="Catch-pattern similarity of two traps: Pearson r, "
            "two-sample t-test, and daily-series spectra.",
            path="/api/analytics/similarity",
            params=(
                ParamSpec("device_a", "string", "first device id", required=True),
                ParamSpec("device_b", "string", "second device id", required=True),
            ),
            result={"type": "object", "description": "r, t-test, magnitude spectra"},
            handler=_similarity,
        ),
        ToolSpec(
            name="nearest",
            description="The k traps closest to a point, with haversine distances.",
            path="/api/analytics/nearest",
            params=(
                ParamSpec("lat", "number", "latitude", required=True, minimum=-90, maximum=90),
                ParamSpec(
                    "long", "number", "longitude", required=True, minimum=-180, maximum=180
                ),
                ParamSpec("k", "integer", "how many traps", default=3, minimum=1),
            ),
            result={"type": "array", "description": "devices with positions and km distances"},
            handler=_nearest,
        ),
        ToolSpec(
            name="binned",
            description="Mean counts per temperature or humidity bin.",
            path="/api/analytics/binned",
            params=(
                ParamSpec(
                    "variable", "enum", "binning variable",
                    default="temperature", enum=("temperature", "humidity"),
                ),
            ),
            result={"type": "object", "description": "bin edges/labels, mean counts, n"},
            handler=_binned,
        ),
        ToolSpec(
            name="hourly-profile",
            description=f"Mean counts, temperature, and humidity per {_HOUR_OF_DAY}.",
            path="/api/analytics/hourly-profile",
            params=(),
            result={"type": "object", "description": "24-entry means and sample sizes"},
            handler=_hourly_profile,
        ),
        ToolSpec(
            name="correlation",
            description="Symmetric matrix of pairwise Pearson r on aligned hourly counts.",
            path="/api/analytics/correlation",
            params=(
                ParamSpec("devices", "devices", "comma-separated device ids (default: all)"),
            ),
            result={"type": "object", "description": "device order plus unit-diagonal matrix"},
            handler=_correlation,
        ),
        ToolSpec(
            name="dsp-analysis",
            description="Signal analysis of a stored recording: PSD, spectrogram, "
            "fundamental + harmonics, mosquito-sex call, impulse/infestation report.",
            path="/api/dsp/{recording_id}/analysis",
            params=(
                ParamSpec(
                    "recording_id", "string", "asset id", required=True, location="path"
                ),
                ParamSpec(
                    "ops", "string", "comma-separated subset of "
                    + ",".join(dsp.ANALYSIS_OPS),
                    default="psd,spectrogram,fundamental,classify",
                ),
            ),
            result={"type": "object", "description": "requested analysis sections"},
            handler=_dsp_analysis,
        ),
    ]
}
