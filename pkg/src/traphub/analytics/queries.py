"""Tabular analytics over trap readings: extremes, aggregation, circadian
profiles, outliers, similarity. All functions are pure; they take reading
lists (normally the output of a store query) and return value objects."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from datetime import date, datetime, timedelta
from enum import Enum

import numpy as np

from ..errors import (
    EmptyInput,
    InsufficientData,
    NoCommonDays,
    NoQualifyingWeeks,
    TooShort,
    ZeroVariance,
)
from ..model import (
    BBox,
    GeoPoint,
    HeatmapMatrix,
    Metric,
    OutlierEvent,
    StatTestResult,
    TrapReading,
    format_timestamp,
)
from .geo import device_positions
from .stats import pearson, quantile, sample_std, t_test

__all__ = [
    "Bucket",
    "BinnedResponse",
    "ExtremeEntry",
    "ExtremeReport",
    "Granularity",
    "HourlyProfile",
    "SimilarityReport",
    "aggregate_counts",
    "binned_response",
    "circadian_matrix",
    "correlation_matrix",
    "daily_sums",
    "extremes",
    "hourly_outliers",
    "hourly_profile",
    "region_weekly_stats",
    "similarity_report",
    "temp_distribution",
    "top_n_daily_mean",
]


class Granularity(str, Enum):
    HOUR = "hour"
    DAY = "day"
    WEEK = "week"


class Bucket(str, Enum):
    HOURLY = "hourly"
    DAILY = "daily"
    WEEKLY = "weekly"


def _iso_week_start(d: date) -> date:
    iso = d.isocalendar()
    return date.fromisocalendar(iso[0], iso[1], 1)


def daily_sums(readings: list[TrapReading]) -> dict[str, dict[date, int]]:
    """Per-device calendar-day count totals (device-local days)."""
    out: dict[str, dict[date, int]] = defaultdict(lambda: defaultdict(int))
    for r in readings:
        out[r.device][r.day] += r.counts
    return {dev: dict(days) for dev, days in out.items()}


# -- extremes -------------------------------------------------------------------


@dataclass(frozen=True)
class ExtremeEntry:
    device: str
    position: GeoPoint
    period_start: datetime
    total: int

    def to_document(self) -> dict:
        return {
            "device": self.device,
            "position": self.position.to_document(),
            "period_start": format_timestamp(self.period_start),
            "total": self.total,
        }


@dataclass(frozen=True)
class ExtremeReport:
    granularity: Granularity
    highest: ExtremeEntry
    lowest: ExtremeEntry

    def to_document(self) -> dict:
        return {
            "granularity": self.granularity.value,
            "highest": self.highest.to_document(),
            "lowest": self.lowest.to_document(),
        }


def extremes(readings: list[TrapReading], granularity: Granularity) -> ExtremeReport:
    """Highest- and lowest-count device/period at the given granularity.

    Hour granularity compares raw rows; day/week compare per-device period
    totals. Ties go to the earlier period, then the smaller device id.
    """
    if not readings:
        raise EmptyInput("extremes of an empty reading set")
    positions = device_positions(readings)

    candidates: list[tuple[str, datetime, int]] = []
    if granularity is Granularity.HOUR:
        candidates = [(r.device, r.timestamp, r.counts) for r in readings]
    else:
        sums: dict[tuple[str, date], int] = defaultdict(int)
        for r in readings:
            key_day = r.day if granularity is Granularity.DAY else _iso_week_start(r.day)
            sums[(r.device, key_day)] += r.counts
        candidates = [
            (dev, datetime(d.year, d.month, d.day), total)
            for (dev, d), total in sums.items()
        ]

    def entry(best: tuple[str, datetime, int]) -> ExtremeEntry:
        dev, start, total = best
        return ExtremeEntry(device=dev, position=positions[dev], period_start=start, total=total)

    highest = min(candidates, key=lambda c: (-c[2], c[1], c[0]))
    lowest = min(candidates, key=lambda c: (c[2], c[1], c[0]))
    return ExtremeReport(granularity=granularity, highest=entry(highest), lowest=entry(lowest))


# -- distributions ---------------------------------------------------------------


def temp_distribution(readings: list[TrapReading]) -> dict[str, dict[str, float]]:
    """Per-device five-number summary of temperature (linear-interp quartiles)."""
    by_device: dict[str, list[float]] = defaultdict(list)
    for r in readings:
        by_device[r.device].append(r.temperature)
    out = {}
    for dev in sorted(by_device):
        temps = by_device[dev]
        out[dev] = {
            "min": min(temps),
            "q1": quantile(temps, 0.25),
            "median": quantile(temps, 0.5),
            "q3": quantile(temps, 0.75),
            "max": max(temps),
        }
    return out


# -- bucketed aggregation ---------------------------------------------------------


def _bucket_key(ts: datetime, bucket: Bucket) -> datetime:
    if bucket is Bucket.HOURLY:
        return ts.replace(minute=0)
    d = ts.date() if bucket is Bucket.DAILY else _iso_week_start(ts.date())
    return datetime(d.year, d.month, d.day)


def _bucket_step(bucket: Bucket) -> timedelta:
    return {
        Bucket.HOURLY: timedelta(hours=1),
        Bucket.DAILY: timedelta(days=1),
        Bucket.WEEKLY: timedelta(days=7),
    }[bucket]


def aggregate_counts(
    readings: list[TrapReading],
    bucket: Bucket,
    start: datetime | None = None,
    end: datetime | None = None,
) -> dict[str, list[tuple[datetime, int]]]:
    """Per-device bucketed count totals, zero-filled over the bucket range.

    With an explicit [start, end) range every device gets the same buckets;
    otherwise each device spans its own first..last bucket.
    """
    sums: dict[str, dict[datetime, int]] = defaultdict(lambda: defaultdict(int))
    for r in readings:
        if start is not None and r.timestamp < start:
            continue
        if end is not None and r.timestamp >= end:
            continue
        sums[r.device][_bucket_key(r.timestamp, bucket)] += r.counts

    # with an explicit range every known device reports, even if all zeros
    devices = sorted({r.device for r in readings}) if start or end else sorted(sums)
    step = _bucket_step(bucket)
    out: dict[str, list[tuple[datetime, int]]] = {}
    for dev in devices:
        buckets = sums.get(dev, {})
        if not buckets and (start is None or end is None):
            continue
        first = _bucket_key(start, bucket) if start is not None else min(buckets)
        last = _bucket_key(end - timedelta(minutes=1), bucket) if end is not None else max(buckets)
        series = []
        cursor = first
        while cursor <= last:
            series.append((cursor, buckets.get(cursor, 0)))
            cursor += step
        out[dev] = series
    return out


def top_n_daily_mean(readings: list[TrapReading], n: int) -> list[tuple[str, float]]:
    """Devices ranked by mean daily total (days with data only), descending."""
    means = []
    for dev, days in daily_sums(readings).items():
        means.append((dev, sum(days.values()) / len(days)))
    means.sort(key=lambda item: (-item[1], item[0]))
    return means[: max(0, n)]


# -- circadian -----------------------------------------------------------------


def circadian_matrix(readings: list[TrapReading], metric: Metric) -> HeatmapMatrix:
    """24 x D hour-of-day vs calendar-day matrix of a metric.

    Counts cells are sums; temperature/humidity cells are means. Columns span
    the full day range of the input; cells without data are None.
    """
    if not readings:
        raise EmptyInput("circadian matrix of an empty reading set")
    first, last = min(r.day for r in readings), max(r.day for r in readings)
    days = []
    cursor = first
    while cursor <= last:
        days.append(cursor)
        cursor += timedelta(days=1)
    col_index = {d: i for i, d in enumerate(days)}

    acc = [[None for _ in days] for _ in range(24)]  # (sum, n) pairs
    for r in readings:
        value = {
            Metric.COUNTS: float(r.counts),
            Metric.TEMPERATURE: r.temperature,
            Metric.HUMIDITY: r.humidity,
        }[metric]
        cell = acc[r.hour][col_index[r.day]]
        if cell is None:
            acc[r.hour][col_index[r.day]] = [value, 1]
        else:
            cell[0] += value
            cell[1] += 1

    def finish(cell) -> float | None:
        if cell is None:
            return None
        total, n = cell
        return total if metric is Metric.COUNTS else total / n

    cells = tuple(tuple(finish(c) for c in row) for row in acc)
    if metric is Metric.HUMIDITY:
        scale = (0.0, 100.0)
    elif metric is Metric.TEMPERATURE:
        scale = (0.0, 60.0)
    else:
        present = [v for row in cells for v in row if v is not None]
        scale = (min(present), max(present))
    return HeatmapMatrix(
        rows=tuple(range(24)), cols=tuple(days), cells=cells, metric=metric, scale_hint=scale
    )


@dataclass(frozen=True)
class HourlyProfile:
    """Per hour-of-day fleet averages; hours with no data have n=0, None means."""

    mean_counts: tuple[float | None, ...]
    mean_temperature: tuple[float | None, ...]
    mean_humidity: tuple[float | None, ...]
    n: tuple[int, ...]

    def to_document(self) -> dict:
        return {
            "hours": list(range(24)),
            "mean_counts": list(self.mean_counts),
            "mean_temperature": list(self.mean_temperature),
            "mean_humidity": list(self.mean_humidity),
            "n": list(self.n),
        }


def hourly_profile(readings: list[TrapReading]) -> HourlyProfile:
    sums = [[0.0, 0.0, 0.0, 0] for _ in range(24)]
    for r in readings:
        cell = sums[r.hour]
        cell[0] += r.counts
        cell[1] += r.temperature
        cell[2] += r.humidity
        cell[3] += 1
    mc, mt, mh, ns = [], [], [], []
    for c_sum, t_sum, h_sum, n in sums:
        ns.append(n)
        mc.append(c_sum / n if n else None)
        mt.append(t_sum / n if n else None)
        mh.append(h_sum / n if n else None)
    return HourlyProfile(tuple(mc), tuple(mt), tuple(mh), tuple(ns))


# -- regional stats ---------------------------------------------------------------


def region_weekly_stats(
    readings: list[TrapReading], bbox: BBox, min_weekly: float = 100.0
) -> dict:
    """Mean/std of temperature and humidity over hourly rows belonging to
    (device, ISO week) cells whose weekly count total exceeds min_weekly."""
    in_region = [r for r in readings if bbox.contains(r.lat, r.long)]
    weekly: dict[tuple[str, date], int] = defaultdict(int)
    for r in in_region:
        weekly[(r.device, _iso_week_start(r.day))] += r.counts
    qualifying = {cell for cell, total in weekly.items() if total > min_weekly}
    if not qualifying:
        raise NoQualifyingWeeks(
            f"no (device, week) cell exceeds {min_weekly} weekly counts"
        )
    rows = [r for r in in_region if (r.device, _iso_week_start(r.day)) in qualifying]
    temps = [r.temperature for r in rows]
    hums = [r.humidity for r in rows]

    def stats(values: list[float]) -> dict:
        return {
            "mean": sum(values) / len(values),
            "std": sample_std(values) if len(values) >= 2 else None,
        }

    return {
        "temperature": stats(temps),
        "humidity": stats(hums),
        "qualifying_weeks": len(qualifying),
        "n_rows": len(rows),
    }


# -- outliers --------------------------------------------------------------------


def hourly_outliers(
    readings: list[TrapReading],
    device: str,
    hours: set[int] | None = None,
    k: float = 3.0,
) -> list[OutlierEvent]:
    """High-side count outliers for one device, each hour treated independently.

    Per analyzed hour the mean and sample std over that hour's counts across
    days define the threshold mean + k*std; values strictly above it are
    flagged (std = 0 flags nothing). Events are sorted by timestamp.
    """
    rows = [r for r in readings if r.device == device]
    if not rows:
        raise InsufficientData(f"device {device!r} has no readings")
    by_hour: dict[int, list[TrapReading]] = defaultdict(list)
    for r in rows:
        by_hour[r.hour].append(r)
    analyzed = sorted(hours) if hours is not None else sorted(by_hour)
    events = []
    for hour in analyzed:
        # sort so mean/std are exact functions of the set, not the input order
        series = sorted(by_hour.get(hour, []), key=lambda r: r.timestamp)
        if len(series) < 3:
            raise InsufficientData(
                f"hour {hour} has {len(series)} readings, needs >= 3", hour=hour
            )
        counts = [float(r.counts) for r in series]
        mean = sum(counts) / len(counts)
        std = sample_std(counts)
        if std == 0.0:
            continue
        for r in series:
            if r.counts > mean + k * std:
                events.append(
                    OutlierEvent(
                        timestamp=r.timestamp,
                        counts=r.counts,
                        hour=hour,
                        z_score=(r.counts - mean) / std,
                        hour_mean=mean,
                        hour_std=std,
                    )
                )
    events.sort(key=lambda e: e.timestamp)
    return events


# -- similarity / correlation ------------------------------------------------------


@dataclass(frozen=True)
class SimilarityReport:
    pearson_r: float | None
    t_test: StatTestResult
    spectrum_a: tuple[float, ...]
    spectrum_b: tuple[float, ...]
    n_days: int

    def to_document(self) -> dict:
        return {
            "pearson_r": self.pearson_r,
            "t_test": self.t_test.to_document(),
            "spectrum_a": list(self.spectrum_a),
            "spectrum_b": list(self.spectrum_b),
            "n_days": self.n_days,
        }


def _magnitude_spectrum(series: list[float]) -> tuple[float, ...]:
    arr = np.asarray(series, dtype=float)
    arr = arr - arr.mean()
    return tuple(float(v) for v in np.abs(np.fft.rfft(arr)))


def similarity_report(
    readings_a: list[TrapReading], readings_b: list[TrapReading]
) -> SimilarityReport:
    """Catch-pattern similarity of two traps over their common calendar days.

    Daily count sums aligned on common days feed a Pearson correlation (None
    when a series is constant), a pooled two-sample t-test, and the magnitude
    spectra of the mean-removed daily series.
    """
    sums_a = {d: v for days in daily_sums(readings_a).values() for d, v in days.items()}
    sums_b = {d: v for days in daily_sums(readings_b).values() for d, v in days.items()}
    common = sorted(set(sums_a) & set(sums_b))
    if not common:
        raise NoCommonDays("the two traps share no calendar days with data")
    series_a = [float(sums_a[d]) for d in common]
    series_b = [float(sums_b[d]) for d in common]
    try:
        r = pearson(series_a, series_b)
    except ZeroVariance:
        r = None
    return SimilarityReport(
        pearson_r=r,
        t_test=t_test(series_a, series_b),
        spectrum_a=_magnitude_spectrum(series_a),
        spectrum_b=_magnitude_spectrum(series_b),
        n_days=len(common),
    )


def correlation_matrix(
    readings: list[TrapReading], devices: list[str] | None = None
) -> dict:
    """Symmetric unit-diagonal matrix of pairwise Pearson r on hourly counts.

    Each pair is aligned on the intersection of its hourly timestamps; cells
    with fewer than 2 common hours or zero variance are None.
    """
    by_device: dict[str, dict[datetime, int]] = defaultdict(dict)
    for r in readings:
        by_device[r.device][r.timestamp] = r.counts
    ids = sorted(by_device) if devices is None else list(devices)
    n = len(ids)
    matrix: list[list[float | None]] = [[None] * n for _ in range(n)]
    for i in range(n):
        matrix[i][i] = 1.0
        for j in range(i + 1, n):
            a, b = by_device.get(ids[i], {}), by_device.get(ids[j], {})
            common = sorted(set(a) & set(b))
            value: float | None
            try:
                value = pearson([float(a[t]) for t in common], [float(b[t]) for t in common])
            except (ZeroVariance, TooShort):
                value = None
            matrix[i][j] = matrix[j][i] = value
    return {"devices": ids, "matrix": matrix}


# -- environmental response ---------------------------------------------------------


@dataclass(frozen=True)
class BinnedResponse:
    variable: Metric
    bin_edges: tuple[tuple[float | None, float | None], ...]
    bin_labels: tuple[str, ...]
    mean_counts: tuple[float | None, ...]
    n: tuple[int, ...]

    def to_document(self) -> dict:
        return {
            "variable": self.variable.value,
            "bin_edges": [list(edge) for edge in self.bin_edges],
            "bin_labels": list(self.bin_labels),
            "mean_counts": list(self.mean_counts),
            "n": list(self.n),
        }


_TEMP_BINS: list[tuple[float | None, float | None, str]] = [
    (None, 10.0, "<10"),
    (10.0, 20.0, "10-20"),
    (20.0, 30.0, "20-30"),
    (30.0, None, ">=30"),
]
_HUM_BINS: list[tuple[float | None, float | None, str]] = [
    (float(lo), float(lo + 10), f"{lo}-{lo + 10}") for lo in range(0, 100, 10)
]


def binned_response(readings: list[TrapReading], variable: Metric) -> BinnedResponse:
    """Mean counts per temperature or humidity bin (CQ8-style bins).

    Temperature: (-inf,10), [10,20), [20,30), [30,inf). Humidity: ten 10%
    bins, the last one closed at 100. Empty bins report n=0 and a None mean.
    """
    if variable is Metric.TEMPERATURE:
        bins = _TEMP_BINS
    elif variable is Metric.HUMIDITY:
        bins = _HUM_BINS
    else:
        raise ValueError("binned_response accepts temperature or humidity")

    totals = [0 for _ in bins]
    counts_n = [0 for _ in bins]
    last = len(bins) - 1
    for r in readings:
        value = r.temperature if variable is Metric.TEMPERATURE else r.humidity
        for i, (lo, hi, _) in enumerate(bins):
            if lo is not None and value < lo:
                continue
            if hi is not None and not (value < hi or (i == last and value == hi)):
                continue
            totals[i] += r.counts
            counts_n[i] += 1
            break
    means = [t / n if n else None for t, n in zip(totals, counts_n)]
    return BinnedResponse(
        variable=variable,
        bin_edges=tuple((lo, hi) for lo, hi, _ in bins),
        bin_labels=tuple(label for _, _, label in bins),
        mean_counts=tuple(means),
        n=tuple(counts_n),
    )
