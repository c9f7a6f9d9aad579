"""Geospatial queries over trap positions: distances, adjacency, heat points."""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..errors import DegenerateGroups
from ..model import BBox, GeoPoint, StatTestResult, TrapReading
from .stats import anova

EARTH_RADIUS_KM = 6371.0088

__all__ = [
    "EARTH_RADIUS_KM",
    "AdjacencyResult",
    "adjacency_report",
    "adjacent_pairs",
    "device_positions",
    "haversine_km",
    "heat_points",
    "nearest_traps",
    "unique_locations",
]


def haversine_km(a: GeoPoint, b: GeoPoint) -> float:
    """Great-circle distance in kilometers on a spherical Earth."""
    lat1, lat2 = math.radians(a.lat), math.radians(b.lat)
    dlat = lat2 - lat1
    dlong = math.radians(b.long - a.long)
    h = math.sin(dlat / 2.0) ** 2 + math.cos(lat1) * math.cos(lat2) * math.sin(dlong / 2.0) ** 2
    return 2.0 * EARTH_RADIUS_KM * math.asin(min(1.0, math.sqrt(h)))


def device_positions(readings: list[TrapReading]) -> dict[str, GeoPoint]:
    """Each device's position as of its most recent reading in the input."""
    latest: dict[str, TrapReading] = {}
    for r in readings:
        prev = latest.get(r.device)
        if prev is None or r.timestamp >= prev.timestamp:
            latest[r.device] = r
    return {dev: r.position for dev, r in latest.items()}


def adjacent_pairs(
    positions: dict[str, GeoPoint], threshold_km: float = 1.0
) -> list[tuple[str, str, float]]:
    """Unordered device pairs within threshold_km, sorted by distance then ids."""
    devices = sorted(positions)
    pairs = []
    for i, a in enumerate(devices):
        for b in devices[i + 1 :]:
            d = haversine_km(positions[a], positions[b])
            if d <= threshold_km:
                pairs.append((a, b, d))
    pairs.sort(key=lambda p: (p[2], p[0], p[1]))
    return pairs


@dataclass(frozen=True)
class AdjacencyResult:
    pairs: tuple[tuple[str, str, float], ...]
    anova: StatTestResult | None

    def to_document(self) -> dict:
        return {
            "pairs": [
                {"device_a": a, "device_b": b, "distance_km": d} for a, b, d in self.pairs
            ],
            "anova": self.anova.to_document() if self.anova else None,
        }


def adjacency_report(readings: list[TrapReading], threshold_km: float = 1.0) -> AdjacencyResult:
    """Adjacent pairs plus a one-way ANOVA over the counts of the traps involved.

    Groups are the individual adjacent traps' hourly counts; the ANOVA field is
    None when fewer than two adjacent traps have enough data to test.
    """
    pairs = adjacent_pairs(device_positions(readings), threshold_km)
    members = sorted({d for a, b, _ in pairs for d in (a, b)})
    groups = []
    for dev in members:
        counts = [float(r.counts) for r in readings if r.device == dev]
        if len(counts) >= 2:
            groups.append(counts)
    result = None
    if len(groups) >= 2:
        try:
            result = anova(groups)
        except DegenerateGroups:
            result = None
    return AdjacencyResult(pairs=tuple(pairs), anova=result)


def nearest_traps(
    positions: dict[str, GeoPoint], point: GeoPoint, k: int = 3
) -> list[tuple[str, GeoPoint, float]]:
    """The k devices closest to point, nearest first (ties by device id)."""
    ranked = sorted(
        ((dev, pos, haversine_km(point, pos)) for dev, pos in positions.items()),
        key=lambda item: (item[2], item[0]),
    )
    return ranked[: max(0, k)]


def unique_locations(readings: list[TrapReading]) -> list[tuple[GeoPoint, list[str]]]:
    """Distinct (lat, long) points with the devices reporting from each."""
    by_point: dict[tuple[float, float], set[str]] = {}
    for r in readings:
        by_point.setdefault((r.lat, r.long), set()).add(r.device)
    return [
        (GeoPoint(lat, long), sorted(devs))
        for (lat, long), devs in sorted(by_point.items())
    ]


def heat_points(readings: list[TrapReading], bbox: BBox) -> list[tuple[GeoPoint, int]]:
    """One point per unique location inside bbox, weighted by its total counts."""
    weights: dict[tuple[float, float], int] = {}
    for r in readings:
        if bbox.contains(r.lat, r.long):
            weights[(r.lat, r.long)] = weights.get((r.lat, r.long), 0) + r.counts
    return [(GeoPoint(lat, long), w) for (lat, long), w in sorted(weights.items())]
