"""Shared test builders."""

from __future__ import annotations

from datetime import datetime, timedelta

from traphub.model import TrapReading

TABLE1_CSV = """Timestamp,Counts,Temperature,Humidity,Lat,Long,Name
01-06-23 8:00,8,24.61,66.2,39.30149,22.33027,100
01-06-23 9:00,6,26.99,57.4,39.30149,22.33027,100
01-06-23 10:00,4,30.2,48.8,39.30149,22.33027,100
01-06-23 11:00,12,31.57,43.2,39.30149,22.33027,100
"""


def mk(
    ts: str | datetime,
    counts: int = 0,
    device: str = "100",
    temperature: float = 25.0,
    humidity: float = 60.0,
    lat: float = 39.30149,
    long: float = 22.33027,
) -> TrapReading:
    if isinstance(ts, str):
        ts = datetime.fromisoformat(ts)
    return TrapReading(
        timestamp=ts,
        counts=counts,
        temperature=temperature,
        humidity=humidity,
        lat=lat,
        long=long,
        device=device,
    )


def hourly_series(
    device: str, start: str, counts: list[int], hour: int | None = None, **kw
) -> list[TrapReading]:
    """One reading per day at a fixed hour (or per hour when hour is None)."""
    t0 = datetime.fromisoformat(start)
    step = timedelta(days=1) if hour is not None else timedelta(hours=1)
    if hour is not None:
        t0 = t0.replace(hour=hour)
    return [mk(t0 + i * step, c, device, **kw) for i, c in enumerate(counts)]
