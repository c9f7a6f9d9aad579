"""Seeded synthetic data: a fleet of nocturnal-moth traps plus DSP test signals.

Counts follow a Poisson process whose hourly rate is a raised cosine inside
the nocturnal window (peak default 02:00) scaled by seasonal growth;
temperature is a daily sinusoid on a seasonal ramp and humidity its affine
inverse plus noise. Everything is keyed off numpy's PCG64 generator, so one
(config, seed) pair always yields the identical dataset.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import date, datetime, timedelta
from pathlib import Path

import numpy as np

from .dsp import Samples, encode_wav
from .ingest import render_tabular
from .model import BBox, GeoPoint, TrapReading

__all__ = [
    "FleetConfig",
    "FleetData",
    "InjectedOutlier",
    "OutlierSpec",
    "generate_fleet",
    "generate_wingbeat",
    "generate_woodbore",
    "write_fleet_csv",
    "write_wav_file",
]


@dataclass(frozen=True)
class OutlierSpec:
    """Request to spike one (device, timestamp) count by ``magnitude``."""

    device: str
    timestamp: datetime
    magnitude: int


@dataclass(frozen=True)
class InjectedOutlier:
    device: str
    timestamp: datetime
    magnitude: int
    final_counts: int

    def to_document(self) -> dict:
        return {
            "device": self.device,
            "timestamp": self.timestamp.strftime("%Y-%m-%dT%H:%M"),
            "magnitude": self.magnitude,
            "final_counts": self.final_counts,
        }


@dataclass(frozen=True)
class FleetConfig:
    n_devices: int = 250
    region: BBox = field(default_factory=lambda: BBox(39.0, 40.2, 21.8, 22.9))
    start_date: date = date(2023, 6, 1)
    end_date: date = date(2023, 9, 1)  # exclusive
    peak_hour: int = 2
    nocturnal_window: tuple[int, int] = (21, 4)
    base_rate: float = 8.0
    day_rate_fraction: float = 0.02
    seasonal_growth: float = 2.0
    temp_base: float = 23.0
    temp_seasonal_ramp: float = 6.0
    temp_daily_amplitude: float = 6.0
    temp_peak_hour: int = 15
    temp_noise_sigma: float = 0.8
    humidity_intercept: float = 100.0
    humidity_slope: float = -1.9
    humidity_noise_sigma: float = 4.0
    first_device_number: int = 100
    outliers: tuple[OutlierSpec, ...] = ()

    def __post_init__(self):
        if self.n_devices < 1:
            raise ValueError("n_devices must be >= 1")
        if self.end_date <= self.start_date:
            raise ValueError("end_date must follow start_date")

    @property
    def n_days(self) -> int:
        return (self.end_date - self.start_date).days

    def device_names(self) -> list[str]:
        return [str(self.first_device_number + i) for i in range(self.n_devices)]


@dataclass(frozen=True)
class FleetData:
    readings: list[TrapReading]
    injected: tuple[InjectedOutlier, ...]
    device_rates: dict[str, float]  # per-device peak-hour rate (insects/h)
    positions: dict[str, GeoPoint]


def _hour_shape(config: FleetConfig) -> np.ndarray:
    """Rate multiplier per hour 0-23: raised cosine over the nocturnal window."""
    start, end = config.nocturnal_window
    length = (end - start) % 24
    peak_pos = (config.peak_hour - start) % 24
    shape = np.full(24, config.day_rate_fraction)
    for h in range(24):
        pos = (h - start) % 24
        if pos > length:
            continue
        if pos <= peak_pos:
            value = 0.5 * (1.0 + np.cos(np.pi * (pos - peak_pos) / max(peak_pos, 1)))
        else:
            value = 0.5 * (1.0 + np.cos(np.pi * (pos - peak_pos) / max(length - peak_pos, 1)))
        shape[h] = max(value, config.day_rate_fraction)
    return shape


def generate_fleet(config: FleetConfig, seed: int) -> FleetData:
    """Generate hourly readings for the whole fleet plus ground truth.

    Returns the readings (device-major, time-ordered), the injected outliers
    with their final counts, each device's true peak rate, and positions.
    """
    root = np.random.SeedSequence(seed)
    position_rng = np.random.Generator(np.random.PCG64(root.spawn(1)[0]))
    device_seeds = root.spawn(config.n_devices + 1)[1:]

    names = config.device_names()
    n_days = config.n_days
    hours = np.arange(24)
    shape = _hour_shape(config)
    day_index = np.arange(n_days)
    growth = 1.0 + config.seasonal_growth * (day_index / max(n_days - 1, 1))
    temp_daily = config.temp_daily_amplitude * np.cos(
        2.0 * np.pi * (hours - config.temp_peak_hour) / 24.0
    )
    temp_seasonal = config.temp_base + config.temp_seasonal_ramp * (
        day_index / max(n_days - 1, 1)
    )
    timestamps = [
        datetime.combine(config.start_date + timedelta(days=int(d)), datetime.min.time())
        + timedelta(hours=int(h))
        for d in day_index
        for h in hours
    ]

    positions: dict[str, GeoPoint] = {}
    taken: set[tuple[float, float]] = set()
    region = config.region
    for name in names:
        while True:
            lat = float(position_rng.uniform(region.lat_min, region.lat_max))
            long = float(position_rng.uniform(region.long_min, region.long_max))
            if (lat, long) not in taken:
                taken.add((lat, long))
                positions[name] = GeoPoint(lat, long)
                break

    injections: dict[tuple[str, datetime], int] = {}
    for spec in config.outliers:
        injections[(spec.device, spec.timestamp)] = (
            injections.get((spec.device, spec.timestamp), 0) + spec.magnitude
        )

    readings: list[TrapReading] = []
    injected: list[InjectedOutlier] = []
    device_rates: dict[str, float] = {}
    for name, dev_seed in zip(names, device_seeds):
        rng = np.random.Generator(np.random.PCG64(dev_seed))
        rate_mult = float(rng.uniform(0.6, 1.4))
        peak_rate = config.base_rate * rate_mult
        device_rates[name] = peak_rate

        lam = peak_rate * np.outer(growth, shape)  # (days, hours)
        counts = rng.poisson(lam)
        temp = (
            temp_seasonal[:, None]
            + temp_daily[None, :]
            + rng.normal(0.0, config.temp_noise_sigma, size=lam.shape)
        )
        temp = np.clip(temp, -50.0, 60.0)
        hum = (
            config.humidity_intercept
            + config.humidity_slope * temp
            + rng.normal(0.0, config.humidity_noise_sigma, size=lam.shape)
        )
        hum = np.clip(hum, 0.0, 100.0)

        pos = positions[name]
        flat_counts = counts.ravel()
        flat_temp = np.round(temp.ravel(), 2)
        flat_hum = np.round(hum.ravel(), 1)
        for i, ts in enumerate(timestamps):
            c = int(flat_counts[i])
            extra = injections.get((name, ts))
            if extra is not None:
                c += extra
                injected.append(
                    InjectedOutlier(device=name, timestamp=ts, magnitude=extra, final_counts=c)
                )
            readings.append(
                TrapReading(
                    timestamp=ts,
                    counts=c,
                    temperature=float(flat_temp[i]),
                    humidity=float(flat_hum[i]),
                    lat=pos.lat,
                    long=pos.long,
                    device=name,
                )
            )
    return FleetData(
        readings=readings,
        injected=tuple(injected),
        device_rates=device_rates,
        positions=positions,
    )


def write_fleet_csv(readings: list[TrapReading], path: str | Path) -> Path:
    """Write readings in the tabular upload format (self-dogfoods the parser)."""
    path = Path(path)
    path.write_text(render_tabular(readings), encoding="utf-8")
    return path


# -- DSP test-signal factories ---------------------------------------------------


def generate_wingbeat(
    f0: float,
    harmonics: tuple[float, ...] = (1.0, 0.5, 0.25),
    duration_s: float = 2.0,
    sample_rate: int = 8000,
    noise_sigma: float = 0.01,
    seed: int = 0,
) -> Samples:
    """Synthetic wingbeat: harmonic stack at f0 with additive Gaussian noise."""
    rng = np.random.Generator(np.random.PCG64(seed))
    t = np.arange(int(duration_s * sample_rate)) / sample_rate
    signal = np.zeros_like(t)
    for k, amp in enumerate(harmonics, start=1):
        signal += amp * np.sin(2.0 * np.pi * k * f0 * t)
    peak = np.max(np.abs(signal))
    if peak > 0:
        signal *= 0.9 / peak
    signal += rng.normal(0.0, noise_sigma, size=signal.shape)
    return Samples(data=np.clip(signal, -1.0, 1.0), sample_rate=sample_rate)


def generate_woodbore(
    click_rate_per_s: float = 2.0,
    click_ms: float = 5.0,
    amp: float = 0.5,
    duration_s: float = 10.0,
    sample_rate: int = 8000,
    noise_sigma: float = 0.01,
    seed: int = 0,
) -> tuple[Samples, tuple[float, ...]]:
    """Synthetic borer-larva signal: damped 2 kHz clicks over sensor noise.

    Returns the waveform and the ground-truth click times (seconds); the
    click count is exactly round(rate * duration).
    """
    rng = np.random.Generator(np.random.PCG64(seed))
    n = int(duration_s * sample_rate)
    signal = rng.normal(0.0, noise_sigma, size=n)
    n_clicks = int(round(click_rate_per_s * duration_s))
    click_len = max(1, int(click_ms * sample_rate / 1000.0))
    t = np.arange(click_len) / sample_rate
    burst = np.cos(2.0 * np.pi * 2000.0 * t) * np.exp(-t / (click_ms / 3000.0))
    times = []
    for i in range(n_clicks):
        center = (i + 0.5) / click_rate_per_s
        center += float(rng.uniform(-0.15, 0.15)) / click_rate_per_s
        start = int(center * sample_rate)
        if start < 0 or start + click_len > n:
            start = min(max(start, 0), n - click_len)
        signal[start : start + click_len] += amp * burst
        times.append(start / sample_rate)
    return (
        Samples(data=np.clip(signal, -1.0, 1.0), sample_rate=sample_rate),
        tuple(times),
    )


def write_wav_file(samples: Samples, path: str | Path) -> Path:
    path = Path(path)
    path.write_bytes(encode_wav(samples))
    return path
