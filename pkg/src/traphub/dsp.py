"""Signal analysis for vibration and wingbeat recordings.

Covers WAV decoding, Welch PSD, STFT spectrogram, fundamental/harmonic
extraction, mosquito sex bands, and woodborer impulse-train detection.
MP3 payloads need an externally registered decoder (see set_mp3_decoder);
everything else is plain numpy.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass, replace
from enum import Enum
from typing import Callable

import numpy as np

from .errors import CorruptHeader, TooShort, UnsupportedEncoding

__all__ = [
    "ImpulseReport",
    "InfestationVerdict",
    "Psd",
    "Samples",
    "SexClass",
    "SpectralAnalysis",
    "Spectrogram",
    "analyze_samples",
    "classify_mosquito_sex",
    "decode_recording",
    "decode_wav",
    "detect_impulses",
    "encode_wav",
    "find_harmonics",
    "fundamental_frequency",
    "infestation_verdict",
    "set_mp3_decoder",
    "spectrogram",
    "welch_psd",
]


@dataclass(frozen=True)
class Samples:
    """Mono waveform normalized to [-1, 1]."""

    data: np.ndarray
    sample_rate: int

    def __post_init__(self):
        if self.sample_rate <= 0:
            raise ValueError(f"sample rate must be positive, got {self.sample_rate}")
        if len(self.data) < 1:
            raise ValueError("empty sample buffer")
        peak = float(np.max(np.abs(self.data)))
        if peak > 1.0 + 1e-9:
            raise ValueError(f"samples exceed full scale (peak {peak})")

    @property
    def duration_s(self) -> float:
        return len(self.data) / self.sample_rate


# -- WAV codec ----------------------------------------------------------------

_MP3_DECODER: Callable[[bytes], Samples] | None = None


def set_mp3_decoder(decoder: Callable[[bytes], Samples] | None):
    """Register an external MP3 decoder hook (bytes -> Samples)."""
    global _MP3_DECODER
    _MP3_DECODER = decoder


def _looks_like_mp3(data: bytes) -> bool:
    return data[:3] == b"ID3" or (len(data) >= 2 and data[0] == 0xFF and (data[1] & 0xE0) == 0xE0)


def decode_wav(data: bytes) -> Samples:
    """Decode a RIFF/WAVE payload (PCM 8/16/24-bit or 32-bit float, first
    channel) to normalized samples."""
    if _looks_like_mp3(data):
        raise UnsupportedEncoding("payload is MP3, register an external decoder")
    if len(data) < 12 or data[:4] != b"RIFF" or data[8:12] != b"WAVE":
        raise CorruptHeader("not a RIFF/WAVE payload")

    fmt = None
    frames = None
    pos = 12
    while pos + 8 <= len(data):
        chunk_id = data[pos : pos + 4]
        (size,) = struct.unpack_from("<I", data, pos + 4)
        body = data[pos + 8 : pos + 8 + size]
        if chunk_id == b"fmt ":
            if size < 16 or len(body) < 16:
                raise CorruptHeader("fmt chunk truncated")
            fmt = struct.unpack_from("<HHIIHH", body, 0)
        elif chunk_id == b"data":
            if len(body) < size:
                raise CorruptHeader("data chunk truncated")
            frames = body
        pos += 8 + size + (size & 1)  # chunks are word-aligned

    if fmt is None:
        raise CorruptHeader("missing fmt chunk")
    if frames is None:
        raise CorruptHeader("missing data chunk")
    audio_format, channels, sample_rate, _, block_align, bits = fmt
    if channels < 1 or sample_rate <= 0 or block_align <= 0:
        raise CorruptHeader(f"nonsensical fmt fields: {fmt}")

    if audio_format == 1 and bits == 16:
        raw = np.frombuffer(frames[: len(frames) - len(frames) % block_align], dtype="<i2")
        signal = raw.reshape(-1, channels)[:, 0].astype(np.float64) / 32768.0
    elif audio_format == 1 and bits == 8:
        raw = np.frombuffer(frames[: len(frames) - len(frames) % block_align], dtype=np.uint8)
        signal = (raw.reshape(-1, channels)[:, 0].astype(np.float64) - 128.0) / 128.0
    elif audio_format == 1 and bits == 24:
        usable = frames[: len(frames) - len(frames) % block_align]
        raw = np.frombuffer(usable, dtype=np.uint8).reshape(-1, block_align)
        b = raw[:, :3].astype(np.int32)
        value = b[:, 0] | (b[:, 1] << 8) | (b[:, 2] << 16)
        value = np.where(value >= 1 << 23, value - (1 << 24), value)
        signal = value.astype(np.float64) / float(1 << 23)
    elif audio_format == 3 and bits == 32:
        raw = np.frombuffer(frames[: len(frames) - len(frames) % block_align], dtype="<f4")
        signal = np.clip(raw.reshape(-1, channels)[:, 0].astype(np.float64), -1.0, 1.0)
    else:
        raise UnsupportedEncoding(
            f"unsupported WAV encoding: format {audio_format}, {bits}-bit"
        )
    if len(signal) == 0:
        raise CorruptHeader("empty data chunk")
    return Samples(data=signal, sample_rate=int(sample_rate))


def decode_recording(payload: bytes, container: str) -> Samples:
    """Decode a recording payload by container; MP3 needs the external hook."""
    if container == "mp3":
        if _MP3_DECODER is None:
            raise UnsupportedEncoding("MP3 decoding requires an external decoder hook")
        return _MP3_DECODER(payload)
    return decode_wav(payload)


def encode_wav(samples: Samples) -> bytes:
    """Encode to mono 16-bit PCM WAV (scale 32768, clipped at full scale)."""
    pcm = np.clip(np.round(samples.data * 32768.0), -32768, 32767).astype("<i2")
    body = pcm.tobytes()
    header = struct.pack(
        "<4sI4s4sIHHIIHH4sI",
        b"RIFF",
        36 + len(body),
        b"WAVE",
        b"fmt ",
        16,
        1,
        1,
        samples.sample_rate,
        samples.sample_rate * 2,
        2,
        16,
        b"data",
        len(body),
    )
    return header + body


# -- spectral estimation ----------------------------------------------------------


def _hann(n: int) -> np.ndarray:
    return 0.5 - 0.5 * np.cos(2.0 * np.pi * np.arange(n) / n)


@dataclass(frozen=True)
class Psd:
    freqs: np.ndarray
    power: np.ndarray
    sample_rate: int

    @property
    def bin_width(self) -> float:
        return float(self.freqs[1] - self.freqs[0])

    def to_pairs(self) -> list[list[float]]:
        return [[float(f), float(p)] for f, p in zip(self.freqs, self.power)]


def welch_psd(s: Samples, segment: int = 1024, overlap: float = 0.5) -> Psd:
    """One-sided Welch PSD: Hann-windowed, mean-removed, averaged periodograms.

    Scaled as a density (power per Hz), so sum(power) * bin_width recovers the
    signal's mean power.
    """
    n = len(s.data)
    if n < segment:
        raise TooShort(f"need >= {segment} samples for segment size {segment}, got {n}")
    if not (0.0 <= overlap < 1.0):
        raise ValueError(f"overlap must be in [0, 1), got {overlap}")
    hop = max(1, int(segment * (1.0 - overlap)))
    window = _hann(segment)
    scale = 1.0 / (s.sample_rate * float(np.sum(window**2)))
    acc = np.zeros(segment // 2 + 1)
    count = 0
    for start in range(0, n - segment + 1, hop):
        chunk = s.data[start : start + segment]
        chunk = chunk - chunk.mean()
        spectrum = np.fft.rfft(chunk * window)
        pxx = (spectrum.real**2 + spectrum.imag**2) * scale
        acc += pxx
        count += 1
    acc /= count
    acc[1:] *= 2.0
    if segment % 2 == 0:
        acc[-1] /= 2.0  # Nyquist bin is not mirrored
    freqs = np.fft.rfftfreq(segment, 1.0 / s.sample_rate)
    return Psd(freqs=freqs, power=acc, sample_rate=s.sample_rate)


@dataclass(frozen=True)
class Spectrogram:
    """Row-major magnitude STFT: magnitude[frame_index][freq_index]."""

    times: np.ndarray
    freqs: np.ndarray
    magnitude: np.ndarray

    def to_document(self) -> dict:
        return {
            "times": [float(t) for t in self.times],
            "freqs": [float(f) for f in self.freqs],
            "magnitude": [[float(v) for v in row] for row in self.magnitude],
        }


def spectrogram(s: Samples, frame: int = 512, hop: int = 256) -> Spectrogram:
    """Magnitude STFT with Hann window; floor((N-frame)/hop)+1 frames."""
    n = len(s.data)
    if n < frame:
        raise TooShort(f"need >= {frame} samples for frame size {frame}, got {n}")
    window = _hann(frame)
    n_frames = (n - frame) // hop + 1
    mags = np.empty((n_frames, frame // 2 + 1))
    for i in range(n_frames):
        chunk = s.data[i * hop : i * hop + frame]
        mags[i] = np.abs(np.fft.rfft(chunk * window))
    times = (np.arange(n_frames) * hop + frame / 2.0) / s.sample_rate
    freqs = np.fft.rfftfreq(frame, 1.0 / s.sample_rate)
    return Spectrogram(times=times, freqs=freqs, magnitude=mags)


def fundamental_frequency(
    psd: Psd, band: tuple[float, float] = (100.0, 1200.0)
) -> float | None:
    """Frequency of the strongest in-band PSD peak, parabolically refined.

    Returns None when the peak is less than 6 dB above the in-band median
    (no clear tone) or the band holds no bins.
    """
    mask = (psd.freqs >= band[0]) & (psd.freqs <= band[1])
    idx = np.flatnonzero(mask)
    if idx.size == 0:
        return None
    in_band = psd.power[idx]
    peak_local = int(np.argmax(in_band))
    peak = int(idx[peak_local])
    # the in-band median, floored 60 dB under the global peak so leakage
    # skirts of out-of-band energy never masquerade as a tone
    floor = max(float(np.median(in_band)), float(np.max(psd.power)) * 1e-6)
    if floor <= 0.0 or psd.power[peak] < 4.0 * floor:  # < 6.02 dB above the floor
        return None
    freq = float(psd.freqs[peak])
    if 0 < peak < len(psd.power) - 1:
        tiny = 1e-300
        alpha = 10.0 * math.log10(psd.power[peak - 1] + tiny)
        beta = 10.0 * math.log10(psd.power[peak] + tiny)
        gamma = 10.0 * math.log10(psd.power[peak + 1] + tiny)
        denom = alpha - 2.0 * beta + gamma
        if denom != 0.0:
            delta = 0.5 * (alpha - gamma) / denom
            delta = max(-0.5, min(0.5, delta))
            freq += delta * psd.bin_width
    return freq


def find_harmonics(
    psd: Psd,
    fundamental_hz: float,
    max_harmonics: int = 5,
    tolerance: float = 0.05,
    min_power_ratio: float = 0.01,
) -> list[float]:
    """Peaks near integer multiples of the fundamental (within tolerance)."""
    base_idx = int(np.argmin(np.abs(psd.freqs - fundamental_hz)))
    base_power = float(psd.power[base_idx])
    if base_power <= 0.0:
        return []
    harmonics = []
    nyquist = float(psd.freqs[-1])
    for k in range(2, max_harmonics + 2):
        target = k * fundamental_hz
        if target > nyquist:
            break
        mask = (psd.freqs >= target * (1 - tolerance)) & (psd.freqs <= target * (1 + tolerance))
        idx = np.flatnonzero(mask)
        if idx.size == 0:
            continue
        local = idx[int(np.argmax(psd.power[idx]))]
        if psd.power[local] >= min_power_ratio * base_power:
            harmonics.append(float(psd.freqs[local]))
    return harmonics


# -- classification ------------------------------------------------------------------

FEMALE_BAND_HZ = (250.0, 500.0)
MALE_BAND_HZ = (500.0, 800.0)


class SexClass(str, Enum):
    FEMALE = "female"
    MALE = "male"
    UNKNOWN = "unknown"


def classify_mosquito_sex(fundamental_hz: float | None) -> SexClass:
    """Wingbeat-band sex call: females ~250-500 Hz, males ~500-800 Hz.

    The shared 500 Hz boundary goes to Male (female band is half-open).
    """
    if fundamental_hz is None:
        return SexClass.UNKNOWN
    if FEMALE_BAND_HZ[0] <= fundamental_hz < FEMALE_BAND_HZ[1]:
        return SexClass.FEMALE
    if MALE_BAND_HZ[0] <= fundamental_hz <= MALE_BAND_HZ[1]:
        return SexClass.MALE
    return SexClass.UNKNOWN


# -- impulse trains ---------------------------------------------------------------------


@dataclass(frozen=True)
class ImpulseReport:
    impulse_times: tuple[float, ...]
    impulse_rate_per_min: float
    threshold_used: float
    infested: bool | None = None

    def to_document(self) -> dict:
        return {
            "impulse_times": list(self.impulse_times),
            "impulse_rate_per_min": self.impulse_rate_per_min,
            "threshold_used": self.threshold_used,
            "infested": self.infested,
        }


def detect_impulses(
    s: Samples,
    frame_ms: float = 4.0,
    k_mad: float = 8.0,
    min_gap_ms: float = 20.0,
) -> ImpulseReport:
    """Detect broadband clicks via short-time energy vs a median+MAD threshold.

    Frames above median + k_mad * MAD are grouped; groups closer than
    min_gap_ms merge into one impulse timed at the group's peak-energy frame.
    """
    frame_len = max(1, round(s.sample_rate * frame_ms / 1000.0))
    n_frames = len(s.data) // frame_len
    if n_frames < 4:
        raise TooShort(f"{n_frames} analysis frames, need >= 4")
    trimmed = s.data[: n_frames * frame_len]
    energies = (trimmed.reshape(n_frames, frame_len) ** 2).sum(axis=1)
    median = float(np.median(energies))
    mad = float(np.median(np.abs(energies - median)))
    threshold = median + k_mad * mad

    gap_frames = max(1, math.ceil(min_gap_ms / frame_ms))
    above = np.flatnonzero(energies > threshold)
    times = []
    group: list[int] = []
    for idx in above:
        if group and idx - group[-1] > gap_frames:
            peak = max(group, key=lambda i: energies[i])
            times.append((peak + 0.5) * frame_len / s.sample_rate)
            group = []
        group.append(int(idx))
    if group:
        peak = max(group, key=lambda i: energies[i])
        times.append((peak + 0.5) * frame_len / s.sample_rate)

    duration_min = s.duration_s / 60.0
    return ImpulseReport(
        impulse_times=tuple(times),
        impulse_rate_per_min=len(times) / duration_min,
        threshold_used=threshold,
    )


@dataclass(frozen=True)
class InfestationVerdict:
    infested: bool
    confidence: float

    def to_document(self) -> dict:
        return {"infested": self.infested, "confidence": self.confidence}


def infestation_verdict(
    report: ImpulseReport, min_rate_per_min: float = 10.0
) -> InfestationVerdict:
    """Rate-thresholded infestation call from an impulse report."""
    rate = report.impulse_rate_per_min
    return InfestationVerdict(
        infested=rate >= min_rate_per_min,
        confidence=min(1.0, rate / (2.0 * min_rate_per_min)),
    )


# -- combined analysis document -----------------------------------------------------------


@dataclass(frozen=True)
class SpectralAnalysis:
    psd: Psd | None = None
    spec: Spectrogram | None = None
    fundamental_hz: float | None = None
    harmonics_hz: tuple[float, ...] = ()
    verdict: dict | None = None
    impulses: ImpulseReport | None = None

    def to_document(self) -> dict:
        return {
            "psd": self.psd.to_pairs() if self.psd else None,
            "spectrogram": self.spec.to_document() if self.spec else None,
            "fundamental_hz": self.fundamental_hz,
            "harmonics_hz": list(self.harmonics_hz),
            "verdict": self.verdict,
            "impulses": self.impulses.to_document() if self.impulses else None,
        }


ANALYSIS_OPS = ("psd", "spectrogram", "fundamental", "classify", "impulses")


def analyze_samples(samples: Samples, ops: list[str]) -> SpectralAnalysis:
    """Run the requested analysis ops ('classify' implies 'fundamental')."""
    unknown = [op for op in ops if op not in ANALYSIS_OPS]
    if unknown:
        raise ValueError(f"unknown analysis ops: {unknown}")
    result = SpectralAnalysis()
    segment = min(1024, 1 << (len(samples.data).bit_length() - 1))
    need_psd = any(op in ops for op in ("psd", "fundamental", "classify"))
    psd = welch_psd(samples, segment=segment) if need_psd else None
    if "psd" in ops:
        result = replace(result, psd=psd)
    if "spectrogram" in ops:
        frame = min(512, segment)
        result = replace(result, spec=spectrogram(samples, frame=frame, hop=frame // 2))
    if "fundamental" in ops or "classify" in ops:
        f0 = fundamental_frequency(psd)
        harmonics = find_harmonics(psd, f0) if f0 is not None else []
        result = replace(result, fundamental_hz=f0, harmonics_hz=tuple(harmonics))
        if "classify" in ops:
            result = replace(result, verdict={"sex": classify_mosquito_sex(f0).value})
    if "impulses" in ops:
        report = detect_impulses(samples)
        verdict = infestation_verdict(report)
        report = replace(report, infested=verdict.infested)
        result = replace(
            result,
            impulses=report,
            verdict={**(result.verdict or {}), **verdict.to_document()},
        )
    return result
