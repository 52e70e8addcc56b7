"""
Audio analysis: WAV decoding, spectrograms, percussive separation, and the
cumulative-energy interpolation curve.

Pipeline: decode -> STFT -> median-filter separation (sustained tones median
out along time, transients median out along frequency) -> soft masks keep the
percussive part -> per-hop mean absolute amplitude -> cumulative sum,
normalized to span 0..1 and resampled to one weight per video frame.

Everything here is a pure function of its inputs; no shared mutable state.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np
import scipy.ndimage
import scipy.signal

from .errors import (
    ClipTooShort,
    IntervalOutOfRange,
    MalformedWav,
    UnsupportedEncoding,
)

DEFAULT_WINDOW = 2048
DEFAULT_HOP = 512
DEFAULT_KERNEL = 31
MIN_WINDOW = 64


@dataclass(frozen=True)
class AudioClip:
    """Mono audio, samples normalized to [-1, 1]."""

    samples: np.ndarray
    sample_rate: int

    @property
    def duration_sec(self) -> float:
        return len(self.samples) / self.sample_rate


@dataclass(frozen=True)
class Spectrogram:
    """Magnitude spectrogram, rows are frequency bins, columns are frames."""

    magnitudes: np.ndarray
    hop_length: int
    window_size: int


@dataclass(frozen=True)
class HpssMasks:
    """Soft masks; elementwise harmonic + percussive == 1."""

    harmonic_mask: np.ndarray
    percussive_mask: np.ndarray


@dataclass(frozen=True)
class EnergyCurve:
    """Per-frame interpolation weights: starts at 0, ends at 1, nondecreasing."""

    weights: np.ndarray

    def __len__(self) -> int:
        return len(self.weights)


# --------------------------------------------------------------------------
# WAV decoding
# --------------------------------------------------------------------------

_WAVE_FORMAT_PCM = 1
_WAVE_FORMAT_IEEE_FLOAT = 3
_WAVE_FORMAT_EXTENSIBLE = 0xFFFE


def decode_wav(data: bytes) -> AudioClip:
    """Decode a RIFF/PCM WAV byte string into a normalized mono clip.

    Handles 8/16/24-bit integer and 32-bit float encodings, 1 or 2 channels.
    Stereo is averaged down to mono; samples are scaled so magnitudes stay
    within [-1, 1].

    Raises:
        MalformedWav: bad header, truncated chunks, or zero samples.
        UnsupportedEncoding: compressed WAV or an unhandled bit depth.
    """
    if len(data) < 12 or data[0:4] != b"RIFF" or data[8:12] != b"WAVE":
        raise MalformedWav("not a RIFF/WAVE file")

    fmt = None
    payload = None
    pos = 12
    while pos + 8 <= len(data):
        chunk_id = data[pos : pos + 4]
        (chunk_size,) = struct.unpack_from("<I", data, pos + 4)
        body = data[pos + 8 : pos + 8 + chunk_size]
        if len(body) < chunk_size:
            raise MalformedWav(f"chunk {chunk_id!r} truncated")
        if chunk_id == b"fmt ":
            if chunk_size < 16:
                raise MalformedWav("fmt chunk too small")
            fmt = struct.unpack_from("<HHIIHH", body, 0)
            if fmt[0] == _WAVE_FORMAT_EXTENSIBLE:
                # true format lives in the first two bytes of the subformat GUID
                if chunk_size < 40:
                    raise MalformedWav("extensible fmt chunk too small")
                (sub,) = struct.unpack_from("<H", body, 24)
                fmt = (sub,) + fmt[1:]
        elif chunk_id == b"data":
            payload = body
        pos += 8 + chunk_size + (chunk_size & 1)  # chunks are word-aligned

    if fmt is None or payload is None:
        raise MalformedWav("missing fmt or data chunk")

    audio_format, n_channels, sample_rate, _, block_align, bits = fmt
    if sample_rate <= 0:
        raise MalformedWav("sample rate must be positive")
    if n_channels not in (1, 2):
        raise UnsupportedEncoding(f"{n_channels} channels (only mono/stereo)")
    if audio_format == _WAVE_FORMAT_PCM:
        if bits not in (8, 16, 24):
            raise UnsupportedEncoding(f"{bits}-bit PCM")
    elif audio_format == _WAVE_FORMAT_IEEE_FLOAT:
        if bits != 32:
            raise UnsupportedEncoding(f"{bits}-bit float")
    else:
        raise UnsupportedEncoding(f"wave format tag {audio_format}")

    frame_bytes = n_channels * bits // 8
    if block_align and block_align != frame_bytes:
        raise MalformedWav("block alignment disagrees with format")
    if len(payload) % frame_bytes != 0:
        raise MalformedWav("data chunk is not a whole number of frames")
    if len(payload) == 0:
        raise MalformedWav("no audio samples")

    if audio_format == _WAVE_FORMAT_IEEE_FLOAT:
        raw = np.frombuffer(payload, dtype="<f4").astype(np.float64)
    elif bits == 16:
        raw = np.frombuffer(payload, dtype="<i2").astype(np.float64) / 32768.0
    elif bits == 8:
        raw = (np.frombuffer(payload, dtype=np.uint8).astype(np.float64) - 128.0) / 128.0
    else:  # 24-bit packed little-endian
        b = np.frombuffer(payload, dtype=np.uint8).reshape(-1, 3).astype(np.int64)
        val = b[:, 0] | (b[:, 1] << 8) | (b[:, 2] << 16)
        val = np.where(val >= 1 << 23, val - (1 << 24), val)
        raw = val.astype(np.float64) / float(1 << 23)

    if n_channels == 2:
        raw = raw.reshape(-1, 2).mean(axis=1)
    samples = np.clip(raw, -1.0, 1.0)
    return AudioClip(samples=samples, sample_rate=sample_rate)


def encode_wav(clip: AudioClip) -> bytes:
    """Serialize a clip as 16-bit PCM WAV (used for muxing and exports)."""
    pcm = np.clip(np.round(clip.samples * 32767.0), -32768, 32767).astype("<i2")
    body = pcm.tobytes()
    header = b"WAVE" + b"fmt " + struct.pack(
        "<IHHIIHH", 16, _WAVE_FORMAT_PCM, 1, clip.sample_rate,
        clip.sample_rate * 2, 2, 16,
    ) + b"data" + struct.pack("<I", len(body))
    return b"RIFF" + struct.pack("<I", len(header) + len(body)) + header + body


# --------------------------------------------------------------------------
# Spectral analysis
# --------------------------------------------------------------------------

def _hann(window_size: int) -> np.ndarray:
    return scipy.signal.get_window("hann", window_size, fftbins=True)


def _stft_complex(samples: np.ndarray, window_size: int, hop_length: int) -> np.ndarray:
    """Centered complex STFT; frames cover the slice ends via reflect padding."""
    pad = window_size // 2
    padded = np.pad(samples, pad, mode="reflect")
    n_frames = 1 + (len(samples) // hop_length)
    window = _hann(window_size)
    frames = np.empty((window_size // 2 + 1, n_frames), dtype=np.complex128)
    for t in range(n_frames):
        chunk = padded[t * hop_length : t * hop_length + window_size]
        frames[:, t] = np.fft.rfft(chunk * window)
    return frames


def _istft(frames: np.ndarray, window_size: int, hop_length: int, length: int) -> np.ndarray:
    """Weighted overlap-add inverse of _stft_complex, trimmed to `length`."""
    window = _hann(window_size)
    n_frames = frames.shape[1]
    total = (n_frames - 1) * hop_length + window_size
    out = np.zeros(total)
    norm = np.zeros(total)
    for t in range(n_frames):
        start = t * hop_length
        out[start : start + window_size] += np.fft.irfft(frames[:, t], n=window_size) * window
        norm[start : start + window_size] += window**2
    out /= np.maximum(norm, 1e-12)
    pad = window_size // 2
    return out[pad : pad + length]


def stft(
    clip: AudioClip,
    window_size: int = DEFAULT_WINDOW,
    hop_length: int = DEFAULT_HOP,
) -> Spectrogram:
    """Magnitude spectrogram with a Hann window.

    window_size must be a power of two >= 64 and hop_length <= window_size.

    Raises:
        ClipTooShort: fewer samples than one window.
    """
    if window_size < MIN_WINDOW or window_size & (window_size - 1):
        raise ValueError("window_size must be a power of two >= 64")
    if not 1 <= hop_length <= window_size:
        raise ValueError("hop_length must be in 1..window_size")
    if len(clip.samples) < window_size:
        raise ClipTooShort(f"{len(clip.samples)} samples < window {window_size}")
    mags = np.abs(_stft_complex(clip.samples, window_size, hop_length))
    return Spectrogram(magnitudes=mags, hop_length=hop_length, window_size=window_size)


def hpss(
    spec: Spectrogram,
    harmonic_kernel: int = DEFAULT_KERNEL,
    percussive_kernel: int = DEFAULT_KERNEL,
) -> HpssMasks:
    """Split a spectrogram into harmonic/percussive soft masks.

    Median filtering along time smooths out transients (harmonic estimate H);
    along frequency it smooths out sustained ridges (percussive estimate P).
    Soft masks use exponent 2: percussive = P^2 / (H^2 + P^2). Cells where
    both estimates are zero get 0.5 each.
    """
    for k in (harmonic_kernel, percussive_kernel):
        if k < 3 or k % 2 == 0:
            raise ValueError("kernels must be odd and >= 3")
    mags = spec.magnitudes
    harm = scipy.ndimage.median_filter(mags, size=(1, harmonic_kernel), mode="reflect")
    perc = scipy.ndimage.median_filter(mags, size=(percussive_kernel, 1), mode="reflect")
    h2 = harm**2
    p2 = perc**2
    denom = h2 + p2
    zero = denom == 0
    denom[zero] = 1.0
    harmonic_mask = np.where(zero, 0.5, h2 / denom)
    percussive_mask = np.where(zero, 0.5, p2 / denom)
    return HpssMasks(harmonic_mask=harmonic_mask, percussive_mask=percussive_mask)


def _slice_indices(clip: AudioClip, interval: tuple[float, float]) -> tuple[int, int]:
    begin_sec, end_sec = interval
    if begin_sec < 0 or end_sec > clip.duration_sec + 1e-9 or begin_sec >= end_sec:
        raise IntervalOutOfRange(f"[{begin_sec}, {end_sec}) outside clip of {clip.duration_sec:.3f}s")
    i0 = int(round(begin_sec * clip.sample_rate))
    i1 = min(int(round(end_sec * clip.sample_rate)), len(clip.samples))
    if i1 <= i0:
        raise IntervalOutOfRange("interval shorter than one sample")
    return i0, i1


def percussive_signal(
    clip: AudioClip,
    interval: tuple[float, float],
    window_size: int = DEFAULT_WINDOW,
    hop_length: int = DEFAULT_HOP,
    harmonic_kernel: int = DEFAULT_KERNEL,
    percussive_kernel: int = DEFAULT_KERNEL,
) -> AudioClip:
    """Percussive component of the clip over [begin_sec, end_sec).

    STFT, soft percussive mask on the complex spectrogram, overlap-add
    resynthesis. Output has exactly the sliced length. Slices shorter than
    the window fall back to the largest power-of-two window that fits; below
    64 samples the slice passes through untouched (nothing left to separate).

    Raises:
        IntervalOutOfRange: interval not inside the clip.
    """
    i0, i1 = _slice_indices(clip, interval)
    segment = clip.samples[i0:i1]
    n = len(segment)
    if n < MIN_WINDOW:
        return AudioClip(samples=segment.copy(), sample_rate=clip.sample_rate)
    if n < window_size:
        window_size = 1 << (n.bit_length() - 1)
        hop_length = window_size // 4
    frames = _stft_complex(segment, window_size, hop_length)
    spec = Spectrogram(np.abs(frames), hop_length=hop_length, window_size=window_size)
    masks = hpss(spec, harmonic_kernel, percussive_kernel)
    out = _istft(frames * masks.percussive_mask, window_size, hop_length, n)
    return AudioClip(samples=np.clip(out, -1.0, 1.0), sample_rate=clip.sample_rate)


def compute_energy_curve(
    clip: AudioClip,
    interval: tuple[float, float],
    n_frames: int,
    hop_length: int = DEFAULT_HOP,
) -> EnergyCurve:
    """Cumulative percussive energy over the interval, one weight per frame.

    Energy per analysis frame is the mean absolute amplitude of the
    percussive signal within each hop window. The cumulative sum is
    normalized to end at 1 with a 0 prepended, then linearly resampled to
    n_frames points. A silent interval degrades to the uniform linear ramp
    so the 0 -> 1 contract always holds.
    """
    if n_frames < 2:
        raise ValueError("n_frames must be >= 2")
    perc = percussive_signal(clip, interval).samples
    n_windows = max(1, -(-len(perc) // hop_length))  # ceil
    energies = np.array(
        [np.mean(np.abs(perc[i * hop_length : (i + 1) * hop_length])) for i in range(n_windows)]
    )
    total = float(energies.sum())
    if total <= 0.0:
        return EnergyCurve(weights=np.linspace(0.0, 1.0, n_frames))
    curve = np.concatenate(([0.0], np.cumsum(energies) / total))
    positions = np.linspace(0.0, n_windows, n_frames)
    weights = np.interp(positions, np.arange(n_windows + 1), curve)
    weights = np.maximum.accumulate(np.clip(weights, 0.0, 1.0))
    weights[0] = 0.0
    weights[-1] = 1.0
    return EnergyCurve(weights=weights)


def waveform_peaks(clip: AudioClip, n_buckets: int) -> list[tuple[float, float]]:
    """Per-bucket (min, max) amplitude pairs for waveform display.

    Samples are split into n_buckets even spans; a bucket narrower than one
    sample reports the nearest sample for both extremes.
    """
    if n_buckets < 1:
        raise ValueError("n_buckets must be >= 1")
    samples = clip.samples
    n = len(samples)
    peaks = []
    for i in range(n_buckets):
        start = i * n // n_buckets
        end = (i + 1) * n // n_buckets
        if end <= start:
            value = float(samples[min(start, n - 1)])
            peaks.append((value, value))
        else:
            chunk = samples[start:end]
            peaks.append((float(chunk.min()), float(chunk.max())))
    return peaks
