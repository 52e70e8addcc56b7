"""Shared fixtures: independent WAV writer, synthetic signals, and the
reference implementations the analysis pipeline is checked against."""

from __future__ import annotations

import struct

import numpy as np
import pytest


# --------------------------------------------------------------------------
# Independent WAV writer (oracle: built from the RIFF layout by hand,
# separate from the package's decoder/encoder)
# --------------------------------------------------------------------------

def make_wav(samples, sample_rate, bits=16, channels=1, fmt="pcm"):
    """Build WAV bytes from float samples in [-1, 1].

    `samples` is 1-D for mono or (n, channels) for multichannel.
    """
    arr = np.asarray(samples, dtype=np.float64)
    if arr.ndim == 2:
        channels = arr.shape[1]
    elif channels > 1:
        arr = np.tile(arr[:, None], (1, channels))
    flat = arr.reshape(-1)

    if fmt == "float":
        body = flat.astype("<f4").tobytes()
        fmt_tag, bits = 3, 32
    elif bits == 16:
        body = np.clip(np.round(flat * 32768.0), -32768, 32767).astype("<i2").tobytes()
        fmt_tag = 1
    elif bits == 8:
        body = np.clip(np.round(flat * 128.0) + 128, 0, 255).astype(np.uint8).tobytes()
        fmt_tag = 1
    elif bits == 24:
        vals = np.clip(np.round(flat * float(1 << 23)), -(1 << 23), (1 << 23) - 1).astype(np.int64)
        vals = np.where(vals < 0, vals + (1 << 24), vals)
        raw = np.zeros((len(vals), 3), dtype=np.uint8)
        raw[:, 0] = vals & 0xFF
        raw[:, 1] = (vals >> 8) & 0xFF
        raw[:, 2] = (vals >> 16) & 0xFF
        body = raw.tobytes()
        fmt_tag = 1
    else:
        raise ValueError(bits)

    block_align = channels * bits // 8
    fmt_chunk = struct.pack(
        "<HHIIHH", fmt_tag, channels, sample_rate,
        sample_rate * block_align, block_align, bits,
    )
    chunks = b"fmt " + struct.pack("<I", len(fmt_chunk)) + fmt_chunk
    chunks += b"data" + struct.pack("<I", len(body)) + body
    return b"RIFF" + struct.pack("<I", 4 + len(chunks)) + b"WAVE" + chunks


# --------------------------------------------------------------------------
# Synthetic signals
# --------------------------------------------------------------------------

def sine(freq, duration_sec, sample_rate, amp=0.5):
    t = np.arange(int(round(duration_sec * sample_rate))) / sample_rate
    return amp * np.sin(2 * np.pi * freq * t)


def clicks(times_sec, duration_sec, sample_rate, amp=0.9, width=1):
    out = np.zeros(int(round(duration_sec * sample_rate)))
    for t in times_sec:
        i = int(round(t * sample_rate))
        out[i : i + width] = amp
    return out


# --------------------------------------------------------------------------
# Reference implementations (oracles)
# --------------------------------------------------------------------------

def naive_hpss_masks(magnitudes, harmonic_kernel=31, percussive_kernel=31):
    """Brute-force median-filter separation: per-cell np.median over
    symmetric-padded windows, soft masks with exponent 2."""
    mags = np.asarray(magnitudes, dtype=np.float64)
    n_bins, n_frames = mags.shape

    ph = harmonic_kernel // 2
    padded = np.pad(mags, ((0, 0), (ph, ph)), mode="symmetric")
    harm = np.empty_like(mags)
    for f in range(n_bins):
        for t in range(n_frames):
            harm[f, t] = np.median(padded[f, t : t + harmonic_kernel])

    pp = percussive_kernel // 2
    padded = np.pad(mags, ((pp, pp), (0, 0)), mode="symmetric")
    perc = np.empty_like(mags)
    for f in range(n_bins):
        for t in range(n_frames):
            perc[f, t] = np.median(padded[f : f + percussive_kernel, t])

    h2, p2 = harm**2, perc**2
    denom = h2 + p2
    zero = denom == 0
    denom[zero] = 1.0
    return (
        np.where(zero, 0.5, h2 / denom),
        np.where(zero, 0.5, p2 / denom),
    )


def percussive_energy_fraction(magnitudes, harmonic_mask, percussive_mask):
    """Share of masked spectrogram energy assigned to the percussive side."""
    ep = float(np.sum((percussive_mask * magnitudes) ** 2))
    eh = float(np.sum((harmonic_mask * magnitudes) ** 2))
    return ep / (ep + eh)


def naive_energy_curve(signal, n_frames, hop=512):
    """Plain-loop cumulative mean-absolute-amplitude curve over a signal that
    is already purely percussive (no separation step)."""
    energies = []
    for i in range(0, len(signal), hop):
        energies.append(float(np.mean(np.abs(signal[i : i + hop]))))
    total = sum(energies)
    if total == 0:
        return np.linspace(0.0, 1.0, n_frames)
    curve = [0.0]
    running = 0.0
    for e in energies:
        running += e
        curve.append(running / total)
    positions = np.linspace(0.0, len(energies), n_frames)
    return np.interp(positions, np.arange(len(curve)), np.array(curve))


def dft_magnitudes(windowed):
    """Direct DFT magnitude of one windowed frame (explicit exponential sum)."""
    n = len(windowed)
    bins = n // 2 + 1
    k = np.arange(bins)[:, None]
    t = np.arange(n)[None, :]
    basis = np.exp(-2j * np.pi * k * t / n)
    return np.abs(basis @ windowed)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


# --------------------------------------------------------------------------
# Fake generation server speaking the remote backend wire protocol
# --------------------------------------------------------------------------

class FakeGenServer:
    """Local HTTP server implementing /v1/generate and /v1/interpolate.

    Backed by the mock renderer so remote-path results can be compared
    bit for bit against local mock output. Set `fail_after` to make the
    server start erroring partway through a render.
    """

    def __init__(self):
        import base64
        import json
        from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

        from discovid.genbackend import MockBackend
        from discovid.timeline import ImageSpec

        backend = MockBackend()
        server = self

        class Handler(BaseHTTPRequestHandler):
            def log_message(self, *args):
                pass

            def do_POST(self):
                length = int(self.headers.get("Content-Length", 0))
                req = json.loads(self.rfile.read(length))
                server.requests.append((self.path, req))
                if server.fail_after is not None and len(server.requests) > server.fail_after:
                    self._send(500, {"error": {"code": "boom", "message": "induced failure"}})
                    return
                try:
                    if self.path == "/v1/generate":
                        frame = backend.generate(ImageSpec(
                            prompt=req["prompt"], seed=req["seed"],
                            width=req["width"], height=req["height"]))
                    elif self.path == "/v1/interpolate":
                        frame = backend.interpolate(
                            ImageSpec(prompt=req["start"]["prompt"], seed=req["start"]["seed"],
                                      width=req["width"], height=req["height"]),
                            ImageSpec(prompt=req["end"]["prompt"], seed=req["end"]["seed"],
                                      width=req["width"], height=req["height"]),
                            req["t"])
                    else:
                        self._send(404, {"error": {"code": "not_found", "message": self.path}})
                        return
                except Exception as exc:  # surface as protocol error
                    self._send(400, {"error": {"code": "bad_request", "message": str(exc)}})
                    return
                self._send(200, {"png_base64": base64.b64encode(frame.to_png()).decode()})

            def _send(self, status, payload):
                body = json.dumps(payload).encode()
                self.send_response(status)
                self.send_header("Content-Type", "application/json")
                self.send_header("Content-Length", str(len(body)))
                self.end_headers()
                self.wfile.write(body)

        self._httpd = ThreadingHTTPServer(("127.0.0.1", 0), Handler)
        self.requests = []
        self.fail_after = None
        self.url = f"http://127.0.0.1:{self._httpd.server_port}"

    def start(self):
        import threading

        thread = threading.Thread(target=self._httpd.serve_forever, daemon=True)
        thread.start()
        return self

    def stop(self):
        self._httpd.shutdown()
        self._httpd.server_close()


@pytest.fixture
def fake_gen_server():
    server = FakeGenServer().start()
    yield server
    server.stop()
