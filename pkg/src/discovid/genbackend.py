"""
Image generation backends behind one contract: deterministic generation for
an image spec, and the frame at blend weight t between two specs.

The mock backend is a procedural renderer used offline and in tests. Its
recipe is pinned down exactly (see mock_image) so frames are reproducible
bit for bit across runs and platforms. The remote backend speaks a small
HTTP protocol to a generation server, which may blend in latent space or
however it pleases; only the t=0 / t=1 boundary identity is required of it.
"""

from __future__ import annotations

import base64
import hashlib
import io
import math
import threading
from dataclasses import dataclass
from typing import Optional

import numpy as np
import requests
from PIL import Image

from .errors import BackendUnavailable, GenerationFailed, MissingSeed, SizeMismatch
from .timeline import ImageSpec

NOISE_AMPLITUDE = 10
DEFAULT_TIMEOUT_SEC = 120.0
DEFAULT_MAX_INFLIGHT = 2


@dataclass(frozen=True)
class ImageFrame:
    """Row-major RGB8 raster."""

    width: int
    height: int
    pixels: bytes

    def __post_init__(self):
        if len(self.pixels) != self.width * self.height * 3:
            raise ValueError("pixel buffer size does not match dimensions")

    def to_array(self) -> np.ndarray:
        return np.frombuffer(self.pixels, dtype=np.uint8).reshape(self.height, self.width, 3)

    @classmethod
    def from_array(cls, arr: np.ndarray) -> "ImageFrame":
        h, w, _ = arr.shape
        return cls(width=w, height=h, pixels=arr.astype(np.uint8).tobytes())

    def to_png(self) -> bytes:
        buf = io.BytesIO()
        Image.frombytes("RGB", (self.width, self.height), self.pixels).save(buf, format="PNG")
        return buf.getvalue()

    @classmethod
    def from_png(cls, data: bytes) -> "ImageFrame":
        img = Image.open(io.BytesIO(data)).convert("RGB")
        return cls(width=img.width, height=img.height, pixels=img.tobytes())

    def digest(self) -> str:
        """Content address: sha256 over dimensions and the raw pixel buffer.

        Hashing pixels rather than encoded PNG bytes keeps the digest stable
        across PNG encoder versions.
        """
        h = hashlib.sha256(f"rgb8:{self.width}x{self.height}:".encode())
        h.update(self.pixels)
        return h.hexdigest()


@dataclass(frozen=True)
class BackendDescriptor:
    kind: str  # "mock" | "remote"
    endpoint: Optional[str] = None
    timeout_sec: float = DEFAULT_TIMEOUT_SEC

    def __post_init__(self):
        if self.kind not in ("mock", "remote"):
            raise ValueError(f"unknown backend kind {self.kind!r}")
        if self.kind == "remote" and not self.endpoint:
            raise ValueError("remote backend requires an endpoint")


def _require_seed(spec: ImageSpec) -> int:
    if spec.seed is None:
        raise MissingSeed(f"spec {spec.prompt!r} has no seed")
    return spec.seed


def _round_half_up(values: np.ndarray) -> np.ndarray:
    return np.floor(values + 0.5)


def mock_image(spec: ImageSpec) -> ImageFrame:
    """Deterministic procedural image for a (prompt, seed, size).

    Recipe, pinned so independent implementations agree:
      1. state = first 8 bytes (big-endian) of sha256("<prompt>\\n<seed>")
      2. rng   = numpy Philox keyed with state; draws in order:
                 6 ints in [0,256) (two RGB colors), 1 float in [0,1)
                 (gradient angle as a fraction of 2*pi), then a (height,
                 width) grid of ints in [-10,10] (brightness jitter)
      3. gradient coordinate g(x,y) = clamp(0.5 + u*cos(a) + v*sin(a), 0, 1)
         with u = x/(width-1) - 0.5 and v = y/(height-1) - 0.5
      4. pixel = clamp(round((1-g)*color_a + g*color_b + jitter), 0, 255),
         rounding half up, jitter shared by all three channels
    """
    seed = _require_seed(spec)
    state = int.from_bytes(
        hashlib.sha256(f"{spec.prompt}\n{seed}".encode("utf-8")).digest()[:8], "big"
    )
    rng = np.random.Generator(np.random.Philox(key=state))
    colors = rng.integers(0, 256, size=6).astype(np.float64)
    angle = rng.random() * 2.0 * math.pi
    jitter = rng.integers(-NOISE_AMPLITUDE, NOISE_AMPLITUDE + 1, size=(spec.height, spec.width))

    u = np.linspace(-0.5, 0.5, spec.width) if spec.width > 1 else np.zeros(1)
    v = np.linspace(-0.5, 0.5, spec.height) if spec.height > 1 else np.zeros(1)
    g = np.clip(0.5 + u[None, :] * math.cos(angle) + v[:, None] * math.sin(angle), 0.0, 1.0)

    base = (1.0 - g)[:, :, None] * colors[:3] + g[:, :, None] * colors[3:]
    out = np.clip(_round_half_up(base + jitter[:, :, None]), 0, 255).astype(np.uint8)
    return ImageFrame.from_array(out)


class MockBackend:
    """Offline backend: procedural generation, per-pixel linear crossfade."""

    kind = "mock"

    def generate(self, spec: ImageSpec) -> ImageFrame:
        return mock_image(spec)

    def interpolate(self, start: ImageSpec, end: ImageSpec, t: float) -> ImageFrame:
        _require_seed(start)
        _require_seed(end)
        if not 0.0 <= t <= 1.0:
            raise ValueError(f"t must be in [0, 1], got {t}")
        if (start.width, start.height) != (end.width, end.height):
            raise SizeMismatch("endpoint specs must share dimensions")
        if t == 0.0:
            return self.generate(start)
        if t == 1.0:
            return self.generate(end)
        a = self.generate(start).to_array().astype(np.float64)
        b = self.generate(end).to_array().astype(np.float64)
        mixed = np.clip(_round_half_up((1.0 - t) * a + t * b), 0, 255).astype(np.uint8)
        return ImageFrame.from_array(mixed)


class RemoteBackend:
    """Client for an HTTP generation server.

    POST {endpoint}/v1/generate     {prompt, seed, width, height} -> {png_base64}
    POST {endpoint}/v1/interpolate  {start, end, t, width, height} -> {png_base64}

    Errors come back as {"error": {"code", "message"}} with a non-2xx status.
    In-flight requests are capped (GPU servers do not enjoy being swarmed).
    """

    kind = "remote"

    def __init__(self, endpoint: str, timeout_sec: float = DEFAULT_TIMEOUT_SEC,
                 max_inflight: int = DEFAULT_MAX_INFLIGHT):
        self.endpoint = endpoint.rstrip("/")
        self.timeout_sec = timeout_sec
        self._slots = threading.BoundedSemaphore(max_inflight)

    def _post(self, path: str, payload: dict) -> ImageFrame:
        with self._slots:
            try:
                resp = requests.post(
                    f"{self.endpoint}{path}", json=payload, timeout=self.timeout_sec
                )
            except requests.RequestException as exc:
                raise BackendUnavailable(f"backend unreachable: {exc}") from exc
        if resp.status_code != 200:
            try:
                err = resp.json()["error"]
                detail = f"{err.get('code')}: {err.get('message')}"
            except Exception:
                detail = f"HTTP {resp.status_code}"
            raise GenerationFailed(detail)
        try:
            png = base64.b64decode(resp.json()["png_base64"])
            return ImageFrame.from_png(png)
        except (KeyError, ValueError) as exc:
            raise GenerationFailed(f"bad response payload: {exc}") from exc

    def generate(self, spec: ImageSpec) -> ImageFrame:
        seed = _require_seed(spec)
        return self._post("/v1/generate", {
            "prompt": spec.prompt, "seed": seed,
            "width": spec.width, "height": spec.height,
        })

    def interpolate(self, start: ImageSpec, end: ImageSpec, t: float) -> ImageFrame:
        if not 0.0 <= t <= 1.0:
            raise ValueError(f"t must be in [0, 1], got {t}")
        return self._post("/v1/interpolate", {
            "start": {"prompt": start.prompt, "seed": _require_seed(start)},
            "end": {"prompt": end.prompt, "seed": _require_seed(end)},
            "t": t,
            "width": start.width, "height": start.height,
        })


def make_backend(descriptor: BackendDescriptor):
    if descriptor.kind == "mock":
        return MockBackend()
    return RemoteBackend(endpoint=descriptor.endpoint, timeout_sec=descriptor.timeout_sec)
