"""
Interval rendering and stitching: pace each interval's frames by its energy
curve, concatenate intervals into the final frame sequence, export PNGs plus
a manifest, and hand the sequence to an external encoder for muxing.

Gaps between intervals contribute no frames (a hard cut). Interval renders
are all-or-nothing: a backend failure leaves the interval draft with no
partial result.
"""

from __future__ import annotations

import shlex
import shutil
import subprocess
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path

from .audio import AudioClip, EnergyCurve, compute_energy_curve, encode_wav
from .errors import EncoderFailed, EncoderMissing, IoFailure, MissingInterval, MissingSeed, SizeMismatch
from .genbackend import ImageFrame
from .timeline import GENERATED, Interval, Project, interval_frame_count

DEFAULT_ENCODER_TEMPLATE = (
    "ffmpeg -y -framerate {fps} -i {frames_dir}/frame_%06d.png "
    "-i {audio} -c:v libx264 -pix_fmt yuv420p -shortest {out}"
)
MANIFEST_NAME = "manifest.json"


@dataclass(frozen=True)
class FrameSchedule:
    interval_id: str
    weights: EnergyCurve


@dataclass(frozen=True)
class RenderedInterval:
    interval_id: str
    frames: list[ImageFrame]
    fps: int


@dataclass(frozen=True)
class VideoOutput:
    frames: list[ImageFrame]
    fps: int
    interval_ranges: list[tuple[str, int, int]]  # (id, first_frame, last_frame)
    audio_span: tuple[float, float]


def schedule(project: Project, interval: Interval, clip: AudioClip) -> FrameSchedule:
    """Energy curve for the interval, resampled to its frame count."""
    n_frames = interval_frame_count(interval, project.fps)
    curve = compute_energy_curve(clip, (interval.begin_sec, interval.end_sec), n_frames)
    return FrameSchedule(interval_id=interval.id, weights=curve)


def render_interval(
    project: Project,
    interval: Interval,
    frame_schedule: FrameSchedule,
    backend,
    workers: int = 1,
) -> RenderedInterval:
    """Render every frame of the interval at its scheduled blend weight.

    Specs are normalized to the project frame size. Frames are independent,
    so workers > 1 renders them concurrently (useful against a remote
    backend); results always assemble in index order.

    Raises:
        MissingSeed: an endpoint spec has no concrete seed.
        Backend errors propagate; interval state is left untouched (draft).
    """
    if not interval.has_concrete_seeds():
        raise MissingSeed(f"interval {interval.id} needs start/end specs with seeds")
    width, height = project.frame_size
    start = replace(interval.start, width=width, height=height)
    end = replace(interval.end, width=width, height=height)
    weights = frame_schedule.weights.weights

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            frames = list(pool.map(lambda t: backend.interpolate(start, end, float(t)), weights))
    else:
        frames = [backend.interpolate(start, end, float(t)) for t in weights]

    interval.state = GENERATED
    return RenderedInterval(interval_id=interval.id, frames=frames, fps=project.fps)


def stitch(project: Project, rendered: list[RenderedInterval]) -> VideoOutput:
    """Concatenate rendered intervals in timeline order.

    Raises:
        MissingInterval: a project interval is draft or has no rendered result.
        SizeMismatch: frame dimensions differ between intervals.
    """
    if not project.intervals:
        raise MissingInterval("project has no intervals")
    by_id = {r.interval_id: r for r in rendered}
    frames: list[ImageFrame] = []
    ranges: list[tuple[str, int, int]] = []
    size: tuple[int, int] | None = None
    for interval in project.intervals:
        result = by_id.get(interval.id)
        if result is None or interval.state != GENERATED:
            raise MissingInterval(f"interval {interval.id} is not rendered")
        for frame in result.frames:
            if size is None:
                size = (frame.width, frame.height)
            elif (frame.width, frame.height) != size:
                raise SizeMismatch(f"{interval.id}: {frame.width}x{frame.height} != {size[0]}x{size[1]}")
        first = len(frames)
        frames.extend(result.frames)
        ranges.append((interval.id, first, len(frames) - 1))
    return VideoOutput(
        frames=frames,
        fps=project.fps,
        interval_ranges=ranges,
        audio_span=(project.intervals[0].begin_sec, project.intervals[-1].end_sec),
    )


def export_frames(video: VideoOutput, out_dir: str | Path) -> dict:
    """Write frame_000000.png... plus a manifest; returns the manifest.

    Frame digests cover the raw pixels, so re-exporting an identical render
    reproduces them exactly.
    """
    import json

    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
        entries = []
        for i, frame in enumerate(video.frames):
            name = f"frame_{i:06d}.png"
            (out / name).write_bytes(frame.to_png())
            entries.append({"file": name, "digest": frame.digest()})
        manifest = {
            "version": "1",
            "fps": video.fps,
            "frame_count": len(video.frames),
            "audio_span": {"begin_sec": video.audio_span[0], "end_sec": video.audio_span[1]},
            "intervals": [
                {"id": iv_id, "first_frame": first, "last_frame": last}
                for iv_id, first, last in video.interval_ranges
            ],
            "frames": entries,
        }
        (out / MANIFEST_NAME).write_text(json.dumps(manifest, indent=2), encoding="utf-8")
    except OSError as exc:
        raise IoFailure(f"cannot write frames to {out}: {exc}") from exc
    return manifest


def encode_video(
    frames_dir: str | Path,
    clip: AudioClip,
    out_path: str | Path,
    encoder_template: str = DEFAULT_ENCODER_TEMPLATE,
) -> Path:
    """Mux the exported PNG sequence with the covered audio span.

    The engine does no codec work itself: the template names an external
    binary and is expanded with {frames_dir}, {fps}, {audio}, {out}.

    Raises:
        EncoderMissing: template's binary is not on PATH.
        EncoderFailed: encoder exited nonzero (stderr included) or no frames.
    """
    import json

    frames = Path(frames_dir)
    manifest_path = frames / MANIFEST_NAME
    if not manifest_path.exists():
        raise IoFailure(f"no {MANIFEST_NAME} in {frames}")
    manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
    if manifest.get("frame_count", 0) == 0:
        raise EncoderFailed("nothing to encode: zero frames")

    span = manifest["audio_span"]
    i0 = int(round(span["begin_sec"] * clip.sample_rate))
    i1 = int(round(span["end_sec"] * clip.sample_rate))
    audio_path = frames / "audio.wav"
    audio_path.write_bytes(encode_wav(AudioClip(clip.samples[i0:i1], clip.sample_rate)))

    subs = {
        "frames_dir": str(frames),
        "fps": str(manifest["fps"]),
        "audio": str(audio_path),
        "out": str(out_path),
    }
    argv = [token.format(**subs) for token in shlex.split(encoder_template)]
    if shutil.which(argv[0]) is None:
        raise EncoderMissing(
            f"encoder {argv[0]!r} not found on PATH; install it or pass an "
            f"encoder template for a binary you have"
        )
    proc = subprocess.run(argv, capture_output=True, text=True)
    if proc.returncode != 0:
        tail = proc.stderr.strip().splitlines()[-8:]
        raise EncoderFailed(f"{argv[0]} exited {proc.returncode}:\n" + "\n".join(tail))
    return Path(out_path)
