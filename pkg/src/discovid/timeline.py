"""
Project model: audio reference plus an ordered set of non-overlapping
intervals, each holding start/end image specs and a draft/generated state.

Intervals are half-open [begin, end): adjacent intervals may share a
boundary. Editing an interval (bounds or endpoints) resets its state to
draft because any rendered frames are stale.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field
from typing import Optional

from .errors import (
    InvalidSpec,
    MalformedProject,
    OutOfRange,
    Overlap,
    SchemaVersionMismatch,
    UnknownInterval,
)

SCHEMA_VERSION = "1"
DEFAULT_FPS = 24
DEFAULT_FRAME_SIZE = (512, 512)

DRAFT = "draft"
GENERATED = "generated"


@dataclass(frozen=True)
class ImageSpec:
    """Identity of one generation: prompt phrases, seed, and dimensions."""

    prompt: str
    seed: Optional[int] = None
    width: int = DEFAULT_FRAME_SIZE[0]
    height: int = DEFAULT_FRAME_SIZE[1]

    def phrases(self) -> list[str]:
        return [p.strip() for p in self.prompt.split(",")]

    def validate(self) -> "ImageSpec":
        if not self.prompt.strip():
            raise InvalidSpec("prompt is empty")
        if any(not p for p in self.phrases()):
            raise InvalidSpec(f"prompt has an empty phrase: {self.prompt!r}")
        for name, value in (("width", self.width), ("height", self.height)):
            if value < 8 or value % 8 != 0:
                raise InvalidSpec(f"{name} must be a multiple of 8, >= 8 (got {value})")
        if self.seed is not None and self.seed < 0:
            raise InvalidSpec("seed must be nonnegative")
        return self


@dataclass
class Interval:
    id: str
    begin_sec: float
    end_sec: float
    start: Optional[ImageSpec] = None
    end: Optional[ImageSpec] = None
    state: str = DRAFT

    @property
    def duration_sec(self) -> float:
        return self.end_sec - self.begin_sec

    def has_concrete_seeds(self) -> bool:
        return (
            self.start is not None
            and self.end is not None
            and self.start.seed is not None
            and self.end.seed is not None
        )


@dataclass
class Project:
    """Audio reference, sorted non-overlapping intervals, render settings.

    duration_sec is runtime context from the decoded audio; it is not part
    of the project file. While unset, only local bound checks apply.
    """

    audio_path: str = ""
    fps: int = DEFAULT_FPS
    frame_size: tuple[int, int] = DEFAULT_FRAME_SIZE
    intervals: list[Interval] = field(default_factory=list)
    duration_sec: Optional[float] = None
    _next_id: int = 1

    def find(self, interval_id: str) -> Interval:
        for iv in self.intervals:
            if iv.id == interval_id:
                return iv
        raise UnknownInterval(interval_id)


def _check_bounds(project: Project, begin_sec: float, end_sec: float) -> None:
    if begin_sec < 0 or begin_sec >= end_sec:
        raise OutOfRange(f"bad bounds [{begin_sec}, {end_sec})")
    if project.duration_sec is not None and end_sec > project.duration_sec + 1e-9:
        raise OutOfRange(f"end {end_sec} past audio duration {project.duration_sec}")


def _check_overlap(project: Project, begin_sec: float, end_sec: float, ignore_id: str | None = None) -> None:
    for iv in project.intervals:
        if iv.id == ignore_id:
            continue
        if begin_sec < iv.end_sec and iv.begin_sec < end_sec:
            raise Overlap(f"[{begin_sec}, {end_sec}) intersects {iv.id} [{iv.begin_sec}, {iv.end_sec})")


def _insert_sorted(project: Project, interval: Interval) -> None:
    project.intervals.append(interval)
    project.intervals.sort(key=lambda iv: iv.begin_sec)


def add_interval(project: Project, begin_sec: float, end_sec: float) -> Interval:
    """Insert a new draft interval, keeping the set sorted and disjoint.

    Raises:
        OutOfRange: inverted bounds or outside the audio.
        Overlap: intersects an existing interval (touching is allowed).
    """
    _check_bounds(project, begin_sec, end_sec)
    _check_overlap(project, begin_sec, end_sec)
    interval = Interval(id=f"iv-{project._next_id}", begin_sec=begin_sec, end_sec=end_sec)
    project._next_id += 1
    _insert_sorted(project, interval)
    return interval


def edit_interval(project: Project, interval_id: str, new_begin: float, new_end: float) -> Interval:
    """Move an interval's bounds; its rendered frames become stale (draft)."""
    interval = project.find(interval_id)
    _check_bounds(project, new_begin, new_end)
    _check_overlap(project, new_begin, new_end, ignore_id=interval_id)
    interval.begin_sec = new_begin
    interval.end_sec = new_end
    interval.state = DRAFT
    project.intervals.sort(key=lambda iv: iv.begin_sec)
    return interval


def delete_interval(project: Project, interval_id: str) -> None:
    interval = project.find(interval_id)
    project.intervals.remove(interval)


def set_endpoint(project: Project, interval_id: str, which: str, spec: ImageSpec) -> Interval:
    """Attach a start or end image spec; resets state to draft."""
    if which not in ("start", "end"):
        raise InvalidSpec(f"endpoint must be 'start' or 'end', got {which!r}")
    interval = project.find(interval_id)
    spec.validate()
    if which == "start":
        interval.start = spec
    else:
        interval.end = spec
    interval.state = DRAFT
    return interval


def interval_frame_count(interval: Interval, fps: int) -> int:
    """Frames for the interval: round(duration * fps), never below 2."""
    return max(2, int(math.floor(interval.duration_sec * fps + 0.5)))


# --------------------------------------------------------------------------
# Project file round-trip
# --------------------------------------------------------------------------

def _spec_to_dict(spec: Optional[ImageSpec]) -> Optional[dict]:
    if spec is None:
        return None
    out = {"prompt": spec.prompt, "width": spec.width, "height": spec.height}
    if spec.seed is not None:
        out["seed"] = spec.seed
    return out


def _spec_from_dict(raw, where: str) -> Optional[ImageSpec]:
    if raw is None:
        return None
    if not isinstance(raw, dict):
        raise MalformedProject(f"{where}: spec must be an object")
    allowed = {"prompt", "seed", "width", "height"}
    unknown = set(raw) - allowed
    if unknown:
        raise MalformedProject(f"{where}: unknown spec fields {sorted(unknown)}")
    if "prompt" not in raw:
        raise MalformedProject(f"{where}: spec missing prompt")
    spec = ImageSpec(
        prompt=raw["prompt"],
        seed=raw.get("seed"),
        width=raw.get("width", DEFAULT_FRAME_SIZE[0]),
        height=raw.get("height", DEFAULT_FRAME_SIZE[1]),
    )
    try:
        return spec.validate()
    except InvalidSpec as exc:
        raise MalformedProject(f"{where}: {exc}") from exc


def save_project(project: Project) -> bytes:
    """Serialize to the versioned JSON project document."""
    doc = {
        "version": SCHEMA_VERSION,
        "audio_path": project.audio_path,
        "fps": project.fps,
        "frame_size": {"w": project.frame_size[0], "h": project.frame_size[1]},
        "intervals": [
            {
                "id": iv.id,
                "begin_sec": iv.begin_sec,
                "end_sec": iv.end_sec,
                "start": _spec_to_dict(iv.start),
                "end": _spec_to_dict(iv.end),
            }
            for iv in project.intervals
        ],
    }
    return json.dumps(doc, indent=2).encode("utf-8")


def load_project(data: bytes) -> Project:
    """Parse and validate a project document.

    Raises:
        MalformedProject: bad JSON, unknown fields, or invariant violations.
        SchemaVersionMismatch: version other than "1".
    """
    try:
        doc = json.loads(data.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise MalformedProject(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise MalformedProject("top level must be an object")
    if "version" not in doc:
        raise MalformedProject("missing version field")
    if str(doc["version"]) != SCHEMA_VERSION:
        raise SchemaVersionMismatch(f"version {doc['version']!r}, expected {SCHEMA_VERSION!r}")
    allowed = {"version", "audio_path", "fps", "frame_size", "intervals"}
    unknown = set(doc) - allowed
    if unknown:
        raise MalformedProject(f"unknown fields {sorted(unknown)}")

    fps = doc.get("fps", DEFAULT_FPS)
    if not isinstance(fps, int) or fps < 1:
        raise MalformedProject(f"fps must be an integer >= 1, got {fps!r}")

    raw_size = doc.get("frame_size", {"w": DEFAULT_FRAME_SIZE[0], "h": DEFAULT_FRAME_SIZE[1]})
    if not isinstance(raw_size, dict) or set(raw_size) != {"w", "h"}:
        raise MalformedProject("frame_size must be {w, h}")
    frame_size = (raw_size["w"], raw_size["h"])

    project = Project(audio_path=doc.get("audio_path", ""), fps=fps, frame_size=frame_size)
    max_id = 0
    for idx, raw in enumerate(doc.get("intervals", [])):
        where = f"intervals[{idx}]"
        if not isinstance(raw, dict):
            raise MalformedProject(f"{where}: must be an object")
        unknown = set(raw) - {"id", "begin_sec", "end_sec", "start", "end"}
        if unknown:
            raise MalformedProject(f"{where}: unknown fields {sorted(unknown)}")
        for key in ("id", "begin_sec", "end_sec"):
            if key not in raw:
                raise MalformedProject(f"{where}: missing {key}")
        begin_sec, end_sec = raw["begin_sec"], raw["end_sec"]
        try:
            _check_bounds(project, begin_sec, end_sec)
            _check_overlap(project, begin_sec, end_sec)
        except (OutOfRange, Overlap) as exc:
            raise MalformedProject(f"{where}: {exc}") from exc
        interval = Interval(
            id=str(raw["id"]),
            begin_sec=begin_sec,
            end_sec=end_sec,
            start=_spec_from_dict(raw.get("start"), where),
            end=_spec_from_dict(raw.get("end"), where),
        )
        if any(iv.id == interval.id for iv in project.intervals):
            raise MalformedProject(f"{where}: duplicate id {interval.id!r}")
        _insert_sorted(project, interval)
        m = re.fullmatch(r"iv-(\d+)", interval.id)
        if m:
            max_id = max(max_id, int(m.group(1)))
    project._next_id = max_id + 1
    return project
