"""
HTTP facade over the engine for the browser UI: audio upload, waveform
peaks, interval CRUD, brainstorming, preview/variation generation, interval
render jobs, stitching, and artifact retrieval.

The service holds one session (one project at a time). Handlers are thin
mappers onto engine operations; anything slow (image generation, stitching)
runs as an async job polled via GET /jobs/{id}. Session mutation is
serialized through a single lock; renders are snapshotted at enqueue time,
and a result whose interval changed underneath it is quietly orphaned.
"""

from __future__ import annotations

import copy
import hashlib
import os
import random
import threading
import uuid
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, HTTPException, Request, Response
from fastapi.responses import FileResponse, JSONResponse
from pydantic import BaseModel

from . import analysis, prompting, renderer, timeline
from .audio import AudioClip, decode_wav, waveform_peaks
from .errors import (
    BackendUnavailable,
    DiscovidError,
    GenerationFailed,
    InvalidSpec,
    MalformedProject,
    MalformedWav,
    NoAudio,
    OutOfRange,
    Overlap,
    SchemaVersionMismatch,
    UnknownInterval,
    UnparseableResponse,
    UnsupportedEncoding,
)
from .genbackend import BackendDescriptor, make_backend
from .prompting import Prompt, SeedSource, resolve_seeds, shuffle_variations
from .timeline import ImageSpec, Project

QUEUED, RUNNING, DONE, FAILED = "queued", "running", "done", "failed"

_STATUS_CODES = {
    MalformedWav: 400,
    UnsupportedEncoding: 400,
    OutOfRange: 400,
    InvalidSpec: 400,
    MalformedProject: 400,
    SchemaVersionMismatch: 400,
    UnknownInterval: 404,
    Overlap: 409,
    NoAudio: 409,
    BackendUnavailable: 502,
    GenerationFailed: 502,
    UnparseableResponse: 502,
}


@dataclass
class ServiceConfig:
    backend_descriptor: BackendDescriptor = field(default_factory=lambda: BackendDescriptor(kind="mock"))
    seed: Optional[int] = None
    fps: int = timeline.DEFAULT_FPS
    frame_size: tuple[int, int] = timeline.DEFAULT_FRAME_SIZE
    encoder_template: Optional[str] = None
    style_lexicon_path: Optional[str] = None
    lexicons_path: Optional[str] = None
    output_dir: Optional[str] = None
    ui_dir: Optional[str] = None
    workers: int = 2

    @classmethod
    def from_env(cls) -> "ServiceConfig":
        kind = os.environ.get("DISCO_BACKEND", "mock")
        descriptor = BackendDescriptor(
            kind=kind,
            endpoint=os.environ.get("DISCO_BACKEND_URL"),
            timeout_sec=float(os.environ.get("DISCO_BACKEND_TIMEOUT", "120")),
        )
        seed = os.environ.get("DISCO_SEED")
        return cls(
            backend_descriptor=descriptor,
            seed=int(seed) if seed else None,
            encoder_template=os.environ.get("DISCO_ENCODER_TEMPLATE"),
            style_lexicon_path=os.environ.get("DISCO_STYLE_LIST"),
            lexicons_path=os.environ.get("DISCO_LEXICONS"),
            output_dir=os.environ.get("DISCO_OUTPUT_DIR"),
            ui_dir=os.environ.get("DISCO_UI_DIR"),
        )


@dataclass
class Job:
    id: str
    kind: str
    status: str = QUEUED
    result: Optional[dict] = None
    error: Optional[str] = None

    def as_dict(self) -> dict:
        out = {"id": self.id, "kind": self.kind, "status": self.status}
        if self.result is not None:
            out["result"] = self.result
        if self.error is not None:
            out["error"] = self.error
        return out


class Session:
    """All mutable state behind the API, guarded by one lock."""

    def __init__(self, config: ServiceConfig):
        self.config = config
        self.lock = threading.RLock()
        self.project: Optional[Project] = None
        self.clip: Optional[AudioClip] = None
        self.rendered: dict[str, renderer.RenderedInterval] = {}
        self.artifacts: dict[str, bytes] = {}
        self.jobs: dict[str, Job] = {}
        self.backend = make_backend(config.backend_descriptor)
        self.llm = prompting.make_llm_client()
        self.seed_source = SeedSource(config.seed)
        self.style_lexicon = (
            prompting.load_style_lexicon(config.style_lexicon_path)
            if config.style_lexicon_path else prompting.default_style_lexicon()
        )
        self.lexicons = (
            analysis.load_lexicons(config.lexicons_path)
            if config.lexicons_path else analysis.default_lexicons()
        )
        self.output_dir = Path(config.output_dir) if config.output_dir else None
        self.video_path: Optional[Path] = None
        self.executor = ThreadPoolExecutor(max_workers=config.workers)

    # -- helpers ----------------------------------------------------------

    def require_audio(self) -> tuple[Project, AudioClip]:
        if self.project is None or self.clip is None:
            raise NoAudio("upload audio first")
        return self.project, self.clip

    def store_artifact(self, frame) -> str:
        digest = frame.digest()
        if digest not in self.artifacts:
            self.artifacts[digest] = frame.to_png()
        return digest

    def submit(self, kind: str, work) -> Job:
        job = Job(id=uuid.uuid4().hex[:12], kind=kind)
        with self.lock:
            self.jobs[job.id] = job

        def run():
            with self.lock:
                job.status = RUNNING
            try:
                result = work()
            except Exception as exc:
                with self.lock:
                    job.status = FAILED
                    job.error = f"{type(exc).__name__}: {exc}"
                return
            with self.lock:
                job.status = DONE
                job.result = result

        self.executor.submit(run)
        return job

    def ensure_output_dir(self) -> Path:
        if self.output_dir is None:
            import tempfile
            self.output_dir = Path(tempfile.mkdtemp(prefix="discovid-"))
        self.output_dir.mkdir(parents=True, exist_ok=True)
        return self.output_dir


def _spec_from_body(body, project: Project) -> ImageSpec:
    return ImageSpec(
        prompt=body.prompt,
        seed=body.seed,
        width=body.width or project.frame_size[0],
        height=body.height or project.frame_size[1],
    ).validate()


def _interval_dict(interval: timeline.Interval, fps: int) -> dict:
    def spec_dict(spec):
        if spec is None:
            return None
        return {"prompt": spec.prompt, "seed": spec.seed,
                "width": spec.width, "height": spec.height}

    return {
        "id": interval.id,
        "begin_sec": interval.begin_sec,
        "end_sec": interval.end_sec,
        "state": interval.state,
        "start": spec_dict(interval.start),
        "end": spec_dict(interval.end),
        "frame_count": timeline.interval_frame_count(interval, fps),
    }


def _fingerprint(interval: timeline.Interval) -> tuple:
    return (interval.begin_sec, interval.end_sec, interval.start, interval.end)


# --------------------------------------------------------------------------
# request bodies
# --------------------------------------------------------------------------

class IntervalBody(BaseModel):
    begin_sec: float
    end_sec: float


class SpecBody(BaseModel):
    prompt: str
    seed: Optional[int] = None
    width: Optional[int] = None
    height: Optional[int] = None


class EndpointBody(BaseModel):
    which: str
    spec: SpecBody


class PreviewBody(BaseModel):
    prompt: str
    seed: Optional[int] = None
    width: Optional[int] = None
    height: Optional[int] = None


class VariationsBody(BaseModel):
    prompt: str
    seed: int


class BrainstormBody(BaseModel):
    description: str


def create_app(config: Optional[ServiceConfig] = None) -> FastAPI:
    config = config or ServiceConfig()
    app = FastAPI(title="discovid", version="0.1.0")
    session = Session(config)
    app.state.session = session

    @app.exception_handler(DiscovidError)
    async def engine_error(request: Request, exc: DiscovidError):
        status = _STATUS_CODES.get(type(exc), 500)
        return JSONResponse(status_code=status,
                            content={"error": {"code": type(exc).__name__, "message": str(exc)}})

    @app.exception_handler(ValueError)
    async def value_error(request: Request, exc: ValueError):
        return JSONResponse(status_code=400,
                            content={"error": {"code": "ValueError", "message": str(exc)}})

    # -- audio ------------------------------------------------------------

    @app.post("/audio")
    async def upload_audio(request: Request):
        data = await request.body()
        clip = decode_wav(data)
        with session.lock:
            session.clip = clip
            session.project = Project(
                audio_path="session.wav",
                fps=config.fps,
                frame_size=config.frame_size,
                duration_sec=clip.duration_sec,
            )
            session.rendered.clear()
            session.video_path = None
        return {"duration_sec": clip.duration_sec, "sample_rate": clip.sample_rate}

    @app.get("/peaks")
    def get_peaks(buckets: int = 1000):
        with session.lock:
            _, clip = session.require_audio()
        return {"peaks": waveform_peaks(clip, buckets)}

    # -- intervals --------------------------------------------------------

    @app.get("/intervals")
    def list_intervals():
        with session.lock:
            project, _ = session.require_audio()
            return {"intervals": [_interval_dict(iv, project.fps) for iv in project.intervals]}

    @app.get("/intervals/{interval_id}")
    def get_interval(interval_id: str):
        with session.lock:
            project, _ = session.require_audio()
            return _interval_dict(project.find(interval_id), project.fps)

    @app.post("/intervals", status_code=201)
    def create_interval(body: IntervalBody):
        with session.lock:
            project, _ = session.require_audio()
            interval = timeline.add_interval(project, body.begin_sec, body.end_sec)
            return _interval_dict(interval, project.fps)

    @app.patch("/intervals/{interval_id}")
    def patch_interval(interval_id: str, body: IntervalBody):
        with session.lock:
            project, _ = session.require_audio()
            interval = timeline.edit_interval(project, interval_id, body.begin_sec, body.end_sec)
            session.rendered.pop(interval_id, None)
            return _interval_dict(interval, project.fps)

    @app.delete("/intervals/{interval_id}", status_code=204)
    def remove_interval(interval_id: str):
        with session.lock:
            project, _ = session.require_audio()
            timeline.delete_interval(project, interval_id)
            session.rendered.pop(interval_id, None)
        return Response(status_code=204)

    @app.post("/intervals/{interval_id}/endpoint")
    def set_interval_endpoint(interval_id: str, body: EndpointBody):
        with session.lock:
            project, _ = session.require_audio()
            spec = _spec_from_body(body.spec, project)
            interval = timeline.set_endpoint(project, interval_id, body.which, spec)
            session.rendered.pop(interval_id, None)
            return _interval_dict(interval, project.fps)

    # -- generation -------------------------------------------------------

    @app.post("/preview", status_code=202)
    def preview(body: PreviewBody):
        with session.lock:
            project, _ = session.require_audio()
            spec = _spec_from_body(body, project)
            specs = resolve_seeds(spec, session.seed_source)

        def work():
            images = []
            for s in specs:
                frame = session.backend.generate(s)
                with session.lock:
                    ref = session.store_artifact(frame)
                images.append({"image_ref": ref, "spec": {
                    "prompt": s.prompt, "seed": s.seed, "width": s.width, "height": s.height}})
            return {"images": images}

        return {"job_id": session.submit("preview", work).id}

    @app.post("/variations", status_code=202)
    def variations(body: VariationsBody):
        with session.lock:
            project, _ = session.require_audio()
            base = _spec_from_body(SpecBody(prompt=body.prompt, seed=body.seed), project)
            shuffle_rng = random.Random(session.seed_source.next_seed())
        prompt = Prompt.parse(base.prompt)

        def work():
            variants = shuffle_variations(prompt, prompting.SUBJECT_COUNT, rng=shuffle_rng)
            images = []
            for variant in variants:
                spec = ImageSpec(prompt=variant.text(), seed=base.seed,
                                 width=base.width, height=base.height)
                frame = session.backend.generate(spec)
                with session.lock:
                    ref = session.store_artifact(frame)
                images.append({"image_ref": ref, "spec": {
                    "prompt": spec.prompt, "seed": spec.seed,
                    "width": spec.width, "height": spec.height}})
            return {"images": images}

        return {"job_id": session.submit("variations", work).id}

    @app.post("/brainstorm")
    def do_brainstorm(body: BrainstormBody):
        if not body.description.strip():
            raise InvalidSpec("description must be nonempty")
        # style sampling keyed off the description so stub sessions replay
        rng = random.Random(hashlib.sha256(body.description.encode()).digest())
        result = prompting.brainstorm(body.description, session.llm,
                                      session.style_lexicon, n_styles=6, rng=rng)
        return {"subjects": list(result.subjects), "styles": list(result.styles)}

    # -- render / stitch jobs ----------------------------------------------

    @app.post("/intervals/{interval_id}/render", status_code=202)
    def render_job(interval_id: str):
        with session.lock:
            project, clip = session.require_audio()
            live = project.find(interval_id)
            snapshot = copy.deepcopy(live)
            fingerprint = _fingerprint(live)
            fps, frame_size = project.fps, project.frame_size

        def work():
            shadow = Project(fps=fps, frame_size=frame_size,
                             duration_sec=clip.duration_sec, intervals=[snapshot])
            sched = renderer.schedule(shadow, snapshot, clip)
            result = renderer.render_interval(shadow, snapshot, sched, session.backend,
                                              workers=session.config.workers)
            frames = []
            with session.lock:
                for i, frame in enumerate(result.frames):
                    frames.append({
                        "index": i,
                        "weight": float(sched.weights.weights[i]),
                        "image_ref": session.store_artifact(frame),
                    })
                current = next((iv for iv in (session.project.intervals if session.project else [])
                                if iv.id == interval_id), None)
                if current is None or _fingerprint(current) != fingerprint:
                    return {"interval_id": interval_id, "orphaned": True,
                            "frame_count": len(result.frames), "frames": frames}
                current.state = timeline.GENERATED
                session.rendered[interval_id] = result
            return {"interval_id": interval_id, "frame_count": len(result.frames),
                    "frames": frames}

        return {"job_id": session.submit("render", work).id}

    @app.post("/stitch", status_code=202)
    def stitch_job():
        with session.lock:
            session.require_audio()

        def work():
            with session.lock:
                project, clip = session.require_audio()
                video = renderer.stitch(project, list(session.rendered.values()))
            out_dir = session.ensure_output_dir()
            frames_dir = out_dir / "stitch"
            manifest = renderer.export_frames(video, frames_dir)
            result = {
                "frame_count": manifest["frame_count"],
                "intervals": manifest["intervals"],
                "frames_dir": str(frames_dir),
            }
            if session.config.encoder_template:
                video_path = out_dir / "video.out"
                renderer.encode_video(frames_dir, clip, video_path,
                                      session.config.encoder_template)
                with session.lock:
                    session.video_path = video_path
                result["video"] = True
            return result

        return {"job_id": session.submit("stitch", work).id}

    @app.get("/jobs/{job_id}")
    def get_job(job_id: str):
        with session.lock:
            job = session.jobs.get(job_id)
            if job is None:
                raise HTTPException(status_code=404, detail=f"no job {job_id}")
            return job.as_dict()

    # -- artifacts ----------------------------------------------------------

    @app.get("/artifacts/{digest}")
    def get_artifact(digest: str):
        with session.lock:
            png = session.artifacts.get(digest)
        if png is None:
            raise HTTPException(status_code=404, detail=f"no artifact {digest}")
        return Response(content=png, media_type="image/png",
                        headers={"Cache-Control": "immutable, max-age=31536000"})

    @app.get("/video")
    def get_video():
        with session.lock:
            path = session.video_path
        if path is None or not path.exists():
            raise HTTPException(status_code=404, detail="no stitched video yet")
        return FileResponse(path)

    # -- project round-trip --------------------------------------------------

    @app.get("/project")
    def get_project():
        with session.lock:
            project, _ = session.require_audio()
            return Response(content=timeline.save_project(project),
                            media_type="application/json")

    @app.post("/project")
    async def put_project(request: Request):
        data = await request.body()
        loaded = timeline.load_project(data)
        with session.lock:
            project, clip = session.require_audio()
            loaded.duration_sec = clip.duration_sec
            for iv in loaded.intervals:
                if iv.end_sec > clip.duration_sec + 1e-9:
                    raise OutOfRange(f"interval {iv.id} past audio end")
            session.project = loaded
            session.rendered.clear()
            return {"intervals": len(loaded.intervals)}

    # mounted last so API routes win; serves index.html and the built UI
    if config.ui_dir:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=config.ui_dir, html=True), name="ui")

    return app


def run(config: Optional[ServiceConfig] = None, host: str = "127.0.0.1", port: int = 8321):
    import uvicorn

    uvicorn.run(create_app(config or ServiceConfig.from_env()), host=host, port=port)
