"""Command line interface.

    discovid analyze  song.wav --begin 2.0 --end 5.5 --out curve.csv
    discovid classify corpus.json --out table.csv
    discovid render   project.json --audio song.wav --out build/
    discovid serve    --port 8321 --backend mock

Report commands write their delimited output plus a PNG figure alongside.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

from . import analysis, renderer, timeline
from .audio import compute_energy_curve, decode_wav
from .errors import DiscovidError
from .genbackend import BackendDescriptor, make_backend
from .prompting import SeedSource
from .timeline import interval_frame_count, load_project


def _load_clip(path: str):
    return decode_wav(Path(path).read_bytes())


def _fig_path(out: str, explicit: str | None) -> Path:
    return Path(explicit) if explicit else Path(out).with_suffix(".png")


# --------------------------------------------------------------------------
# subcommands
# --------------------------------------------------------------------------

def cmd_analyze(args) -> int:
    clip = _load_clip(args.audio)
    begin = args.begin
    end = args.end if args.end is not None else clip.duration_sec
    n_frames = args.frames or max(2, int((end - begin) * args.fps + 0.5))
    curve = compute_energy_curve(clip, (begin, end), n_frames)

    out = Path(args.out)
    out.write_text("".join(f"{w:.6f}\n" for w in curve.weights), encoding="utf-8")
    print(f"wrote {n_frames} weights to {out}")

    if not args.no_fig:
        from .report import save_energy_figure
        fig = save_energy_figure(clip, (begin, end), curve, _fig_path(args.out, args.fig))
        print(f"wrote figure to {fig}")
    return 0


def cmd_classify(args) -> int:
    lexicons = analysis.load_lexicons(args.lexicons) if args.lexicons else analysis.default_lexicons()
    pairs = analysis.load_corpus(args.corpus)

    out = Path(args.out)
    with out.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["index", "kind", "dimensions", "start_prompt", "start_seed",
                         "end_prompt", "end_seed", "evidence"])
        for i, (start, end) in enumerate(pairs):
            verdict = analysis.classify(start, end, lexicons)
            writer.writerow([
                i, verdict.kind, " ".join(sorted(verdict.dimensions)),
                start.prompt, start.seed if start.seed is not None else "",
                end.prompt, end.seed if end.seed is not None else "",
                json.dumps({k: list(v) for k, v in verdict.evidence.items()}),
            ])
    report = analysis.corpus_report(pairs, lexicons)
    print(json.dumps(report, indent=2))
    print(f"wrote table to {out}", file=sys.stderr)

    if not args.no_fig:
        from .report import save_classification_figure
        fig = save_classification_figure(report, _fig_path(args.out, args.fig))
        print(f"wrote figure to {fig}", file=sys.stderr)
    return 0


def cmd_render(args) -> int:
    project = load_project(Path(args.project).read_bytes())
    clip = _load_clip(args.audio)
    project.duration_sec = clip.duration_sec
    if args.fps:
        project.fps = args.fps

    descriptor = BackendDescriptor(kind=args.backend, endpoint=args.endpoint,
                                   timeout_sec=args.timeout)
    backend = make_backend(descriptor)
    seed_source = SeedSource(args.seed)

    missing = [iv.id for iv in project.intervals if not iv.has_concrete_seeds()]
    if missing and not args.auto_seed:
        print(f"intervals without concrete seeds: {', '.join(missing)} "
              f"(use --auto-seed to draw seeds)", file=sys.stderr)
        return 1
    for iv in project.intervals:
        for which in ("start", "end"):
            spec = getattr(iv, which)
            if spec is None:
                print(f"interval {iv.id} has no {which} image spec", file=sys.stderr)
                return 1
            if spec.seed is None:
                setattr(iv, which, type(spec)(prompt=spec.prompt, seed=seed_source.next_seed(),
                                              width=spec.width, height=spec.height))

    rendered = []
    for iv in project.intervals:
        sched = renderer.schedule(project, iv, clip)
        rendered.append(renderer.render_interval(project, iv, sched, backend,
                                                 workers=args.workers))
        print(f"rendered {iv.id}: {len(rendered[-1].frames)} frames "
              f"[{iv.begin_sec:.2f}s..{iv.end_sec:.2f}s]")

    video = renderer.stitch(project, rendered)
    manifest = renderer.export_frames(video, args.out)
    print(f"stitched {manifest['frame_count']} frames into {args.out}")

    if args.encode:
        template = args.encoder or renderer.DEFAULT_ENCODER_TEMPLATE
        out_video = args.video or str(Path(args.out) / "video.mp4")
        path = renderer.encode_video(args.out, clip, out_video, template)
        print(f"encoded video at {path}")
    return 0


def cmd_serve(args) -> int:
    from .genbackend import DEFAULT_TIMEOUT_SEC
    from .service import ServiceConfig, run

    config = ServiceConfig.from_env()
    if args.backend:
        config.backend_descriptor = BackendDescriptor(
            kind=args.backend, endpoint=args.endpoint,
            timeout_sec=args.timeout or DEFAULT_TIMEOUT_SEC)
    if args.seed is not None:
        config.seed = args.seed
    if args.encoder:
        config.encoder_template = args.encoder
    if args.style_list:
        config.style_lexicon_path = args.style_list
    if args.lexicons:
        config.lexicons_path = args.lexicons
    if args.output_dir:
        config.output_dir = args.output_dir
    if args.fps:
        config.fps = args.fps
    if args.frame_size:
        w, h = args.frame_size.lower().split("x")
        config.frame_size = (int(w), int(h))
    if args.ui:
        config.ui_dir = args.ui
    run(config, host=args.host, port=args.port)
    return 0


# --------------------------------------------------------------------------
# parser
# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="discovid",
                                     description="audio-reactive interval video engine")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="export an interval's energy curve as CSV + figure")
    p.add_argument("audio", help="WAV file")
    p.add_argument("--begin", type=float, default=0.0)
    p.add_argument("--end", type=float, default=None, help="default: end of clip")
    p.add_argument("--frames", type=int, default=None, help="weight count (default: duration*fps)")
    p.add_argument("--fps", type=int, default=timeline.DEFAULT_FPS)
    p.add_argument("--out", required=True, help="CSV path, one weight per line")
    p.add_argument("--fig", default=None, help="figure path (default: out with .png)")
    p.add_argument("--no-fig", action="store_true")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("classify", help="classify a corpus of prompt pairs")
    p.add_argument("corpus", help="JSON corpus: [{start:{prompt,seed?}, end:{...}}]")
    p.add_argument("--out", required=True, help="per-pair CSV table")
    p.add_argument("--lexicons", default=None, help="lexicon override JSON")
    p.add_argument("--fig", default=None)
    p.add_argument("--no-fig", action="store_true")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("render", help="render and stitch a project to PNG frames")
    p.add_argument("project", help="project JSON file")
    p.add_argument("--audio", required=True, help="WAV file the project refers to")
    p.add_argument("--out", required=True, help="output frame directory")
    p.add_argument("--backend", choices=["mock", "remote"], default="mock")
    p.add_argument("--endpoint", default=None, help="remote backend URL")
    p.add_argument("--timeout", type=float, default=120.0)
    p.add_argument("--seed", type=int, default=None, help="seed-source override")
    p.add_argument("--auto-seed", action="store_true",
                   help="draw seeds for specs that lack one")
    p.add_argument("--fps", type=int, default=None)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--encode", action="store_true", help="run the external encoder")
    p.add_argument("--encoder", default=None, help="encoder command template")
    p.add_argument("--video", default=None, help="encoded video path")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8321)
    p.add_argument("--backend", choices=["mock", "remote"], default=None)
    p.add_argument("--endpoint", default=None)
    p.add_argument("--timeout", type=float, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--encoder", default=None)
    p.add_argument("--style-list", default=None)
    p.add_argument("--lexicons", default=None)
    p.add_argument("--output-dir", default=None)
    p.add_argument("--fps", type=int, default=None)
    p.add_argument("--frame-size", default=None, help="WxH, multiples of 8")
    p.add_argument("--ui", default=None, help="frontend directory to serve at /")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except DiscovidError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
