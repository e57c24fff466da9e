"""Command-line entry points.

    partgrasp render --scene scene.json --out out/
    partgrasp run --scene scene.json --script dialogue.txt --seed 3 --out out/
    partgrasp serve --port 8000 --backend mock --fixtures assets/mock_replies.json
    partgrasp eval metrics --gold gold.json --pred pred.json
    partgrasp eval ablation --suite assets/ablation_suite --seed 0
    partgrasp suite --out assets/ablation_suite --seed 7 --count 20

Backend selection: --backend / --fixtures flags, falling back to a --config
JSON file and then PARTGRASP_* environment variables.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import PartGraspError
from .evaluation.ablation import (
    AblationConfig,
    load_suite,
    make_adjacency_suite,
    run_ablation,
    save_suite,
    summarize,
    summary_to_text,
)
from .evaluation.grading import records_from_files
from .evaluation.metrics import build_report
from .scene.io import load_scene, save_frame, scene_to_dict
from .scene.render import render
from .service.app import ServiceSettings, backend_factory
from .sessions import SessionManager, export_session


def _load_settings(args) -> ServiceSettings:
    settings = ServiceSettings.from_env()
    if getattr(args, "config", None):
        with open(args.config) as fh:
            doc = json.load(fh)
        for key in ("backend", "fixtures", "base_url", "model", "api_key_env", "default_seed", "element_size"):
            if key in doc:
                setattr(settings, key, doc[key])
    if getattr(args, "backend", None):
        settings.backend = args.backend
    if getattr(args, "fixtures", None):
        settings.fixtures = args.fixtures
    if getattr(args, "base_url", None):
        settings.base_url = args.base_url
    if getattr(args, "model", None):
        settings.model = args.model
    return settings


def cmd_render(args) -> int:
    scene = load_scene(args.scene)
    frame = render(scene)
    save_frame(frame, args.out)
    print(f"rendered {scene.camera_intrinsics.width}x{scene.camera_intrinsics.height} frame to {args.out}")
    return 0


def cmd_run(args) -> int:
    settings = _load_settings(args)
    element = None
    size = args.element or settings.element_size
    if size:
        from .localization.morphology import StructuringElement

        element = StructuringElement.from_size(size, size)
    manager = SessionManager(backend_factory(settings), default_seed=args.seed, element=element)
    scene_doc = scene_to_dict(load_scene(args.scene))
    session = manager.create_session(scene_doc, seed=args.seed)
    script = [line.strip() for line in Path(args.script).read_text().splitlines()]
    for line in script:
        if not line or line.startswith("#"):
            continue
        if session.state != "dialogue":
            break
        outcome = manager.post_message(session.id, line)
        if "reply" in outcome:
            print(f"user: {line}\nassistant: {outcome['reply']}")
        else:
            print(f"user: {line}\nassistant: [action sequence, {len(outcome['sequence']['steps'])} steps]")
    while session.state in ("sequence_ready", "executing"):
        result = manager.execute_step(session.id)
        status = "failed" if "failure" in result else "ok"
        print(f"step {result['index']} {result['action']} -> {status}")
    if args.out:
        export_session(manager, session.id, args.out, top_n=args.top)
        print(f"session exported to {args.out} (state: {session.state})")
    else:
        print(f"final state: {session.state}")
    return 0 if session.state == "done" else 1


def cmd_serve(args) -> int:
    import uvicorn

    from .service.app import create_app

    settings = _load_settings(args)
    if args.ui_dir:
        settings.ui_dir = args.ui_dir
    uvicorn.run(create_app(settings), host=args.host, port=args.port, log_level="warning")
    return 0


def cmd_eval_metrics(args) -> int:
    records = records_from_files(args.gold, args.pred)
    report = build_report(records)
    print(report.to_text())
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(report.to_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")
        print(f"report written to {args.out}")
    return 0


def cmd_eval_ablation(args) -> int:
    cases = load_suite(args.suite)
    results = run_ablation(cases, AblationConfig(seed=args.seed))
    summary = summarize(results)
    print(summary_to_text(summary))
    if args.out:
        doc = {"results": [r.to_dict() for r in results], "summary": summary}
        with open(args.out, "w") as fh:
            json.dump(doc, fh, indent=2, sort_keys=True)
            fh.write("\n")
        print(f"ablation report written to {args.out}")
    return 0


def cmd_suite(args) -> int:
    cases = make_adjacency_suite(seed=args.seed, count=args.count)
    save_suite(cases, args.out)
    print(f"wrote {len(cases)} scenes to {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="partgrasp")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("render", help="render a scene file to PNG rasters")
    p.add_argument("--scene", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("run", help="drive a scripted dialogue through the pipeline")
    p.add_argument("--scene", required=True)
    p.add_argument("--script", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.add_argument("--element", type=int, help="odd structuring-element size in pixels")
    p.add_argument("--top", type=int, help="export only the top-N grasps per step")
    p.add_argument("--backend", choices=("mock", "http"))
    p.add_argument("--fixtures")
    p.add_argument("--base-url", dest="base_url")
    p.add_argument("--model")
    p.add_argument("--config")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--backend", choices=("mock", "http"))
    p.add_argument("--fixtures")
    p.add_argument("--base-url", dest="base_url")
    p.add_argument("--model")
    p.add_argument("--config")
    p.add_argument("--ui-dir", dest="ui_dir")
    p.set_defaults(func=cmd_serve)

    p_eval = sub.add_parser("eval", help="evaluation harness")
    eval_sub = p_eval.add_subparsers(dest="eval_command", required=True)

    p = eval_sub.add_parser("metrics", help="grade predictions against gold annotations")
    p.add_argument("--gold", required=True)
    p.add_argument("--pred", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_eval_metrics)

    p = eval_sub.add_parser("ablation", help="run the localization-strategy ablation")
    p.add_argument("--suite", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_eval_ablation)

    p = sub.add_parser("suite", help="generate the seeded adjacency scene suite")
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--count", type=int, default=20)
    p.set_defaults(func=cmd_suite)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except PartGraspError as exc:
        print(f"error [{exc.code}]: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
