"""Command-line entry points: simulate | export | generate | serve.

Exit codes: 0 success, 2 document parse/validation failure,
3 non-finite simulation state, 64 usage error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from .config import Config, config_from_dict, load_config
from .errors import ArgumentError, MetasceneError, NonFiniteStateError
from .metadata.parse import parse_document, serialize_document
from .metadata.pathloss import PathLossParams, path_loss_from_dict
from .metadata.synthetic import generate_synthetic
from .pipeline import simulate_scene
from .scene.document import parse_scene_json, to_scene_json
from .scene.gltf import to_gltf
from .server import DEFAULT_POLL_INTERVAL_S, SceneServer, serve_forever

EXIT_OK = 0
EXIT_INVALID_INPUT = 2
EXIT_NON_FINITE = 3
EXIT_USAGE = 64


def _fail(message: str, code: int) -> int:
    print(f"error: {message}", file=sys.stderr)
    return code


def _load_config_args(args) -> tuple[Config, PathLossParams]:
    config = Config()
    params = PathLossParams()
    if getattr(args, "config", None):
        config = load_config(args.config)
        with open(args.config, "rb") as fh:
            raw = json.loads(fh.read().decode("utf-8"))
        if isinstance(raw, dict) and raw.get("path_loss") is not None:
            params = path_loss_from_dict(raw["path_loss"])
    if getattr(args, "seed", None) is not None:
        config = config.replace(seed=args.seed)
    if getattr(args, "max_ticks", None) is not None:
        if args.max_ticks < 1:
            raise ArgumentError("--max-ticks must be >= 1")
        config = config.replace(max_ticks=args.max_ticks)
    config.validate()
    params.validate()
    return config, params


def cmd_simulate(args) -> int:
    try:
        config, params = _load_config_args(args)
    except MetasceneError as exc:
        return _fail(str(exc), EXIT_USAGE)
    try:
        with open(args.input, "rb") as fh:
            data = fh.read()
    except OSError as exc:
        return _fail(f"cannot read {args.input!r}: {exc}", EXIT_INVALID_INPUT)
    try:
        doc = parse_document(data)
    except MetasceneError as exc:
        return _fail(str(exc), EXIT_INVALID_INPUT)
    try:
        scene, ticks = simulate_scene(doc, config, params)
    except NonFiniteStateError as exc:
        return _fail(str(exc), EXIT_NON_FINITE)
    payload = to_scene_json(scene)
    with open(args.out, "wb") as fh:
        fh.write(payload)
    print(
        f"converged in {ticks} ticks: {len(scene.nodes)} nodes, "
        f"{len(scene.links)} links, {len(scene.rooms)} rooms -> {args.out}"
    )
    return EXIT_OK


def cmd_export(args) -> int:
    if args.format not in ("json", "gltf"):
        return _fail(f"unknown --format {args.format!r} (expected json|gltf)", EXIT_USAGE)
    try:
        with open(args.scene, "rb") as fh:
            data = fh.read()
    except OSError as exc:
        return _fail(f"cannot read {args.scene!r}: {exc}", EXIT_INVALID_INPUT)
    try:
        scene = parse_scene_json(data)
    except MetasceneError as exc:
        return _fail(str(exc), EXIT_INVALID_INPUT)
    payload = to_scene_json(scene) if args.format == "json" else to_gltf(scene)
    with open(args.out, "wb") as fh:
        fh.write(payload)
    print(f"wrote {args.format} ({len(payload)} bytes) -> {args.out}")
    return EXIT_OK


def cmd_generate(args) -> int:
    try:
        doc = generate_synthetic(args.rooms, args.sensors, args.gateways, args.floors, args.seed)
    except ArgumentError as exc:
        return _fail(str(exc), EXIT_USAGE)
    payload = serialize_document(doc)
    with open(args.out, "wb") as fh:
        fh.write(payload)
    print(
        f"generated {len(doc.rooms)} rooms, {len(doc.devices)} devices, "
        f"{len(doc.links)} links -> {args.out}"
    )
    return EXIT_OK


def cmd_serve(args) -> int:
    try:
        config, params = _load_config_args(args)
    except MetasceneError as exc:
        return _fail(str(exc), EXIT_USAGE)
    if args.poll_interval <= 0:
        return _fail("--poll-interval must be > 0 seconds", EXIT_USAGE)
    host, _, port_text = args.listen.rpartition(":")
    if not host or not port_text.isdigit():
        return _fail(f"--listen must be host:port, got {args.listen!r}", EXIT_USAGE)
    logging.basicConfig(level=logging.INFO, format="%(asctime)s %(name)s %(message)s")
    server = SceneServer(
        source=args.input,
        config=config,
        params=params,
        poll_interval=args.poll_interval,
        reseed_on_change=args.reseed_on_change,
        viewer_dir=args.viewer_dir,
    )
    try:
        serve_forever(server, host, int(port_text))
    except MetasceneError as exc:
        return _fail(str(exc), EXIT_INVALID_INPUT)
    except OSError as exc:
        return _fail(f"cannot listen on {args.listen!r}: {exc}", EXIT_INVALID_INPUT)
    except KeyboardInterrupt:
        pass
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="metascene",
        description="Metadata-driven 3D building visualization engine",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--seed", type=int, default=42, help="simulation seed (default 42)")
        p.add_argument("--config", help="JSON config file (fields mirror Config)")

    p_sim = sub.add_parser("simulate", help="run one simulation and write the scene JSON")
    common(p_sim)
    p_sim.add_argument("--input", required=True, help="metadata document path")
    p_sim.add_argument("--out", required=True, help="scene JSON output path")
    p_sim.add_argument("--max-ticks", type=int, default=None)
    p_sim.set_defaults(func=cmd_simulate)

    p_exp = sub.add_parser("export", help="convert a scene document to json or gltf")
    common(p_exp)  # accepted for a uniform surface; conversion ignores them
    p_exp.add_argument("--scene", required=True, help="scene JSON input path")
    p_exp.add_argument("--format", required=True, help="json | gltf")
    p_exp.add_argument("--out", required=True)
    p_exp.set_defaults(func=cmd_export)

    p_gen = sub.add_parser("generate", help="write a synthetic metadata document")
    common(p_gen)
    p_gen.add_argument("--rooms", type=int, required=True)
    p_gen.add_argument("--sensors", type=int, required=True)
    p_gen.add_argument("--gateways", type=int, required=True)
    p_gen.add_argument("--floors", type=int, required=True)
    p_gen.add_argument("--out", required=True)
    p_gen.set_defaults(func=cmd_generate)

    p_srv = sub.add_parser("serve", help="poll a metadata source and serve scenes over HTTP")
    common(p_srv)
    p_srv.add_argument("--input", required=True, help="metadata file path or HTTP URL")
    p_srv.add_argument("--listen", default="127.0.0.1:8734", help="host:port")
    p_srv.add_argument("--poll-interval", type=float, default=DEFAULT_POLL_INTERVAL_S,
                       help="seconds between source polls")
    p_srv.add_argument("--reseed-on-change", action="store_true",
                       help="derive a fresh seed from each new source hash")
    p_srv.add_argument("--viewer-dir", default=None, help="static viewer assets directory")
    p_srv.set_defaults(func=cmd_serve)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
