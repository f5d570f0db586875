"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 runtime error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .court import play_from_json, read_plays_jsonl, write_plays_jsonl
from .errors import SketchplayError


class _UsageExit(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage problems exit 1, not argparse's 2
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        raise _UsageExit()


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="sketchplay", description="Sketch-conditioned set-play simulation")
    sub = parser.add_subparsers(dest="command", metavar="command")

    p = sub.add_parser("ingest", help="trim/orient/downsample raw tracking plays")
    p.add_argument("--in", dest="inp", required=True, help="raw JSONL: {play, events} per line")
    p.add_argument("--out", required=True, help="output plays JSONL")
    p.add_argument("--fps", type=float, default=5.0, help="target frame rate")

    p = sub.add_parser("sketchify", help="synthesize sketches/conditions from plays")
    p.add_argument("--in", dest="inp", required=True, help="plays JSONL")
    p.add_argument("--out", required=True, help="output JSONL: {sketch, condition}")
    p.add_argument("--epsilon", type=float, default=1.5, help="RDP tolerance in feet")

    p = sub.add_parser("synth-data", help="generate synthetic plays")
    p.add_argument("--template", required=True)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--out", required=True)
    p.add_argument("--t", type=int, default=50, help="frames per play")

    p = sub.add_parser("train", help="train the adversarial model")
    p.add_argument("--data", required=True, help="plays JSONL")
    p.add_argument("--config", help="flat key=value config file")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--seed", type=int, help="overrides the config seed")
    p.add_argument("--resume", help="checkpoint to resume from")

    p = sub.add_parser("simulate", help="simulate plays from a sketch")
    p.add_argument("--sketch", required=True, help="sketch JSON file")
    p.add_argument("--ckpt", required=True, help="model checkpoint")
    p.add_argument("--seed", type=int)
    p.add_argument("--samples", type=int, default=1)
    p.add_argument("--out", required=True, help="output plays JSONL")

    p = sub.add_parser("eval", help="compare real and generated plays")
    p.add_argument("--real", required=True)
    p.add_argument("--generated", required=True)
    p.add_argument("--out", required=True, help="report JSON path")
    p.add_argument("--cell", type=float, default=1.0, help="heatmap cell size (ft)")

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--port", type=int, default=8787)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--ckpt", help="model checkpoint")
    p.add_argument("--static", help="directory with the built UI")

    return parser


def _cmd_ingest(args) -> int:
    from .pipeline import event_from_json, ingest

    raw = []
    with open(args.inp) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            rec = json.loads(line)
            play = play_from_json(rec["play"])
            events = tuple(event_from_json(e) for e in rec.get("events", []))
            raw.append((play, events))
    plays, _events, report = ingest(raw, target_fps=args.fps)
    write_plays_jsonl(plays, args.out)
    print(
        f"ingested {report.ingested}, skipped {report.skipped_no_shot} without a shot, "
        f"{report.skipped_invalid} invalid, mirrored {report.mirrored}",
        file=sys.stderr,
    )
    return 0


def _cmd_sketchify(args) -> int:
    from .pipeline import derive_events, sketchify
    from .sketch import sketch_to_json

    plays = read_plays_jsonl(args.inp)
    with open(args.out, "w") as fh:
        for play in plays:
            sketch, condition = sketchify(play, derive_events(play), args.epsilon)
            fh.write(
                json.dumps(
                    {"sketch": sketch_to_json(sketch), "condition": condition.tolist()},
                    sort_keys=True,
                )
                + "\n"
            )
    print(f"sketchified {len(plays)} plays", file=sys.stderr)
    return 0


def _cmd_synth(args) -> int:
    from .synth import SynthConfig, synth_plays

    pairs = synth_plays(args.template, args.count, args.seed, SynthConfig(t=args.t))
    write_plays_jsonl((p for p, _ in pairs), args.out)
    print(f"wrote {len(pairs)} {args.template} plays to {args.out}", file=sys.stderr)
    return 0


def _cmd_train(args) -> int:
    from .model import ModelConfig
    from .pipeline import order_players
    from .trainer import TrainConfig, parse_config_file, train

    if args.config:
        cfg, model_cfg = parse_config_file(args.config)
    else:
        cfg, model_cfg = TrainConfig(), ModelConfig()
    if args.seed is not None:
        cfg = TrainConfig(**{**cfg.__dict__, "seed": args.seed})
    plays = [order_players(p) for p in read_plays_jsonl(args.data)]
    result = train(
        plays,
        cfg,
        model_cfg,
        out_dir=args.out,
        resume_from=args.resume,
        progress=lambda msg: print(msg, file=sys.stderr),
    )
    status = "diverged" if result.diverged else ("early-stopped" if result.stopped_early else "done")
    print(
        f"{status}: {result.counters.get('critic_steps', 0)} critic / "
        f"{result.counters.get('gen_steps', 0)} generator steps, "
        f"checkpoints in {args.out}",
        file=sys.stderr,
    )
    return 0


def _cmd_simulate(args) -> int:
    from .service import ModelBundle, simulate
    from .sketch import sketch_from_json

    with open(args.sketch) as fh:
        sketch = sketch_from_json(json.load(fh))
    bundle = ModelBundle.from_checkpoint(args.ckpt)
    response = simulate(sketch, args.samples, args.seed, bundle)
    write_plays_jsonl(response.plays, args.out)
    print(
        f"wrote {len(response.plays)} plays of t={response.condition_t} from {response.model}",
        file=sys.stderr,
    )
    return 0


def _cmd_eval(args) -> int:
    from .metrics import (
        play_stats,
        velocity_heatmap,
        write_heatmap_csv,
        write_heatmap_dat,
        write_stats_report,
    )

    real = read_plays_jsonl(args.real)
    generated = read_plays_jsonl(args.generated)
    write_stats_report(play_stats(real), play_stats(generated), args.out)
    base, _ = os.path.splitext(args.out)
    for name, plays in (("real", real), ("generated", generated)):
        grid = velocity_heatmap(plays, args.cell)
        write_heatmap_csv(grid, f"{base}_heatmap_{name}.csv")
        write_heatmap_dat(grid, f"{base}_heatmap_{name}.dat")
    print(f"report written to {args.out}", file=sys.stderr)
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(args.ckpt, args.static)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


_COMMANDS = {
    "ingest": _cmd_ingest,
    "sketchify": _cmd_sketchify,
    "synth-data": _cmd_synth,
    "train": _cmd_train,
    "simulate": _cmd_simulate,
    "eval": _cmd_eval,
    "serve": _cmd_serve,
}


def cli_dispatch(argv: list[str]) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageExit:
        return 1
    if args.command is None:
        parser.print_help()
        return 1
    try:
        return _COMMANDS[args.command](args)
    except SketchplayError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main(argv: list[str] | None = None) -> int:
    return cli_dispatch(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
