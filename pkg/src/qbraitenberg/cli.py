"""Command-line front end: circuit runs, QASM export, single drives, game episodes."""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace

from .brain import (
    LAYOUT,
    NondeterministicOutcomeError,
    SensorInput,
    behavior_label,
    brain_function,
    build_robot_circuit,
    measure_distribution,
)
from .circuit import export_qasm, lower
from .game import EpisodeStatus, GameConfig, run_episode, trace_json_line

#: CLI spelling -> brain kind name.
_BRAIN_CHOICES = {
    "quantum": "quantum",
    "quantum-lowered": "quantum_lowered",
    "classical": "classical",
}


def _bit(text: str) -> int:
    if text not in ("0", "1"):
        raise argparse.ArgumentTypeError(f"expected 0 or 1, got {text!r}")
    return int(text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qbraitenberg",
        description="Quantum-brain vehicle: circuit simulation, QASM export, and the obstacle-lane game.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("circuit-run", help="print the measured outcome distribution for a sensor input")
    run.add_argument("--input", required=True, choices=("00", "01", "10", "11"), help="sensor bits s1s2")
    run.add_argument("--lowered", action="store_true", help="run the Clifford+T form of the circuit")

    export = sub.add_parser("circuit-export", help="write the lowered control circuit as OpenQASM 2.0")
    export.add_argument("--out", help="output path (stdout when omitted)")

    drv = sub.add_parser("drive", help="drive one sensor input and print the motor command")
    drv.add_argument("--s1", required=True, type=_bit, help="left sensor bit")
    drv.add_argument("--s2", required=True, type=_bit, help="right sensor bit")
    drv.add_argument("--brain", choices=sorted(_BRAIN_CHOICES), default="quantum")

    game = sub.add_parser("game-run", help="run seeded game episodes")
    game.add_argument("--seed", type=int, default=None,
                      help="base seed; episode i uses seed + i (default: the config seed)")
    game.add_argument("--episodes", type=int, default=1)
    game.add_argument("--config", help="JSON file of game settings; absent fields take defaults")
    game.add_argument("--brain", choices=sorted(_BRAIN_CHOICES), default="quantum")
    game.add_argument("--trace-out", help="write per-tick JSONL traces for all episodes")
    return parser


def _cmd_circuit_run(args: argparse.Namespace) -> int:
    sensors = SensorInput(int(args.input[0]), int(args.input[1]))
    dist = measure_distribution(sensors, lowered=args.lowered)
    for outcome in sorted(dist.probs):
        print(f"{outcome} {dist.probs[outcome]:.6f}")
    return 0


def _cmd_circuit_export(args: argparse.Namespace) -> int:
    text = export_qasm(lower(build_robot_circuit()), LAYOUT.measured)
    if args.out is None:
        sys.stdout.write(text)
        return 0
    try:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
        return 1
    return 0


def _cmd_drive(args: argparse.Namespace) -> int:
    motors = brain_function(_BRAIN_CHOICES[args.brain])(SensorInput(args.s1, args.s2))
    print(f"{motors.m1} {motors.m2} {motors.m3} {behavior_label(motors)}")
    return 0


def _cmd_game_run(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    if args.episodes < 1:
        parser.error(f"--episodes must be >= 1, got {args.episodes}")
    data: dict = {}
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                data = json.load(fh)
        except OSError as exc:
            parser.error(f"cannot read config: {exc}")
        except json.JSONDecodeError as exc:
            parser.error(f"malformed config: {exc}")
        if not isinstance(data, dict):
            parser.error("config must be a JSON object")
    try:
        config = GameConfig.from_dict(data)
    except (TypeError, ValueError) as exc:
        parser.error(f"invalid config: {exc}")

    base_seed = args.seed if args.seed is not None else config.seed
    kind = _BRAIN_CHOICES[args.brain]
    results = []
    for i in range(args.episodes):
        result = run_episode(replace(config, seed=base_seed + i), kind)
        results.append(result)
        print(f"episode={i} seed={base_seed + i} status={result.status.value} ticks={result.ticks_elapsed}")

    wins = sum(r.status is EpisodeStatus.WON for r in results)
    collisions = sum(r.status is EpisodeStatus.COLLIDED for r in results)
    timeouts = sum(r.status is EpisodeStatus.TIMED_OUT for r in results)
    mean_ticks = sum(r.ticks_elapsed for r in results) / len(results)
    print(
        f"episodes={len(results)} wins={wins} collisions={collisions} "
        f"timeouts={timeouts} mean_ticks={mean_ticks:.3f}"
    )

    if args.trace_out:
        try:
            with open(args.trace_out, "w", encoding="utf-8", newline="") as fh:
                for result in results:
                    for record in result.trace:
                        fh.write(trace_json_line(record) + "\n")
        except OSError as exc:
            print(f"error: cannot write {args.trace_out}: {exc}", file=sys.stderr)
            return 1
    return 1 if collisions else 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "circuit-run":
            return _cmd_circuit_run(args)
        if args.command == "circuit-export":
            return _cmd_circuit_export(args)
        if args.command == "drive":
            return _cmd_drive(args)
        return _cmd_game_run(args, parser)
    except NondeterministicOutcomeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
