"""Command line: ``rover-fuse {focus,combine,evaluate,gen}``.

Exit codes: 0 success, 1 usage error, 2 I/O or format error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .combiner import combine
from .core import argmax_string
from .evaluation import (
    build_profiles,
    default_jobs,
    load_clip_manifest,
    load_dataset,
    save_dataset,
    write_profiles_csv,
)
from .focus import focus_estimate, read_pgm
from .synth import DEFAULT_ALPHABET, SynthConfig, generate_synthetic
from .weighting import (
    Base,
    MissingImage,
    ThresholdRule,
    WeightingStrategy,
    apply_weighting_model,
    standard_strategies,
)

EXIT_USAGE = 1
EXIT_IO = 2

PRESETS = {
    "focus": lambda: standard_strategies(Base.FOCUS),
    "confidence": lambda: standard_strategies(Base.CONFIDENCE),
    "both": lambda: standard_strategies(Base.FOCUS) + standard_strategies(Base.CONFIDENCE)[1:],
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def parse_strategies(text: str) -> list[WeightingStrategy]:
    """Comma-separated ``base/rule`` items, or one of the preset names."""
    text = text.strip()
    if text in PRESETS:
        return PRESETS[text]()
    try:
        return [WeightingStrategy.parse(item) for item in text.split(",") if item.strip()]
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_focus(args) -> int:
    value = focus_estimate(read_pgm(args.image))
    print(f"{value:.6f}")
    return 0


def cmd_combine(args) -> int:
    try:
        strategy = WeightingStrategy(Base(args.weighting), ThresholdRule.parse(args.keep))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    clip = load_clip_manifest(args.manifest)
    weights = apply_weighting_model(clip.frames, strategy)
    result = combine(clip.frames, weights)
    if args.out:
        result.save(args.out)
    print(argmax_string(result))
    return 0


def cmd_evaluate(args) -> int:
    strategies = parse_strategies(args.strategies)
    if not strategies:
        raise UsageError("no strategies given")
    if args.jobs is not None and args.jobs < 1:
        raise UsageError("--jobs must be positive")
    ds = load_dataset(args.manifest)
    if args.target_length is not None:
        ds.target_length = args.target_length
    profiles = build_profiles(ds, strategies, jobs=args.jobs)
    write_profiles_csv(args.out, profiles)
    return 0


def cmd_gen(args) -> int:
    try:
        cfg = SynthConfig(
            seed=args.seed,
            clip_count=args.clips,
            frames_per_clip=args.frames,
            alphabet=args.alphabet,
            target_length=args.target_length,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    path = save_dataset(generate_synthetic(cfg), args.out)
    print(path)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="rover-fuse", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("focus", help="print the focus estimate of a P5 PGM image")
    p.add_argument("image", type=Path)
    p.set_defaults(func=cmd_focus)

    p = sub.add_parser("combine", help="combine the frames of one clip manifest")
    p.add_argument("manifest", type=Path)
    p.add_argument("--weighting", choices=[b.value for b in Base], default="none")
    p.add_argument("--keep", default="all", help="all | best1 | k=K | frac=F")
    p.add_argument("--out", type=Path, help="write the combined matrix JSON here")
    p.set_defaults(func=cmd_combine)

    p = sub.add_parser("evaluate", help="write performance profiles of a dataset as CSV")
    p.add_argument("manifest", type=Path)
    p.add_argument(
        "--strategies",
        default="focus",
        help="preset (focus, confidence, both) or comma list like none/all,focus/frac=0.5",
    )
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--jobs", type=int, default=None, help=f"worker processes (default {default_jobs()})")
    p.add_argument("--target-length", type=int, default=None, help="override the manifest's target_length")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("gen", help="write a seeded synthetic dataset")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--clips", type=int, default=200)
    p.add_argument("--frames", type=int, default=30)
    p.add_argument("--alphabet", default=DEFAULT_ALPHABET)
    p.add_argument("--target-length", type=int, default=30)
    p.add_argument("--out", type=Path, required=True)
    p.set_defaults(func=cmd_gen)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"rover-fuse: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except MissingImage as exc:
        print(f"rover-fuse: error: {exc}; focus weighting needs frame images", file=sys.stderr)
        return EXIT_IO
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        print(f"rover-fuse: error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
