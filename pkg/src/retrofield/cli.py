"""Command-line front end.

Exit codes: 0 success, 2 validation error, 3 physics-domain error (an
impossible outcome or a divergent quantity), 4 I/O error.  ``verify`` exits 1
when any acceptance criterion fails.
"""

from __future__ import annotations

import argparse
import sys

from . import acceptance
from .errors import ConfigurationError, ParameterDomainError, PhysicsDomainError, StructureError
from .experiment import ConfigError, emit, parse_config, parse_sweep_spec, run, sweep

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_VALIDATION = 2
EXIT_PHYSICS = 3
EXIT_IO = 4


def _read_config(path: str | None) -> bytes:
    if path is None or path == "-":
        return sys.stdin.buffer.read()
    with open(path, "rb") as fh:
        return fh.read()


def _write(data: bytes, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    else:
        with open(path, "wb") as fh:
            fh.write(data)


def _load(args: argparse.Namespace):
    raw = _read_config(args.config)
    cfg = parse_config(raw)
    overrides = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.samples is not None:
        overrides["samples"] = args.samples
    if overrides:
        cfg = parse_config({**cfg.model_dump(), **overrides})
    return cfg


def _cmd_simulate(args: argparse.Namespace) -> int:
    cfg = _load(args)
    _write(emit(run(cfg), args.format), args.out)
    return EXIT_OK


def _cmd_sweep(args: argparse.Namespace) -> int:
    cfg = _load(args)
    _, values = parse_sweep_spec(args.sweep)
    _write(emit(sweep(cfg, values), args.format), args.out)
    return EXIT_OK


def _cmd_weak_values(args: argparse.Namespace) -> int:
    cfg = _load(args)
    if cfg.geometry != "interferometer":
        raise ConfigError([("geometry", "weak values are defined for the interferometer only")])
    cfg = parse_config({**cfg.model_dump(), "model": "oracle", "I_Z": None, "outcome": None})
    _write(emit(run(cfg), args.format), args.out)
    return EXIT_OK


def _cmd_verify(args: argparse.Namespace) -> int:
    ok = acceptance.run_all(echo=print)
    print("all criteria passed" if ok else "some criteria FAILED")
    return EXIT_OK if ok else EXIT_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="retrofield",
        description="Constrained classical-field photon models checked against quantum predictions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    io_flags = argparse.ArgumentParser(add_help=False)
    io_flags.add_argument("--config", help="experiment config JSON (default: stdin)")
    io_flags.add_argument("--format", choices=("json", "csv"), default="json")
    io_flags.add_argument("--seed", type=int, help="override the config seed")
    io_flags.add_argument("--samples", type=int, help="override the Monte Carlo sample count")
    io_flags.add_argument("--out", help="output path (default: stdout)")

    p = sub.add_parser("simulate", parents=[io_flags], help="run one experiment")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("sweep", parents=[io_flags], help="run an experiment over a grid of T")
    p.add_argument("--sweep", default="T=0.05:0.95:0.05", help="NAME=START:STOP:STEP (default %(default)s)")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("weak-values", parents=[io_flags], help="oracle weak values for an interferometer")
    p.set_defaults(func=_cmd_weak_values)

    p = sub.add_parser("verify", help="run the acceptance criteria and report pass/fail")
    p.set_defaults(func=_cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        for path, msg in exc.errors:
            print(f"error: {path}: {msg}", file=sys.stderr)
        return EXIT_VALIDATION
    except (ParameterDomainError, StructureError, ConfigurationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except PhysicsDomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PHYSICS
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
