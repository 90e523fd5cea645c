"""Command line entry point.

Subcommands: ``run`` (streaming count), ``run-legacy`` (multi-duration
parity fit), ``compare`` (both, with an agreement flag) and ``graph-dump``.
Settings come from defaults, then ``--config FILE`` (``key = value`` lines
named after the long flags), then the command line.

Exit codes: 0 success, 1 usage error, 2 runtime or invariant failure.
"""
from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import os
import sys
from dataclasses import asdict
from pathlib import Path

from .graph import DecodingGraph
from .harness import RECORD_FIELDS, ExperimentConfig, run_compare, run_legacy, run_new
from .sweep import SweepError

EXIT_USAGE = 1
EXIT_RUNTIME = 2

COMMAND_METHOD = {"run": "new", "run-legacy": "legacy", "compare": "compare"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _int_list(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x.strip()]


def _float_list(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x.strip()]


# flag name -> (config field, parser)
OPTIONS = {
    "distance": ("distances", _int_list),
    "noise": ("noise", _float_list),
    "meas-noise": ("meas_noise", float),
    "rounds-mult": ("rounds_mult", int),
    "shots": ("shots", int),
    "checkpoints": ("checkpoints", int),
    "seed": ("seed", int),
    "decoder": ("decoder", str),
    "window": ("window", int),
    "commit": ("commit", int),
    "z": ("z", float),
    "format": ("fmt", str),
    "out": ("out", str),
    "workers": ("workers", int),
    "plot-data": ("plot_data", str),
}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="anyonsweep", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    common = _Parser(add_help=False)
    common.add_argument("--config", metavar="PATH")
    common.add_argument("--distance", metavar="D[,D...]")
    common.add_argument("--seed")
    common.add_argument("--format", choices=["jsonl", "csv"])
    common.add_argument("--out", metavar="PATH")

    experiment = _Parser(add_help=False)
    experiment.add_argument("--noise", metavar="P[,P...]")
    experiment.add_argument("--meas-noise", metavar="Q", help="time-edge flip probability (default: p)")
    experiment.add_argument("--rounds-mult", metavar="M", help="streaming run length n = M*d")
    experiment.add_argument("--shots", help="shots per (d, p) for the parity fit")
    experiment.add_argument("--checkpoints", metavar="K", help="parity checkpoints n = d..K*d")
    experiment.add_argument("--decoder", choices=["uf", "uf-forward"])
    experiment.add_argument("--window", metavar="W")
    experiment.add_argument("--commit", metavar="C")
    experiment.add_argument("--z")
    experiment.add_argument("--workers", metavar="N")
    experiment.add_argument("--plot-data", metavar="DIR", help="write two-column .dat files here")

    for name in ("run", "run-legacy", "compare"):
        sub.add_parser(name, parents=[common, experiment])
    dump = sub.add_parser("graph-dump", parents=[common])
    dump.add_argument("--rounds", type=int, default=None, help="rounds n (default: d)")
    return parser


def read_config(path: str) -> dict[str, str]:
    values = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            key, _, value = line.partition(" ")
        key = key.strip().lstrip("-").replace("_", "-")
        if key not in OPTIONS:
            raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
        values[key] = value.strip()
    return values


def resolve(args: argparse.Namespace) -> tuple[ExperimentConfig, str | None]:
    """Merge defaults, config file and flags into an :class:`ExperimentConfig`."""
    raw = read_config(args.config) if args.config else {}
    for flag in OPTIONS:
        value = getattr(args, flag.replace("-", "_"), None)
        if value is not None:
            raw[flag] = value
    kwargs = {}
    plot_data = None
    for flag, text in raw.items():
        name, parse = OPTIONS[flag]
        try:
            value = parse(text)
        except ValueError as exc:
            raise UsageError(f"--{flag}: {exc}") from None
        if name == "plot_data":
            plot_data = value
        else:
            kwargs[name] = value
    kwargs["method"] = COMMAND_METHOD.get(args.command, "new")
    try:
        return ExperimentConfig(**kwargs), plot_data
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _open_out(path: str | None):
    if path is None or path == "-":
        return sys.stdout
    return open(path, "w", newline="")


def write_records(rows: list[dict], fmt: str, path: str | None) -> None:
    out = _open_out(path)
    try:
        if fmt == "jsonl":
            for row in rows:
                out.write(json.dumps(row, sort_keys=False) + "\n")
        else:
            flat = [_flatten(r) for r in rows]
            names = list(dict.fromkeys(k for r in flat for k in r))
            writer = csv.DictWriter(out, fieldnames=names)
            writer.writeheader()
            writer.writerows(flat)
    finally:
        if out is not sys.stdout:
            out.close()


def _flatten(row: dict, prefix: str = "") -> dict:
    flat = {}
    for key, value in row.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            flat.update(_flatten(value, name + "."))
        elif isinstance(value, list):
            flat[name] = json.dumps(value)
        else:
            flat[name] = value
    return flat


def write_plot_data(records, directory: str) -> None:
    """Two-column dumps: ``n/d  log2(1-2 f_n)`` for parity runs, ``n  f_hat`` for streaming runs."""
    os.makedirs(directory, exist_ok=True)
    for r in records:
        stem = f"{r.method}_d{r.d}_p{r.p:g}"
        with open(os.path.join(directory, stem + ".dat"), "w") as fh:
            if r.method == "legacy":
                fh.write("# n/d  log2(1-2f_n)\n")
                for c in r.checkpoints:
                    f = c["k"] / c["s"]
                    if f < 0.5:
                        fh.write(f"{c['n'] / r.d:g} {math.log2(1 - 2 * f):.12g}\n")
            else:
                fh.write("# n  f_hat  lo  hi\n")
                fh.write(f"{r.n} {r.f_hat:.12g} {r.lo:.12g} {r.hi:.12g}\n")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg, plot_data = resolve(args)
        if args.command == "graph-dump":
            if len(cfg.distances) != 1:
                raise UsageError("graph-dump takes a single --distance")
            d = cfg.distances[0]
            g = DecodingGraph(d, args.rounds or d)
            out = _open_out(cfg.out)
            json.dump(g.to_json(), out)
            out.write("\n")
            if out is not sys.stdout:
                out.close()
            return 0
        if cfg.method == "compare":
            rows = run_compare(cfg)
            records = []
        else:
            records = run_new(cfg) if cfg.method == "new" else run_legacy(cfg)
            rows = [asdict(r) for r in records]
        write_records(rows, cfg.fmt, cfg.out)
        if plot_data and records:
            write_plot_data(records, plot_data)
    except UsageError as exc:
        print(f"anyonsweep: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SweepError, ValueError, OSError) as exc:
        print(f"anyonsweep: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return 0


__all__ = ["main", "build_parser", "resolve", "read_config", "RECORD_FIELDS"]

if __name__ == "__main__":
    sys.exit(main())
