"""Command-line interface.

Exit codes: 0 success, 1 verification found a label mismatch, 2 bad usage or
configuration.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

from .core import Label, to_dense
from .dimacs import parse_dimacs
from .dist import Bernoulli, ClauseRatioSpec, sample_clause_count
from .errors import CapacityError, SatforgeError
from .mix import OPTION_IDS, default_mix, load_mix
from .oracle import brute_force_sat
from .pipeline import (
    DatasetRecord,
    benchmark_throughput,
    export_dataset,
    generate_records,
    read_labels_tsv,
    read_packed,
)
from .render import Palette, render_image, write_ppm
from .rng import RngState
from .satgen import SatGenConfig, generate_sat
from .unsatgen import UnsatGenConfig, generate_unsat

_BASE_RATIO = ClauseRatioSpec(4.27, 1.0, 2.0, 11.0)


def _sat_records(args):
    option_id = OPTION_IDS["uniform-bias"]
    for i in range(args.count):
        rng = RngState(args.seed, i)
        m = args.m or sample_clause_count(_BASE_RATIO, args.n, rng)
        prob = generate_sat(SatGenConfig(args.n, m), rng)
        yield DatasetRecord(to_dense(prob.cnf), prob.label, option_id, args.seed, i)


def _unsat_records(args):
    depth = None if args.deep else args.depth
    option_id = OPTION_IDS["deep-bloom" if args.deep else "shallow-bloom"]
    down_p = 1.0 if args.deep else 0.5
    for i in range(args.count):
        rng = RngState(args.seed, i)
        m = args.m or sample_clause_count(_BASE_RATIO, args.n, rng)
        cfg = UnsatGenConfig(
            args.n,
            m,
            init_size=min(args.init_size, m // 2) or 1,
            depth=depth,
            down_clause=Bernoulli(down_p),
            record_trace=False,
        )
        prob = generate_unsat(cfg, rng)
        yield DatasetRecord(to_dense(prob.cnf), prob.label, option_id, args.seed, i)


def _cmd_gen_sat(args) -> int:
    export_dataset(_sat_records(args), args.out, args.format, seed=args.seed)
    return 0


def _cmd_gen_unsat(args) -> int:
    export_dataset(_unsat_records(args), args.out, args.format, seed=args.seed)
    return 0


def _cmd_gen_mix(args) -> int:
    mix = load_mix(args.config) if args.config else default_mix()
    if args.max_vars:
        mix = replace(mix, max_vars=args.max_vars)
    seed = args.seed if args.seed is not None else mix.seed
    records = generate_records(mix, args.count, seed=seed, workers=args.workers)
    manifest = export_dataset(records, args.out, args.format, seed=seed, mix=mix)
    print(json.dumps(manifest.to_dict(), indent=2, sort_keys=True))
    return 0


def _cmd_verify(args) -> int:
    directory = Path(args.dir)
    labels_path = Path(args.labels) if args.labels else directory / "labels.tsv"
    if not labels_path.exists():
        print(f"labels file not found: {labels_path}", file=sys.stderr)
        return 2
    rows = read_labels_tsv(labels_path)
    checked = 0
    skipped = 0
    mismatches = []
    for name, label, n, _m in rows:
        if n > args.cap:
            skipped += 1
            continue
        cnf = parse_dimacs((directory / name).read_text(encoding="ascii"))
        result = brute_force_sat(cnf)
        verdict = Label.SAT if result.satisfiable else Label.UNSAT
        checked += 1
        if verdict is not label:
            mismatches.append(name)
    agreement = 100.0 * (checked - len(mismatches)) / checked if checked else 100.0
    print(
        f"checked {checked} of {len(rows)} problems "
        f"({skipped} over the {args.cap}-variable cap): {agreement:.6g}% agreement"
    )
    if mismatches:
        for name in mismatches:
            print(f"MISMATCH {name}", file=sys.stderr)
        return 1
    return 0


def _cmd_bench(args) -> int:
    mix = load_mix(args.config) if args.config else default_mix()
    report = benchmark_throughput(
        mix, args.n, args.m, args.duration, workers=args.workers, seed=args.seed
    )
    print(json.dumps(report.to_dict(), indent=2, sort_keys=True))
    return 0


def _cmd_render(args) -> int:
    cnf = parse_dimacs(Path(args.input).read_text(encoding="ascii"))
    pixels = render_image(to_dense(cnf), Palette(), scale=args.scale)
    write_ppm(pixels, args.out)
    return 0


def _cmd_export(args) -> int:
    src = Path(args.input)
    if src.is_dir():
        rows = read_labels_tsv(src / "labels.tsv")
        records = (
            DatasetRecord(
                to_dense(parse_dimacs((src / name).read_text(encoding="ascii"))),
                label,
                255,  # option unknown after a round-trip through DIMACS
                0,
                i,
            )
            for i, (name, label, _n, _m) in enumerate(rows)
        )
    else:
        entries = read_packed(src)
        records = (
            DatasetRecord(e.encoding, e.label, e.option_id, 0, i)
            for i, e in enumerate(entries)
        )
    export_dataset(records, args.out, args.format, seed=0)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="satforge",
        description="Generate, verify, render, and benchmark labeled CNF datasets.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common_gen(p, default_format):
        p.add_argument("--count", type=int, default=1, help="number of problems")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", required=True, help="output directory or file")
        p.add_argument(
            "--format", choices=("dimacs-dir", "packed"), default=default_format
        )

    p = sub.add_parser("gen-sat", help="generate provably satisfiable problems")
    p.add_argument("--n", type=int, required=True, help="variable count")
    p.add_argument("--m", type=int, default=0, help="clause count (0 = ratio-drawn)")
    add_common_gen(p, "dimacs-dir")
    p.set_defaults(func=_cmd_gen_sat)

    p = sub.add_parser("gen-unsat", help="generate provably unsatisfiable problems")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, default=0)
    p.add_argument("--init-size", type=int, default=1)
    p.add_argument("--depth", type=int, default=3)
    p.add_argument("--deep", action="store_true", help="bloom until the size guard")
    add_common_gen(p, "dimacs-dir")
    p.set_defaults(func=_cmd_gen_unsat)

    p = sub.add_parser("gen-mix", help="sample the full weighted generator mix")
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", required=True)
    p.add_argument("--config", help="mix config JSON (defaults to the built-in)")
    p.add_argument("--max-vars", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument(
        "--format", choices=("dimacs-dir", "packed"), default="packed"
    )
    p.set_defaults(func=_cmd_gen_mix)

    p = sub.add_parser("verify", help="check labels against the exhaustive oracle")
    p.add_argument("dir", help="dimacs-dir dataset directory")
    p.add_argument("--labels", help="labels file (default: <dir>/labels.tsv)")
    p.add_argument("--cap", type=int, default=20, help="skip problems above this n")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("bench", help="measure generation throughput")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--duration", type=float, default=2.0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--config", help="mix config JSON")
    p.set_defaults(func=_cmd_bench)

    p = sub.add_parser("render", help="render a CNF file as a PPM image")
    p.add_argument("input", help="DIMACS .cnf file")
    p.add_argument("--out", required=True, help="output .ppm path")
    p.add_argument("--scale", type=int, default=1, help="pixels per cell")
    p.set_defaults(func=_cmd_render)

    p = sub.add_parser("export", help="convert between packed and dimacs-dir")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=("dimacs-dir", "packed"), required=True)
    p.set_defaults(func=_cmd_export)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (SatforgeError, CapacityError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
