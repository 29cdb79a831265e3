"""Command line entry point: ``cordial {label,verify,scan,tables-check,dot}``."""
from __future__ import annotations

import argparse
import os
import sys
import time
from pathlib import Path
from typing import Sequence

from .io import (ParseError, RunReport, export_dot, format_labeling, parse_labeling, read_tree, scan_csv,
                 scan_json)
from .labeling import LabelingError, verify_cordial
from .oracle import CapExceeded, CheckpointCorrupt, backtrack_k_cordial, random_tree, scan
from .tables import TranscriptionError, parse_tables, validate_all
from .tree import Tree

CHECKPOINT_ENV = "CORDIAL_CHECKPOINT_DIR"


class UnsupportedK(ValueError):
    pass


def _write(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _load_tree(args: argparse.Namespace) -> tuple[Tree, str, list[str] | None]:
    if getattr(args, "random", None) is not None:
        return random_tree(args.random, args.seed), f"random(n={args.random}, seed={args.seed})", None
    if args.input is None:
        raise ParseError("give a tree file or --random N")
    text = sys.stdin.read() if args.input == "-" else Path(args.input).read_text()
    t, names = read_tree(text, args.format)
    return t, args.input, names


# ------------------------------------------------------------------ commands


def cmd_label(args: argparse.Namespace) -> int:
    t, source, names = _load_tree(args)
    t0 = time.perf_counter()
    trace: dict[str, int] = {}
    instances: list[str] = []
    if args.method == "constructive":
        if args.k != 6:
            raise UnsupportedK(f"the constructive method labels with k=6 only, got k={args.k}")
        from .builder import label_six_cordial

        f, tr = label_six_cordial(t)
        trace = tr.strategies()
        instances = [s.instance for s in tr.steps if s.strategy == "Fallback"]
    else:
        res = backtrack_k_cordial(t, args.k, step_limit=args.step_limit)
        if res.labeling is None:
            print(f"no {args.k}-cordial labeling found ({'exhausted' if res.exhausted else 'step limit'})",
                  file=sys.stderr)
            return 1
        f = res.labeling
        trace = {"search_steps": res.steps}
    seconds = time.perf_counter() - t0 if args.timing else None
    rep = RunReport.build(source, t, f, args.method, trace, instances, seconds, names)
    _write(rep.to_json(), args.out)
    if args.labeling_out:
        Path(args.labeling_out).write_text(format_labeling(f))
    return 0 if rep.cordial else 1


def cmd_verify(args: argparse.Namespace) -> int:
    t, source, names = _load_tree(args)
    f = parse_labeling(Path(args.labeling).read_text(), t.n, args.k)
    rep = RunReport.build(source, t, f, "verify", names=names)
    _write(rep.to_json(), args.out)
    if not rep.cordial:
        for v in verify_cordial(t, f).violations:
            print(f"{v.kind} {v.a} ({v.count_a}) vs {v.b} ({v.count_b})", file=sys.stderr)
    return 0 if rep.cordial else 1


def _checkpoint_path(args: argparse.Namespace) -> str | None:
    if args.checkpoint:
        return args.checkpoint
    root = os.environ.get(CHECKPOINT_ENV)
    if root:
        Path(root).mkdir(parents=True, exist_ok=True)
        return str(Path(root) / f"scan-k{args.k}-{args.method}.ckpt")
    return None


def cmd_scan(args: argparse.Namespace) -> int:
    if args.method == "constructive" and args.k != 6:
        raise UnsupportedK(f"the constructive method labels with k=6 only, got k={args.k}")
    rep = scan(args.k, args.max_n, args.min_n, args.method, _checkpoint_path(args), timing=args.timing,
               jobs=args.jobs)
    if args.out:
        Path(f"{args.out}.csv").write_text(scan_csv(rep))
        Path(f"{args.out}.json").write_text(scan_json(rep))
    else:
        sys.stdout.write(scan_csv(rep))
    return 0 if not rep.unsat and rep.counts_match() else 1


def cmd_tables_check(args: argparse.Namespace) -> int:
    entries = parse_tables(Path(args.table).read_text()) if args.table else None
    rep = validate_all(entries, strict=args.strict)
    for line in rep.lines():
        print(line)
    return 0 if rep.ok else 1


def cmd_dot(args: argparse.Namespace) -> int:
    t, _, _ = _load_tree(args)
    f = parse_labeling(Path(args.labeling).read_text(), t.n, args.k) if args.labeling else None
    _write(export_dot(t, f), args.out)
    return 0


# ------------------------------------------------------------------ parser


def _tree_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("input", nargs="?", help="tree file ('-' for stdin)")
    p.add_argument("--format", choices=("edges", "graph6"), default="edges")
    p.add_argument("--random", type=int, metavar="N", help="use a random tree on N vertices instead of a file")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--k", type=int, default=6)
    p.add_argument("--out", help="output file (default stdout)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cordial", description="k-cordial labelings of trees")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("label", help="label a tree and write a JSON report")
    _tree_args(p)
    p.add_argument("--method", choices=("constructive", "search"), default="constructive")
    p.add_argument("--labeling-out", help="also write 'vertex label' lines here")
    p.add_argument("--step-limit", type=int, default=0, help="search budget (0 = unbounded)")
    p.add_argument("--timing", action="store_true", help="record wall time in the report")
    p.set_defaults(func=cmd_label)

    p = sub.add_parser("verify", help="check a labeling file against a tree")
    _tree_args(p)
    p.add_argument("labeling")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("scan", help="check every free tree up to --max-n")
    p.add_argument("--k", type=int, default=6)
    p.add_argument("--max-n", type=int, required=True)
    p.add_argument("--min-n", type=int, default=1)
    p.add_argument("--method", choices=("constructive", "search"), default="search")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--checkpoint", help=f"resumable checkpoint file (default under ${CHECKPOINT_ENV})")
    p.add_argument("--out", help="write OUT.csv and OUT.json instead of CSV on stdout")
    p.add_argument("--timing", action="store_true", help="add per-size wall times")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("tables-check", help="recompute every transcribed table entry")
    p.add_argument("--table", help="table file to check instead of the shipped one")
    p.add_argument("--strict", action="store_true", help="stop at the first bad entry")
    p.set_defaults(func=cmd_tables_check)

    p = sub.add_parser("dot", help="Graphviz export, annotated when a labeling is given")
    _tree_args(p)
    p.add_argument("--labeling")
    p.set_defaults(func=cmd_dot)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, LabelingError, UnsupportedK, CapExceeded, CheckpointCorrupt, TranscriptionError,
            FileNotFoundError) as exc:
        print(f"cordial: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
