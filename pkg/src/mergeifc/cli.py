"""Command line entry point: ``mergeifc analyze|corpus|compare``."""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from .errors import SchemaError
from .graph.config import AnalysisConfig, Precision
from .harness import (
    CSV_COLUMNS, DEFAULT_TIME_LIMIT, MATRICES, analyze_scenario, compare_configs, detail_json,
    format_comparison, run_corpus, write_csv,
)

EXIT_OK, EXIT_USAGE, EXIT_IO = 0, 2, 3

log = logging.getLogger("mergeifc")


def _positive(text: str) -> int:
    n = int(text)
    if n <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return n


def _seconds(text: str) -> float:
    x = float(text)
    if x <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return x


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="mergeifc", description=__doc__)
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="analyze one merge scenario")
    a.add_argument("--base", required=True, type=Path)
    a.add_argument("--left", required=True, type=Path)
    a.add_argument("--right", required=True, type=Path)
    a.add_argument("--exceptions", choices=("on", "off"), default="off")
    a.add_argument("--call-graph", choices=("type", "instance"), default="instance")
    a.add_argument("--node-limit", type=_positive, default=AnalysisConfig.node_limit)
    a.add_argument("--edge-limit", type=_positive, default=AnalysisConfig.edge_limit)
    a.add_argument("--time-limit-secs", type=_seconds, default=DEFAULT_TIME_LIMIT)
    a.add_argument("--dump-sdg", type=Path, metavar="P", help="write the SDG in DOT format")
    a.add_argument("--json", type=Path, metavar="P", help="write the detail report as JSON")
    a.add_argument("--emit-merged", type=Path, metavar="P", help="write the merged program")
    a.add_argument("--timings", action="store_true", help="fill in elapsed_ms")

    c = sub.add_parser("corpus", help="analyze every scenario directory under ROOT")
    c.add_argument("root", type=Path, metavar="ROOT")
    c.add_argument("--matrix", choices=sorted(MATRICES), default="default")
    c.add_argument("--out", type=Path, help="CSV path (default: stdout)")
    c.add_argument("--summary", type=Path, help="write per-config summary JSON")
    c.add_argument("--jobs", type=_positive, default=1)
    c.add_argument("--time-limit-secs", type=_seconds, default=DEFAULT_TIME_LIMIT)
    c.add_argument("--node-limit", type=_positive, default=AnalysisConfig.node_limit)
    c.add_argument("--edge-limit", type=_positive, default=AnalysisConfig.edge_limit)
    c.add_argument("--timings", action="store_true", help="fill in elapsed_ms")

    k = sub.add_parser("compare", help="compare configs in a corpus CSV")
    k.add_argument("csv", type=Path, metavar="report.csv")
    return ap


def _analyze(args) -> int:
    try:
        texts = tuple(p.read_text(encoding="utf-8") for p in (args.base, args.left, args.right))
    except OSError as exc:
        print(f"mergeifc: {exc}", file=sys.stderr)
        return EXIT_IO
    config = AnalysisConfig(
        exceptions=args.exceptions == "on",
        precision=Precision.TYPE_BASED if args.call_graph == "type" else Precision.INSTANCE_BASED,
        node_limit=args.node_limit, edge_limit=args.edge_limit)
    name = args.base.resolve().parent.name or "scenario"
    res = analyze_scenario(name, config, time_limit=args.time_limit_secs,
                           timings=args.timings, texts=texts)
    print(",".join(CSV_COLUMNS))
    print(",".join(res.report.row()))
    for m in res.detail.get("methods", ()):
        print(f"{m['method']}: {m['status']}")
        for f in m["findings"]:
            where = f" target {f['target_line']}" if "target_line" in f else ""
            print(f"  {f['direction']} {f['source_line']} -> {f['sink_line']}{where}")
    if "error" in res.detail:
        print(f"mergeifc: {res.detail['error']}", file=sys.stderr)
    try:
        if args.emit_merged and "merged_text" in res.detail:
            args.emit_merged.write_text(res.detail["merged_text"], encoding="utf-8")
        if args.dump_sdg:
            if "sdg" in res.detail:
                args.dump_sdg.write_text(res.detail["sdg"].to_dot(), encoding="utf-8")
            else:
                print("mergeifc: no SDG was built, nothing to dump", file=sys.stderr)
        if args.json:
            args.json.write_text(detail_json(res.detail), encoding="utf-8")
    except OSError as exc:
        print(f"mergeifc: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def _corpus(args) -> int:
    try:
        result = run_corpus(args.root, args.matrix, jobs=args.jobs, time_limit=args.time_limit_secs,
                            timings=args.timings, node_limit=args.node_limit,
                            edge_limit=args.edge_limit)
        text = write_csv(result.reports, args.out)
        if args.out is None:
            sys.stdout.write(text)
        if args.summary:
            args.summary.write_text(json.dumps(result.summary, indent=2, sort_keys=True) + "\n",
                                    encoding="utf-8")
    except OSError as exc:
        print(f"mergeifc: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def _compare(args) -> int:
    try:
        rows = compare_configs(args.csv)
    except (OSError, SchemaError) as exc:
        print(f"mergeifc: {exc}", file=sys.stderr)
        return EXIT_IO
    sys.stdout.write(format_comparison(rows))
    return EXIT_OK


def main(argv=None) -> int:
    # reserved for fuzz tooling; the pipeline itself is deterministic
    os.environ.get("MERGEIFC_SEED")
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    return {"analyze": _analyze, "corpus": _corpus, "compare": _compare}[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
