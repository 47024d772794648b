"""Command-line entry point: ``archslicer detect|slice|eval``."""

from __future__ import annotations

import argparse
import dataclasses
import logging
import os
import sys
from typing import Optional, Sequence

from .analysis import Analyzer
from .config import ConfigError, ToolConfig, load_config
from .detect import STRICT
from .report import (COMMIT, SLICE, TABLE_HEADER, SchemaError, evaluate_documents,
                     format_row, load_documents, write_document)
from .slices import render_slice_text
from .vcs import VcsError

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_USAGE = 2

logger = logging.getLogger("archslicer")


def _config(args) -> ToolConfig:
    config = load_config(args.config) if args.config else ToolConfig()
    if getattr(args, "strict_ambiguity", False):
        config = dataclasses.replace(config, ambiguity_mode=STRICT)
    return config


def cmd_detect(args, out) -> int:
    config = _config(args)
    total = m2m = 0
    with Analyzer(args.repo, config) as analyzer:
        for commit_id in analyzer.commits(args.range, args.since, args.until):
            candidate, verdict, _ = analyzer.analyze(commit_id, with_slices=False)
            if not candidate:
                continue
            total += 1
            m2m += verdict.is_m2m
            criteria = ",".join(verdict.criteria) or "-"
            flag = "M2M" if verdict.is_m2m else "non-M2M"
            print(f"{commit_id} {flag} {criteria}", file=out)
    print(f"{m2m}/{total} M2M", file=out)
    return EXIT_OK


def cmd_slice(args, out) -> int:
    config = _config(args)
    with Analyzer(args.repo, config) as analyzer:
        commit_id = analyzer.repo.resolve(args.commit)
        _, _, doc = analyzer.analyze(commit_id)
    path = write_document(doc, args.out)
    for record in doc.slices:
        print(render_slice_text(record, config.alias_map), file=out)
    logger.info("wrote %s", path)
    return EXIT_OK


def cmd_eval(args, out) -> int:
    predicted = load_documents(args.pred)
    truth = load_documents(args.truth)
    granularity = COMMIT if args.granularity == "commit" else SLICE
    report = evaluate_documents(predicted, truth, granularity)
    project = os.path.basename(os.path.normpath(args.truth))
    print(TABLE_HEADER, file=out)
    print(format_row(project, report), file=out)
    print(f"TP={report.true_positives} FP={report.false_positives} "
          f"FN={report.false_negatives}", file=out)
    for item in report.missing:
        print(f"missing: {item}", file=out)
    for item in report.spurious:
        print(f"spurious: {item}", file=out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="archslicer",
        description="Detect module-level architectural changes in JPMS repositories "
                    "and slice them into structural relations.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log diagnostics to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("detect", help="classify commits as M2M or not")
    p.add_argument("repo")
    p.add_argument("--range", help="revision range, e.g. A..B (default: all refs)")
    p.add_argument("--since", help="only commits after this date")
    p.add_argument("--until", help="only commits before this date")
    p.add_argument("--config", help="YAML tool configuration")
    p.add_argument("--strict-ambiguity", action="store_true",
                   help="ignore dependencies whose owning module is ambiguous")
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("slice", help="write the slice document of one commit")
    p.add_argument("repo")
    p.add_argument("commit")
    p.add_argument("--out", default=".", help="output directory (default: current)")
    p.add_argument("--config", help="YAML tool configuration")
    p.set_defaults(func=cmd_slice)

    p = sub.add_parser("eval", help="precision/recall of predicted against truth documents")
    p.add_argument("--pred", required=True, help="directory of predicted YAML documents")
    p.add_argument("--truth", required=True, help="directory of ground-truth YAML documents")
    p.add_argument("--granularity", choices=("slice", "commit"), default="slice")
    p.set_defaults(func=cmd_eval)
    return parser


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.ERROR,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args, out)
    except (VcsError, ConfigError, SchemaError, OSError) as exc:
        print(f"archslicer: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
