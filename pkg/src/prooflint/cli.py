"""Command line interface: lint, doc-json, doc-html, stats."""

from __future__ import annotations

import argparse
import json
import os
import sys
from collections import Counter
from pathlib import Path

from . import docgen, framework
from .corpus import CorpusError, load_corpus

EXIT_OK = 0
EXIT_FINDINGS = 1
EXIT_ERROR = 2


def _default_jobs() -> int:
    raw = os.environ.get("PROOFLINT_JOBS")
    if raw is None:
        return 1
    try:
        jobs = int(raw)
    except ValueError:
        raise SystemExit(f"error: PROOFLINT_JOBS must be an integer, got {raw!r}")
    if jobs < 1:
        raise SystemExit("error: PROOFLINT_JOBS must be at least 1")
    return jobs


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="prooflint",
        description="Semantic linters and documentation generator for "
                    "exported proof-library corpora.")
    sub = parser.add_subparsers(dest="command", required=True)

    lint = sub.add_parser("lint", help="run the linters over a corpus")
    lint.add_argument("corpus", help="path to a .pcorpus file")
    scope = lint.add_mutually_exclusive_group()
    scope.add_argument("--module", metavar="FILE",
                       help="only check declarations from this source file")
    scope.add_argument("--upto", metavar="FILE:LINE",
                       help="only check declarations from FILE up to LINE")
    lint.add_argument("--only", metavar="L1,L2",
                      help="comma-separated list of linter names to run")
    lint.add_argument("--no-respect-nolint", action="store_true",
                      help="report findings even on declarations that "
                           "suppress a linter")
    lint.add_argument("--jobs", type=int, default=None, metavar="N",
                      help="worker threads (default: $PROOFLINT_JOBS or 1)")

    dj = sub.add_parser("doc-json", help="emit the documentation database")
    dj.add_argument("corpus", help="path to a .pcorpus file")
    dj.add_argument("-o", "--output", required=True, metavar="FILE")

    dh = sub.add_parser("doc-html", help="emit the static documentation site")
    dh.add_argument("source", help="path to a .pcorpus file or a db.json")
    dh.add_argument("-o", "--output", required=True, metavar="DIR")

    st = sub.add_parser("stats", help="summarize a corpus")
    st.add_argument("corpus", help="path to a .pcorpus file")
    st.add_argument("--include-auto", action="store_true",
                    help="count auto-generated declarations too")
    return parser


def _cmd_lint(args) -> int:
    env = load_corpus(args.corpus)
    if args.upto is not None:
        file, sep, line = args.upto.rpartition(":")
        if not sep or not line.isdigit():
            print("error: --upto expects FILE:LINE", file=sys.stderr)
            return EXIT_ERROR
        scope = framework.UpToLineScope(file, int(line))
    elif args.module is not None:
        scope = framework.FileScope(args.module)
    else:
        scope = framework.AllScope()
    only = args.only.split(",") if args.only else None
    jobs = args.jobs if args.jobs is not None else _default_jobs()
    if jobs < 1:
        print("error: --jobs must be at least 1", file=sys.stderr)
        return EXIT_ERROR
    try:
        report = framework.run_linters(
            env, scope=scope, only=only,
            respect_nolint=not args.no_respect_nolint, jobs=jobs)
    except (framework.UnknownLinter, framework.UnknownFile) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR
    sys.stdout.write(framework.format_report(report))
    return EXIT_FINDINGS if report.total_findings else EXIT_OK


def _cmd_doc_json(args) -> int:
    env = load_corpus(args.corpus)
    warnings: list[str] = []
    db = docgen.build_doc_database(env, warnings)
    for w in warnings:
        print(f"warning: {w}", file=sys.stderr)
    try:
        Path(args.output).write_bytes(docgen.emit_json(db))
    except OSError as e:
        print(f"error: cannot write {args.output}: {e}", file=sys.stderr)
        return EXIT_ERROR
    return EXIT_OK


def _looks_like_db(path: str) -> bool:
    # a doc database is one JSON object starting with '{'; a corpus line
    # always starts with '{' too, but the database has no newline-delimited
    # structure and its first key set is the database schema
    try:
        with open(path, "rb") as fh:
            first = fh.readline().strip()
        obj = json.loads(first)
    except (OSError, ValueError):
        return False
    return isinstance(obj, dict) and set(obj) == {"modules", "tactic_docs",
                                                  "notes", "index"}


def _cmd_doc_html(args) -> int:
    warnings: list[str] = []
    if _looks_like_db(args.source):
        with open(args.source, "rb") as fh:
            db = json.load(fh)
    else:
        env = load_corpus(args.source)
        db = docgen.build_doc_database(env, warnings)
    for w in warnings:
        print(f"warning: {w}", file=sys.stderr)
    try:
        docgen.emit_html(db, args.output)
    except docgen.IoFailure as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR
    return EXIT_OK


def _cmd_stats(args) -> int:
    env = load_corpus(args.corpus)
    decls = [d for d in env.declarations
             if args.include_auto or not d.is_auto_generated]
    kinds = Counter(d.kind.value for d in decls)
    with_doc = sum(1 for d in decls if d.doc_string is not None)
    simp = sum(1 for d in decls if d.has_attr("simp"))
    instances = sum(1 for d in decls if d.has_attr("instance"))
    classes = sum(1 for d in decls if d.has_attr("class"))
    files = sorted({d.file for d in decls})
    print(f"declarations: {len(decls)}")
    for kind in sorted(kinds):
        print(f"  {kind}: {kinds[kind]}")
    print(f"documented: {with_doc}")
    print(f"simp lemmas: {simp}")
    print(f"classes: {classes}")
    print(f"instances: {instances}")
    print(f"notations: {len(env.notations)}")
    print(f"tactic doc entries: {len(env.tactic_docs)}")
    print(f"library notes: {len(env.notes)}")
    print(f"files: {len(files)}")
    for f in files:
        print(f"  {f}")
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {"lint": _cmd_lint, "doc-json": _cmd_doc_json,
                "doc-html": _cmd_doc_html, "stats": _cmd_stats}
    try:
        return handlers[args.command](args)
    except FileNotFoundError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR
    except CorpusError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
