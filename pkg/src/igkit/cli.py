"""Command-line interface: ``igkit <command> ...``.

Exit status: 0 success, 1 validation or parse errors, 2 usage or I/O errors.
Set ``IGKIT_NO_COLOR`` to disable ANSI styling.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from .corpus import export_records, load_manifest, preprocess, stats
from .errors import IgkitError
from .model import Severity
from .notation import SourceRecord, parse_document, serialize, serialize_document
from .profiles import FEATURE_NAMES, format_profile, parse_profile, sorted_features
from .taxonomy import load_builtin
from .transforms import decompose_combinations, flatten_vertical, project
from .validator import validate_record

EXIT_OK, EXIT_INVALID, EXIT_USAGE = 0, 1, 2

_COLORS = {Severity.ERROR: "31", Severity.WARNING: "33", Severity.INFO: "36"}


class UsageError(Exception):
    pass


def _color(text: str, severity: Severity, stream) -> str:
    if os.environ.get("IGKIT_NO_COLOR") is not None or not stream.isatty():
        return text
    return f"\033[{_COLORS[severity]}m{text}\033[0m"


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc


def _load_documents(paths: Sequence[str]) -> list[tuple[str, list[SourceRecord]]]:
    texts = [(p, _read(p)) for p in paths]
    with ThreadPoolExecutor() as pool:
        parsed = list(pool.map(lambda item: parse_document(item[1]), texts))
    return [(p, recs) for (p, _), recs in zip(texts, parsed)]


def _resolve(args) -> tuple[list[str], Optional[object], list[str]]:
    documents = list(args.files)
    profile = None
    taxonomies = list(getattr(args, "taxonomy", None) or [])
    if getattr(args, "manifest", None):
        manifest = load_manifest(args.manifest)
        documents += [str(p) for p in manifest.documents]
        taxonomies = [str(p) for p in manifest.taxonomies] + taxonomies
        profile = manifest.profile
    if getattr(args, "profile", None):
        profile = parse_profile(args.profile)
    if not documents:
        raise UsageError("no input documents (give files or --manifest)")
    return documents, profile, taxonomies


def _report_parse_errors(docs, err) -> bool:
    bad = False
    for path, records in docs:
        for rec in records:
            for d in rec.diagnostics:
                if d.severity == Severity.ERROR:
                    bad = True
                    print(_color(f"{path}:{d}", d.severity, err), file=err)
    return bad


def _emit(text: str, output: Optional[str], out) -> None:
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        out.write(text)


def _records_text(docs, transform=None) -> str:
    chunks = []
    for path, records in docs:
        if transform is not None:
            records = [
                SourceRecord(r.id, r.raw, transform(r.parsed), r.diagnostics) if r.parsed is not None else r
                for r in records
            ]
        body = serialize_document(records)
        chunks.append(f"# {path}\n{body}" if len(docs) > 1 else body)
    return "\n".join(chunks)


# -- commands -------------------------------------------------------------------


def cmd_parse(args, out, err) -> int:
    docs = _load_documents(args.files)
    bad = _report_parse_errors(docs, err)
    if args.format == "tree":
        records = [r for _, recs in docs for r in recs]
        _emit(export_records(records), args.output, out)
    else:
        _emit(_records_text(docs), args.output, out)
    return EXIT_INVALID if bad else EXIT_OK


def cmd_validate(args, out, err) -> int:
    paths, profile, taxonomy_paths = _resolve(args)
    registry = load_builtin()
    for tpath in taxonomy_paths:
        registry = registry.merge(tpath)
    docs = _load_documents(paths)
    failed = False
    results = []
    for path, records in docs:
        for rec in records:
            report = validate_record(rec, registry, profile, args.strict)
            failed = failed or not report.passed(args.strict)
            results.append((path, report))
    if args.format == "json":
        payload = [
            {
                "document": path, "id": rep.statement_id,
                "kind": rep.kind.value if rep.kind else None,
                "features": sorted_features(rep.feature_usage),
                "diagnostics": [
                    {"severity": d.severity.value, "code": d.code, "message": d.message}
                    for d in rep.diagnostics
                ],
            }
            for path, rep in results
        ]
        out.write(json.dumps(payload, indent=2, ensure_ascii=False) + "\n")
    else:
        shown = {Severity.ERROR, Severity.WARNING} | ({Severity.INFO} if args.verbose else set())
        for path, rep in results:
            for d in rep.diagnostics:
                if d.severity in shown:
                    print(_color(f"{path}:{d}", d.severity, out), file=out)
        n_err = sum(len(rep.errors) for _, rep in results)
        n_warn = sum(len(rep.warnings) for _, rep in results)
        label = f" under {format_profile(profile)}" if profile else ""
        print(f"{len(results)} records checked{label}: {n_err} errors, {n_warn} warnings", file=out)
    return EXIT_INVALID if failed else EXIT_OK


def cmd_decompose(args, out, err) -> int:
    docs = _load_documents(args.files)
    if _report_parse_errors(docs, err):
        return EXIT_INVALID
    _emit(_records_text(docs, decompose_combinations), args.output, out)
    return EXIT_OK


def cmd_project(args, out, err) -> int:
    docs = _load_documents(args.files)
    if _report_parse_errors(docs, err):
        return EXIT_INVALID
    _emit(_records_text(docs, lambda s: project(s, args.level)), args.output, out)
    return EXIT_OK


def cmd_flatten(args, out, err) -> int:
    docs = _load_documents(args.files)
    if _report_parse_errors(docs, err):
        return EXIT_INVALID
    for path, records in docs:
        for rec in records:
            if rec.parsed is None:
                continue
            for pair in flatten_vertical(rec.parsed):
                out.write(f"{rec.id}\tdepth {pair.depth}\n")
                out.write(f"  monitored:     {serialize(pair.monitored)}\n")
                out.write(f"  consequential: {serialize(pair.consequential)}\n")
    return EXIT_OK


def cmd_profile(args, out, err) -> int:
    profile = parse_profile(args.expression)
    out.write(f"{format_profile(profile)}\n")
    for feature in sorted_features(profile.expanded):
        out.write(f"  {feature:<9} {FEATURE_NAMES[feature]}\n")
    return EXIT_OK


def cmd_stats(args, out, err) -> int:
    docs = _load_documents(args.files)
    bad = _report_parse_errors(docs, err)
    table = stats(r for _, recs in docs for r in recs)
    data = table.as_dict()
    if args.format == "json":
        out.write(json.dumps(data, indent=2) + "\n")
    else:
        out.write(f"statements: {data['statements']}\n")
        for section in ("components", "implied", "annotations", "verticalDepths", "nestingDepths"):
            if data[section]:
                out.write(f"{section}:\n")
                for key, value in data[section].items():
                    out.write(f"  {key:<24} {value}\n")
    return EXIT_INVALID if bad else EXIT_OK


def cmd_preprocess(args, out, err) -> int:
    sentences = preprocess(_read(args.file))
    _emit("".join(f"{s}\n" for s in sentences), args.output, out)
    return EXIT_OK


def cmd_export(args, out, err) -> int:
    docs = _load_documents(args.files)
    _emit(export_records([r for _, recs in docs for r in recs]), args.output, out)
    return EXIT_INVALID if _report_parse_errors(docs, err) else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="igkit", description="Parse, validate and transform coded policy statements.")
    parser.add_argument("--version", action="version", version=f"igkit {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text, files=True):
        p = sub.add_parser(name, help=help_text)
        if files:
            p.add_argument("files", nargs="+", metavar="FILE", help="coded document(s); '-' reads stdin")
        p.set_defaults(func=func)
        return p

    def output(p):
        p.add_argument("-o", "--output", help="write to this file instead of stdout")

    p = add("parse", cmd_parse, "parse documents and print the canonical form")
    p.add_argument("--format", choices=("shorthand", "tree"), default="shorthand")
    output(p)

    p = add("validate", cmd_validate, "check completeness, annotations and profile conformance", files=False)
    p.add_argument("files", nargs="*", metavar="FILE")
    p.add_argument("--profile", help="profile expression, e.g. 'IG Core+C_Ext'")
    p.add_argument("--taxonomy", action="append", metavar="JSON", help="user taxonomy file (repeatable)")
    p.add_argument("--manifest", metavar="TOML", help="corpus manifest (igkit.toml)")
    p.add_argument("--strict", action="store_true", help="treat warnings as failures")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("-v", "--verbose", action="store_true", help="also print info diagnostics")

    p = add("decompose", cmd_decompose, "expand component-level combinations")
    output(p)

    p = add("project", cmd_project, "project onto a coarser coding level")
    p.add_argument("--level", required=True, choices=("core", "extended", "logico"))
    output(p)

    add("flatten", cmd_flatten, "list monitored/consequential pairs")

    p = add("profile", cmd_profile, "expand a profile expression", files=False)
    p.add_argument("expression")

    p = add("stats", cmd_stats, "component and annotation frequencies")
    p.add_argument("--format", choices=("text", "json"), default="text")

    p = add("preprocess", cmd_preprocess, "split raw text into candidate statements", files=False)
    p.add_argument("file", metavar="FILE")
    output(p)

    p = add("export", cmd_export, "export parsed documents as JSON (schema igkit-1)")
    output(p)
    return parser


def main(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out, err)
    except (UsageError, IgkitError) as exc:
        print(f"igkit: {exc}", file=err)
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
