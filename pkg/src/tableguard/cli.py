"""Command-line entry point: obfuscate | bench | metrics | serve.

Documents (.txt) go through the document engine; tables (.csv/.jsonl)
through the tabular pipeline. A run summary is emitted as JSON on stderr;
stdout carries the payload (or a human table unless --json asks for
machine-parseable output, never both). Exit codes: 0 success, 2 usage,
3 policy gap, 4 I/O or parse failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import bench as bench_mod
from . import service as service_mod
from .engine import information_entropy, load_policy, obfuscate_document
from .errors import ParseError, PolicyGap, TableGuardError
from .gazetteer import bundled_gazetteer_path, load_gazetteer
from .recognize import recognize_with
from .tabular import k_anonymity, load_dictionary, load_table, obfuscate_table, utility_report, write_table

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_POLICY_GAP = 3
EXIT_IO = 4


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tableguard",
        description="Deterministic, policy-driven PII obfuscation for documents and tables.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    ob = sub.add_parser("obfuscate", help="obfuscate a document or table")
    ob.add_argument("--input", required=True, help=".txt document or .csv/.jsonl table")
    ob.add_argument("--policy", required=True, help="policy JSON file")
    ob.add_argument("--dictionary", help="data dictionary JSON (tables)")
    ob.add_argument("--output", help="output path (default: stdout)")
    ob.add_argument("--export-ledger", help="write the surrogate ledger as JSON lines")
    ob.add_argument("--seed", type=int, help="override the policy seed (u64)")
    ob.add_argument("--gazetteer", help="gazetteer TSV (default: bundled, or TABLEGUARD_GAZETTEER)")
    ob.add_argument("--threads", type=int, default=1, help="worker threads for table rows")

    be = sub.add_parser("bench", help="load-time benchmark on synthetic tables")
    be.add_argument("--rows", default="100,1000,10000", help="comma-separated ascending row counts")
    be.add_argument("--trials", type=int, default=3, help="trials per row count (median reported)")
    be.add_argument("--seed", type=int, default=42)
    be.add_argument("--csv", help="also write the timing table as CSV")
    be.add_argument("--json", action="store_true", help="machine-parseable stdout")
    be.add_argument("--gazetteer")
    be.add_argument("--threads", type=int, default=1)

    me = sub.add_parser("metrics", help="privacy/utility metrics for a table pair")
    me.add_argument("--original", required=True)
    me.add_argument("--obfuscated", required=True)
    me.add_argument("--dictionary", required=True)
    me.add_argument("--json", action="store_true", help="accepted for symmetry; output is JSON")

    se = sub.add_parser("serve", help="HTTP service returning only obfuscated rows")
    se.add_argument("--input", required=True, help="table to serve")
    se.add_argument("--dictionary", required=True)
    se.add_argument("--policy", required=True)
    se.add_argument("--bind", default="127.0.0.1:8470", help="host:port")
    se.add_argument("--gazetteer")
    return parser


def _gazetteer_from(args):
    path = Path(args.gazetteer) if getattr(args, "gazetteer", None) else bundled_gazetteer_path()
    return load_gazetteer(path)


def _cmd_obfuscate(args) -> int:
    policy = load_policy(args.policy)
    if args.seed is not None:
        policy = policy.with_seed(args.seed)
    gazetteer = _gazetteer_from(args)
    suffix = Path(args.input).suffix.lower()

    if suffix == ".txt":
        text = Path(args.input).read_text(encoding="utf-8")
        spans, _ = recognize_with(policy.recognizer, text, gazetteer)
        result = obfuscate_document(text, policy, gazetteer)
        ledger = result.ledger
        summary = {
            "mode": "document",
            "spans_found": len(spans),
            "replaced": len(result.replacements),
            "residual": len(result.residual_scan),
            "ledger_entries": len(ledger),
        }
        payload = result.text
    elif suffix in (".csv", ".jsonl"):
        dictionary = load_dictionary(args.dictionary) if args.dictionary else None
        table = load_table(args.input, dictionary)
        obfuscated, ledger = obfuscate_table(table, policy, gazetteer, threads=args.threads)
        changed = sum(
            1
            for before, after in zip(table.rows, obfuscated.rows)
            for b, a in zip(before, after)
            if b != a
        )
        summary = {
            "mode": "table",
            "rows": len(obfuscated.rows),
            "cells_replaced": changed,
            "duplicates_removed": table.duplicates_removed,
            "missing_values": table.missing_values,
            "ledger_entries": len(ledger),
        }
        if args.output:
            write_table(obfuscated, args.output)
            payload = None
        else:
            import io

            buf = io.StringIO()
            if obfuscated.source_format == "jsonl":
                for row in obfuscated.rows:
                    buf.write(json.dumps(dict(zip(obfuscated.columns, row))) + "\n")
            else:
                import csv as _csv

                writer = _csv.writer(buf)
                writer.writerow(obfuscated.columns)
                for row in obfuscated.rows:
                    writer.writerow(["" if v is None else v for v in row])
            payload = buf.getvalue()
    else:
        print(f"unsupported input type {suffix!r}; expected .txt, .csv, or .jsonl", file=sys.stderr)
        return EXIT_USAGE

    if args.export_ledger:
        ledger.export(args.export_ledger)
    if payload is not None:
        if args.output:
            Path(args.output).write_text(payload, encoding="utf-8")
        else:
            sys.stdout.write(payload)
    print(json.dumps(summary), file=sys.stderr)
    return EXIT_OK


def _cmd_bench(args) -> int:
    try:
        row_counts = [int(x) for x in args.rows.split(",") if x.strip()]
    except ValueError:
        print(f"bad --rows value {args.rows!r}", file=sys.stderr)
        return EXIT_USAGE
    if not row_counts or sorted(row_counts) != row_counts:
        print("--rows must be an ascending, non-empty list", file=sys.stderr)
        return EXIT_USAGE
    gaz_path = Path(args.gazetteer) if args.gazetteer else bundled_gazetteer_path()
    report = bench_mod.run_bench(row_counts, args.trials, args.seed, gaz_path, threads=args.threads)
    if args.csv:
        report.write_csv(args.csv)
    if args.json:
        print(json.dumps(report.to_dict()))
    else:
        print(report.to_text())
    return EXIT_OK


def _cmd_metrics(args) -> int:
    dictionary = load_dictionary(args.dictionary)
    original = load_table(args.original, dictionary)
    obfuscated = load_table(args.obfuscated, dictionary)
    qi_columns = dictionary.quasi_identifier_columns()
    numeric_columns = [c.name for c in dictionary.columns if c.kind == "numeric"]
    report = {
        "quasi_identifier_columns": qi_columns,
        "k_anonymity_original": k_anonymity(original, qi_columns) if qi_columns else None,
        "k_anonymity_obfuscated": k_anonymity(obfuscated, qi_columns) if qi_columns else None,
        "entropy_bits": {
            name: {
                "original": information_entropy(
                    ["" if v is None else str(v) for v in original.column_values(name)]
                ),
                "obfuscated": information_entropy(
                    ["" if v is None else str(v) for v in obfuscated.column_values(name)]
                ),
            }
            for name in original.columns
        },
        "utility": utility_report(original, obfuscated, numeric_columns).to_dict(),
    }
    print(json.dumps(report))
    return EXIT_OK


def _cmd_serve(args) -> int:
    gazetteer = _gazetteer_from(args)
    service_mod.serve(args.input, args.dictionary, args.policy, bind=args.bind, gazetteer=gazetteer)
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handler = {
        "obfuscate": _cmd_obfuscate,
        "bench": _cmd_bench,
        "metrics": _cmd_metrics,
        "serve": _cmd_serve,
    }[args.command]
    try:
        return handler(args)
    except PolicyGap as exc:
        print(f"policy gap: {exc}", file=sys.stderr)
        return EXIT_POLICY_GAP
    except (OSError, ParseError, json.JSONDecodeError) as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except TableGuardError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
