"""Command line front end: `fermat-k3 verify ...` and `fermat-k3 list`."""

from __future__ import annotations

import argparse
import json
import sys

from .checks import REGISTRY, UnknownCheck, list_checks, run_checks, section_of

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def to_json(results):
    return json.dumps([r.as_dict() for r in results], indent=2, sort_keys=True) + "\n"


def to_markdown(results):
    lines = ["# Verification report", ""]
    passed = sum(r.status == "pass" for r in results)
    lines += [f"{passed} of {len(results)} checks passed.", ""]
    order = []
    for c in REGISTRY:
        if c.section not in order:
            order.append(c.section)
    for section in order:
        rows = [r for r in results if section_of(r.id) == section]
        if not rows:
            continue
        lines += [f"## {section}", "", "| id | status | citation | detail |", "|---|---|---|---|"]
        for r in rows:
            detail = r.detail.replace("|", "\\|")
            lines.append(f"| {r.id} | {r.status} | {r.citation} | {detail} |")
        lines.append("")
    return "\n".join(lines)


def build_parser():
    parser = argparse.ArgumentParser(prog="fermat-k3", description="Exact verification checks.")
    sub = parser.add_subparsers(dest="command", required=True)
    v = sub.add_parser("verify", help="run checks")
    group = v.add_mutually_exclusive_group(required=True)
    group.add_argument("--all", action="store_true", help="run every registered check")
    group.add_argument("--check", nargs="+", metavar="ID", help="run the named checks")
    v.add_argument("--format", choices=("json", "markdown"), default="json")
    v.add_argument("--out", help="write the report here instead of stdout")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--cache", metavar="DIR", help="cache directory for the Golay code and M24 chain")
    v.add_argument("--timings", action="store_true", help="record elapsed milliseconds")
    sub.add_parser("list", help="list check ids and citations")
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if args.command == "list":
        for cid, citation in list_checks():
            print(f"{cid}\t{citation}")
        return EXIT_OK
    try:
        results = run_checks(None if args.all else args.check, args.seed, args.cache, args.timings)
    except UnknownCheck as exc:
        print(f"unknown check id: {exc.args[0]}", file=sys.stderr)
        return EXIT_USAGE
    text = to_json(results) if args.format == "json" else to_markdown(results)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if all(r.status == "pass" for r in results) else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
