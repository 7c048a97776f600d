"""Command-line interface: profile, synth, apply, serve.

Exit codes: 0 on success, 1 for usage errors, 2 for data errors (unreadable
input, bad pattern or program), 3 when ``apply --strict`` leaves rows
unmatched.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from .patterns import PatternSyntaxError, parse_pattern, render_pattern
from .profiler import build_hierarchy, hierarchy_to_json
from .programs import apply_row, program_dumps, program_from_json
from .sessions import SessionError, SessionStore
from .synthesis import result_to_json, synthesize


class DataError(Exception):
    """Anything wrong with the data handed to a command (exit code 2)."""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # usage problems exit 1, not argparse's 2
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _read_rows(path: str, column: "str | None") -> tuple[list[str], str]:
    """Load one column of rows from a file (or ``-`` for stdin).

    ``.csv`` inputs need a header row; ``--column`` picks one by name,
    otherwise the first column is used.  Any other input is read as plain
    lines.
    """
    if path == "-":
        text = sys.stdin.read()
        is_csv = False
    else:
        p = Path(path)
        try:
            text = p.read_text(encoding="utf-8")
        except OSError as exc:
            raise DataError(f"cannot read {path}: {exc}") from exc
        except UnicodeDecodeError as exc:
            raise DataError(f"{path} is not valid UTF-8: {exc}") from exc
        is_csv = p.suffix.lower() == ".csv"

    if is_csv:
        records = list(csv.reader(text.splitlines()))
        if not records:
            raise DataError(f"{path} has no header row")
        header, *data = records
        if column is not None:
            if column not in header:
                raise DataError(
                    f"{path} has no column {column!r}; columns are {header}"
                )
            idx = header.index(column)
        else:
            if not header:
                raise DataError(f"{path} has an empty header row")
            idx, column = 0, header[0]
        return [rec[idx] if idx < len(rec) else "" for rec in data], column

    return text.splitlines(), column or "column1"


def _write_output(out: "str | None", text: str) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _cmd_profile(args: argparse.Namespace) -> int:
    rows, column = _read_rows(args.input, args.column)
    hierarchy = build_hierarchy(rows)
    if args.json:
        doc = hierarchy_to_json(hierarchy, rows)
        doc.update(column=column, row_count=len(rows))
        print(json.dumps(doc, indent=2))
        return 0

    def show(node, depth: int) -> None:
        print(f"{'  ' * depth}{render_pattern(node.pattern)}  ({node.count})")
        for child in node.children:
            show(child, depth + 1)

    for root in hierarchy.roots:
        show(root, 0)
    if hierarchy.empty_rows:
        print(f"(empty rows: {len(hierarchy.empty_rows)})")
    return 0


def _cmd_synth(args: argparse.Namespace) -> int:
    rows, column = _read_rows(args.input, args.column)
    try:
        target = parse_pattern(args.target)
    except PatternSyntaxError as exc:
        raise DataError(f"bad target pattern: {exc}") from exc
    if args.k < 1:
        raise DataError(f"-k must be at least 1, got {args.k}")
    hierarchy = build_hierarchy(rows)
    result = synthesize(hierarchy, target, args.k)
    if args.out is not None:
        Path(args.out).write_text(
            program_dumps(result.program, target) + "\n", encoding="utf-8"
        )
    doc = result_to_json(result, column=column, rows=rows)
    if args.json:
        print(json.dumps(doc, indent=2))
    else:
        for line in doc["script"]:
            print(line)
        for pattern_text in doc["unmatched"]:
            print(f"no plan for: {pattern_text}", file=sys.stderr)
    return 0


def _cmd_apply(args: argparse.Namespace) -> int:
    rows, column = _read_rows(args.input, args.column)
    try:
        doc = json.loads(Path(args.program).read_text(encoding="utf-8"))
        program, target = program_from_json(doc)
    except OSError as exc:
        raise DataError(f"cannot read {args.program}: {exc}") from exc
    except (ValueError, KeyError, TypeError) as exc:
        raise DataError(f"bad program file {args.program}: {exc}") from exc

    outputs = []
    statuses = []
    counts = {"transformed": 0, "already_conforming": 0, "unmatched": 0}
    for row in rows:
        out, status = apply_row(program, row, target)
        outputs.append(out)
        statuses.append(status)
        counts[status] += 1
    if args.with_status:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow([column, "status"])
        writer.writerows(zip(outputs, statuses))
        _write_output(args.out, buf.getvalue())
    else:
        _write_output(args.out, "".join(line + "\n" for line in outputs))
    print(
        f"transformed {counts['transformed']}, "
        f"already conforming {counts['already_conforming']}, "
        f"unmatched {counts['unmatched']}",
        file=sys.stderr,
    )
    if args.strict and counts["unmatched"]:
        return 3
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    host, _, port_text = args.listen.rpartition(":")
    if not host or not port_text.isdigit():
        raise DataError(f"--listen expects HOST:PORT, got {args.listen!r}")
    import uvicorn

    from .service import create_app

    app = create_app(SessionStore(args.data_dir))
    uvicorn.run(app, host=host, port=int(port_text))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="stringforge", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_input(p: argparse.ArgumentParser) -> None:
        p.add_argument("--input", required=True, help="input file, or - for stdin")
        p.add_argument("--column", help="CSV column to use (default: first)")

    p = sub.add_parser("profile", help="cluster a column into a pattern hierarchy")
    add_input(p)
    p.add_argument("--json", action="store_true", help="emit the hierarchy as JSON")
    p.set_defaults(func=_cmd_profile)

    p = sub.add_parser("synth", help="synthesize a transformation program")
    add_input(p)
    p.add_argument("--target", required=True, help="target pattern, e.g. '<D>3-<D>4'")
    p.add_argument("-k", type=int, default=5, help="alternates to keep per source")
    p.add_argument("--json", action="store_true", help="emit the full result as JSON")
    p.add_argument("--out", help="also write the program JSON to this file")
    p.set_defaults(func=_cmd_synth)

    p = sub.add_parser("apply", help="run a saved program over a column")
    add_input(p)
    p.add_argument("--program", required=True, help="program JSON file")
    p.add_argument("--out", help="write outputs here instead of stdout")
    p.add_argument(
        "--with-status",
        action="store_true",
        help="emit CSV with a status column (matches the service export)",
    )
    p.add_argument(
        "--strict",
        action="store_true",
        help="exit 3 if any row is neither transformed nor already conforming",
    )
    p.set_defaults(func=_cmd_apply)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--listen", default="127.0.0.1:8000", help="HOST:PORT to bind")
    p.add_argument("--data-dir", help="directory for persisted sessions")
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv: "list[str] | None" = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except DataError as exc:
        print(f"stringforge: {exc}", file=sys.stderr)
        return 2
    except SessionError as exc:
        print(f"stringforge: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
