"""Command-line entry points: batch runner, REPL, model-store commands."""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys

from .analyzer import Diagnostic
from .display import text_table
from .emitter import ScriptArtifact
from .errors import MqlError
from .learn.model import Model
from .planner import Session, run_program
from .results import ResultSet
from .store import delete_model, list_models
from .syntax import parse_program
from .table import Table, format_cell


def _default_dir(name: str) -> str:
    home = os.environ.get("MQL_HOME")
    return os.path.join(home, name) if home else os.path.join(".", name)


def _add_session_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--data-dir", default=".", help="directory holding the CSV tables")
    p.add_argument("--out-dir", default=_default_dir("mql-out"),
                   help="directory for result CSVs, plots and scripts")
    p.add_argument("--model-store", default=_default_dir("mql-models"),
                   help="directory of stored models")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--missing", choices=("zero", "impute"), default="zero",
                   help="how missing feature cells of the OVER table are filled")
    p.add_argument("--backend", choices=("native", "emit"), default="native",
                   help="execute natively or emit backend scripts")
    p.add_argument("--format", choices=("table", "csv", "json"), default="table",
                   dest="output_format", help="standard-output rendering")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mql", description="Declarative machine-learning queries over CSV tables"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run a program file")
    run_p.add_argument("file", help="program file (.mql)")
    _add_session_flags(run_p)

    repl_p = sub.add_parser("repl", help="interactive statement loop")
    _add_session_flags(repl_p)

    models_p = sub.add_parser("models", help="model store maintenance")
    models_sub = models_p.add_subparsers(dest="models_command", required=True)
    list_p = models_sub.add_parser("list")
    list_p.add_argument("--model-store", default=_default_dir("mql-models"))
    delete_p = models_sub.add_parser("delete")
    delete_p.add_argument("name")
    delete_p.add_argument("--model-store", default=_default_dir("mql-models"))
    return parser


def _session_from(args: argparse.Namespace) -> Session:
    return Session(
        data_dir=args.data_dir,
        out_dir=args.out_dir,
        store_dir=args.model_store,
        seed=args.seed,
        missing_policy=args.missing,
        backend=args.backend,
    )


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    if args.command == "models":
        return _cmd_models(args)
    if args.command == "repl":
        session = _session_from(args)
        repl_loop(session, sys.stdin, sys.stdout,
                  output_format=args.output_format)
        return 0
    return _cmd_run(args)


def _cmd_run(args: argparse.Namespace) -> int:
    if not os.path.isfile(args.file):
        print(f"mql run: no such file: {args.file}", file=sys.stderr)
        return 2
    with open(args.file, "r", encoding="utf-8") as fh:
        text = fh.read()
    try:
        statements = parse_program(text)
    except MqlError as e:
        print(f"error[{e.code}]: {e.message}", file=sys.stderr)
        return 1
    session = _session_from(args)
    results = run_program(statements, session)
    failed = _render_results(results, sys.stdout, args.output_format)
    for path in session.artifacts:
        print(f"wrote: {path}")
    return 1 if failed else 0


def _cmd_models(args: argparse.Namespace) -> int:
    if args.models_command == "list":
        manifests = list_models(args.model_store)
        rows = [
            [m["name"], m["ml_type"], m["algorithm"],
             _score_text(m), m.get("created_at", "")]
            for m in manifests
        ]
        print(text_table(["name", "task", "algorithm", "score", "created"], rows),
              end="")
        return 0
    try:
        delete_model(args.name, args.model_store)
    except MqlError as e:
        print(f"error[{e.code}]: {e.message}", file=sys.stderr)
        return 1
    print(f"deleted: {args.name}")
    return 0


def _score_text(manifest: dict) -> str:
    metrics = manifest.get("test_metrics") or manifest.get("train_metrics")
    if not metrics:
        return "-"
    return f"{metrics.get('normalized_score', 0.0):.4f}"


def _render_results(results: list, out, output_format: str) -> bool:
    failed = False
    for result in results:
        if isinstance(result, Diagnostic):
            print(result.render(), file=sys.stderr)
            failed = True
        elif isinstance(result, ResultSet):
            _print_rows(result.header(), result.rows(), out, output_format)
        elif isinstance(result, Table):
            header = result.column_names
            rows = [
                [format_cell(cell) for cell in result.row(i)]
                for i in range(result.row_count)
            ]
            _print_rows(header, rows, out, output_format)
        elif isinstance(result, Model):
            print(
                f"model {result.name}: {result.algorithm} "
                f"({result.ml_type}), score {result.score():.6f}",
                file=out,
            )
        elif isinstance(result, ScriptArtifact):
            print(f"emitted {result.kind} script: {result.path}", file=out)
    return failed


def _print_rows(header: list[str], rows: list[list[str]], out, output_format: str):
    if output_format == "table":
        print(text_table(header, rows), file=out, end="")
    elif output_format == "csv":
        print(",".join(header), file=out)
        for row in rows:
            print(",".join(row), file=out)
    else:
        for row in rows:
            print(json.dumps(dict(zip(header, row))), file=out)


def repl_loop(session: Session, in_stream, out_stream,
              output_format: str = "table") -> None:
    """Read ``;``-terminated statements, execute immediately, print results.

    Meta commands: ``\\q`` quits, ``\\models`` lists the store, ``\\set key
    value`` adjusts session flags (missing, seed, backend, data_dir,
    out_dir, model_store, format).
    """
    buffer: list[str] = []
    interactive = hasattr(in_stream, "isatty") and in_stream.isatty()

    def prompt() -> None:
        if interactive:
            out_stream.write("...> " if buffer else "mql> ")
            out_stream.flush()

    prompt()
    for line in in_stream:
        stripped = line.strip()
        if not buffer and stripped.startswith("\\"):
            if stripped == "\\q":
                return
            if stripped == "\\models":
                manifests = list_models(session.store_dir)
                rows = [[m["name"], m["ml_type"], m["algorithm"], _score_text(m)]
                        for m in manifests]
                out_stream.write(
                    text_table(["name", "task", "algorithm", "score"], rows)
                )
            elif stripped.startswith("\\set "):
                output_format = _repl_set(session, stripped, out_stream,
                                          output_format)
            else:
                out_stream.write(f"unknown command: {stripped}\n")
            prompt()
            continue
        buffer.append(line)
        if not stripped.endswith(";") and stripped != "":
            prompt()
            continue
        text = "".join(buffer).strip()
        buffer.clear()
        if text:
            _repl_execute(session, text, out_stream, output_format)
        prompt()
    # End of input: run whatever is buffered (a final statement may omit
    # its terminating semicolon), then leave as if \q was typed.
    text = "".join(buffer).strip()
    if text:
        _repl_execute(session, text, out_stream, output_format)


def _repl_execute(session: Session, text: str, out_stream, output_format: str):
    try:
        statements = parse_program(text)
    except MqlError as e:
        out_stream.write(f"error[{e.code}]: {e.message}\n")
        return
    results = run_program(statements, session)
    for result in results:
        if isinstance(result, Diagnostic):
            out_stream.write(result.render() + "\n")
        elif isinstance(result, ResultSet):
            _write_rows(result.header(), result.rows(), out_stream, output_format)
        elif isinstance(result, Table):
            rows = [
                [format_cell(cell) for cell in result.row(i)]
                for i in range(result.row_count)
            ]
            _write_rows(result.column_names, rows, out_stream, output_format)
        elif isinstance(result, Model):
            out_stream.write(
                f"model {result.name}: {result.algorithm} "
                f"({result.ml_type}), score {result.score():.6f}\n"
            )
        elif isinstance(result, ScriptArtifact):
            out_stream.write(f"emitted {result.kind} script: {result.path}\n")
    for path in session.artifacts:
        out_stream.write(f"wrote: {path}\n")
    session.artifacts.clear()


def _write_rows(header, rows, out_stream, output_format):
    if output_format == "table":
        out_stream.write(text_table(header, rows))
    elif output_format == "csv":
        out_stream.write(",".join(header) + "\n")
        for row in rows:
            out_stream.write(",".join(row) + "\n")
    else:
        for row in rows:
            out_stream.write(json.dumps(dict(zip(header, row))) + "\n")


def _repl_set(session: Session, command: str, out_stream,
              output_format: str) -> str:
    parts = command.split()
    if len(parts) != 3:
        out_stream.write("usage: \\set key value\n")
        return output_format
    _, key, value = parts
    key = key.replace("-", "_")
    if key == "missing" and value in ("zero", "impute"):
        session.missing_policy = value
    elif key == "backend" and value in ("native", "emit"):
        session.backend = value
    elif key == "seed":
        try:
            session.seed = int(value)
        except ValueError:
            out_stream.write("seed must be an integer\n")
    elif key in ("data_dir", "out_dir", "model_store"):
        setattr(session, "store_dir" if key == "model_store" else key, value)
    elif key == "format" and value in ("table", "csv", "json"):
        return value
    else:
        out_stream.write(f"cannot set {key!r}\n")
    return output_format


if __name__ == "__main__":
    sys.exit(main())
