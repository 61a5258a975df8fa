"""Command-line entry point: ``easyview demo NAME [options]``.

Exit status is 0 on success, 1 when a script expectation fails and 2 on
usage or script errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from ..backend import HeadlessBackend
from ..errors import EasyViewError, ScriptError
from ..renderer import render
from .apps import DEMOS
from .script import Report, load_script, run_script

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="easyview", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    demo = sub.add_parser("demo", help="run one of the bundled example programs")
    demo.add_argument("name", choices=sorted(DEMOS))
    demo.add_argument("--backend", choices=["headless", "terminal"])
    demo.add_argument("--script", type=Path, help="event script to run (headless only)")
    demo.add_argument("--dump-log", type=Path, help="write the backend call log here")
    return parser


def _interactive() -> bool:
    return sys.stdin.isatty() and sys.stdout.isatty()


def run_headless(name: str, script_path: Path | None, dump_log: Path | None) -> tuple[int, Report]:
    script = load_script(script_path) if script_path is not None else []
    demo = DEMOS[name]()
    backend = HeadlessBackend()
    # The loop gets its own thread; script events are fed from this one.
    backend.loop.start()
    try:
        root = render(demo.view, backend)
        report = run_script(root, script, demo.observables)
        root.teardown()
    finally:
        backend.loop.stop()
    if dump_log is not None:
        dump_log.write_text(backend.dump_log(), encoding="utf-8")
    return (EXIT_OK if report.ok else EXIT_FAILED), report


def run_terminal(name: str, dump_log: Path | None) -> int:
    from .. import terminal

    demo = DEMOS[name]()
    backend = terminal.TerminalBackend()
    root = render(demo.view, backend)
    try:
        terminal.run_interactive(root)
    finally:
        root.teardown()
        if dump_log is not None:
            dump_log.write_text(backend.dump_log(), encoding="utf-8")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    backend = args.backend or ("terminal" if _interactive() and args.script is None else "headless")
    if backend == "terminal" and args.script is not None:
        print("error: --script requires the headless backend", file=sys.stderr)
        return EXIT_USAGE
    try:
        if backend == "terminal":
            return run_terminal(args.name, args.dump_log)
        code, report = run_headless(args.name, args.script, args.dump_log)
    except (ScriptError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except EasyViewError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if report.results or report.closed_at is not None:
        print(report.format())
    return code


if __name__ == "__main__":
    sys.exit(main())
