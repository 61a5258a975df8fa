"""Event scripts: simulated input and expectations for headless runs.

One command per line, ``#`` starts a comment, arguments may be quoted::

    click window/0/2          # or: click "+"
    select window/0/3/1 2     # pick tab 2 of a tab container
    commit count add1         # add1 | sub1 | set <int> | set-text "<text>"
    commit env.L set 3        # NAME.KEY updates one key of a mapping
    expect-label window/0/1 "1"
    expect-log-count SetLabel 3
    idle

A widget path starts at ``window`` and descends by child index; a
segment naming a widget kind (``panel``, ``label``...) asserts the kind of
the current widget instead of descending. A click target that is not a
path names a button by its label, which must be unique in the tree.
"""

from __future__ import annotations

import shlex
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Mapping

from ..backend import OpKind, WIDGET_KINDS, WidgetHandle
from ..errors import ScriptError
from ..observable import Observable, obs_update
from ..renderer import RenderRoot

_ARITY = {
    "click": (1, 1),
    "select": (2, 2),
    "commit": (2, 3),
    "expect-label": (2, 2),
    "expect-log-count": (2, 2),
    "idle": (0, 0),
}


@dataclass(frozen=True)
class Command:
    line: int
    name: str
    args: tuple[str, ...]
    source: str = ""


@dataclass
class Expectation:
    line: int
    source: str
    passed: bool
    expected: str
    actual: str

    def format(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        text = f"{status} line {self.line}: {self.source}"
        if not self.passed:
            text += f" (expected {self.expected}, got {self.actual})"
        return text


@dataclass
class Report:
    results: list[Expectation] = field(default_factory=list)
    closed_at: int | None = None

    @property
    def ok(self) -> bool:
        return all(r.passed for r in self.results)

    @property
    def failures(self) -> list[Expectation]:
        return [r for r in self.results if not r.passed]

    def format(self) -> str:
        lines = [r.format() for r in self.results]
        if self.closed_at is not None:
            lines.append(f"window closed after line {self.closed_at}")
        return "\n".join(lines)


def parse_script(text: str) -> list[Command]:
    commands = []
    for number, raw in enumerate(text.splitlines(), start=1):
        try:
            parts = shlex.split(raw, comments=True)
        except ValueError as exc:
            raise ScriptError(str(exc), number) from None
        if not parts:
            continue
        name, args = parts[0], tuple(parts[1:])
        if name not in _ARITY:
            raise ScriptError(f"unknown command {name!r}", number)
        low, high = _ARITY[name]
        if not low <= len(args) <= high:
            raise ScriptError(f"{name} takes {low}-{high} arguments, got {len(args)}", number)
        commands.append(Command(number, name, args, raw.split("#", 1)[0].strip()))
    return commands


def load_script(path: str | Path) -> list[Command]:
    return parse_script(Path(path).read_text(encoding="utf-8"))


def resolve_path(root: RenderRoot, path: str, line: int | None = None) -> WidgetHandle:
    backend = root.backend
    segments = [s for s in path.split("/") if s]
    if not segments or segments[0] != "window":
        raise ScriptError(f"widget path {path!r} must start at 'window'", line)
    if root.window is None or not backend.is_alive(root.window):
        raise ScriptError("no live window", line)
    current = root.window
    for seg in segments[1:]:
        if seg.isdigit():
            children = backend.children(current)
            index = int(seg)
            if index >= len(children):
                raise ScriptError(f"{path!r}: widget {current} has no child {index}", line)
            current = children[index]
        elif seg in WIDGET_KINDS:
            kind = backend.record(current).kind
            if kind != seg:
                raise ScriptError(f"{path!r}: expected a {seg}, found a {kind}", line)
        else:
            raise ScriptError(f"{path!r}: bad path segment {seg!r}", line)
    return current


def _find_button(root: RenderRoot, label: str, line: int) -> WidgetHandle:
    backend = root.backend
    found = []
    stack = [root.window]
    while stack:
        handle = stack.pop()
        rec = backend.record(handle)
        if rec.kind == "button" and rec.label == label:
            found.append(handle)
        stack.extend(backend.children(handle))
    if len(found) != 1:
        raise ScriptError(f"{len(found)} buttons labelled {label!r}; use a widget path", line)
    return found[0]


def _target(root: RenderRoot, ref: str, line: int) -> WidgetHandle:
    if "/" in ref or ref == "window":
        return resolve_path(root, ref, line)
    return _find_button(root, ref, line)


_OPS: dict[str, Callable[[Any, str | None], Any]] = {
    "add1": lambda v, _: v + 1,
    "sub1": lambda v, _: v - 1,
}


def _commit_fn(op: str, arg: str | None, line: int) -> Callable[[Any], Any]:
    if op in _OPS:
        if arg is not None:
            raise ScriptError(f"{op} takes no argument", line)
        return lambda v: _OPS[op](v, None)
    if op == "set":
        try:
            value = int(arg)  # type: ignore[arg-type]
        except (TypeError, ValueError):
            raise ScriptError(f"set needs an integer, got {arg!r}", line) from None
        return lambda _: value
    if op == "set-text":
        if arg is None:
            raise ScriptError("set-text needs a quoted text", line)
        return lambda _: arg
    raise ScriptError(f"unknown commit op {op!r}", line)


def _lookup_observable(names: Mapping[str, Observable], ref: str, line: int):
    name, _, key = ref.partition(".")
    if name not in names:
        raise ScriptError(f"unknown observable {name!r}", line)
    return names[name], key or None


class _Runner:
    def __init__(self, root: RenderRoot, names: Mapping[str, Observable]):
        self.root = root
        self.names = names
        self.loop = root.loop

    def on_loop(self, fn: Callable[[], Any]) -> Any:
        return self.loop.call(fn)

    def pump(self) -> None:
        if self.loop.in_loop_thread():
            self.loop.run_until_idle()
        else:
            self.loop.wait_idle()

    def run(self, script: list[Command]) -> Report:
        report = Report()
        for cmd in script:
            if report.closed_at is not None and not cmd.name.startswith("expect"):
                raise ScriptError(f"{cmd.name} after the window was closed", cmd.line)
            getattr(self, "do_" + cmd.name.replace("-", "_"))(cmd, report)
            if report.closed_at is None and not self.on_loop(lambda: self.root.is_open):
                report.closed_at = cmd.line
        return report

    def do_click(self, cmd: Command, report: Report) -> None:
        target = self.on_loop(lambda: _target(self.root, cmd.args[0], cmd.line))
        self.root.backend.simulate_click(target)
        self.pump()

    def do_select(self, cmd: Command, report: Report) -> None:
        target = self.on_loop(lambda: resolve_path(self.root, cmd.args[0], cmd.line))
        try:
            self.root.backend.simulate_select(target, int(cmd.args[1]))
        except (ValueError, IndexError) as exc:
            raise ScriptError(str(exc), cmd.line) from None
        self.pump()

    def do_commit(self, cmd: Command, report: Report) -> None:
        o, key = _lookup_observable(self.names, cmd.args[0], cmd.line)
        fn = _commit_fn(cmd.args[1], cmd.args[2] if len(cmd.args) > 2 else None, cmd.line)
        if key is not None:
            inner = fn

            def fn(mapping, inner=inner):
                if key not in mapping:
                    raise ScriptError(f"{cmd.args[0]}: no key {key!r}", cmd.line)
                return {**mapping, key: inner(mapping[key])}

        obs_update(o, fn)
        self.pump()

    def do_idle(self, cmd: Command, report: Report) -> None:
        self.pump()

    def do_expect_label(self, cmd: Command, report: Report) -> None:
        def read():
            return self.root.backend.record(resolve_path(self.root, cmd.args[0], cmd.line)).label

        actual = self.on_loop(read)
        expected = cmd.args[1]
        report.results.append(
            Expectation(cmd.line, cmd.source, actual == expected, _quote(expected), _quote(actual))
        )

    def do_expect_log_count(self, cmd: Command, report: Report) -> None:
        kind_name, count = cmd.args
        try:
            kind = OpKind(kind_name)
            expected = int(count)
        except ValueError:
            raise ScriptError(f"bad expect-log-count arguments {cmd.args}", cmd.line) from None
        actual = sum(1 for op in self.root.backend.call_log() if op.kind is kind)
        report.results.append(Expectation(cmd.line, cmd.source, actual == expected, str(expected), str(actual)))


def _quote(value: Any) -> str:
    return '"' + str(value) + '"' if value is not None else "nothing"


def run_script(
    root: RenderRoot,
    script: list[Command] | str,
    observables: Mapping[str, Observable] | None = None,
) -> Report:
    """Execute ``script`` against a rendered headless root.

    Every click, select and commit pumps the event loop before the next
    command, so expectations always see a quiescent tree. Once the window
    has closed only expectations may follow.
    """
    if isinstance(script, str):
        script = parse_script(script)
    return _Runner(root, observables or {}).run(script)
