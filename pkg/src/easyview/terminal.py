"""Character-cell backend for trying the demos interactively.

The widget tree and call log are the headless ones; this module adds a
text layout, keyboard focus, and a blocking interactive loop. Keys:
tab moves focus, enter or space activates the focused button (or
advances the focused tab container), left/right switch tabs, q asks the
window to close.
"""

from __future__ import annotations

import os
import select
import sys
import threading
from dataclasses import dataclass
from typing import TextIO

from .backend import HeadlessBackend, Orientation, WidgetHandle
from .errors import TerminalUnavailableError
from .loop import CallbackJob
from .renderer import RenderRoot

CLEAR = "\x1b[H\x1b[2J"
KEY_LEFT = "\x1b[D"
KEY_RIGHT = "\x1b[C"


@dataclass
class ScreenLayout:
    rows: list[str]
    focus: WidgetHandle | None

    def text(self) -> str:
        return "\n".join(self.rows)


def _beside(blocks: list[list[str]]) -> list[str]:
    blocks = [b for b in blocks if b]
    if not blocks:
        return []
    height = max(len(b) for b in blocks)
    widths = [max(len(line) for line in b) for b in blocks]
    rows = []
    for i in range(height):
        cells = [(b[i] if i < len(b) else "").ljust(w) for b, w in zip(blocks, widths)]
        rows.append(" ".join(cells).rstrip())
    return rows


def _stacked(blocks: list[list[str]]) -> list[str]:
    return [line for b in blocks for line in b]


class TerminalBackend(HeadlessBackend):
    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self.focus: WidgetHandle | None = None
        self.dirty = True

    def _changed(self) -> None:
        self.dirty = True

    def _block(self, handle: WidgetHandle) -> list[str]:
        rec = self.record(handle)
        if not rec.alive or not rec.visible:
            return []
        children = [self._block(c) for c in rec.children]
        focused = handle == self.focus
        if rec.kind == "window":
            title = f"= {rec.label} =" if rec.label else "=="
            return [title] + _stacked(children)
        if rec.kind == "panel":
            if rec.orientation is Orientation.HORIZONTAL:
                return _beside(children)
            return _stacked(children)
        if rec.kind == "button":
            return [f"[>{rec.label}<]" if focused else f"[ {rec.label} ]"]
        if rec.kind == "label":
            return [rec.label or ""]
        if rec.kind == "tabs":
            tabs = [f"[{t}]" if i == rec.selected else f" {t} " for i, t in enumerate(rec.items)]
            header = ("> " if focused else "  ") + "|".join(tabs)
            return [header] + _stacked(children)
        return []

    def layout(self, window: WidgetHandle) -> ScreenLayout:
        return ScreenLayout(self._block(window), self.focus)

    def focusables(self, window: WidgetHandle) -> list[WidgetHandle]:
        out = []

        def walk(handle):
            rec = self.record(handle)
            if not rec.alive or not rec.visible:
                return
            if rec.kind in ("button", "tabs"):
                out.append(handle)
            for child in rec.children:
                walk(child)

        walk(window)
        return out

    def move_focus(self, window: WidgetHandle, step: int = 1) -> None:
        targets = self.focusables(window)
        if not targets:
            self.focus = None
        elif self.focus not in targets:
            self.focus = targets[0 if step > 0 else -1]
        else:
            self.focus = targets[(targets.index(self.focus) + step) % len(targets)]
        self.dirty = True

    def handle_key(self, key: str, window: WidgetHandle) -> None:
        """Translate one key press; runs on the event loop thread."""
        if not self.is_alive(window):
            return
        if key == "\t":
            self.move_focus(window)
            return
        if key == "q":
            self.request_close(window)
            return
        focus = self.focus if self.focus is not None and self.is_alive(self.focus) else None
        if focus is None:
            return
        rec = self.record(focus)
        if rec.kind == "button" and key in ("\r", "\n", " "):
            self.simulate_click(focus)
        elif rec.kind == "tabs" and rec.items and key in ("\r", "\n", " ", KEY_RIGHT, KEY_LEFT):
            step = -1 if key == KEY_LEFT else 1
            self.simulate_select(focus, (rec.selected + step) % len(rec.items))


def _read_keys(fd: int, stop: threading.Event, post) -> None:
    buffer = ""
    while not stop.is_set():
        try:
            ready, _, _ = select.select([fd], [], [], 0.1)
            if not ready:
                continue
            data = os.read(fd, 32)
        except (OSError, ValueError):
            return
        if not data:
            return
        buffer += data.decode("utf-8", "replace")
        while buffer:
            if buffer.startswith("\x1b[") and len(buffer) >= 3:
                key, buffer = buffer[:3], buffer[3:]
            else:
                key, buffer = buffer[0], buffer[1:]
            post(key)


def run_interactive(root: RenderRoot, stdin: TextIO | None = None, stdout: TextIO | None = None) -> None:
    """Drive ``root`` from the keyboard until its window is hidden or destroyed."""
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    backend = root.backend
    if not isinstance(backend, TerminalBackend):
        raise TypeError("run_interactive needs a TerminalBackend")
    if not (stdin.isatty() and stdout.isatty()):
        raise TerminalUnavailableError("no interactive terminal attached")
    if not root.is_open:
        raise ValueError("root window is not shown")
    import termios
    import tty

    fd = stdin.fileno()
    saved = termios.tcgetattr(fd)
    window = root.window
    stop = threading.Event()

    def redraw() -> None:
        if backend.dirty and backend.is_alive(window):
            backend.dirty = False
            screen = backend.layout(window).text()
            stdout.write(CLEAR + screen + "\n\ntab: focus  enter/space: press  q: close\n")
            stdout.flush()

    def post(key: str) -> None:
        backend.loop.post(CallbackJob(backend.handle_key, (key, window)))

    reader = threading.Thread(target=_read_keys, args=(fd, stop, post), daemon=True)
    previous_hook = backend.loop.after_job
    try:
        tty.setcbreak(fd)
        stdout.write("\x1b[?25l")
        backend.move_focus(window)
        redraw()
        backend.loop.after_job = redraw
        reader.start()
        root.run()
    finally:
        stop.set()
        if reader.is_alive():
            reader.join(1.0)
        backend.loop.after_job = previous_hook
        termios.tcsetattr(fd, termios.TCSADRAIN, saved)
        stdout.write("\x1b[?25h\n")
        stdout.flush()
