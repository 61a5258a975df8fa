"""The imperative core: a retained-mode widget toolkit.

:class:`Backend` is the toolkit contract the views are written against.
:class:`HeadlessBackend` implements it as an in-memory widget tree that
records every operation in an append-only call log. Handles are dense
integers in creation order, so a given program and event script always
produce the same log text.

Log lines have the form ``seq Kind target args...``: handles print as
``#n``, strings are JSON-quoted, booleans print as ``true``/``false``.
Create operations use the new widget as their target and list the parent
handle as the first argument.
"""

from __future__ import annotations

import abc
import enum
import itertools
import json
import threading
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Sequence

from .errors import (
    DeadParentError,
    DeadWidgetError,
    NotAButtonError,
    UnknownHandleError,
    UnsupportedWidgetError,
)
from .loop import CallbackJob, EventLoop

WIDGET_KINDS = frozenset({"window", "panel", "button", "label", "tabs"})

_backend_tags = itertools.count(1)


class Orientation(str, enum.Enum):
    HORIZONTAL = "horizontal"
    VERTICAL = "vertical"


class OpKind(str, enum.Enum):
    CREATE_WINDOW = "CreateWindow"
    CREATE_PANEL = "CreatePanel"
    CREATE_BUTTON = "CreateButton"
    CREATE_LABEL = "CreateLabel"
    CREATE_TABS = "CreateTabs"
    SET_LABEL = "SetLabel"
    SET_TABS = "SetTabs"
    SHOW = "Show"
    CAN_CLOSE = "CanClose"
    ON_CLOSE = "OnClose"
    DESTROY = "Destroy"
    INVOKE_CALLBACK = "InvokeCallback"


CREATE_OPS = frozenset(k for k in OpKind if k.value.startswith("Create"))


@dataclass(frozen=True, order=True)
class WidgetHandle:
    id: int
    backend_tag: int

    def __str__(self) -> str:
        return f"#{self.id}"


def _format_arg(arg: Any) -> str:
    if isinstance(arg, bool):
        return "true" if arg else "false"
    if isinstance(arg, WidgetHandle):
        return str(arg)
    if isinstance(arg, enum.Enum):
        return str(arg.value)
    if isinstance(arg, str):
        return json.dumps(arg, ensure_ascii=False)
    if isinstance(arg, (list, tuple)):
        return json.dumps([str(a) for a in arg], ensure_ascii=False, separators=(",", ":"))
    return str(arg)


@dataclass(frozen=True)
class BackendOp:
    seq: int
    kind: OpKind
    target: WidgetHandle | None
    args: tuple = ()

    def format(self) -> str:
        fields = [str(self.seq), self.kind.value, str(self.target) if self.target else "-"]
        fields.extend(_format_arg(a) for a in self.args)
        return " ".join(fields)


def format_log(ops: Iterable[BackendOp]) -> str:
    return "".join(op.format() + "\n" for op in ops)


@dataclass
class WidgetRecord:
    handle: WidgetHandle
    kind: str
    parent: WidgetHandle | None
    label: str | None = None
    visible: bool = False
    alive: bool = True
    on_click: Callable[[], Any] | None = None
    orientation: Orientation | None = None
    items: list[str] = field(default_factory=list)
    selected: int = 0
    on_select: Callable[[int], Any] | None = None
    can_close: Callable[[], bool] | None = None
    on_close: list[Callable[[], Any]] = field(default_factory=list)
    children: list[WidgetHandle] = field(default_factory=list)


class Backend(abc.ABC):
    """Retained-mode toolkit: parents before children, mutable properties.

    Mutations must run on the owning event loop's thread. Only
    :meth:`simulate_click`, :meth:`simulate_select` and :meth:`call_log`
    may be called from other threads.
    """

    loop: EventLoop

    @abc.abstractmethod
    def supports(self, kind: str) -> bool: ...

    @abc.abstractmethod
    def create_window(self, title: str) -> WidgetHandle: ...

    @abc.abstractmethod
    def create_panel(self, parent: WidgetHandle, orientation: Orientation) -> WidgetHandle: ...

    @abc.abstractmethod
    def create_button(
        self, parent: WidgetHandle, label: str, on_click: Callable[[], Any] | None
    ) -> WidgetHandle: ...

    @abc.abstractmethod
    def create_label(self, parent: WidgetHandle, text: str) -> WidgetHandle: ...

    @abc.abstractmethod
    def create_tabs(
        self,
        parent: WidgetHandle,
        labels: Sequence[str],
        on_select: Callable[[int], Any] | None,
        selected: int = 0,
    ) -> WidgetHandle: ...

    @abc.abstractmethod
    def set_label(self, widget: WidgetHandle, text: str) -> None: ...

    @abc.abstractmethod
    def set_tabs(self, widget: WidgetHandle, labels: Sequence[str], selected: int) -> None: ...

    @abc.abstractmethod
    def show(self, widget: WidgetHandle, flag: bool) -> None: ...

    @abc.abstractmethod
    def destroy_widget(self, widget: WidgetHandle) -> None: ...

    @abc.abstractmethod
    def set_close_hooks(
        self,
        window: WidgetHandle,
        can_close: Callable[[], bool] | None = None,
        on_close: Callable[[], Any] | None = None,
    ) -> None: ...

    @abc.abstractmethod
    def request_close(self, window: WidgetHandle) -> bool: ...

    @abc.abstractmethod
    def record(self, widget: WidgetHandle) -> WidgetRecord: ...

    @abc.abstractmethod
    def is_alive(self, widget: WidgetHandle) -> bool: ...


class HeadlessBackend(Backend):
    def __init__(self, loop: EventLoop | None = None, kinds: Iterable[str] = WIDGET_KINDS):
        self.loop = loop or EventLoop()
        self.tag = next(_backend_tags)
        self.kinds = frozenset(kinds)
        self._ids = itertools.count(1)
        self._seq = itertools.count(1)
        self._records: dict[int, WidgetRecord] = {}
        self._log: list[BackendOp] = []
        self._lock = threading.RLock()

    # -- bookkeeping

    def _emit(self, kind: OpKind, target: WidgetHandle | None, *args: Any) -> None:
        with self._lock:
            self._log.append(BackendOp(next(self._seq), kind, target, args))
        self._changed()

    def _changed(self) -> None:
        """Called after every logged operation; subclasses redraw here."""

    def _lookup(self, widget: WidgetHandle) -> WidgetRecord:
        if not isinstance(widget, WidgetHandle) or widget.backend_tag != self.tag:
            raise UnknownHandleError(f"{widget!r} does not belong to this backend")
        try:
            return self._records[widget.id]
        except KeyError:
            raise UnknownHandleError(f"no widget {widget}") from None

    def _live(self, widget: WidgetHandle) -> WidgetRecord:
        rec = self._lookup(widget)
        if not rec.alive:
            raise DeadWidgetError(f"widget {widget} has been destroyed")
        return rec

    def _new(self, kind: str, parent: WidgetHandle | None, **props: Any) -> WidgetRecord:
        if not self.supports(kind):
            raise UnsupportedWidgetError(f"backend has no {kind!r} widget")
        if parent is not None:
            parent_rec = self._lookup(parent)
            if not parent_rec.alive:
                raise DeadParentError(f"parent {parent} has been destroyed")
        with self._lock:
            handle = WidgetHandle(next(self._ids), self.tag)
            rec = WidgetRecord(handle, kind, parent, **props)
            self._records[handle.id] = rec
            if parent is not None:
                parent_rec.children.append(handle)
        return rec

    # -- toolkit

    def supports(self, kind: str) -> bool:
        return kind in self.kinds

    def create_window(self, title: str) -> WidgetHandle:
        rec = self._new("window", None, label=title)
        self._emit(OpKind.CREATE_WINDOW, rec.handle, title)
        return rec.handle

    def create_panel(self, parent: WidgetHandle, orientation: Orientation) -> WidgetHandle:
        orientation = Orientation(orientation)
        rec = self._new("panel", parent, orientation=orientation, visible=True)
        self._emit(OpKind.CREATE_PANEL, rec.handle, parent, orientation)
        return rec.handle

    def create_button(self, parent, label, on_click=None) -> WidgetHandle:
        rec = self._new("button", parent, label=label, on_click=on_click, visible=True)
        self._emit(OpKind.CREATE_BUTTON, rec.handle, parent, label)
        return rec.handle

    def create_label(self, parent, text) -> WidgetHandle:
        rec = self._new("label", parent, label=text, visible=True)
        self._emit(OpKind.CREATE_LABEL, rec.handle, parent, text)
        return rec.handle

    def create_tabs(self, parent, labels, on_select=None, selected=0) -> WidgetHandle:
        rec = self._new(
            "tabs", parent, items=list(labels), selected=selected, on_select=on_select, visible=True
        )
        self._emit(OpKind.CREATE_TABS, rec.handle, parent, list(labels), selected)
        return rec.handle

    def set_label(self, widget, text) -> None:
        rec = self._live(widget)
        rec.label = text
        self._emit(OpKind.SET_LABEL, widget, text)

    def set_tabs(self, widget, labels, selected) -> None:
        rec = self._live(widget)
        rec.items = list(labels)
        rec.selected = selected
        self._emit(OpKind.SET_TABS, widget, list(labels), selected)

    def show(self, widget, flag) -> None:
        rec = self._live(widget)
        rec.visible = bool(flag)
        self._emit(OpKind.SHOW, widget, bool(flag))

    def destroy_widget(self, widget) -> None:
        rec = self._live(widget)
        if rec.parent is not None:
            parent = self._records[rec.parent.id]
            with self._lock:
                if widget in parent.children:
                    parent.children.remove(widget)
        self._destroy_subtree(rec)

    def _destroy_subtree(self, rec: WidgetRecord) -> None:
        for child in list(rec.children):
            self._destroy_subtree(self._records[child.id])
        rec.alive = False
        rec.visible = False
        rec.on_click = rec.on_select = rec.can_close = None
        rec.on_close = []
        self._emit(OpKind.DESTROY, rec.handle)

    def set_close_hooks(self, window, can_close=None, on_close=None) -> None:
        rec = self._live(window)
        if can_close is not None:
            rec.can_close = can_close
        if on_close is not None:
            rec.on_close.append(on_close)

    def request_close(self, window) -> bool:
        """Run the window close protocol: can-close check, on-close, hide.

        Returns whether the window was closed. A window that is already
        hidden is left alone.
        """
        rec = self._live(window)
        if rec.kind != "window" or not rec.visible:
            return False
        allowed = bool(rec.can_close()) if rec.can_close else True
        self._emit(OpKind.CAN_CLOSE, window, allowed)
        if not allowed:
            return False
        self._emit(OpKind.ON_CLOSE, window)
        for hook in list(rec.on_close):
            hook()
        self.show(window, False)
        return True

    def record(self, widget) -> WidgetRecord:
        return self._lookup(widget)

    def is_alive(self, widget) -> bool:
        try:
            return self._lookup(widget).alive
        except UnknownHandleError:
            return False

    def children(self, widget: WidgetHandle) -> list[WidgetHandle]:
        with self._lock:
            return list(self._lookup(widget).children)

    def windows(self) -> list[WidgetHandle]:
        with self._lock:
            return [r.handle for r in self._records.values() if r.kind == "window" and r.alive]

    # -- simulated input (any thread)

    def simulate_click(self, widget: WidgetHandle) -> None:
        """Queue the button's callback on the event loop."""
        rec = self._live(widget)
        if rec.kind != "button":
            raise NotAButtonError(f"widget {widget} is a {rec.kind}, not a button")
        self.loop.post(CallbackJob(self._fire_click, (widget,)))

    def _fire_click(self, widget: WidgetHandle) -> None:
        rec = self._records[widget.id]
        if not rec.alive:
            return
        self._emit(OpKind.INVOKE_CALLBACK, widget)
        if rec.on_click is not None:
            rec.on_click()

    def simulate_select(self, widget: WidgetHandle, index: int) -> None:
        """Queue a tab selection on the event loop."""
        rec = self._live(widget)
        if rec.kind != "tabs":
            raise NotAButtonError(f"widget {widget} is a {rec.kind}, not a tab container")
        if not 0 <= index < len(rec.items):
            raise IndexError(f"tab index {index} out of range for {widget}")
        self.loop.post(CallbackJob(self._fire_select, (widget, index)))

    def _fire_select(self, widget: WidgetHandle, index: int) -> None:
        rec = self._records[widget.id]
        if not rec.alive:
            return
        self._emit(OpKind.INVOKE_CALLBACK, widget, index)
        rec.selected = index
        if rec.on_select is not None:
            rec.on_select(index)

    def call_log(self) -> list[BackendOp]:
        with self._lock:
            return list(self._log)

    def dump_log(self) -> str:
        return format_log(self.call_log())
