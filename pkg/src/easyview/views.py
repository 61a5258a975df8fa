"""Standard views: window, panels, button, text, tabs and the reusable counter.

Every view here takes its data as plain values or observables and reports
user intent through callbacks. None of them ever writes to an observable
it was given.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Sequence

from .backend import Backend, Orientation, WidgetHandle
from .errors import EmptyItemsError
from .observable import Observable, obs_make, obs_map, obs_update
from .view import View, peek_value

__all__ = [
    "WindowControls",
    "window",
    "hpanel",
    "vpanel",
    "button",
    "text",
    "tabs",
    "counter",
    "add1",
    "sub1",
]


def add1(n: int) -> int:
    return n + 1


def sub1(n: int) -> int:
    return n - 1


def _deps(*values: Any) -> list[Observable]:
    return [v for v in values if isinstance(v, Observable)]


@dataclass
class WindowControls:
    """Handle on a rendered window's close behaviour, given to customizers."""

    backend: Backend
    window: WidgetHandle

    def close(self) -> bool:
        """Ask the window to close: can-close check, on-close hooks, then hide."""
        if not self.backend.is_alive(self.window):
            return False
        return self.backend.request_close(self.window)

    def can_close(self, predicate: Callable[[], bool]) -> None:
        self.backend.set_close_hooks(self.window, can_close=predicate)

    def on_close(self, callback: Callable[[], Any]) -> None:
        self.backend.set_close_hooks(self.window, on_close=callback)


Customizer = Callable[[WidgetHandle, WindowControls], Any]


class WindowView(View):
    is_window = True

    def __init__(self, title, children: Sequence[View], customizer: Customizer | None = None):
        self.title = title
        self.child_views = list(children)
        self.customizer = customizer

    def dependencies(self):
        return _deps(self.title)

    def create(self, backend, parent):
        widget = backend.create_window(str(peek_value(self.title)))
        if self.customizer is not None:
            self.customizer(widget, WindowControls(backend, widget))
        return widget

    def update(self, backend, widget, changed, value):
        backend.set_label(widget, str(value))

    def children(self, widget):
        return self.child_views


def window(*children: View, title: str | Observable = "", customizer: Customizer | None = None) -> View:
    """A top-level window holding ``children``.

    ``customizer`` runs once per rendered window, after the window exists
    and before it is shown. It receives the widget handle and a
    :class:`WindowControls`, which is the way to reach toolkit behaviour
    the functional views do not expose (closing the window from a button,
    vetoing or augmenting a close).
    """
    return WindowView(title, children, customizer)


class PanelView(View):
    def __init__(self, orientation: Orientation, children: Sequence[View]):
        self.orientation = orientation
        self.child_views = list(children)

    def create(self, backend, parent):
        return backend.create_panel(parent, self.orientation)

    def children(self, widget):
        return self.child_views


def hpanel(*children: View) -> View:
    return PanelView(Orientation.HORIZONTAL, children)


def vpanel(*children: View) -> View:
    return PanelView(Orientation.VERTICAL, children)


class ButtonView(View):
    def __init__(self, label, action: Callable[[], Any]):
        self.label = label
        self.action = action

    def dependencies(self):
        return _deps(self.label)

    def create(self, backend, parent):
        return backend.create_button(parent, str(peek_value(self.label)), self.action)

    def update(self, backend, widget, changed, value):
        backend.set_label(widget, str(value))


def button(label: str | Observable, action: Callable[[], Any]) -> View:
    return ButtonView(label, action)


class TextView(View):
    def __init__(self, content):
        self.content = content

    def dependencies(self):
        return _deps(self.content)

    def create(self, backend, parent):
        return backend.create_label(parent, str(peek_value(self.content)))

    def update(self, backend, widget, changed, value):
        backend.set_label(widget, str(value))


def text(content: str | Observable) -> View:
    return TextView(content)


@dataclass
class _TabState:
    selection: Observable  # (items, index), local to one rendered widget
    selected: Observable
    child: View
    labels: list[str] = field(default_factory=list)


class TabsView(View):
    def __init__(self, items: Observable, selected_view, label: Callable[[Any], str] = str):
        self.items = items
        self.selected_view = selected_view
        self.label = label
        self._state: dict[WidgetHandle, _TabState] = {}

    def dependencies(self):
        return _deps(self.items)

    def create(self, backend, parent):
        items = list(peek_value(self.items))
        if not items:
            raise EmptyItemsError("tabs need at least one item at render time")
        selection = obs_make((items, 0))
        selected = obs_map(selection, lambda s: s[0][s[1]])
        handle: list[WidgetHandle] = []
        labels = [self.label(i) for i in items]
        widget = backend.create_tabs(parent, labels, lambda index: self._select(handle[0], index), 0)
        handle.append(widget)
        self._state[widget] = _TabState(selection, selected, self.selected_view(selected), labels)
        return widget

    def _select(self, widget: WidgetHandle, index: int) -> None:
        state = self._state.get(widget)
        if state is not None:
            obs_update(state.selection, lambda s: (s[0], index))

    def update(self, backend, widget, changed, value):
        state = self._state[widget]
        items = list(value)
        state.labels = [self.label(i) for i in items]
        if not items:
            # Keep showing the last selected item; nothing to select.
            backend.set_tabs(widget, [], 0)
            return
        _, index = state.selection.peek()
        index = min(index, len(items) - 1)
        backend.set_tabs(widget, state.labels, index)
        obs_update(state.selection, lambda s: (items, index))

    def destroy(self, backend, widget):
        self._state.pop(widget, None)

    def children(self, widget):
        return [self._state[widget].child]

    def selection(self, widget: WidgetHandle) -> Observable:
        """The derived observable of the selected item for one rendered widget."""
        return self._state[widget].selected


def tabs(
    items: Observable,
    selected_view: Callable[[Observable], View],
    label: Callable[[Any], str] = str,
) -> View:
    """Tab container over ``items``.

    Each rendered widget keeps its own selected index (starting at 0) and
    hands ``selected_view`` a derived observable of the selected item,
    which follows both tab switches and commits to ``items``. When the
    list shrinks the index is clamped to the last item.
    """
    return TabsView(items, selected_view, label)


def counter(count: Observable, action: Callable[[Callable[[int], int]], Any]) -> View:
    """A minus button, the count, and a plus button.

    The buttons call ``action`` with ``sub1`` or ``add1``; deciding what to
    do with that is up to the caller.
    """
    return hpanel(
        button("-", lambda: action(sub1)),
        text(obs_map(count, str)),
        button("+", lambda: action(add1)),
    )
