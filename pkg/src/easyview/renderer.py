"""Render views against a backend and keep the widgets in sync.

``render`` walks a view tree depth-first, creating widgets parent-first
and subscribing one observer per dependency. Observers never touch
widgets themselves: they enqueue an :class:`UpdateJob` carrying the
committed value, and the backend's event loop applies it. Commits may
therefore come from any thread while all widget work stays on the loop.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import partial
from typing import Any, Callable, Iterator

from .backend import Backend, WidgetHandle
from .loop import ErrorHook, EventLoop
from .observable import Observable, Subscription, obs_observe, obs_unobserve
from .view import View, unique

__all__ = ["RenderRoot", "UpdateJob", "render", "run_until_idle", "teardown"]


@dataclass(eq=False)
class _Node:
    view: View
    widget: WidgetHandle
    dependencies: list[Observable]
    subscriptions: list[Subscription] = field(default_factory=list)
    children: list[_Node] = field(default_factory=list)
    alive: bool = True


@dataclass
class UpdateJob:
    root: RenderRoot
    node: _Node
    observable: Observable
    value: Any

    def __call__(self) -> None:
        # Dropped silently when the widget went away while the job was queued.
        if self.node.alive:
            self.node.view.update(self.root.backend, self.node.widget, self.observable, self.value)


def _post_order(nodes: list[_Node]) -> Iterator[_Node]:
    for node in nodes:
        yield from _post_order(node.children)
        yield node


class RenderRoot:
    def __init__(self, view: View, backend: Backend):
        self.view = view
        self.backend = backend
        self.loop: EventLoop = backend.loop
        self.window: WidgetHandle | None = None
        self.root_widget: WidgetHandle | None = None
        self._top: list[_Node] = []
        self._torn_down = False

    @property
    def error_hook(self) -> ErrorHook:
        return self.loop.error_hook

    @property
    def wiring(self) -> list[tuple[Subscription, View, WidgetHandle]]:
        return [
            (sub, node.view, node.widget)
            for node in _post_order(self._top)
            for sub in node.subscriptions
            if sub.active
        ]

    @property
    def torn_down(self) -> bool:
        return self._torn_down

    @property
    def is_open(self) -> bool:
        if self._torn_down or self.window is None or not self.backend.is_alive(self.window):
            return False
        return self.backend.record(self.window).visible

    def _on_commit(self, node: _Node, observable: Observable, value: Any) -> None:
        self.loop.post(UpdateJob(self, node, observable, value))

    def _mount(self, view: View, parent: WidgetHandle | None, siblings: list[_Node]) -> None:
        deps = unique(view.dependencies())
        widget = view.create(self.backend, parent)
        node = _Node(view, widget, deps)
        siblings.append(node)
        if self.root_widget is None:
            self.root_widget = widget
        for dep in deps:
            node.subscriptions.append(obs_observe(dep, partial(self._on_commit, node, dep)))
        for child in view.children(widget):
            self._mount(child, widget, node.children)

    def _build(self) -> RenderRoot:
        try:
            if getattr(self.view, "is_window", False):
                self._mount(self.view, None, self._top)
                self.window = self.root_widget
            else:
                self.window = self.backend.create_window("")
                self._mount(self.view, self.window, self._top)
            self.backend.show(self.window, True)
        except BaseException:
            self._dispose()
            raise
        return self

    def _dispose(self) -> None:
        nodes = list(_post_order(self._top))
        for node in nodes:
            for sub in node.subscriptions:
                obs_unobserve(sub)
        for node in nodes:
            node.alive = False
            try:
                node.view.destroy(self.backend, node.widget)
            except Exception as exc:
                self.error_hook(exc)
        if self.window is not None and self.backend.is_alive(self.window):
            self.backend.destroy_widget(self.window)
        self._top = []

    def teardown(self) -> None:
        """Revoke subscriptions, destroy views leaf-first, then destroy widgets."""

        def run() -> None:
            if self._torn_down:
                return
            self._torn_down = True
            self._dispose()

        self.loop.call(run)

    def run_until_idle(self) -> int:
        return self.loop.run_until_idle()

    def run(self, until: Callable[[], bool] | None = None) -> None:
        """Serve the event loop on this thread until the window closes."""
        self.loop.run(until=lambda: not self.is_open or (until is not None and until()))


def render(view: View, backend: Backend, error_hook: ErrorHook | None = None) -> RenderRoot:
    """Instantiate ``view`` on ``backend`` and show its window.

    Views that do not create a window themselves are placed in an untitled
    host window. If any create fails, everything built so far is destroyed
    and the error propagates.
    """
    if error_hook is not None:
        backend.loop.error_hook = error_hook
    root = RenderRoot(view, backend)
    return backend.loop.call(root._build)


def run_until_idle(root: RenderRoot) -> int:
    return root.run_until_idle()


def teardown(root: RenderRoot) -> None:
    root.teardown()
