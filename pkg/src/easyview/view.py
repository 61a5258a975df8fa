"""The view lifecycle contract between the functional shell and the backend.

A view describes how to build, refresh and dispose of one widget subtree.
The renderer drives the lifecycle: it samples ``dependencies()`` once,
calls ``create`` under the parent widget, renders ``children(widget)``
into the new widget, and then calls ``update`` whenever one of the
dependencies commits. The same view object may be rendered many times at
once, so any state a view keeps must be keyed by the widget handle it
returned from ``create``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Mapping, Sequence

from .backend import Backend, Orientation, WidgetHandle
from .errors import UnsupportedWidgetError
from .observable import Observable, obs_peek

__all__ = ["View", "make_view", "WidgetSpec", "lift_widget", "unique", "peek_value"]


def unique(observables: Iterable[Observable]) -> list[Observable]:
    """Drop repeated observables (by identity), keeping first occurrences."""
    seen: set[int] = set()
    out = []
    for o in observables:
        if id(o) not in seen:
            seen.add(id(o))
            out.append(o)
    return out


def peek_value(value: Any) -> Any:
    return obs_peek(value) if isinstance(value, Observable) else value


class View:
    def dependencies(self) -> list[Observable]:
        return []

    def create(self, backend: Backend, parent: WidgetHandle | None) -> WidgetHandle:
        raise NotImplementedError

    def update(self, backend: Backend, widget: WidgetHandle, changed: Observable, value: Any) -> None:
        pass

    def destroy(self, backend: Backend, widget: WidgetHandle) -> None:
        pass

    def children(self, widget: WidgetHandle) -> Sequence[View]:
        """Child views the renderer should build inside ``widget``."""
        return ()


class _FunctionView(View):
    def __init__(self, deps, create, update, destroy, children):
        self._deps = unique(deps)
        self._create = create
        self._update = update
        self._destroy = destroy
        self._children = children

    def dependencies(self):
        return list(self._deps)

    def create(self, backend, parent):
        return self._create(backend, parent)

    def update(self, backend, widget, changed, value):
        if self._update is not None:
            self._update(backend, widget, changed, value)

    def destroy(self, backend, widget):
        if self._destroy is not None:
            self._destroy(backend, widget)

    def children(self, widget):
        return self._children(widget) if self._children is not None else ()


def make_view(
    deps: Iterable[Observable],
    create: Callable[[Backend, WidgetHandle | None], WidgetHandle],
    update: Callable[[Backend, WidgetHandle, Observable, Any], None] | None = None,
    destroy: Callable[[Backend, WidgetHandle], None] | None = None,
    children: Callable[[WidgetHandle], Sequence[View]] | None = None,
) -> View:
    """Build a view from plain functions."""
    if deps is None:
        raise TypeError("deps must be a list of observables (possibly empty)")
    return _FunctionView(deps, create, update, destroy, children)


# property name -> updatable from an observable?
_PROPERTIES: dict[str, dict[str, bool]] = {
    "window": {"title": True},
    "panel": {"orientation": False},
    "button": {"label": True, "on_click": False},
    "label": {"text": True},
    "tabs": {"labels": True, "on_select": False, "selected": False},
}


@dataclass(frozen=True)
class WidgetSpec:
    """A single backend widget with constant or observable properties.

    >>> WidgetSpec("label", {"text": "hi"})  # doctest: +ELLIPSIS
    WidgetSpec(kind='label', ...)
    """

    kind: str
    properties: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        known = _PROPERTIES.get(self.kind)
        if known is None:
            return  # unknown kinds fail at create time
        for name, value in self.properties.items():
            if name not in known:
                raise TypeError(f"{self.kind} has no property {name!r}")
            if isinstance(value, Observable) and not known[name]:
                raise TypeError(f"{self.kind}.{name} cannot be observable")


class LiftedView(View):
    def __init__(self, spec: WidgetSpec):
        self.spec = spec
        self._deps = unique(v for v in spec.properties.values() if isinstance(v, Observable))
        self.is_window = spec.kind == "window"

    def dependencies(self):
        return list(self._deps)

    def _prop(self, name: str, default: Any = None) -> Any:
        return peek_value(self.spec.properties.get(name, default))

    def create(self, backend, parent):
        kind = self.spec.kind
        if not backend.supports(kind):
            raise UnsupportedWidgetError(f"backend has no {kind!r} widget")
        if kind == "window":
            return backend.create_window(str(self._prop("title", "")))
        if kind == "panel":
            orientation = self._prop("orientation", Orientation.HORIZONTAL)
            return backend.create_panel(parent, Orientation(orientation))
        if kind == "button":
            return backend.create_button(parent, str(self._prop("label", "")), self._prop("on_click"))
        if kind == "label":
            return backend.create_label(parent, str(self._prop("text", "")))
        if kind == "tabs":
            return backend.create_tabs(
                parent, list(self._prop("labels", [])), self._prop("on_select"), self._prop("selected", 0)
            )
        raise UnsupportedWidgetError(f"no widget kind {kind!r}")

    def update(self, backend, widget, changed, value):
        for name, prop in self.spec.properties.items():
            if prop is not changed:
                continue
            if name == "labels":
                selected = min(backend.record(widget).selected, max(len(value) - 1, 0))
                backend.set_tabs(widget, list(value), selected)
            else:
                backend.set_label(widget, str(value))


def lift_widget(spec: WidgetSpec) -> View:
    """Wrap exactly one backend widget; observable properties become dependencies."""
    return LiftedView(spec)
