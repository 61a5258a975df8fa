"""Declarative views over observables, rendered onto an imperative widget toolkit."""

from .backend import Backend, BackendOp, HeadlessBackend, OpKind, Orientation, WidgetHandle, format_log
from .errors import (
    DeadParentError,
    DeadWidgetError,
    DerivedUpdateError,
    EmptyItemsError,
    NotAButtonError,
    PropagationDepthError,
    UnknownHandleError,
    UnsupportedWidgetError,
)
from .loop import EventLoop
from .observable import (
    Observable,
    Subscription,
    obs_make,
    obs_map,
    obs_observe,
    obs_peek,
    obs_unobserve,
    obs_update,
)
from .renderer import RenderRoot, render, run_until_idle, teardown
from .view import View, WidgetSpec, lift_widget, make_view
from .views import WindowControls, add1, button, counter, hpanel, sub1, tabs, text, vpanel, window

__version__ = "0.1.0"
