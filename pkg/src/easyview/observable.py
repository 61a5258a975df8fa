"""Observable cells: the data half of the functional shell.

An observable holds one value and pushes every committed value to the
observers registered at the moment of the commit. Root observables are
written with :func:`obs_update`; derived observables are read-only
projections built with :func:`obs_map` and recomputed eagerly whenever
their source commits.

Propagation is synchronous, depth-first and in registration order on the
committing thread. There is no equality gating (every commit notifies) and
no topological scheduling: for a diamond ``a = f(r)``, ``b = g(r)`` an
observer of ``a`` may run while ``b`` still holds the value derived from
the previous commit of ``r``. Once propagation finishes every derived cell
again equals ``mapper(source)``.
"""

from __future__ import annotations

import contextlib
import enum
import itertools
import logging
import threading
from typing import Any, Callable, Iterator

from .errors import DerivedUpdateError, PropagationDepthError

__all__ = [
    "Kind",
    "Observable",
    "Subscription",
    "obs_make",
    "obs_update",
    "obs_map",
    "obs_peek",
    "obs_observe",
    "obs_unobserve",
    "set_max_depth",
    "error_hook",
    "report_error",
]

log = logging.getLogger(__name__)

DEFAULT_MAX_DEPTH = 1000

_max_depth = DEFAULT_MAX_DEPTH
_observable_ids = itertools.count(1)
_subscription_ids = itertools.count(1)
_id_lock = threading.Lock()
_local = threading.local()


def set_max_depth(depth: int) -> int:
    """Set the nested-commit guard for all threads; returns the old limit."""
    global _max_depth
    if depth < 1:
        raise ValueError("depth must be positive")
    old, _max_depth = _max_depth, depth
    return old


@contextlib.contextmanager
def error_hook(hook: Callable[[BaseException], None]) -> Iterator[None]:
    """Route observer failures raised on this thread to ``hook`` while active."""
    previous = getattr(_local, "hook", None)
    _local.hook = hook
    try:
        yield
    finally:
        _local.hook = previous


def report_error(exc: BaseException) -> None:
    hook = getattr(_local, "hook", None)
    if hook is None:
        log.error("error during propagation", exc_info=exc)
    else:
        hook(exc)


def _next_id(counter: Iterator[int]) -> int:
    with _id_lock:
        return next(counter)


class Kind(enum.Enum):
    ROOT = "root"
    DERIVED = "derived"


class Subscription:
    """A revocable registration of ``callback`` on ``target``."""

    def __init__(self, target: Observable, callback: Callable[[Any], Any]):
        self.id = _next_id(_subscription_ids)
        self.target = target
        self.callback = callback
        self.active = True

    def cancel(self) -> None:
        obs_unobserve(self)

    def __repr__(self) -> str:
        state = "active" if self.active else "revoked"
        return f"<Subscription {self.id} on #{self.target.id} {state}>"


class Observable:
    def __init__(
        self,
        value: Any,
        source: Observable | None = None,
        mapper: Callable[[Any], Any] | None = None,
    ):
        self.id = _next_id(_observable_ids)
        self.source = source
        self.mapper = mapper
        self._value = value
        # Reentrant: observers may commit to the observable that notified them.
        self._lock = threading.RLock()
        self._observers: dict[int, Subscription] = {}
        self._link: Subscription | None = None

    @property
    def kind(self) -> Kind:
        return Kind.ROOT if self.source is None else Kind.DERIVED

    @property
    def is_derived(self) -> bool:
        return self.source is not None

    @property
    def observer_count(self) -> int:
        with self._lock:
            return len(self._observers)

    def peek(self) -> Any:
        return self._value

    def update(self, f: Callable[[Any], Any]) -> Any:
        return obs_update(self, f)

    def map(self, g: Callable[[Any], Any]) -> Observable:
        return obs_map(self, g)

    def observe(self, callback: Callable[[Any], Any]) -> Subscription:
        return obs_observe(self, callback)

    def _commit(self, value: Any) -> None:
        # Caller holds self._lock. Notifying under the lock serialises
        # commits per observable, so every observer sees them in order.
        self._value = value
        snapshot = list(self._observers.values())
        for sub in snapshot:
            if not sub.active:
                continue
            try:
                sub.callback(value)
            except (PropagationDepthError, RecursionError):
                raise
            except Exception as exc:
                report_error(exc)

    def _recompute(self, source_value: Any) -> None:
        with self._lock:
            self._commit(self.mapper(source_value))

    def __repr__(self) -> str:
        return f"<Observable #{self.id} {self.kind.value} {self._value!r}>"


def obs_make(initial: Any) -> Observable:
    return Observable(initial)


def obs_peek(o: Observable) -> Any:
    """Current value of ``o``; never registers an observer or recomputes."""
    return o._value


def obs_update(o: Observable, f: Callable[[Any], Any]) -> Any:
    """Replace the value of root ``o`` with ``f(old)`` and notify observers.

    Raises DerivedUpdateError for derived observables. If ``f`` raises, the
    value is left unchanged and the error propagates. Returns the new value.
    """
    if o.is_derived:
        raise DerivedUpdateError(f"cannot update derived observable #{o.id}")
    depth = getattr(_local, "depth", 0)
    if depth >= _max_depth:
        raise PropagationDepthError(f"nested commits exceeded depth {_max_depth}")
    _local.depth = depth + 1
    try:
        with o._lock:
            new = f(o._value)
            o._commit(new)
        return new
    except RecursionError as exc:
        if depth == 0:
            raise PropagationDepthError("interpreter stack exhausted during propagation") from exc
        raise
    finally:
        _local.depth = depth


def obs_map(o: Observable, g: Callable[[Any], Any]) -> Observable:
    """Derive a read-only observable whose value tracks ``g(o)``."""
    with o._lock:
        derived = Observable(g(o._value), source=o, mapper=g)
        derived._link = obs_observe(o, derived._recompute)
    return derived


def obs_observe(o: Observable, callback: Callable[[Any], Any]) -> Subscription:
    """Register ``callback`` for values committed from now on (not the current one)."""
    sub = Subscription(o, callback)
    with o._lock:
        o._observers[sub.id] = sub
    return sub


def obs_unobserve(sub: Subscription) -> None:
    if not sub.active:
        return
    sub.active = False
    with sub.target._lock:
        sub.target._observers.pop(sub.id, None)
