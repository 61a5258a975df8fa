"""FIFO job queue that serialises all widget work onto one thread."""

from __future__ import annotations

import logging
import threading
from collections import deque
from concurrent.futures import Future
from concurrent.futures import TimeoutError as FutureTimeout
from dataclasses import dataclass, field
from typing import Any, Callable

from .observable import error_hook as _scoped_error_hook

log = logging.getLogger(__name__)

ErrorHook = Callable[[BaseException], None]


def log_error(exc: BaseException) -> None:
    log.error("unhandled error in event loop job", exc_info=exc)


@dataclass
class CallbackJob:
    """A user callback, e.g. a button action, run on the loop thread."""

    callback: Callable[..., Any]
    args: tuple = ()

    def __call__(self) -> None:
        self.callback(*self.args)


@dataclass
class ControlJob:
    """Framework work (tree construction, teardown) marshalled onto the loop."""

    fn: Callable[[], Any]
    future: Future = field(default_factory=Future)

    def __call__(self) -> None:
        if not self.future.set_running_or_notify_cancel():
            return
        try:
            self.future.set_result(self.fn())
        except BaseException as exc:
            self.future.set_exception(exc)


class EventLoop:
    """Jobs run one at a time in enqueue order.

    The loop can be pumped synchronously with :meth:`run_until_idle`
    (tests, headless scripts) or served from a dedicated thread with
    :meth:`start`/:meth:`run`. Failures inside a job go to ``error_hook``
    and the loop moves on to the next job.
    """

    def __init__(self, error_hook: ErrorHook | None = None):
        self.error_hook: ErrorHook = error_hook or log_error
        self._jobs: deque[Callable[[], Any]] = deque()
        self._cond = threading.Condition()
        self._busy = False
        self._stopping = False
        self._owner: threading.Thread | None = None
        self.executed = 0
        self.after_job: Callable[[], None] | None = None

    def post(self, job: Callable[[], Any]) -> None:
        with self._cond:
            self._jobs.append(job)
            self._cond.notify_all()

    def pending(self) -> int:
        with self._cond:
            return len(self._jobs)

    @property
    def running(self) -> bool:
        return self._owner is not None

    def in_loop_thread(self) -> bool:
        return self._owner is None or self._owner is threading.current_thread()

    def _execute(self, job: Callable[[], Any]) -> None:
        with _scoped_error_hook(self.error_hook):
            try:
                job()
            except Exception as exc:
                self.error_hook(exc)
        self.executed += 1
        if self.after_job is not None:
            self.after_job()

    def _pop(self) -> Callable[[], Any] | None:
        with self._cond:
            if not self._jobs:
                return None
            self._busy = True
            return self._jobs.popleft()

    def _done(self) -> None:
        with self._cond:
            self._busy = False
            self._cond.notify_all()

    def run_until_idle(self) -> int:
        """Execute queued jobs, including ones they enqueue, until none remain."""
        if self._owner is not None and self._owner is not threading.current_thread():
            raise RuntimeError("loop is being served by another thread; use wait_idle()")
        count = 0
        while (job := self._pop()) is not None:
            try:
                self._execute(job)
            finally:
                self._done()
            count += 1
        return count

    def run(self, until: Callable[[], bool] | None = None, poll: float = 0.05) -> None:
        """Serve jobs on the calling thread until stopped or ``until()`` holds."""
        with self._cond:
            if self._owner is not None:
                raise RuntimeError("loop is already running")
            self._owner = threading.current_thread()
            self._stopping = False
            self._cond.notify_all()
        try:
            while True:
                with self._cond:
                    while not self._jobs and not self._stopping:
                        if until is not None and until():
                            return
                        self._cond.wait(poll)
                    if not self._jobs:
                        return
                    job = self._jobs.popleft()
                    self._busy = True
                try:
                    self._execute(job)
                finally:
                    self._done()
                if until is not None and until():
                    return
        finally:
            with self._cond:
                self._owner = None
                self._cond.notify_all()

    def start(self, until: Callable[[], bool] | None = None) -> threading.Thread:
        thread = threading.Thread(target=self.run, args=(until,), name="easyview-loop", daemon=True)
        thread.start()
        with self._cond:
            self._cond.wait_for(lambda: self._owner is not None or not thread.is_alive())
        return thread

    def stop(self) -> None:
        with self._cond:
            self._stopping = True
            self._cond.notify_all()
            if self._owner is not threading.current_thread():
                self._cond.wait_for(lambda: self._owner is None)

    def wait_idle(self, timeout: float | None = None) -> bool:
        """Block until the queue is empty and no job is executing."""
        if self.in_loop_thread():
            self.run_until_idle()
            return True
        with self._cond:
            return self._cond.wait_for(
                lambda: (not self._jobs and not self._busy) or self._owner is None, timeout
            )

    def call(self, fn: Callable[[], Any], timeout: float | None = None) -> Any:
        """Run ``fn`` on the loop thread and return its result."""
        if self.in_loop_thread():
            return fn()
        job = ControlJob(fn)
        self.post(job)
        while True:
            try:
                return job.future.result(timeout if timeout is not None else 0.05)
            except FutureTimeout:
                if timeout is not None:
                    raise
            if self._owner is None and job.future.cancel():
                # Loop stopped before reaching the job.
                return fn()
