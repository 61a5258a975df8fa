import sys
import time

import pytest

from easyview import HeadlessBackend
from easyview.observable import DEFAULT_MAX_DEPTH, set_max_depth


class ErrorLog(list):
    def __call__(self, exc):
        self.append(exc)

    def of(self, kind):
        return [e for e in self if isinstance(e, kind)]


@pytest.fixture
def errors():
    return ErrorLog()


@pytest.fixture
def backend(errors):
    b = HeadlessBackend()
    b.loop.error_hook = errors
    return b


@pytest.fixture(autouse=True)
def _reset_depth():
    yield
    set_max_depth(DEFAULT_MAX_DEPTH)


def kinds(backend, since=0):
    return [op.kind.value for op in backend.call_log()[since:]]


# -- acceptance summary: one line per criterion, plus the suite wall time

_session = {}


def pytest_sessionstart(session):
    _session["start"] = time.perf_counter()


def pytest_sessionfinish(session, exitstatus):
    _session["elapsed"] = elapsed = time.perf_counter() - _session["start"]
    acceptance = sys.modules.get("tests.test_acceptance")
    if acceptance is not None and acceptance.RESULTS and elapsed >= acceptance.SUITE_RUNTIME_LIMIT_S:
        session.exitstatus = 1


def pytest_terminal_summary(terminalreporter):
    acceptance = sys.modules.get("tests.test_acceptance")
    if acceptance is None or not acceptance.RESULTS:
        return
    elapsed = _session.get("elapsed", time.perf_counter() - _session["start"])
    limit = acceptance.SUITE_RUNTIME_LIMIT_S
    terminalreporter.section("acceptance criteria")
    for number in sorted(acceptance.TITLES):
        status, title = acceptance.RESULTS.get(number, ("NOT RUN", acceptance.TITLES[number]))
        if number == 10 and status == "PASS" and elapsed >= limit:
            status = "FAIL"
        if number == 10:
            title += f" (suite took {elapsed:.2f} s, limit {limit:.0f} s)"
        terminalreporter.write_line(f"criterion {number:2d}: {status}  {title}")
