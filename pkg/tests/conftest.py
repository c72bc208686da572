from __future__ import annotations

import time
from contextlib import contextmanager
from pathlib import Path

import pytest

from .helpers import TOY

SUITE_BUDGET_S = 30.0
_RESULTS: list[tuple[str, bool, str]] = []
_START = time.perf_counter()


@pytest.fixture
def toy_dir() -> Path:
    return TOY


@pytest.fixture
def criterion():
    """Context manager recording one acceptance criterion's outcome and runtime."""

    @contextmanager
    def run(label: str, budget_s: float | None = None):
        start = time.perf_counter()
        try:
            yield
            elapsed = time.perf_counter() - start
            if budget_s is not None:
                assert elapsed < budget_s, f"took {elapsed:.2f}s, budget {budget_s:g}s"
        except BaseException as exc:
            _RESULTS.append((label, False, f"{type(exc).__name__}: {exc}".splitlines()[0][:160]))
            raise
        _RESULTS.append((label, True, f"{elapsed:.2f}s"))

    return run


def pytest_sessionfinish(session, exitstatus):
    elapsed = time.perf_counter() - _START
    if session.testscollected and elapsed >= SUITE_BUDGET_S and exitstatus == 0:
        session.exitstatus = pytest.ExitCode.TESTS_FAILED
    session.config._suite_elapsed = elapsed


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for label, ok, detail in _RESULTS:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {label}  ({detail})")
    elapsed = getattr(config, "_suite_elapsed", time.perf_counter() - _START)
    ok = elapsed < SUITE_BUDGET_S
    terminalreporter.write_line(
        f"{'PASS' if ok else 'FAIL'}  suite runtime {elapsed:.1f}s (budget {SUITE_BUDGET_S:g}s)"
    )
