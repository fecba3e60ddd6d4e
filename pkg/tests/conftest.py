import time
from contextlib import contextmanager

import pytest

# criterion number -> (title, passed, seconds, detail)
ACCEPTANCE = {}
# certificates emitted while checking criteria 1-8, replayed by criterion 9
EMITTED = []


@contextmanager
def _criterion(number: int, title: str, limit: float | None = None):
    start = time.perf_counter()
    try:
        yield
    except BaseException as exc:
        detail = str(exc).splitlines()[0] if str(exc) else type(exc).__name__
        ACCEPTANCE[number] = (title, False, time.perf_counter() - start, detail)
        raise
    elapsed = time.perf_counter() - start
    if limit is not None and elapsed >= limit:
        ACCEPTANCE[number] = (title, False, elapsed, f"took {elapsed:.3f}s, limit {limit}s")
        pytest.fail(f"criterion {number} took {elapsed:.3f}s (limit {limit}s)")
    ACCEPTANCE[number] = (title, True, elapsed, "")


@pytest.fixture
def criterion():
    return _criterion


@pytest.fixture
def emitted():
    return EMITTED


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        title, ok, seconds, detail = ACCEPTANCE[number]
        line = f"criterion {number:2d} {'PASS' if ok else 'FAIL'}  {title}  ({seconds:.3f}s)"
        if detail:
            line += f"  {detail}"
        terminalreporter.write_line(line)
