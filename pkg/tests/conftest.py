from __future__ import annotations

import pytest

from veldkamp.space import space
from veldkamp.verify import Context

# criterion number -> (title, passed, failing test ids)
_CRITERIA: dict[int, list] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion covered by the test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    m = item.get_closest_marker("criterion")
    if m is None or not (rep.when == "call" or rep.failed):
        return
    n, title = m.args
    entry = _CRITERIA.setdefault(n, [title, True, []])
    if not rep.passed:
        entry[1] = False
        entry[2].append(item.name)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        title, ok, failed = _CRITERIA[n]
        tail = "" if ok else f" ({', '.join(failed)})"
        terminalreporter.write_line(f"criterion {n:2d} {'PASS' if ok else 'FAIL'} {title}{tail}")


@pytest.fixture(scope="session")
def sp2():
    return space(3, 2)


@pytest.fixture(scope="session")
def sp3():
    return space(3, 3)


@pytest.fixture(scope="session")
def ctx():
    """Shared verification context; the S_4(3) census is built once on first use."""
    return Context(dual_stride=1)
