import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from psym.huckel import HuckelModel  # noqa: E402


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion covered by the test")


_OUTCOMES: dict[int, list] = {}


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if call.when == "call" or (call.when == "setup" and call.excinfo is not None):
        number, title = marker.args
        if call.excinfo is None:
            status = "PASS"
        elif call.excinfo.errisinstance(pytest.skip.Exception):
            status = "NOT REPRODUCED" if item.get_closest_marker("xfail") is None else "FAIL"
        else:
            status = "FAIL"
        _OUTCOMES.setdefault(number, [title, []])[1].append((item.name, status))


def pytest_terminal_summary(terminalreporter):
    if not _OUTCOMES:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_OUTCOMES):
        title, results = _OUTCOMES[number]
        statuses = {s for _, s in results}
        if statuses == {"PASS"}:
            verdict = "PASS"
        elif "FAIL" in statuses:
            verdict = "FAIL"
        else:
            verdict = statuses.pop()
        names = ", ".join(f"{n}={s}" for n, s in results)
        terminalreporter.write_line(f"criterion {number:2d} {verdict:15s} {title}  [{names}]")


@pytest.fixture(scope="session")
def benzene():
    return HuckelModel()


@pytest.fixture(scope="session")
def benzene_d2h():
    return HuckelModel(6, group_name="D2h")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
