import numpy as np
import pytest

from thzfocus import sweeps


@pytest.fixture(scope="session")
def fig2a():
    p = sweeps.preset("fig2a")
    return p.array(), p.scenario(), p.wavelength


@pytest.fixture(scope="session")
def fig2b():
    p = sweeps.preset("fig2b")
    return p.array(), p.scenario(), p.wavelength


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# -- acceptance report -------------------------------------------------------------

_ACCEPTANCE: dict[str, list[tuple[str, str]]] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        _ACCEPTANCE.setdefault(marker.args[0], []).append((item.name, rep.outcome))


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label): acceptance criterion this test belongs to")


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for label in sorted(_ACCEPTANCE, key=lambda s: int(s.split()[0][1:])):
        results = _ACCEPTANCE[label]
        ok = all(outcome == "passed" for _, outcome in results)
        tr.write_line(f"{'PASS' if ok else 'FAIL'}  {label}")
        for name, outcome in results:
            tr.write_line(f"        {outcome:<7} {name}")
