from __future__ import annotations

import time

import pytest
from hypothesis import settings

settings.register_profile("rmkit", deadline=None, max_examples=200)
settings.load_profile("rmkit")

# acceptance summary -----------------------------------------------------

_ACCEPTANCE: dict[int, dict] = {}


_STARTED = time.perf_counter()
SUITE_BUDGET_S = 60.0


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion n")


def pytest_runtest_logreport(report):
    crit = getattr(report, "criterion", None)
    if crit is None:
        return
    n, title = crit
    entry = _ACCEPTANCE.setdefault(n, {"title": title, "ok": True, "seen": False})
    if report.when == "call":
        entry["seen"] = True
    if report.failed:
        entry["ok"] = False


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    marker = item.get_closest_marker("criterion")
    if marker is not None:
        outcome.get_result().criterion = tuple(marker.args)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_ACCEPTANCE):
        e = _ACCEPTANCE[n]
        verdict = "PASS" if e["ok"] and e["seen"] else "FAIL"
        terminalreporter.write_line(f"criterion {n:>2} {verdict}  {e['title']}")
    elapsed = time.perf_counter() - _STARTED
    verdict = "PASS" if elapsed < SUITE_BUDGET_S else "FAIL"
    terminalreporter.write_line(f"suite wall-clock {verdict}  {elapsed:.1f} s (budget {SUITE_BUDGET_S:.0f} s)")
