import time
from pathlib import Path

SUITE_LIMIT = 120.0
_start = time.perf_counter()


def _full_suite(session):
    files = {Path(str(item.fspath)).name for item in session.items}
    expected = {p.name for p in Path(__file__).parent.glob("test_*.py")}
    return files == expected


def pytest_sessionfinish(session, exitstatus):
    session.config._suite_seconds = time.perf_counter() - _start
    session.config._suite_full = _full_suite(session)
    if session.config._suite_full and session.config._suite_seconds >= SUITE_LIMIT:
        session.exitstatus = 1


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if getattr(config, "_suite_full", False):
        secs = config._suite_seconds
        status = "PASS" if secs < SUITE_LIMIT else "FAIL"
        terminalreporter.write_line(
            f"[criterion 9] {status} full suite wall time: {secs:.1f}s (< {SUITE_LIMIT:.0f}s)")
