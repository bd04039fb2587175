"""Collects acceptance-criterion outcomes and prints one line per criterion."""
import pytest

_RESULTS: dict[int, tuple[str, str]] = {}
_NOTES: dict[int, list[str]] = {}


def pytest_runtest_logreport(report):
    marker = getattr(report, "acceptance", None)
    if marker is None:
        return
    number, title = marker
    for key, value in report.user_properties:
        if key == "note" and report.when == "call":
            _NOTES.setdefault(number, []).append(str(value))
    if report.when == "call" or report.failed:
        prev = _RESULTS.get(number, (title, "PASS"))[1]
        status = "FAIL" if report.failed or prev == "FAIL" else "PASS"
        _RESULTS[number] = (title, status)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    m = item.get_closest_marker("acceptance")
    if m is not None:
        outcome.get_result().acceptance = tuple(m.args)


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_RESULTS):
        title, status = _RESULTS[number]
        terminalreporter.write_line(f"[{status}] {number:2d}. {title}")
        for note in _NOTES.get(number, []):
            terminalreporter.write_line(f"         {note}")
