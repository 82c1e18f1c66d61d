import pytest

_RESULTS: dict[int, list[bool]] = {}
_TITLES: dict[int, str] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("acceptance")
    if mark is None or report.when != "call" and report.passed:
        return
    number = mark.args[0]
    _TITLES[number] = mark.kwargs.get("title", item.name)
    _RESULTS.setdefault(number, []).append(report.passed)


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_RESULTS):
        status = "PASS" if all(_RESULTS[number]) else "FAIL"
        terminalreporter.write_line(f"{status} criterion {number}: {_TITLES[number]}")
