"""Collects acceptance-criterion outcomes and prints one line per criterion."""

import pytest

_RESULTS = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.fixture
def report(request):
    """Attach a one-line measurement summary to the current criterion."""
    lines = []
    request.node.user_properties.append(("details", lines))
    return lines.append


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        details = dict(item.user_properties).get("details", [])
        _RESULTS[mark.args[0]] = (mark.args[1], rep.passed, "; ".join(details))


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_RESULTS):
        title, ok, details = _RESULTS[n]
        line = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {title}"
        if details:
            line += f"  [{details}]"
        terminalreporter.write_line(line)
