import pytest

_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(name): acceptance criterion reported in the summary")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    name = mark.args[0]
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        _CRITERIA[name] = "PASS" if rep.outcome == "passed" else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for name, verdict in _CRITERIA.items():
        terminalreporter.write_line(f"{verdict}  {name}")
