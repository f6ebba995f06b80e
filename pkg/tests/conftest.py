import pytest

_criteria = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if rep.when == "call" or (rep.when == "setup" and rep.failed):
        _criteria.append((marker.args[0], marker.args[1], rep.passed))


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, label): acceptance criterion")


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for num, label, ok in sorted(_criteria):
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  criterion {num:>2}: {label}")
