import pytest

_acceptance = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if item.module.__name__.endswith("test_acceptance") and (
        rep.when == "call" or (rep.when == "setup" and rep.failed)
    ):
        doc = (item.function.__doc__ or item.name).strip().splitlines()[0]
        if hasattr(item, "callspec"):
            doc += f" [{item.callspec.id}]"
        _acceptance.append((rep.passed, doc))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for passed, label in _acceptance:
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {label}")
