import pytest

_results = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion covered by the test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    n, title = mark.args
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        _results.setdefault(n, [title, []])[1].append((rep.outcome, getattr(item, "acceptance_detail", "")))


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_results):
        title, runs = _results[n]
        status = "PASS" if all(o == "passed" for o, _ in runs) else "FAIL"
        details = "; ".join(d for _, d in runs if d)
        terminalreporter.write_line(f"C{n} {status} {title}" + (f" ({details})" if details else ""))


@pytest.fixture
def detail(request):
    """Record a one-line measurement that goes next to the criterion's pass/fail line."""
    def put(text):
        request.node.acceptance_detail = text
        print(text)
    return put
