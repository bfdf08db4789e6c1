import pytest

_ACCEPTANCE = []


@pytest.fixture
def acceptance():
    """Record one acceptance criterion; the summary is printed at the end of the run."""

    def record(cid, name, ok, detail):
        _ACCEPTANCE.append((cid, name, bool(ok), detail))
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for cid, name, ok, detail in sorted(_ACCEPTANCE, key=lambda r: r[0]):
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  [{cid}] {name}: {detail}")
