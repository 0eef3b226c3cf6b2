import pytest

from spikebasis.processes import make_rng

ACCEPTANCE_LINES = pytest.StashKey[list]()


@pytest.fixture
def rng():
    return make_rng(12345)


@pytest.fixture
def criterion(request):
    """Record one pass/fail line per acceptance criterion, then assert."""
    lines = request.config.stash.setdefault(ACCEPTANCE_LINES, [])

    def record(label, checks):
        ok = all(bool(v) for v in checks.values())
        failed = [name for name, v in checks.items() if not v]
        line = f"{'PASS' if ok else 'FAIL'}  {label}"
        if failed:
            line += f"  (failed: {', '.join(failed)})"
        lines.append(line)
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(ACCEPTANCE_LINES, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
