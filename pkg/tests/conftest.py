import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

_LINES = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_LINES] = []


@pytest.fixture
def acceptance(request):
    """Record one PASS / WARN / FAIL line for an acceptance criterion; returns ``ok``."""
    lines = request.config.stash[_LINES]

    def report(num, title, ok, detail, elapsed, status=None):
        status = status or ("PASS" if ok else "FAIL")
        lines.append(f"[AC{num:02d}] {status:<4} {title} ({elapsed:.2f} s): {detail}")
        return ok

    return report


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_LINES, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
