import warnings

from hypothesis import HealthCheck, settings

settings.register_profile("sumlab", deadline=None, suppress_health_check=[HealthCheck.too_slow], max_examples=60)
settings.load_profile("sumlab")


def pytest_configure(config):
    # numerical warnings are part of the API; tests that expect them say so
    warnings.simplefilter("default")


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE_LINES:
        terminalreporter.write_line(line)
