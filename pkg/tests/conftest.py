import pytest

from microjumper.model import BASELINE, BASELINE_DRIVE, set_path


@pytest.fixture
def baseline():
    return BASELINE


@pytest.fixture
def drive():
    return BASELINE_DRIVE


@pytest.fixture
def vacuum(baseline):
    """Baseline with drag switched off."""
    return set_path(baseline, "body.drag_coefficient", 0.0)


def pytest_terminal_summary(terminalreporter):
    import sys

    module = sys.modules.get("test_acceptance")
    if module is None or not module.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(module.RESULTS, key=lambda s: int(s.split("]")[1].split(".")[0])):
        terminalreporter.write_line(line)
