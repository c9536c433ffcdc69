import pytest
from hypothesis import settings

# numeric examples vary a lot in cost; rely on max_examples instead of a deadline
settings.register_profile("default", deadline=None)
settings.load_profile("default")

# criterion number -> (label, passed, detail), filled by test_acceptance.py
ACCEPTANCE = {}


@pytest.fixture
def record():
    def _record(number, label, passed, detail=""):
        ACCEPTANCE[number] = (label, bool(passed), detail)
        line = f"criterion {number} [{label}]: {'PASS' if passed else 'FAIL'} {detail}"
        print(line)
        return passed
    return _record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        label, passed, detail = ACCEPTANCE[number]
        terminalreporter.write_line(
            f"criterion {number} [{label}]: {'PASS' if passed else 'FAIL'} {detail}")
