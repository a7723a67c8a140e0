import pytest

from caprog.enumeration import gray_initials

# Per-criterion verdicts collected by test_acceptance.py; printed as one
# line each at the end of the run so the outcome survives output capture.
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def record_criterion(number: int, ok: bool, detail: str) -> None:
    ACCEPTANCE[number] = (ok, detail)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for number in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[number]
        verdict = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"[{verdict}] criterion {number}: {detail}")


@pytest.fixture(scope="session")
def default_family():
    """The measurement family used throughout: 40 Gray rows of width 61."""
    return gray_initials(40, 61)
