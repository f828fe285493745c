import re

import pytest

ACCEPTANCE: dict[int, str] = {}


def _line(number: int, ok: bool, detail: str) -> str:
    return f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}"


@pytest.fixture
def criterion(request):
    """Record one PASS/FAIL line per acceptance criterion; tests are named test_criterion_NN_*."""
    number = int(re.search(r"criterion_(\d+)", request.node.name).group(1))

    def record(ok: bool, detail: str) -> bool:
        ACCEPTANCE[number] = _line(number, ok, detail)
        print(ACCEPTANCE[number])
        return ok

    yield record
    if number not in ACCEPTANCE:
        ACCEPTANCE[number] = _line(number, False, "raised before a verdict")
        print(ACCEPTANCE[number])


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[number])
