from __future__ import annotations

import pytest

_CRITERIA: dict[int, tuple[str, str]] = {}


class CriterionRecorder:
    def __init__(self) -> None:
        self.lines = _CRITERIA

    def record(self, number: int, ok: bool, detail: str) -> None:
        self.lines[number] = ("PASS" if ok else "FAIL", detail)


@pytest.fixture(scope="session")
def criteria() -> CriterionRecorder:
    return CriterionRecorder()


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        status, detail = _CRITERIA[number]
        terminalreporter.write_line(f"criterion {number}: {status}  {detail}")
