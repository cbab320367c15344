from __future__ import annotations

from pathlib import Path

import pytest

from igkit import parse_document

DATA = Path(__file__).parent / "data"

# criterion number -> (passed, detail); filled in by test_acceptance
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


@pytest.fixture(scope="session")
def golden_text() -> str:
    return (DATA / "golden.ig").read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def golden_records(golden_text):
    return parse_document(golden_text)


@pytest.fixture(scope="session")
def golden(golden_records):
    return {r.id: r.parsed for r in golden_records}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        passed, detail = ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if passed else 'FAIL'}  {detail}")
