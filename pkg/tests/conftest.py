from pathlib import Path

import pytest

from prooflint.corpus import load_corpus

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

# One "PASS <label>" / "FAIL <label>" line per release criterion, filled in by
# the acceptance tests and echoed after the run (pytest captures stdout at the
# file-descriptor level, so the tests cannot print these lines directly).
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("release criteria")
    for line in ACCEPTANCE_LINES:
        terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def prelude_env():
    return load_corpus(FIXTURES / "prelude.pcorpus")


@pytest.fixture(scope="session")
def seeded_env():
    return load_corpus(FIXTURES / "seeded.pcorpus")


@pytest.fixture(scope="session")
def length_nf_env():
    return load_corpus(FIXTURES / "length_nf.pcorpus")


@pytest.fixture(scope="session")
def docs_env():
    return load_corpus(FIXTURES / "docs.pcorpus")
