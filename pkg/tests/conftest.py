import json
from pathlib import Path

import pytest

FIXTURES = Path(__file__).parent / "fixtures"


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One PASS/FAIL line per acceptance criterion at the end of the run."""
    outcomes = {}
    durations = {}
    for status in ("passed", "failed", "error"):
        for report in terminalreporter.stats.get(status, []):
            nodeid = getattr(report, "nodeid", "")
            if "test_acceptance.py" not in nodeid:
                continue
            name = nodeid.split("::")[-1]
            outcomes[name] = "PASS" if status == "passed" else "FAIL"
            durations[name] = getattr(report, "duration", 0.0)
    if not outcomes:
        return
    try:
        from test_acceptance import ACCEPTANCE_CRITERIA
    except ImportError:
        ACCEPTANCE_CRITERIA = {}
    terminalreporter.write_sep("-", "acceptance criteria")
    for name, outcome in outcomes.items():
        label = ACCEPTANCE_CRITERIA.get(name, name)
        terminalreporter.write_line(
            f"{outcome}  {label}  ({durations.get(name, 0.0):.2f}s)"
        )


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def corpus_lines():
    with open(FIXTURES / "ingredient_corpus.jsonl", encoding="utf-8") as fh:
        return [json.loads(line) for line in fh if line.strip()]
