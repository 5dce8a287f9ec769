from importlib import resources
from pathlib import Path

import pytest

from rulescope.formats import load_graph, load_rules, load_schema

DATA = resources.files("rulescope") / "data"
TEST_DATA = Path(__file__).parent / "data"


@pytest.fixture
def s1():
    return load_schema(DATA / "s1.schema")


@pytest.fixture
def mine_rules():
    return load_rules(DATA / "mine.rules")


@pytest.fixture
def i1():
    return load_graph(DATA / "i1.graph")


@pytest.fixture
def data_dir():
    return DATA


@pytest.fixture
def test_data():
    return TEST_DATA


_verdicts = []


@pytest.fixture
def verdict():
    """Record one PASS/FAIL line for the acceptance summary."""
    def record(n, ok, detail=""):
        line = f"criterion {n}: {'PASS' if ok else 'FAIL'}" + (f"  {detail}" if detail else "")
        _verdicts.append(line)
        print(line)
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if _verdicts:
        terminalreporter.section("acceptance criteria")
        for line in _verdicts:
            terminalreporter.write_line(line)
