import pytest

from canarrow.corpus import CORPUS_DIR
from canarrow.parsing import load_theory, parse_term


@pytest.fixture(scope="module")
def result():
    from canarrow.search import ReachabilityProblem, search

    theory = load_theory(CORPUS_DIR / "vending.maude")
    problem = ReachabilityProblem(
        theory,
        parse_term(theory, "< M1:Money >"),
        parse_term(theory, "St:State"),
        "=>1",
        max_depth=1,
    )
    return search(problem)


def test_report_dict(result):
    from canarrow.report import SCHEMA_KEYS, RunReport

    data = RunReport.from_result(result, label="demo").as_dict()
    assert list(data) == list(SCHEMA_KEYS)
    assert data["count"] == 2
    assert data["problem"]["label"] == "demo"
    assert data["problem"]["filter"] == "off"
    assert data["problem"]["irreducible"] == []
    assert data["problem"]["constraint"] == "true"
    assert data["statistics"]["nodes_created"] == 3
    assert data["statistics"]["complete"] is True
    assert {s["verdict"] for s in data["solutions"]} == {"sat"}


def test_partial_report(result):
    from canarrow.report import RunReport

    report = RunReport.from_result(result, partial=True)
    assert report.as_dict()["partial"] is True
    assert report.text().rstrip().endswith("(partial)")


def test_report_text(result):
    from canarrow.report import RunReport

    lines = RunReport.from_result(result).text_lines()
    assert lines[0] == "standard narrowing in NARROWING-VENDING-MACHINE: < M1:Money > =>1 St:State"
    assert "Solution 1 (depth 1, sat)" in lines
    assert sum(line.startswith("  M1:Money --> ") for line in lines) == 2
    assert "No solution." not in lines
