import json

import pytest

VENDING = ["--module", "vending.maude", "--initial", "< M1:Money >", "--target", "St:State"]

TINY_CORPUS = """
name: tiny
requires: {requires}
defaults:
  theory: vending.maude
  initial: "< M1:Money >"
  target: "St:State"
cells:
  - {{label: ok, algorithm: standard, max_depth: 1, expected: 3}}
  - {{label: wrong, algorithm: canonical, max_depth: 1, expected: 4}}
"""


@pytest.fixture
def tiny_corpus(tmp_path, monkeypatch):
    from canarrow.registry import CORPUS_REGISTRY

    path = tmp_path / "tiny.yaml"
    path.write_text(TINY_CORPUS.format(requires="null"))
    monkeypatch.setitem(CORPUS_REGISTRY, "tiny", {"name": "tiny", "path": str(path)})
    return path


@pytest.mark.parametrize(
    "text,terms",
    [
        ("< $ >", ["< $ >"]),
        ("< $ > ; < q M:Marking >", ["< $ >", "< q M:Marking >"]),
        ("f(a ; b) ; [x ; y] ;", ["f(a ; b)", "[x ; y]"]),
        ("", []),
    ],
)
def test_split_terms(text, terms):
    from canarrow.cli.narrow import split_terms

    assert split_terms(text) == terms


def test_narrow_text_output(capsys):
    from canarrow.cli.narrow import EXIT_FOUND, main

    assert main(VENDING + ["--max-depth", "1"]) == EXIT_FOUND
    out = capsys.readouterr().out
    assert "Solution 0 (depth 0, sat)" in out
    assert "rules: buy-c" in out
    assert out.splitlines()[-1].startswith("3 solutions")


def test_narrow_json_output(capsys):
    from canarrow import __version__
    from canarrow.cli.narrow import main
    from canarrow.report import SCHEMA_KEYS

    assert main(VENDING + ["--max-depth", "1", "--arrow", "=>1", "--output", "json"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert set(SCHEMA_KEYS) <= set(report)
    assert report["engine"] == {"name": "canarrow", "version": __version__}
    assert report["count"] == 2
    assert report["problem"]["arrow"] == "=>1"
    assert report["problem"]["max_solutions"] == "unbounded"
    assert sorted(s["trace"] for s in report["solutions"]) == [["buy-a"], ["buy-c"]]
    for solution in report["solutions"]:
        assert set(solution["substitution"]) == {"M1:Money", "St:State"}


def test_narrow_without_solution(capsys):
    from canarrow.cli.narrow import EXIT_NONE, main

    args = ["--module", "vending.maude", "--initial", "< c >", "--target", "< $ >"]
    assert main(args + ["--max-depth", "2"]) == EXIT_NONE
    assert "No solution." in capsys.readouterr().out


@pytest.mark.parametrize(
    "args",
    [
        ["--module", "vending.maude", "--initial", "< $ >"],
        VENDING + ["--algo", "standard canonical"],
        VENDING + ["--target", "< nothing >"],
        ["--module", "missing.maude", "--initial", "< $ >", "--target", "St:State"],
    ],
)
def test_narrow_errors(args, capsys):
    from canarrow.cli.narrow import EXIT_ERROR, main

    assert main(args) == EXIT_ERROR
    assert "Error:" in capsys.readouterr().err


def test_narrow_rejects_unknown_arrow():
    from canarrow.cli.narrow import main

    with pytest.raises(SystemExit):
        main(VENDING + ["--arrow", "=>?"])


def test_narrow_config_file(tmp_path, capsys):
    from omegaconf import OmegaConf

    from canarrow.cli.narrow import main

    cfg = tmp_path / "problem.yaml"
    OmegaConf.save(
        OmegaConf.create(
            {
                "theory": "vending.maude",
                "initial": "< M1:Money >",
                "target": "St:State",
                "algorithm": "canonical",
                "max_depth": 3,
            }
        ),
        cfg,
    )
    assert main(["-c", str(cfg), "--max-depth", "1", "--output", "json"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["problem"]["algorithm"] == "canonical"
    assert report["problem"]["max_depth"] == 1
    assert report["count"] == 3


def test_run_cell(tiny_corpus):
    from canarrow.cli.bench import COLUMNS, run_cell

    row = run_cell(str(tiny_corpus), "ok")
    assert list(row) == COLUMNS
    assert row["solutions"] == 3
    assert row["match"] is True
    assert row["complete"] is True
    assert row["status"] == "ok"


def test_run_cell_needs_external_solver(tmp_path):
    from canarrow.cli.bench import run_cell

    path = tmp_path / "external.yaml"
    path.write_text(TINY_CORPUS.format(requires="external"))
    row = run_cell(str(path), "ok")
    assert row["status"].startswith("skipped")
    assert row["solutions"] is None


def test_bench_table(tiny_corpus):
    from canarrow.cli.bench import COLUMNS, bench

    table = bench("tiny", p=1, progressbar=False)
    assert list(table.columns) == COLUMNS
    assert table["label"].tolist() == ["ok", "wrong"]
    assert table["solutions"].tolist() == [3, 3]
    assert table["match"].tolist() == [True, False]


def test_bench_unknown_label_and_corpus(tiny_corpus):
    from canarrow.cli.bench import bench
    from canarrow.errors import OptionError

    with pytest.raises(ValueError):
        bench("tiny", labels=["missing"], progressbar=False)
    with pytest.raises(OptionError):
        bench("no-such-corpus", progressbar=False)


def test_bench_main_writes_csv(tiny_corpus, tmp_path, capsys):
    import pandas as pd

    from canarrow.cli.bench import main

    out = tmp_path / "results" / "tiny.csv"
    assert main(["tiny", "-l", "ok", "-o", str(out)]) == 0
    assert "Saved results" in capsys.readouterr().out
    table = pd.read_csv(out)
    assert table["solutions"].tolist() == [3]
    assert main(["tiny", "-o", str(out)]) == 1
    assert main(["no-such-corpus"]) == 2


def test_narrow_saves_report(tmp_path, capsys):
    from canarrow.cli.narrow import main
    from canarrow.io import load_json

    out = tmp_path / "reports" / "vending.json"
    assert main(VENDING + ["--max-depth", "1", "--save-report", str(out)]) == 0
    assert "3 solutions" in capsys.readouterr().out
    report = load_json(out)
    assert report["count"] == 3
    assert report["problem"]["module"] == "NARROWING-VENDING-MACHINE"


def test_bench_records_timeout():
    from canarrow.cli.bench import bench

    table = bench("proc-counter", ["standard-2"], time_limit=1.0, progressbar=False)
    (row,) = table.to_dict("records")
    assert row["status"] == "timeout"
    assert row["match"] is None
    assert row["wall_time"] >= 0.9


def test_bench_main_accepts_time_limit(tiny_corpus, capsys):
    from canarrow.cli.bench import main

    assert main(["tiny", "-l", "ok", "--time-limit", "60"]) == 0
    assert "ok" in capsys.readouterr().out
