import pytest

from canarrow.corpus import CORPUS_DIR


def _vending_config(**kwargs):
    cfg = {
        "label": "vending-test",
        "theory": "vending.maude",
        "initial": "< M1:Money >",
        "target": "St:State",
        "max_depth": 1,
    }
    cfg.update(kwargs)
    return cfg


@pytest.mark.parametrize(
    "cfg",
    [
        {"initial": "< $ >", "target": "St:State"},
        _vending_config(initial=""),
        _vending_config(theory=3),
        _vending_config(arrow="=>?"),
        _vending_config(algorithm="smt fast"),
        _vending_config(max_depth=0),
        _vending_config(max_depth="deep"),
        _vending_config(max_solutions=True),
        _vending_config(irreducible="< $ >"),
        _vending_config(unknown_policy="maybe"),
        _vending_config(filter="sometimes"),
        _vending_config(time_limit=0),
        _vending_config(time_limit="soon"),
    ],
)
def test_invalid_problem_config(cfg, capsys):
    from canarrow.config_manager import ProblemConfigManager

    with pytest.raises(ValueError, match="is invalid"):
        ProblemConfigManager(cfg)
    assert capsys.readouterr().out != ""


def test_lenient_config_keeps_invalid_entries():
    from canarrow.config_manager import ProblemConfigManager

    manager = ProblemConfigManager(_vending_config(arrow="=>?"), strict=False)
    assert manager.arrow == "=>?"


def test_problem_from_bundled_theory():
    from canarrow.config_manager import ProblemConfigManager
    from canarrow.search import Arrow

    manager = ProblemConfigManager(
        _vending_config(arrow="=>1", algorithm="canonical", max_solutions="unbounded")
    )
    problem = manager.problem()
    assert manager.theory_file == CORPUS_DIR / "vending.maude"
    assert problem.theory.name == "NARROWING-VENDING-MACHINE"
    assert problem.arrow is Arrow.ONE
    assert problem.options.canonical
    assert problem.max_depth == 1
    assert problem.max_solutions is None


def test_problem_from_local_theory(tmp_path):
    from canarrow.config_manager import ProblemConfigManager

    source = (CORPUS_DIR / "vending.maude").read_text()
    (tmp_path / "machine.maude").write_text(source)
    manager = ProblemConfigManager(
        _vending_config(
            theory="machine.maude",
            irreducible=["< M1:Money $ >"],
            filter="on",
            time_limit=30,
        ),
        base_dir=tmp_path,
    )
    problem = manager.problem()
    assert manager.theory_file == tmp_path / "machine.maude"
    assert len(problem.irreducible) == 1
    assert problem.options.filter
    assert problem.options.time_limit == 30.0
    assert not ProblemConfigManager(_vending_config()).problem().options.filter


def test_problem_with_constraint_and_module():
    from canarrow.config_manager import ProblemConfigManager
    from canarrow.smt.prelude import TRUE

    manager = ProblemConfigManager(
        {
            "theory": "bank-account.maude",
            "module": "BANK-ACCOUNT",
            "initial": "< bal: X:Real pend: Y:Real overdraft: false > # mt",
            "target": "S:State",
            "algorithm": "smt noCheck",
            "constraint": "X:Real > Y:Real",
            "include_nonexec": True,
        }
    )
    problem = manager.problem()
    assert problem.constraint != TRUE
    assert problem.options.smt == "noCheck"
    assert problem.options.include_nonexec
    assert problem.max_depth is None


def test_resolve_theory_path(tmp_path):
    from canarrow.config_manager import resolve_theory_path

    assert resolve_theory_path("xor-protocol.maude") == CORPUS_DIR / "xor-protocol.maude"
    local = tmp_path / "own.maude"
    local.write_text("mod OWN is\nendm\n")
    assert resolve_theory_path(local) == local
    assert resolve_theory_path("own.maude", tmp_path) == tmp_path / "own.maude"
    with pytest.raises(FileNotFoundError):
        resolve_theory_path("missing.maude", tmp_path)


def test_backend_spec():
    from canarrow.config_manager import ProblemConfigManager
    from canarrow.smt import BuiltinBackend, ExternalBackend

    options = ProblemConfigManager(_vending_config()).options()
    assert isinstance(options.backend, BuiltinBackend)
    options = ProblemConfigManager(_vending_config(smt_backend="external:z3 -in")).options()
    assert isinstance(options.backend, ExternalBackend)
    assert options.backend.command == ["z3", "-in"]


def test_corpus_cells_merge_defaults(tmp_path):
    from canarrow.config_manager import CorpusConfigManager

    corpus = CorpusConfigManager(
        {
            "name": "tiny",
            "defaults": _vending_config(),
            "cells": [
                {"label": "one", "arrow": "=>1"},
                {"label": "two", "max_depth": 2, "expected": 7},
            ],
        }
    )
    assert corpus.name == "tiny"
    assert corpus.requires is None
    assert corpus.labels() == ["one", "two"]
    assert len(corpus) == 2
    assert corpus["one"].arrow == "=>1"
    assert corpus["one"].max_depth == 1
    assert corpus["two"].max_depth == 2
    assert corpus["two"].expected == 7
    with pytest.raises(ValueError):
        corpus.cell("three")


def test_corpus_cells_must_be_a_list():
    from canarrow.config_manager import CorpusConfigManager

    with pytest.raises(ValueError):
        CorpusConfigManager({"name": "broken", "cells": {"label": "one"}})


def test_bundled_corpus_is_registered():
    from canarrow.config_manager import CorpusConfigManager
    from canarrow.registry import CORPUS_REGISTRY

    assert set(CORPUS_REGISTRY) == {
        "vending",
        "idem-vending",
        "xor-protocol",
        "proc-counter",
        "bank-account",
        "brands-chaum-time",
        "brands-chaum-space",
    }
    for entry in CORPUS_REGISTRY.values():
        corpus = CorpusConfigManager(entry["path"])
        assert len(corpus) > 0
        for cell in corpus.cells:
            cell.problem()


def test_duplicate_corpus_registration():
    from canarrow.registry import CORPUS_REGISTRY, register_corpus

    with pytest.raises(ValueError):
        register_corpus("vending", CORPUS_REGISTRY["vending"])
