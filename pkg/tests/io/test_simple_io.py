from pathlib import Path

import pytest


@pytest.mark.parametrize(
    "data",
    [
        {"string": "string", "int": 42, "float": 42.2, "bool": True},
        {"solutions": [{"depth": 2, "substitution": {"St:State": "< $ >"}}]},
        {"nested1": {"a": [1, 2, 3]}, "nested2": [{"a": 1, "b": 2}]},
    ],
)
def test_json(data, tmp_path):
    from canarrow.io import dumps_json, load_json, save_json

    file = Path(tmp_path).joinpath("reports", "data.json")

    save_json(data, file)
    data_l = load_json(file)

    assert data == data_l
    assert file.read_text(encoding="utf-8") == dumps_json(data) + "\n"


def test_json_keeps_unicode(tmp_path):
    from canarrow.io import dumps_json

    assert dumps_json({"term": "< bal: x' >", "note": "dépôt"}, indent=None) == (
        '{"term": "< bal: x\' >", "note": "dépôt"}'
    )


def test_txt(tmp_path):
    from canarrow.io import load_txt

    file = Path(tmp_path).joinpath("module.maude")
    file.write_bytes("\ufeffmod M is\n  sort S .\nendm\n".encode())
    assert load_txt(file) == "mod M is\n  sort S .\nendm\n"
