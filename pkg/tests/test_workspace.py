"""Reading and writing JSON workspaces."""

import json

import pytest

from dgcat_workbench import Field, ValidationError, WorkspaceFormatError
from dgcat_workbench.dgmod import LeftModule, RightModule, diagonal
from dgcat_workbench.workspace import dump_workspace, load_workspace, read_workspace, write_workspace


# -- Helpers ----------------------------------------------------------

def _sample(field="q"):
    return {
        "field": field,
        "categories": {
            "k": {"fixture": "k"},
            "Q2": {"fixture": "Q2"},
            "I": {"fixture": "I"},
            "Q2xI": {"tensor": ["Q2", "I"]},
        },
        "functors": {
            "F": {"source": "k", "target": "Q2", "objects": {"*": "a"}, "maps": {"*|*": [["1"]]}},
        },
        "modules": {
            "diag": {"diagonal": "Q2"},
            "hb": {"representable": {"category": "I", "object": "b", "side": "right"}},
            "ha": {"representable": {"category": "Q2", "object": "a", "side": "left"}},
            "hF": {"functor": "F", "variance": "lower"},
            "half": {
                "left": "k", "right": "k",
                "components": {"*|*": {"degrees": [-1, 0], "d": [["0", "0"], ["1/2", "0"]]}},
            },
        },
    }


# -- Tests ------------------------------------------------------------

def test_load_sample():
    ws = load_workspace(_sample())
    assert ws.field.spec == "q"
    assert ws.category("Q2xI").objects == ("(a,a)", "(a,b)", "(b,a)", "(b,b)")
    assert ws.module("diag") == diagonal(ws.category("Q2"))
    assert isinstance(ws.module("hb"), RightModule)
    assert isinstance(ws.module("ha"), LeftModule)
    assert ws.module("hF").at("a").dim == 1
    d = ws.module("half")[("*", "*")].d
    assert d[(1, 0)] == ws.field((1, 2))


def test_round_trip_is_exact(tmp_path):
    ws = load_workspace(_sample())
    path = tmp_path / "ws.json"
    write_workspace(ws, path)
    back = read_workspace(path)
    for name, cat in ws.categories.items():
        assert back.category(name) == cat, name
    for name, t in ws.modules.items():
        assert back.module(name) == t, name
    assert back.functor("F").object_map == {"*": "a"}
    assert json.loads(path.read_text())["modules"]["half"]["components"]["*|*"]["d"][1][0] == "1/2"


def test_dump_adds_unit_categories():
    data = _sample()
    for name in ("hF", "half"):
        del data["modules"][name]
    del data["functors"]
    del data["categories"]["k"]
    ws = load_workspace(data)
    dumped = dump_workspace(ws)
    assert "k" in dumped["categories"]
    assert dumped["modules"]["hb"]["left"] == "k"


def test_field_override():
    data = _sample("q")
    data["modules"]["half"]["components"]["*|*"]["d"][1][0] = "3"
    ws = load_workspace(data, field_override=Field(2))
    assert ws.field.spec == "fp:2"
    assert ws.module("half")[("*", "*")].d[(1, 0)] == ws.field(1)


def test_zero_denominator_over_a_prime_field():
    with pytest.raises(WorkspaceFormatError):
        load_workspace(_sample("fp:2"))


def test_finite_field_elements():
    data = _sample("fp:3")
    data["modules"]["half"]["components"]["*|*"]["d"][1][0] = "2 mod 3"
    ws = load_workspace(data)
    assert ws.module("half")[("*", "*")].d[(1, 0)] == ws.field(2)
    data["modules"]["half"]["components"]["*|*"]["d"][1][0] = "2 mod 5"
    with pytest.raises(WorkspaceFormatError):
        load_workspace(data)


def test_missing_field():
    data = _sample()
    del data["field"]
    with pytest.raises(WorkspaceFormatError) as err:
        load_workspace(data)
    assert err.value.path == "$.field"


def test_unknown_fixture():
    data = _sample()
    data["categories"]["Q2"] = {"fixture": "Q3"}
    with pytest.raises(WorkspaceFormatError) as err:
        load_workspace(data)
    assert err.value.path == "categories.Q2.fixture"


def test_wrong_matrix_shape():
    data = _sample()
    data["functors"]["F"]["maps"]["*|*"] = [["1", "0"]]
    with pytest.raises(WorkspaceFormatError) as err:
        load_workspace(data)
    assert err.value.path == "functors.F.maps.*|*[0]"


def test_unknown_reference():
    ws = load_workspace(_sample())
    with pytest.raises(WorkspaceFormatError) as err:
        ws.module("nope")
    assert err.value.path == "modules.nope"


def test_bad_differential_is_rejected():
    data = _sample()
    data["modules"]["half"]["components"]["*|*"] = {
        "degrees": [-2, -1, 0], "d": [["0", "0", "0"], ["1", "0", "0"], ["0", "1", "0"]],
    }
    with pytest.raises(ValidationError) as err:
        load_workspace(data)
    assert err.value.axiom == "component"


def test_missing_action_is_reported():
    data = _sample()
    data["modules"]["bad"] = {
        "left": "k", "right": "Q2",
        "components": {"a|*": {"degrees": [0]}, "b|*": {"degrees": [0]}},
    }
    with pytest.raises(WorkspaceFormatError) as err:
        load_workspace(data)
    assert err.value.path == "modules.bad.ract.a|b|*"


def test_invalid_json(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{"field": "q",,}')
    with pytest.raises(WorkspaceFormatError) as err:
        read_workspace(path)
    assert "line 1" in err.value.path
