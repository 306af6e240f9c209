"""The ``dgcat`` command line: reports, exit codes and determinism."""

import json

import pytest

from dgcat_workbench.__main__ import build_parser, main
from dgcat_workbench.constants import ORACLE_INSTANCES


# -- Helpers ----------------------------------------------------------

WORKSPACE = {
    "field": "fp:2",
    "categories": {
        "k": {"fixture": "k"},
        "Q2": {"fixture": "Q2"},
        "dual": {"fixture": "dual"},
    },
    "functors": {
        "F": {"source": "k", "target": "Q2", "objects": {"*": "a"}, "maps": {"*|*": [["1"]]}},
        "G": {"source": "Q2", "target": "k", "objects": {"a": "*", "b": "*"},
              "maps": {"a|a": [["1"]], "a|b": [["1"]], "b|b": [["1"]]}},
    },
    "modules": {
        "diag": {"diagonal": "Q2"},
        "ddual": {"diagonal": "dual"},
        "hF": {"functor": "F"},
        "hG": {"functor": "G"},
        "ha": {"representable": {"category": "Q2", "object": "a"}},
    },
}


@pytest.fixture
def workspace(tmp_path):
    path = tmp_path / "ws.json"
    path.write_text(json.dumps(WORKSPACE))
    return str(path)


def _run(capsys, *argv):
    code = main(list(argv))
    report = json.loads(capsys.readouterr().out)
    assert report["exit_code"] == code
    return code, report


# -- Tests ------------------------------------------------------------

def test_every_command_has_a_parser():
    parser = build_parser()
    choices = parser._subparsers._group_actions[0].choices
    assert {"validate", "end", "coend", "adjoint", "oracle", "qcompose"} <= set(choices)


def test_validate(capsys, workspace):
    code, report = _run(capsys, "validate", workspace)
    assert code == 0
    assert report["operation"] == "validate"
    assert report["result"]["ok"]
    assert report["provenance"]["field"] == "fp:2"
    assert report["inputs"]["workspace"] == workspace


def test_end_and_coend(capsys, workspace):
    code, report = _run(capsys, "end", workspace, "--bimodule", "diag")
    assert code == 0
    assert report["result"]["dims"] == {"0": 1}
    assert report["result"]["wedge"] and report["result"]["oracle"]
    code, report = _run(capsys, "coend", workspace, "--bimodule", "diag")
    assert code == 0
    assert report["result"]["dims"] == {"0": 2}
    assert report["inputs"]["bimodule"] == "diag"


def test_field_override(capsys, workspace):
    code, report = _run(capsys, "cohomology", workspace, "--category", "Q2", "--field", "q")
    assert code == 0
    assert report["provenance"]["field"] == "q"
    assert report["result"]["cohomology"]["a|b"] == {"0": 1}


def test_adjoint_exit_codes(capsys, workspace):
    code, report = _run(capsys, "adjoint", workspace, "--of", "hG")
    assert code == 0
    assert report["result"]["exists"]
    code, report = _run(capsys, "adjoint", workspace, "--of", "hF")
    assert code == 1
    assert not report["result"]["exists"]
    assert report["result"]["search"]["exhaustive"]


def test_uncertified_resolution_is_refused(capsys, workspace):
    code, report = _run(capsys, "resolve", workspace, "--bimodule", "ddual", "--depth", "2")
    assert code == 3
    assert report["result"]["error"]["kind"] == "uncertified"


def test_certified_resolution(capsys, workspace):
    code, report = _run(capsys, "resolve", workspace, "--bimodule", "diag")
    assert code == 0
    assert report["result"]["certified"]
    assert report["result"]["required_depth"] == 2


def test_invalid_input(capsys, workspace, tmp_path):
    code, report = _run(capsys, "cohomology", workspace)
    assert code == 2
    assert report["result"]["error"]["axiom"] == "arguments"
    broken = tmp_path / "broken.json"
    broken.write_text(json.dumps({**WORKSPACE, "field": "complex"}))
    code, report = _run(capsys, "validate", str(broken))
    assert code == 2
    assert report["result"]["error"]["path"] == "field"


def test_unknown_module(capsys, workspace):
    code, report = _run(capsys, "end", workspace, "--bimodule", "nope")
    assert code == 2
    assert report["result"]["error"]["path"] == "modules.nope"


def test_representability_search(capsys, workspace):
    code, report = _run(capsys, "qrep", workspace, "--bimodule", "hF")
    assert code == 0
    assert report["result"]["witness"]["assignment"] == {"*": "a"}
    code, report = _run(capsys, "qrep", workspace, "--bimodule", "hF", "--side", "left", "--kind", "quasi")
    assert code == 1
    assert report["result"]["failed_at"] == "b"


def test_json_out(capsys, workspace, tmp_path):
    out = tmp_path / "report.json"
    code = main(["yoneda", workspace, "--module", "ha", "--object", "b", "--json-out", str(out)])
    assert code == 0
    assert capsys.readouterr().out == ""
    report = json.loads(out.read_text())
    assert report["result"]["verified"]


def test_oracle_is_deterministic(capsys):
    first = _run(capsys, "oracle", "--seed", "5eed")
    second = _run(capsys, "oracle", "--seed", "5eed")
    assert first == second
    code, report = first
    assert code == 0
    assert report["result"]["failures"] == []
    assert report["provenance"]["seed"] == "0x5eed"
    assert report["result"]["instances"] == ORACLE_INSTANCES


@pytest.mark.parametrize("argv", [
    ("end", "--bimodule", "diag"),
    ("coyoneda", "--bimodule", "diag"),
    ("resolve", "--bimodule", "diag"),
    ("dhom", "--source", "ha", "--target", "ha"),
    ("dcompose", "--first", "diag", "--second", "diag", "--resolve-both"),
    ("qrep", "--bimodule", "hF", "--side", "left", "--kind", "quasi"),
    ("maps", "--bimodule", "hF"),
    ("quasiadj", "--bimodule", "hF", "--derived"),
    ("adjoint", "--of", "hG"),
], ids=lambda argv: argv[0])
def test_commands_are_byte_deterministic(capsys, workspace, argv):
    outputs = []
    for _ in range(2):
        code = main([argv[0], workspace, *argv[1:], "--seed", "5eed"])
        outputs.append((code, capsys.readouterr().out))
    assert outputs[0] == outputs[1]
    assert json.loads(outputs[0][1])["exit_code"] == outputs[0][0]
