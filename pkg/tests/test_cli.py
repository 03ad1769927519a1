import json
import subprocess
import sys

import pytest

from mspectra.cli import main, parse_window
from mspectra.documents import dumps
from mspectra.linalg import QQ
from mspectra.model import is_weak_equivalence
from mspectra.multicomplex import zero_morphism, zero_multicomplex

from conftest import make_K


@pytest.fixture
def files(tmp_path):
    K = make_K(4)
    (tmp_path / "K.json").write_text(dumps(K))
    f = zero_morphism(zero_multicomplex(4, QQ), K)
    (tmp_path / "f.json").write_text(dumps(f))
    (tmp_path / "bad.json").write_text('{"N": 2, "field": "Q", "modules": {"0,0": 1, "0,1": 1, "0,2": 1},'
                                       ' "diffs": [{"i": 0, "from": [0,0], "matrix": [["1"]]},'
                                       ' {"i": 0, "from": [0,1], "matrix": [["1"]]}]}')
    (tmp_path / "junk.json").write_text("{not json")
    return tmp_path


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_validate(files, capsys):
    assert run(["validate", str(files / "K.json")], capsys)[0] == 0
    assert run(["validate", str(files / "bad.json")], capsys)[0] == 1
    code, _, err = run(["validate", str(files / "junk.json")], capsys)
    assert code == 2 and "junk.json:1" in err
    assert run(["validate", str(files / "missing.json")], capsys)[0] == 2


def test_we_exit_codes(files, capsys):
    assert run(["we", "-r", "0", "-s", "3", str(files / "f.json")], capsys)[0] == 0
    code, out, _ = run(["we", "-r", "0", "-s", "2", "--certificates", "--json", str(files / "f.json")], capsys)
    assert code == 1
    rep = json.loads(out)
    assert rep["schema"] == "mspectra-report/1" and rep["result"]["holds"] is False


def test_json_deterministic(files, capsys):
    a = run(["pages", "--json", "-r", "1", "--side", "second", str(files / "K.json")], capsys)[1]
    b = run(["pages", "--json", "-r", "1", "--side", "second", str(files / "K.json")], capsys)[1]
    assert a == b and json.loads(a)


def test_basis(capsys):
    code, out, _ = run(["basis", "--N", "3", "--p", "-2", "--q", "0"], capsys)
    assert code == 0 and "d1.d1" in out and "d2.d0" in out


def test_zw_export(capsys, tmp_path):
    code, out, _ = run(["zw", "--N", "2", "--k", "2", "--window=-3:0,-3:2"], capsys)
    assert code == 0
    (tmp_path / "w.json").write_text(out)
    assert run(["validate", str(tmp_path / "w.json")], capsys)[0] == 0


def test_rlp_crosscheck(files, capsys):
    code, out, _ = run(["rlp", "-r", "0", "-s", "3", "--crosscheck", "--json", str(files / "f.json")], capsys)
    assert json.loads(out)["result"]["agree_I"]


def test_oracle_and_suite(capsys):
    code, out, _ = run(["oracle", "--N", "3", "--samples", "5", "--json"], capsys)
    assert code == 0 and json.loads(out)["result"]["disagreements"] == []
    code, out, _ = run(["suite", "--samples", "2", "--json"], capsys)
    assert code == 0 and json.loads(out)["result"]["ok"]


def test_input_errors(files, capsys):
    assert run(["pages", "-r", "1", "--field", "Fp:4", str(files / "K.json")], capsys)[0] == 2
    assert run(["basis", "--N", "1", "--p", "0", "--q", "0"], capsys)[0] == 2
    assert run(["adjoint", "j", str(files / "K.json")], capsys)[0] == 2
    assert run(["nonsense"], capsys)[0] == 2


def test_parse_window():
    assert parse_window("-3:0,-1:2") == (-3, 0, -1, 2)
    with pytest.raises(Exception):
        parse_window("1:2")


def test_console_script_module():
    out = subprocess.run([sys.executable, "-m", "mspectra.cli", "basis", "--N", "2", "--p", "-1", "--q", "1"],
                         capture_output=True, text=True)
    assert out.returncode == 0 and "d1.d0" in out.stdout


def test_zw_pages_table(capsys, tmp_path):
    code, out, _ = run(["zw", "--N", "2", "--k", "1", "--window=-2:0,-2:2"], capsys)
    (tmp_path / "zwN2k1.json").write_text(out)
    code, out, _ = run(["pages", "--json", "--side", "first", "-r", "1", str(tmp_path / "zwN2k1.json")], capsys)
    assert code == 0
    rows = json.loads(out)["result"]["rows"]
    assert [(r["p"], r["q"], r["dim"]) for r in rows] == [(-1, 0, 1), (0, 0, 1)]
