import json

import pytest

from mspectra.documents import DocumentError, dumps, loads, load_morphism
from mspectra.linalg import GF, QQ
from mspectra.randgen import make_rng, random_morphism, random_multicomplex
from mspectra.representables import zw


def test_roundtrip_objects(field):
    rng = make_rng(7)
    for _ in range(20):
        A = random_multicomplex(rng, rng.randrange(2, 5), field)
        text = dumps(A)
        assert loads(text) == A
        assert dumps(loads(text)) == text


def test_roundtrip_morphisms():
    rng = make_rng(8)
    for _ in range(10):
        f = random_morphism(rng, 3, QQ)
        g = loads(dumps(f))
        assert g.source == f.source and g.target == f.target
        assert all(g.block(b) == f.block(b) for b in f.source.support)


def test_window_marker_roundtrip():
    W = zw(2, 2, 0, 0).window(QQ, -3)
    assert loads(dumps(W)).exact == W.exact


def test_file_references(tmp_path):
    A = random_multicomplex(make_rng(3), 2, QQ)
    (tmp_path / "a.json").write_text(dumps(A))
    doc = {"source": {"file": "a.json"}, "target": {"file": "a.json"},
           "blocks": {f"{b[0]},{b[1]}": [[("1" if i == j else "0") for j in range(A.rank(b))] for i in range(A.rank(b))] for b in A.support}}
    (tmp_path / "f.json").write_text(json.dumps(doc))
    f = load_morphism(str(tmp_path / "f.json"))
    assert f.source == A


@pytest.mark.parametrize(
    "doc, where",
    [
        ({"N": 1, "field": "Q", "modules": {}}, "$.N"),
        ({"N": 2, "field": "Fp:4", "modules": {}}, "$.field"),
        ({"N": 2, "field": "Q", "modules": {"0;0": 1}}, "$.modules"),
        ({"N": 2, "field": "Q", "modules": {"0,0": 1, "0,1": 1}, "diffs": [{"i": 0, "from": [0, 0], "matrix": [["1", "2"]]}]}, "$.diffs[0].matrix[0]"),
        ({"N": 2, "field": "Q", "modules": {"0,0": 1, "0,1": 1}, "diffs": [{"i": 0, "from": [0, 0], "matrix": [["x"]]}]}, "$.diffs[0].matrix[0][0]"),
        ({"N": 2, "field": "Q", "modules": {"0,0": 1}, "diffs": [{"i": 5, "from": [0, 0], "matrix": []}]}, "$.diffs[0].i"),
    ],
)
def test_malformed(doc, where):
    with pytest.raises(DocumentError) as exc:
        loads(json.dumps(doc))
    assert exc.value.location == where


def test_mixed_fields_rejected():
    A = random_multicomplex(make_rng(1), 2, QQ)
    B = random_multicomplex(make_rng(1), 2, GF(5))
    doc = {"source": json.loads(dumps(A)), "target": json.loads(dumps(B)), "blocks": {}}
    with pytest.raises(DocumentError):
        loads(json.dumps(doc))
