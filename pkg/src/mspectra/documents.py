"""JSON documents for multicomplexes and morphisms.

A multicomplex document::

    {"N": 2, "field": "Q",
     "modules": {"0,0": 1, "0,1": 1},
     "diffs": [{"i": 0, "from": [0, 0], "matrix": [["1"]]}]}

Optional keys: ``"truncated": true`` marks a window cut out of a larger
module; ``"exact": [a, b, c]`` records that the window agrees with that
module on the half-plane ``a p + b q >= c``.
A morphism document has ``source`` and ``target`` (inline documents or
``{"file": path}``) and ``blocks`` mapping ``"p,q"`` to matrices.

``dumps`` writes the canonical form; ``loads(dumps(x))`` reproduces ``x``
and ``dumps(loads(text)) == text`` for canonical text.
"""

from __future__ import annotations

import json
import os

from .linalg import FieldError, Matrix, field_from_descriptor
from .multicomplex import Morphism, Multicomplex, ShapeError


class DocumentError(ValueError):
    """Malformed document; ``location`` says where."""

    def __init__(self, location, message):
        super().__init__(f"{location}: {message}")
        self.location = location


def _key(b):
    return f"{b[0]},{b[1]}"


def _parse_key(text, where):
    try:
        p, q = text.split(",")
        return (int(p), int(q))
    except (ValueError, AttributeError) as exc:
        raise DocumentError(where, f"bad bidegree key {text!r}") from exc


def _parse_pair(obj, where):
    if not (isinstance(obj, list) and len(obj) == 2 and all(isinstance(x, int) and not isinstance(x, bool) for x in obj)):
        raise DocumentError(where, f"expected [p, q], got {obj!r}")
    return (obj[0], obj[1])


def _matrix_rows(field, m):
    return [[field.format(x) for x in row] for row in m.data]


def _parse_matrix(field, obj, rows, cols, where):
    if not isinstance(obj, list) or len(obj) != rows:
        raise DocumentError(where, f"expected {rows} rows")
    data = []
    for r, row in enumerate(obj):
        if not isinstance(row, list) or len(row) != cols:
            raise DocumentError(f"{where}[{r}]", f"expected {cols} entries")
        out = []
        for c, x in enumerate(row):
            if isinstance(x, bool) or not isinstance(x, (str, int)):
                raise DocumentError(f"{where}[{r}][{c}]", f"scalar must be a string or integer, got {x!r}")
            try:
                out.append(field.parse(str(x)))
            except FieldError as exc:
                raise DocumentError(f"{where}[{r}][{c}]", str(exc)) from exc
        data.append(tuple(out))
    return Matrix(field, rows, cols, tuple(data))


def multicomplex_to_dict(A):
    doc = {
        "N": A.N,
        "field": A.field.descriptor,
        "modules": {_key(b): A.ranks[b] for b in sorted(A.ranks)},
        "diffs": [
            {"i": i, "from": [b[0], b[1]], "matrix": _matrix_rows(A.field, A.diffs[(i, b)])}
            for (i, b) in sorted(A.diffs, key=lambda k: (k[1], k[0]))
        ],
    }
    if A.exact is not None:
        doc["truncated"] = True
        doc["exact"] = list(A.exact)
    return doc


def multicomplex_from_dict(doc, where="$"):
    if not isinstance(doc, dict):
        raise DocumentError(where, "expected an object")
    for k in ("N", "field", "modules"):
        if k not in doc:
            raise DocumentError(where, f"missing key {k!r}")
    N = doc["N"]
    if not isinstance(N, int) or isinstance(N, bool) or N < 2:
        raise DocumentError(f"{where}.N", f"N must be an integer >= 2, got {N!r}")
    try:
        field = field_from_descriptor(str(doc["field"]))
    except FieldError as exc:
        raise DocumentError(f"{where}.field", str(exc)) from exc
    mods = doc["modules"]
    if not isinstance(mods, dict):
        raise DocumentError(f"{where}.modules", "expected an object")
    ranks = {}
    for k, r in mods.items():
        b = _parse_key(k, f"{where}.modules")
        if not isinstance(r, int) or isinstance(r, bool) or r < 0:
            raise DocumentError(f"{where}.modules[{k!r}]", f"rank must be a non-negative integer, got {r!r}")
        ranks[b] = r
    diffs = {}
    for n, d in enumerate(doc.get("diffs", [])):
        w = f"{where}.diffs[{n}]"
        if not isinstance(d, dict) or not {"i", "from", "matrix"} <= set(d):
            raise DocumentError(w, "expected {i, from, matrix}")
        i = d["i"]
        if not isinstance(i, int) or isinstance(i, bool) or not 0 <= i < N:
            raise DocumentError(f"{w}.i", f"index must be in 0..{N - 1}, got {i!r}")
        b = _parse_pair(d["from"], f"{w}.from")
        if (i, b) in diffs:
            raise DocumentError(w, f"duplicate block d_{i} at {b}")
        src = ranks.get(b, 0)
        tgt = ranks.get((b[0] - i, b[1] + 1 - i), 0)
        diffs[(i, b)] = _parse_matrix(field, d["matrix"], tgt, src, f"{w}.matrix")
    exact = None
    if "exact" in doc:
        e = doc["exact"]
        if not (isinstance(e, list) and len(e) == 3 and all(isinstance(x, int) for x in e)):
            raise DocumentError(f"{where}.exact", "expected [a, b, c]")
        exact = tuple(e)
    try:
        return Multicomplex(N, field, ranks, diffs, exact=exact)
    except ShapeError as exc:
        raise DocumentError(where, str(exc)) from exc


def morphism_to_dict(f, source_ref=None, target_ref=None):
    return {
        "source": {"file": source_ref} if source_ref else multicomplex_to_dict(f.source),
        "target": {"file": target_ref} if target_ref else multicomplex_to_dict(f.target),
        "blocks": {_key(b): _matrix_rows(f.field, f.blocks[b]) for b in sorted(f.blocks)},
    }


def _resolve(obj, where, base_dir):
    if isinstance(obj, dict) and set(obj) == {"file"}:
        path = obj["file"]
        if base_dir and not os.path.isabs(path):
            path = os.path.join(base_dir, path)
        return load_multicomplex(path)
    return multicomplex_from_dict(obj, where)


def morphism_from_dict(doc, where="$", base_dir=None):
    if not isinstance(doc, dict):
        raise DocumentError(where, "expected an object")
    for k in ("source", "target"):
        if k not in doc:
            raise DocumentError(where, f"missing key {k!r}")
    A = _resolve(doc["source"], f"{where}.source", base_dir)
    B = _resolve(doc["target"], f"{where}.target", base_dir)
    if A.N != B.N:
        raise DocumentError(where, "source and target have different N")
    if A.field is not B.field:
        raise DocumentError(where, "mixed fields: source and target differ")
    blocks = {}
    raw = doc.get("blocks", {})
    if not isinstance(raw, dict):
        raise DocumentError(f"{where}.blocks", "expected an object")
    for k, m in raw.items():
        b = _parse_key(k, f"{where}.blocks")
        blocks[b] = _parse_matrix(A.field, m, B.rank(b), A.rank(b), f"{where}.blocks[{k!r}]")
    return Morphism(A, B, blocks)


def dumps(obj):
    doc = multicomplex_to_dict(obj) if isinstance(obj, Multicomplex) else morphism_to_dict(obj)
    return json.dumps(doc, indent=2) + "\n"


def _read(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise DocumentError(path, f"cannot read: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise DocumentError(f"{path}:{exc.lineno}:{exc.colno}", exc.msg) from exc


def loads(text):
    """Parse either kind of document (morphisms have a ``source`` key)."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"line {exc.lineno} column {exc.colno}", exc.msg) from exc
    if isinstance(doc, dict) and "source" in doc:
        return morphism_from_dict(doc)
    return multicomplex_from_dict(doc)


def load_multicomplex(path):
    return multicomplex_from_dict(_read(path), path)


def load_morphism(path):
    return morphism_from_dict(_read(path), path, base_dir=os.path.dirname(path))


def load_any(path):
    doc = _read(path)
    if isinstance(doc, dict) and "source" in doc:
        return morphism_from_dict(doc, path, base_dir=os.path.dirname(path))
    return multicomplex_from_dict(doc, path)
