import json
from fractions import Fraction

import numpy as np
import pytest

from homalg import Algebra, Field, HomAlgebra
from homalg.fixtures import FIXTURES, fixture
from homalg.generate import random_hom_algebra
from homalg.io import FileFormatError, dumps, from_dict, load, loads, resolve, save, to_dict

Q = Field.rationals()

GOOD = {
    "field": "Q",
    "dim": 2,
    "products": [[0, 0, 0, "1"], [0, 1, 1, "1"], [1, 0, 1, "1"]],
    "alpha": [["1", "0"], ["0", "2"]],
    "unit": ["1", "0"],
}


def _doc(**changes):
    d = json.loads(json.dumps(GOOD))
    for k, v in changes.items():
        if v is None:
            d.pop(k)
        else:
            d[k] = v
    return d


@pytest.mark.parametrize("name", list(FIXTURES))
def test_fixture_round_trip(name, tmp_path):
    h = fixture(name)
    path = tmp_path / f"{name}.json"
    save(h, path)
    again = load(path)
    assert isinstance(again, HomAlgebra)
    assert again == h
    assert dumps(again) == path.read_text()


@pytest.mark.parametrize("seed", range(6))
def test_random_round_trip(seed):
    F = (Q, Field.gf(7))[seed % 2]
    h = random_hom_algebra(F, 3, "yau", seed)
    assert loads(dumps(h)) == h


def test_plain_algebra_has_no_alpha():
    a = loads(json.dumps(_doc(alpha=None)))
    assert isinstance(a, Algebra) and not isinstance(a, HomAlgebra)
    assert "alpha" not in to_dict(a)


def test_canonical_scalars_and_order():
    doc = _doc(products=[[1, 0, 1, "2/4"], [0, 0, 0, "1"], [0, 1, 1, "3/3"], [1, 1, 0, "0"]])
    h = from_dict(doc)
    out = to_dict(h)
    assert out["products"] == [[0, 0, 0, "1"], [0, 1, 1, "1"], [1, 0, 1, "1/2"]]
    assert h.sc[1, 0, 1] == Fraction(1, 2)


def test_gf_values_reduced():
    h = from_dict({"field": {"GF": 5}, "dim": 1, "products": [[0, 0, 0, "7"]], "alpha": [["-1"]]})
    assert to_dict(h)["products"] == [[0, 0, 0, "2"]]
    assert to_dict(h)["alpha"] == [["4"]]


def test_dumps_is_line_per_entry():
    text = dumps(fixture("unital-nonassoc-3d"))
    assert text.count("\n") > len(to_dict(fixture("unital-nonassoc-3d"))["products"])
    assert json.loads(text) == to_dict(fixture("unital-nonassoc-3d"))


def test_json_syntax_error_has_location():
    with pytest.raises(FileFormatError) as err:
        loads('{"field": "Q",\n "dim": 2,,}', "f.json")
    assert err.value.where == "line 2, column 11"
    assert str(err.value).startswith("f.json: line 2")


@pytest.mark.parametrize(
    "doc, where, fragment",
    [
        (_doc(alpha=[["1", "0"]]), "alpha", "alpha must be 2 x 2, got 1 rows"),
        (_doc(alpha=[["1", "0"], ["0"]]), "alpha", "width"),
        (_doc(products=[[0, 0, 0, "1"], [0, 0, 0, "2"]]), "products[1]", "duplicate"),
        (_doc(products=[[0, 0, 2, "1"]]), "products[0][2]", "out of range 0..1"),
        (_doc(products=[[0, 0, "x", "1"]]), "products[0][2]", "index must be an integer"),
        (_doc(products=[[0, 0, 0]]), "products[0]", "[i, j, k, value]"),
        (_doc(products=[[0, 0, 0, 1.5]]), "products[0][3]", "must be a string"),
        (_doc(products=[[0, 0, 0, "1/0"]]), "products[0][3]", ""),
        (_doc(field="R"), "field", "expected"),
        (_doc(field={"GF": 4}), "field.GF", ""),
        (_doc(field={"GF": "2"}), "field.GF", "integer"),
        (_doc(dim=0), "dim", "positive"),
        (_doc(dim=True), "dim", "positive"),
        (_doc(basis=["a", "a"]), "basis", "distinct"),
        (_doc(basis=["a"]), "basis", "list of 2"),
        (_doc(unit=["1"]), "unit", "list of 2"),
        (_doc(metadata=[1]), "metadata", "object"),
        (_doc(extra=1), "extra", "unknown key"),
    ],
)
def test_located_errors(doc, where, fragment):
    with pytest.raises(FileFormatError) as err:
        loads(json.dumps(doc), "bad.json")
    assert err.value.where == where
    assert fragment in err.value.message
    assert err.value.source == "bad.json"


def test_top_level_must_be_object():
    with pytest.raises(FileFormatError):
        loads("[1, 2]")


def test_load_missing_and_binary(tmp_path):
    with pytest.raises(FileFormatError) as err:
        load(tmp_path / "missing.json")
    assert "missing.json" in str(err.value)
    bad = tmp_path / "bin.json"
    bad.write_bytes(b"\xff\xfe\x00")
    with pytest.raises(FileFormatError, match="UTF-8"):
        load(bad)


def test_resolve(tmp_path):
    assert resolve("dual-numbers-q") == fixture("dual-numbers-q")
    assert resolve("ex-dim-two-kernel", 3).dim == 5
    path = tmp_path / "a.json"
    path.write_text(json.dumps(GOOD))
    assert resolve(str(path)).dim == 2
    with pytest.raises(FileFormatError, match="no such file or fixture"):
        resolve("no-such-thing")


def test_metadata_survives():
    h = from_dict(_doc(metadata={"origin": "hand", "n": 3}))
    assert to_dict(h)["metadata"] == {"origin": "hand", "n": 3}
    assert np.array_equal(h.unit, Q.array([1, 0]))
