import json
import os
import random

import pytest

from weightkit.complexes import ChainMap, Complex, homology
from weightkit.generators import (RING_TAGS, random_chain_map, random_complex,
                                  ring_from_tag)
from weightkit.io import (DocumentError, complex_to_doc, dumps, load_complex,
                          load_map, map_to_doc, parse_complex, parse_map)
from weightkit.linalg import ZZ, GroupStructure

from conftest import FIXTURES

DOCS = os.path.join(FIXTURES, "documents")


def test_minimal_roundtrip(z0):
    doc = {"coefficients": "Z", "degrees": {"0": 1}, "differentials": {}}
    assert parse_complex(doc) == z0
    assert complex_to_doc(parse_complex(doc)) == doc


def test_torsion_document():
    M = load_complex(os.path.join(DOCS, "torsion.json"))
    assert homology(M, 1) == GroupStructure(0, (2,))
    assert homology(M, 0).is_zero


def test_bad_square_is_located():
    with pytest.raises(DocumentError) as e:
        load_complex(os.path.join(DOCS, "bad_square.json"))
    assert e.value.where.endswith("differentials.0")


@pytest.mark.parametrize("doc,where", [
    ({"coefficients": "Z", "degree": {}}, "complex"),
    ({"coefficients": "R"}, "complex.coefficients"),
    ({"degrees": {"x": 1}}, "complex.degrees"),
    ({"degrees": {"0": -1}}, "complex.degrees.0"),
    ({"degrees": {"0": 1, "1": 1}, "differentials": {"0": [[1, 2]]}},
     "complex.differentials.0"),
    ({"degrees": {"0": 1, "1": 1}, "differentials": {"0": [[True]]}},
     "complex.differentials.0[0]"),
])
def test_malformed_documents(doc, where):
    with pytest.raises(DocumentError) as e:
        parse_complex(doc)
    assert e.value.where == where


def test_rational_entries():
    doc = {"coefficients": "Q", "degrees": {"0": 1, "1": 1},
           "differentials": {"0": [["1/2"]]}}
    M = parse_complex(doc)
    assert complex_to_doc(M)["differentials"]["0"] == [["1/2"]]
    assert parse_complex(json.loads(dumps(complex_to_doc(M)))) == M


@pytest.mark.parametrize("tag", RING_TAGS)
def test_random_roundtrip(tag):
    rng = random.Random(61)
    coeff = ring_from_tag(tag)
    for _ in range(40):
        M, N = random_complex(rng, coeff), random_complex(rng, coeff)
        g = random_chain_map(rng, M, N)
        text = dumps(map_to_doc(g))
        assert parse_map(json.loads(text)) == g
        assert dumps(map_to_doc(parse_map(json.loads(text)))) == text


def test_dumps_keeps_rows_on_one_line():
    M = parse_complex({"degrees": {"0": 2, "1": 2},
                       "differentials": {"0": [[1, 2], [2, 4]]}})
    text = dumps(complex_to_doc(M))
    assert '[1, 2],' in text and '[2, 4]' in text


def test_map_with_file_references():
    g = load_map(os.path.join(DOCS, "zero_map.json"))
    assert g.is_zero() and g.target.ranks == {0: 1}


def test_map_rejects_non_chain_map(torsion):
    doc = map_to_doc(ChainMap.identity(torsion))
    doc["components"]["1"] = [[3]]
    with pytest.raises(DocumentError) as e:
        parse_map(doc)
    assert "components" in e.value.where


def test_missing_file():
    with pytest.raises(DocumentError):
        load_complex(os.path.join(DOCS, "absent.json"))
