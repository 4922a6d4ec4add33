import random

import pytest

from weightkit.complexes import ChainMap, Complex, homology
from weightkit.generators import random_complex
from weightkit.linalg import GF, QQ, ZZ, Matrix
from weightkit.normal_form import (Piece, homology_matches, normal_form,
                                   reassemble, roundtrip_witnesses,
                                   sharp_interval_from_pieces)


def test_torsion_piece(torsion):
    nf = normal_form(torsion)
    assert nf.pieces == [Piece("torsion", 1, 1, (2,))]
    assert nf.verify()


def test_contractible_piece(unit_cone):
    nf = normal_form(unit_cone)
    assert [p.kind for p in nf.pieces] == ["contractible"]
    assert nf.minimal.is_zero


def test_field_pieces_are_free():
    rng = random.Random(9)
    for _ in range(50):
        M = random_complex(rng, GF(2))
        nf = normal_form(M)
        free = {p.degree: p.rank for p in nf.pieces if p.kind == "free"}
        assert not any(p.kind == "torsion" for p in nf.pieces)
        for i in M.degrees:
            assert free.get(i, 0) == homology(M, i).rank


def test_mixed_example():
    # Z^2 -> Z^2 by diag(1, 6), then a free Z in degree 2
    M = Complex(ZZ, {0: 2, 1: 2, 2: 1},
                {0: Matrix.diag(ZZ, [1, 6])})
    nf = normal_form(M)
    kinds = sorted((p.kind, p.degree, p.invariants) for p in nf.pieces)
    assert kinds == [("contractible", 1, ()), ("free", 2, ()),
                     ("torsion", 1, (6,))]
    assert sharp_interval_from_pieces(nf.pieces) == (-2, -0)


@pytest.mark.parametrize("coeff", [ZZ, QQ, GF(3)])
def test_roundtrip_random(coeff):
    rng = random.Random(21)
    for _ in range(60):
        M = random_complex(rng, coeff, max_rank=5)
        nf = normal_form(M)
        assert nf.verify()
        assert reassemble(nf) == nf.complex
        assert homology_matches(nf)
        a, b = roundtrip_witnesses(nf)
        assert a is not None and b is not None


def test_minimal_model_is_homotopy_equivalent():
    rng = random.Random(22)
    for _ in range(40):
        M = random_complex(rng, ZZ)
        nf = normal_form(M)
        back = nf.min_to_input @ nf.input_to_min
        assert nf.min_homotopy is None or nf.min_homotopy.verify()
        from weightkit.complexes import find_homotopy
        assert find_homotopy(back, ChainMap.identity(M)) is not None


def test_transport_is_a_chain_map():
    rng = random.Random(24)
    from weightkit.generators import random_chain_map
    for _ in range(30):
        M, N = random_complex(rng, ZZ), random_complex(rng, ZZ)
        g = random_chain_map(rng, M, N)
        nM, nN = normal_form(M), normal_form(N)
        t = nM.transport(g, nN)
        assert t.failing_degree() is None
        assert nN.to_input @ t @ nM.from_input == g
