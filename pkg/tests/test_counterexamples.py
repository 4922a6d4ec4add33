import os

import pytest

from weightkit.complexes import ChainMap, Complex, homology
from weightkit.counterexamples import (Triple, build_even_dim_example,
                                       build_triple_example, even_dim_report,
                                       in_even_category, parity_cone_check,
                                       parity_obstruction_check,
                                       total_homology_dim,
                                       triple_weight_decomposition)
from weightkit.complexes import direct_sum
from weightkit.generators import random_chain_map, random_complex
from weightkit.linalg import GF, QQ, Matrix

from conftest import FIXTURES


def _fixture(name):
    with open(os.path.join(FIXTURES, name)) as fh:
        return fh.read()


def test_even_dim_report_fixture():
    assert even_dim_report() == _fixture("even_dim_report.txt")


def test_triple_report_fixture():
    assert build_triple_example()[1] == _fixture("triple_report.txt")


@pytest.mark.parametrize("coeff", [QQ, GF(2), GF(5)])
def test_even_dim_example(coeff):
    ex = build_even_dim_example(coeff)
    assert ex.M.ranks == {-1: 2, 0: 2, 1: 2}
    assert [homology(ex.M, i).rank for i in (-1, 0, 1)] == [1, 0, 1]
    I2 = Matrix.identity(coeff, 2)
    assert ex.printed_homotopy.h == {0: I2, 1: I2}
    assert ex.printed_homotopy.verify() and ex.solved_homotopy.verify()


def test_parity_obstruction():
    ex = build_even_dim_example()
    rep = parity_obstruction_check(ex.M, (0, 0))
    assert (rep.X_dim, rep.Y_dim) == (1, 1) and rep.obstructed
    doubled = parity_obstruction_check(direct_sum(ex.M, ex.M), (0, 0))
    assert (doubled.X_dim, doubled.Y_dim) == (2, 2)
    assert not doubled.obstructed


def test_even_homology_never_obstructed():
    M = Complex(QQ, {2: 2, -3: 4}, {})
    assert in_even_category(M)
    assert not parity_obstruction_check(M, (0, 1)).obstructed


def test_triple_example():
    M, report = build_triple_example()
    assert M.total_dim() == 2 and M.in_category()
    assert total_homology_dim(M.weight_complex()) == 0
    L = Complex.concentrated(QQ, 0)
    Z = Complex.zero(QQ)
    for part in (Triple((L, Z, Z)), Triple((Z, Z, L))):
        assert part.total_dim() == 1 and not part.in_category()
    assert report.rstrip().endswith("result: verified")


def test_generic_triple_decomposition():
    import random
    rng = random.Random(51)
    for _ in range(30):
        parts = tuple(random_complex(rng, QQ, max_rank=2, degree_span=3)
                      for _ in range(3))
        T = Triple(parts)
        for l in (-1, 0, 1):
            dec = triple_weight_decomposition(T, l)
            assert dec.certified
            assert dec.X.in_w_le(l) and dec.Y.in_w_ge(l + 1)
            if T.in_category():
                assert dec.X.in_category() and dec.Y.in_category()


def test_parity_additive_on_cones():
    import random
    rng = random.Random(52)
    for _ in range(40):
        M, N = random_complex(rng, QQ), random_complex(rng, QQ)
        assert parity_cone_check(random_chain_map(rng, M, N))
