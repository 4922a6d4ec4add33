import random

import pytest

from weightkit.complexes import (ChainMap, Complex, direct_sum,
                                 find_nullhomotopy, homology, is_contractible)
from weightkit.generators import random_chain_map, random_complex
from weightkit.linalg import QQ, ZZ, GroupStructure, Matrix
from weightkit.normal_form import normal_form
from weightkit.spherical import (QZ, DualGroup, acyclicity_test,
                                 em_cohomology, homology_map_is_zero,
                                 homology_skeleton_test,
                                 homology_without_weights,
                                 kills_weight_homology, qz_dual_test,
                                 secondary_class, universal_coefficients)
from weightkit.weights import kills_weights


@pytest.fixture
def ext_map():
    """Z -(2)-> Z in degrees (0,1) to Z -(2)-> Z in degrees (-1,0), identity
    in degree 0: zero on homology, yet not nullhomotopic."""
    S = Complex.two_term(ZZ, 0, [[2]])
    T = Complex.two_term(ZZ, -1, [[2]])
    return ChainMap(S, T, {0: Matrix.from_rows(ZZ, [[1]])})


def test_homology_without_weights_examples(z0, torsion):
    assert homology_without_weights(z0, (1, 2))
    assert not homology_without_weights(torsion, (0, 0))


def test_skeleton_examples(torsion):
    for n in (-2, 0, 3):
        M = Complex.concentrated(ZZ, -n)
        assert homology_skeleton_test(M, n)
        assert not homology_skeleton_test(M, n - 1)
    assert homology_skeleton_test(torsion, 0)
    assert not homology_skeleton_test(torsion, -1)


def test_kills_weight_homology_examples(z0, ext_map):
    assert kills_weight_homology(ChainMap.zero(z0, z0), 0)
    assert not kills_weight_homology(ChainMap.identity(z0), 0)
    g = ext_map
    assert all(homology_map_is_zero(g, d) for d in range(-2, 3))
    assert find_nullhomotopy(g) is None
    assert not kills_weight_homology(g, 0)
    assert not kills_weights(g, (0, 0), "direct").verdict


def test_secondary_class_examples(torsion, ext_map):
    sc = secondary_class(ChainMap.identity(torsion), 1)
    assert not sc.is_zero and sc.orders == (2,)
    assert not secondary_class(ext_map, 1).is_zero
    free = direct_sum(Complex.concentrated(ZZ, 0), Complex.concentrated(ZZ, 1))
    rng = random.Random(41)
    g = random_chain_map(rng, free, free)
    for i in (0, 1, 2):
        if homology_map_is_zero(g, i - 1):
            sc = secondary_class(g, i)
            assert sc.ambient.is_zero and sc.is_zero


def test_secondary_class_needs_zero_homology_map(z0):
    with pytest.raises(ValueError):
        secondary_class(ChainMap.identity(z0), 1)


def test_secondary_class_natural():
    rng = random.Random(42)
    for _ in range(60):
        M, N = random_complex(rng, ZZ), random_complex(rng, ZZ)
        g = random_chain_map(rng, M, N)
        nf = normal_form(M)
        e = nf.to_input
        for i in range(-4, 5):
            if homology_map_is_zero(g, i - 1):
                assert secondary_class(g, i).is_zero == \
                    secondary_class(g @ e, i).is_zero


def test_acyclicity(unit_cone, torsion):
    assert acyclicity_test(unit_cone)
    assert not acyclicity_test(torsion)
    rng = random.Random(43)
    for _ in range(40):
        M = random_complex(rng, ZZ)
        assert acyclicity_test(M) == is_contractible(M)


def test_em_cohomology_examples(z0, torsion):
    Z = GroupStructure(1)
    assert em_cohomology(z0, Z, 0) == Z
    assert em_cohomology(z0, Z, 1).is_zero
    z2 = GroupStructure(0, (2,))
    assert [em_cohomology(torsion, z2, i) for i in (-1, 0)] == [z2, z2]
    assert em_cohomology(torsion, z2, 1).is_zero
    assert em_cohomology(torsion, QZ, -1) == DualGroup(0, (2,))


def test_uct_and_qz():
    rng = random.Random(44)
    for _ in range(60):
        M = random_complex(rng, ZZ)
        for t in (2, 3, 4):
            for i in range(-5, 5):
                assert em_cohomology(M, GroupStructure(0, (t,)), i) == \
                    universal_coefficients(M, t, i)
        n = rng.randint(-4, 4)
        vanish = all(homology(M, j).is_zero for j in M.degrees if j > -n)
        assert qz_dual_test(M, n) == vanish


def test_field_input_rejected():
    with pytest.raises(ValueError):
        homology_skeleton_test(Complex.concentrated(QQ, 0), 0)
