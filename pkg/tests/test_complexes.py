import random

import pytest

from weightkit.complexes import (ChainMap, Complex, ComplexError, Homotopy,
                                 cone, direct_sum, dualize, dualize_map,
                                 find_nullhomotopy, find_ranged_witness,
                                 hom_group, homology, is_contractible, shift,
                                 solve_extension, solve_lift, validate)
from weightkit.generators import random_chain_map, random_complex
from weightkit.linalg import GF, QQ, ZZ, GroupStructure, Matrix, rank

inf = float("inf")


def test_validate_examples(torsion):
    assert validate(torsion).ok
    assert validate(Complex.zero()).ok
    bad = Complex(ZZ, {0: 1, 1: 1, 2: 1},
                  {0: Matrix.from_rows(ZZ, [[1]]),
                   1: Matrix.from_rows(ZZ, [[1]])}, check=False)
    rep = validate(bad)
    assert not rep.ok and rep.degree == 0


def test_constructor_rejects_bad_square():
    with pytest.raises(ComplexError) as e:
        Complex(ZZ, {0: 1, 1: 1, 2: 1}, {0: [[1]], 1: [[1]]})
    assert e.value.degree == 0


def test_constructor_rejects_bad_shape():
    with pytest.raises(ComplexError):
        Complex(ZZ, {0: 2, 1: 1}, {0: [[1]]})


def test_homology_examples(torsion, z0):
    assert homology(torsion, 1) == GroupStructure(0, (2,))
    assert homology(torsion, 0).is_zero
    assert homology(z0, 0) == GroupStructure(1)


def test_cone_of_identity_is_contractible(z0, unit_cone):
    C = cone(ChainMap.identity(z0)).complex
    # degree -1 carries the shifted source
    assert C.ranks == {-1: 1, 0: 1}
    assert C.d(-1).tolist() == [[1]]
    assert is_contractible(C)


def test_cone_of_zero_map_splits():
    rng = random.Random(3)
    C = random_complex(rng, ZZ)
    D = random_complex(rng, ZZ)
    K = cone(ChainMap.zero(C, D)).complex
    S = direct_sum(D, shift(C, 1))
    assert K.ranks == S.ranks
    assert K == S


def test_cone_of_two_is_torsion(z0):
    f = ChainMap(z0, z0, {0: Matrix.from_rows(ZZ, [[2]])})
    K = cone(f).complex
    assert homology(K, 0) == GroupStructure(0, (2,))
    assert all(homology(K, i).is_zero for i in K.degrees if i != 0)


def _homology_map_rank(f, i):
    C, D = f.source, f.target
    from weightkit.linalg import kernel_basis
    if not C.rank(i) or not D.rank(i):
        return 0
    Z = kernel_basis(C.d(i))
    B = D.d(i - 1)
    return rank(B.hstack(f[i] @ Z)) - rank(B)


@pytest.mark.parametrize("coeff", [QQ, GF(2), GF(3)])
def test_cone_long_exact_sequence(coeff):
    rng = random.Random(11)
    for _ in range(60):
        C = random_complex(rng, coeff, degree_span=4, lo=0)
        D = random_complex(rng, coeff, degree_span=4, lo=rng.randint(-1, 1))
        f = random_chain_map(rng, C, D)
        K = cone(f).complex
        for i in range(-3, 6):
            expect = (homology(D, i).rank - _homology_map_rank(f, i)
                      + homology(C, i + 1).rank
                      - _homology_map_rank(f, i + 1))
            assert homology(K, i).rank == expect


def test_hom_group_examples(z0, torsion):
    assert hom_group(z0, z0) == GroupStructure(1)
    assert hom_group(z0, Complex.concentrated(ZZ, -1)).is_zero
    # degree-0 components b are arbitrary, homotopies change b by 2h
    assert hom_group(torsion, Complex.concentrated(ZZ, 0)) == \
        GroupStructure(0, (2,))
    # in degree 1 the component a must satisfy 2a = 0
    assert hom_group(torsion, Complex.concentrated(ZZ, 1)).is_zero
    assert hom_group(torsion, torsion) == GroupStructure(0, (2,))


def test_nullhomotopy_examples(torsion, unit_cone):
    H = find_nullhomotopy(ChainMap.zero(torsion, torsion))
    assert H is not None and not H.h
    H = find_nullhomotopy(ChainMap.identity(unit_cone))
    assert H is not None and H.verify()
    assert find_nullhomotopy(ChainMap.identity(torsion)) is None


def test_homotopy_verify_detects_wrong_h(unit_cone):
    idc = ChainMap.identity(unit_cone)
    bad = Homotopy(idc, ChainMap.zero(unit_cone, unit_cone),
                   {1: Matrix.from_rows(ZZ, [[2]])})
    assert not bad.verify()


def test_ranged_witness_examples(torsion):
    rng = random.Random(2)
    M = random_complex(rng, ZZ, lo=0)
    f = random_chain_map(rng, M, M)
    w = find_ranged_witness(f, 20, 30)
    assert w is not None and w.verify()
    assert find_ranged_witness(ChainMap.identity(torsion), 1, 1) is None
    # degree 0 would need 2 g = 1
    assert find_ranged_witness(ChainMap.identity(torsion), 0, 0) is None
    assert find_ranged_witness(ChainMap.identity(torsion), 2, 2) is not None


def test_ranged_window_errors(torsion):
    with pytest.raises(ValueError):
        find_ranged_witness(ChainMap.identity(torsion), 2, 1)
    with pytest.raises(ValueError):
        find_ranged_witness(ChainMap.identity(torsion), inf, inf)


def test_ranged_full_window_is_homotopy():
    rng = random.Random(8)
    for _ in range(100):
        M, N = random_complex(rng, ZZ), random_complex(rng, ZZ)
        f = random_chain_map(rng, M, N)
        full = find_ranged_witness(f, -inf, inf) is not None
        assert full == (find_nullhomotopy(f) is not None)


def test_contractible_summand_detected(unit_cone, torsion):
    assert is_contractible(unit_cone)
    assert not is_contractible(torsion)
    rng = random.Random(4)
    for _ in range(40):
        C = random_complex(rng, ZZ)
        S = direct_sum(C, cone(ChainMap.identity(C)).complex)
        acyclic = all(homology(C, i).is_zero for i in C.degrees)
        assert is_contractible(S) == acyclic


def test_dualize_examples(z0, torsion):
    assert dualize(z0) == z0
    D = dualize(torsion)
    assert D.ranks == {-1: 1, 0: 1}
    assert D.d(-1).tolist() == [[2]]
    rng = random.Random(6)
    for _ in range(50):
        M = random_complex(rng, ZZ)
        assert dualize(dualize(M)) == M
        f = random_chain_map(rng, M, M)
        assert dualize_map(f).failing_degree() is None


def test_lift_and_extension(torsion):
    # id on Z -(2)-> Z lifts through itself, but not through zero
    idt = ChainMap.identity(torsion)
    lift = solve_lift(idt, idt)
    assert lift is not None and lift.homotopy.verify()
    Z = Complex.zero()
    zero_in = ChainMap.zero(Z, torsion)
    assert solve_lift(idt, zero_in) is None
    ext = solve_extension(idt, idt)
    assert ext is not None and ext.homotopy.verify()


def test_chain_map_rejects_non_chain_map(torsion):
    with pytest.raises(ComplexError):
        ChainMap(torsion, torsion, {0: Matrix.from_rows(ZZ, [[1]])})
