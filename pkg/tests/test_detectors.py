import random

from weightkit.complexes import ChainMap, Complex, solve_lift
from weightkit.detectors import (PureFunctor, detect_weight_range,
                                 detector_test, detector_witness,
                                 parse_group, pure_homology,
                                 virtual_truncation_value, weight_filtration)
from weightkit.generators import random_chain_map, random_complex
from weightkit.linalg import QQ, ZZ, GroupStructure, Matrix
from weightkit.weights import perturb_decomposition, truncate


def test_weight_filtration_examples(z0):
    assert weight_filtration(z0, 0, z0).structure == GroupStructure(1)
    assert weight_filtration(z0, 1, z0).structure.is_zero


def test_weight_filtration_decreases():
    rng = random.Random(31)
    for _ in range(40):
        I, M = random_complex(rng, ZZ), random_complex(rng, ZZ)
        m = rng.randint(-3, 3)
        big, small = weight_filtration(I, m, M), weight_filtration(I, m + 1, M)
        assert big.contains_all(small.maps)


def test_virtual_truncation_examples(z0):
    assert virtual_truncation_value(z0, 0, z0).structure == GroupStructure(1)
    Zm1 = Complex.concentrated(ZZ, -1)
    assert virtual_truncation_value(z0, 0, Zm1).structure.is_zero


def test_virtual_truncation_choice_independent():
    rng = random.Random(32)
    for _ in range(25):
        I, M = random_complex(rng, ZZ), random_complex(rng, ZZ)
        n = rng.randint(-3, 3)
        d1 = perturb_decomposition(truncate(M, n + 1), rng)
        d0 = perturb_decomposition(truncate(M, n), rng)
        # comparison map between the two chosen w<= parts
        r = solve_lift(d0.inclusion, d1.inclusion).x
        other = virtual_truncation_value(I, n, M, truncations=(d1.X, d0.X, r))
        assert other.structure == virtual_truncation_value(I, n, M).structure


def test_detector_examples(z0):
    assert detector_test(ChainMap.zero(z0, z0), 0, 0)
    assert not detector_test(ChainMap.identity(z0), 0, 0)
    assert detector_witness(ChainMap.identity(z0), 0, 0) is not None


def test_pure_homology_examples(torsion):
    ident = PureFunctor.parse("id")
    rng = random.Random(33)
    M = random_complex(rng, ZZ)
    from weightkit.complexes import homology
    for i in M.degrees:
        assert pure_homology(ident, M, i) == homology(M, i)
    mod2 = PureFunctor.parse("tensor:F2")
    assert [pure_homology(mod2, torsion, i).rank for i in (-1, 0, 1, 2)] == \
        [0, 1, 1, 0]
    dual2 = PureFunctor.parse("hom:Z/2")
    z2 = GroupStructure(0, (2,))
    assert [pure_homology(dual2, torsion, i) for i in (-1, 0)] == [z2, z2]
    assert pure_homology(dual2, torsion, 1).is_zero


def test_parse_group():
    assert parse_group("Z^2+Z/4") == GroupStructure(2, (4,))
    assert parse_group("0").is_zero


def test_detect_weight_range(z0, torsion):
    assert detect_weight_range(z0) == (0, 0)
    # homology in degrees 0 and 2 only
    M = Complex(QQ, {0: 1, 1: 1, 2: 2},
                {1: Matrix.from_rows(QQ, [[1], [0]])})
    assert detect_weight_range(M) == (-2, 0)
    assert detect_weight_range(torsion) == (-1, 0)
    assert detect_weight_range(Complex.zero()) is None


def test_detector_agrees_with_direct():
    from weightkit.weights import kills_weights
    rng = random.Random(34)
    for _ in range(100):
        M, N = random_complex(rng, ZZ), random_complex(rng, ZZ)
        g = random_chain_map(rng, M, N)
        m = rng.randint(-4, 3)
        n = m + rng.randint(0, 2)
        assert detector_test(g, m, n) == \
            kills_weights(g, (m, n), "direct").verdict
