import random

import pytest

from weightkit.complexes import (ChainMap, Complex, direct_sum,
                                 find_homotopy, find_nullhomotopy, homology,
                                 quotient_at_most, sub_at_least)
from weightkit.counterexamples import even_dim_complex
from weightkit.generators import (random_chain_map, random_complex,
                                  random_window)
from weightkit.linalg import GF, QQ, ZZ, Matrix
from weightkit.weights import (METHODS, NotWithoutWeights, Window,
                               WindowError, avoiding_decomposition,
                               extend_to_decomposition_morphism,
                               heart_factorization, idempotent_cross_check,
                               kills_weights, perturb_decomposition,
                               sharp_weight_interval, truncate,
                               without_weights)


def test_window_dictionary():
    assert Window(-1, 2).degrees == (-2, 1)
    with pytest.raises(WindowError):
        Window(1, 0)


def test_truncate_heart_object(z0):
    d = truncate(z0, 0)
    assert d.X == z0 and d.Y.is_zero and d.verify()
    d = truncate(z0, -1)
    assert d.X.is_zero and d.Y == z0 and d.verify()


def test_truncate_torsion(torsion):
    d = truncate(torsion, -1)
    assert d.X.ranks == {1: 1} and d.Y.ranks == {0: 1}
    assert d.verify()


def test_perturbed_decomposition_still_certifies(torsion):
    rng = random.Random(1)
    d = perturb_decomposition(truncate(torsion, -1), rng)
    assert not d.stupid and d.verify()


def test_sharp_interval(z0, unit_cone, torsion):
    assert sharp_weight_interval(z0) == (0, 0)
    assert sharp_weight_interval(unit_cone) is None
    assert sharp_weight_interval(torsion) == (-1, 0)


def test_extension_identity(torsion):
    d = truncate(torsion, -1)
    dm = extend_to_decomposition_morphism(ChainMap.identity(torsion), d, d)
    assert dm.verify()
    assert dm.h == ChainMap.identity(d.X) and dm.j == ChainMap.identity(d.Y)


def test_extension_componentwise_and_unique():
    rng = random.Random(13)
    for _ in range(40):
        M, N = random_complex(rng, ZZ), random_complex(rng, ZZ)
        g = random_chain_map(rng, M, N)
        m = rng.randint(-3, 2)
        l = m + rng.randint(1, 2)
        dm, dl = truncate(M, m), truncate(N, l)
        a = extend_to_decomposition_morphism(g, dm, dl)
        b = extend_to_decomposition_morphism(g, dm, dl, method="solve")
        assert a.verify() and b.verify()
        # for m < l the completing maps are unique up to homotopy
        assert find_homotopy(a.h, b.h) is not None
        assert find_homotopy(a.j, b.j) is not None


def test_extension_needs_ordered_weights(torsion):
    with pytest.raises(ValueError):
        extend_to_decomposition_morphism(ChainMap.identity(torsion),
                                         truncate(torsion, 0),
                                         truncate(torsion, -1))


@pytest.mark.parametrize("method", METHODS + ("all", "weakhtpy"))
def test_kills_basic(method, z0, torsion):
    zero = ChainMap.zero(torsion, z0)
    assert kills_weights(zero, (-2, 1), method).verdict
    assert not kills_weights(ChainMap.identity(z0), (0, 0), method).verdict


@pytest.mark.parametrize("coeff", [QQ, GF(2), GF(3)])
def test_even_dim_composite(coeff):
    M = even_dim_complex(coeff)
    X, i0 = sub_at_least(M, 0)
    Y, p0 = quotient_at_most(M, 0)
    c = p0 @ i0
    assert c[0] == Matrix.identity(coeff, 2)
    H = find_nullhomotopy(c)
    assert H is not None and H.verify()
    v = without_weights(M, (0, 0), "all")
    assert v.verdict and all(s.verdict for s in v.submethods.values())


def test_without_examples(z0, torsion):
    assert without_weights(Complex.zero(), (0, 0)).verdict
    assert without_weights(z0, (1, 3)).verdict
    assert not without_weights(torsion, (0, 0)).verdict
    assert not without_weights(torsion, (-1, -1)).verdict


def test_direct_certificate_verifies():
    rng = random.Random(17)
    seen = 0
    for _ in range(150):
        M, N = random_complex(rng, ZZ), random_complex(rng, ZZ)
        g = random_chain_map(rng, M, N)
        v = kills_weights(g, random_window(rng, M, N), "direct")
        if v.verdict:
            seen += 1
            assert v.certificate.verify()
    assert seen > 20


def test_avoiding_split_sum():
    M = direct_sum(Complex.concentrated(ZZ, 0), Complex.concentrated(ZZ, 2))
    d = avoiding_decomposition(M, (-1, -1))
    assert d.X.ranks == {2: 1} and d.Y.ranks == {0: 1}
    assert d.verify()


def test_avoiding_even_dim_full_category():
    M = even_dim_complex(QQ)
    d = avoiding_decomposition(M, (0, 0))
    assert [homology(d.X, i).rank for i in d.X.degrees] == [1]
    assert d.X.degrees == [1] and d.Y.degrees == [-1]
    assert d.verify()


def test_avoiding_refuses(torsion):
    with pytest.raises(NotWithoutWeights):
        avoiding_decomposition(torsion, (0, 0))
    with pytest.raises(NotWithoutWeights):
        avoiding_decomposition(torsion, (0, 0), check=False)


def test_idempotent_cross_check(torsion):
    M = direct_sum(torsion, Complex.concentrated(ZZ, 4))
    ic = idempotent_cross_check(M, (-3, -2))
    assert ic is not None and ic.verify()
    assert idempotent_cross_check(torsion, (0, 0)) is None


def test_heart_factorization(z0):
    f = ChainMap(z0, z0, {0: Matrix.from_rows(ZZ, [[5]])})
    hf = heart_factorization(f)
    assert hf.h[0].tolist() == [[5]] and hf.verify()
    hz = heart_factorization(ChainMap.zero(z0, z0))
    assert hz.h.is_zero()


def test_heart_factorization_random():
    rng = random.Random(23)
    for _ in range(30):
        M = random_complex(rng, ZZ, degree_span=3, lo=0)
        N = random_complex(rng, ZZ, degree_span=3, lo=-2)
        f = random_chain_map(rng, M, N)
        assert heart_factorization(f).verify()


def test_heart_factorization_rejects(torsion):
    with pytest.raises(ValueError):
        heart_factorization(ChainMap.identity(torsion))


def test_unknown_method(z0):
    with pytest.raises(ValueError):
        kills_weights(ChainMap.identity(z0), (0, 0), "guess")
