"""Seeded random complexes and chain maps for the property suites."""

from __future__ import annotations

import random

from .complexes import ChainMap, Complex, hom_system
from .linalg import GF, QQ, ZZ, Coefficients, Matrix, kernel_basis

RING_TAGS = ("Z", "F2", "F3", "Q")


def ring_from_tag(tag: str) -> Coefficients:
    if tag == "Z":
        return ZZ
    if tag == "Q":
        return QQ
    if tag.startswith("F"):
        return GF(int(tag.lstrip("Fp:")))
    return Coefficients.parse(tag)


def _bounded(m: Matrix, bound: int) -> bool:
    return all(abs(int(x)) <= bound for r in m.rows for x in r)


def random_complex(rng: random.Random, coeff: Coefficients, max_rank=4,
                   degree_span=7, max_entry=3, lo=None) -> Complex:
    """Random bounded complex with entries in [-max_entry, max_entry]."""
    span = rng.randint(1, degree_span)
    if lo is None:
        lo = rng.randint(-3, 3) - span // 2
    ranks = {lo + k: rng.randint(0, max_rank) for k in range(span)}
    diffs = {}
    prev = None
    for k in range(span - 1):
        i = lo + k
        rs, rt = ranks[i], ranks[i + 1]
        d = Matrix.zero(coeff, rt, rs)
        if rs and rt and rng.random() > 0.15:
            if prev is None or prev.is_zero():
                L = Matrix.identity(coeff, rs)
            else:
                L = kernel_basis(prev.T).T
            for _ in range(6):
                R = Matrix(coeff, rt, L.nrows,
                           [[rng.randint(-2, 2) if rng.random() < 0.6 else 0
                             for _ in range(L.nrows)] for _ in range(rt)])
                cand = R @ L
                if coeff.kind == "Fp" or _bounded(cand, max_entry):
                    d = cand
                    break
        diffs[i] = d
        prev = d
    return Complex(coeff, ranks, diffs)


def random_chain_map(rng: random.Random, M: Complex, N: Complex,
                     max_coeff=2, zero_prob=0.1) -> ChainMap:
    """Random integer combination of a basis of chain maps M -> N."""
    if rng.random() < zero_prob:
        return ChainMap.zero(M, N)
    sys = hom_system(M, N)
    if not sys.shape[1]:
        return ChainMap.zero(M, N)
    K = kernel_basis(sys.matrix())
    coeffs = [rng.randint(-max_coeff, max_coeff) for _ in range(K.ncols)]
    v = K.apply(coeffs) if K.ncols else [0] * K.nrows
    blocks = sys.decode(v)
    return ChainMap(M, N, {i: m for (_, i), m in blocks.items()})


def random_window(rng: random.Random, *complexes, max_width=3):
    """Weight window of width <= max_width near the supports."""
    degs = [i for C in complexes for i in C.degrees] or [0]
    lo, hi = min(degs) - 1, max(degs) + 1
    a = rng.randint(lo, hi)
    b = a + rng.randint(0, max_width - 1)
    return (-b, -a)


def random_instance(rng, coeff, max_rank=4, degree_span=7, max_entry=3):
    M = random_complex(rng, coeff, max_rank, degree_span, max_entry)
    if rng.random() < 0.3:
        N = M
    else:
        N = random_complex(rng, coeff, max_rank, degree_span, max_entry,
                           lo=(M.lo if M.lo is not None else 0)
                           + rng.randint(-2, 1))
    g = random_chain_map(rng, M, N)
    return M, N, g
