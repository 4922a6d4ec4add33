"""Representable cohomology and its weight slices.

For a fixed complex I, H_I(X) is the group of homotopy classes X -> I.
The weight filtration and the virtual truncations of H_I are images of
restriction maps between such groups; everything is computed on cocycle
lattices of Hom complexes, modulo coboundaries.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import linalg
from .complexes import (ChainMap, Complex, _homotopy_system, dualize,
                        hom_generators, hom_system, homology,
                        quotient_at_most, sub_at_least)
from .linalg import (GF, GroupStructure, Matrix, ZZ, columns_in_span,
                     direct_sum_structure, kernel_basis,
                     subquotient_structure)


def _vectors(maps, C, I):
    """Hom^0(C, I) coordinates of chain maps, as matrix columns."""
    sys0 = hom_system(C, I)
    cols = []
    for f in maps:
        v = []
        for (_, i), (off, p, q) in sys0.unknowns.items():
            for r in f[i].rows:
                v += r
        cols.append(v)
    return Matrix.from_columns(C.coeff, sys0.shape[1], cols)


def _coboundaries(C, I) -> Matrix:
    return _homotopy_system(C, I).matrix()


@dataclass
class HomSubgroup:
    """Subgroup of H_I(C) generated by the classes of ``maps``."""

    C: Complex
    I: Complex
    maps: list

    @property
    def structure(self) -> GroupStructure:
        if not self.maps:
            return GroupStructure(0)
        G = _vectors(self.maps, self.C, self.I)
        return subquotient_structure(self.C.coeff, G.nrows, G,
                                     _coboundaries(self.C, self.I))

    def contains(self, f: ChainMap) -> bool:
        return self.contains_all([f])

    def contains_all(self, fs) -> bool:
        if not fs:
            return True
        G = _vectors(self.maps, self.C, self.I)
        A = G.hstack(_coboundaries(self.C, self.I))
        return all(columns_in_span(A, _vectors(fs, self.C, self.I)))

    def all_zero(self) -> bool:
        """Every generator is nullhomotopic."""
        if not self.maps:
            return True
        B = _coboundaries(self.C, self.I)
        return all(columns_in_span(B, _vectors(self.maps, self.C, self.I)))


# ------------------------------------------------------ weight filtration


def weight_filtration(I: Complex, m: int, M: Complex) -> HomSubgroup:
    """W^m H_I(M): classes M -> I factoring through w>=m M."""
    Y, proj = quotient_at_most(M, -m)
    gens = [phi @ proj for phi in hom_generators(Y, I)]
    return HomSubgroup(M, I, gens)


# ---------------------------------------------------- virtual truncation


@dataclass
class DetectorValue:
    """im(H_I(w<=n+1 M) -> H_I(w<=n M)), with generating maps."""

    I: Complex
    n: int
    M: Complex
    truncation: Complex
    group: HomSubgroup

    @property
    def structure(self) -> GroupStructure:
        return self.group.structure

    def pullback(self, g: ChainMap) -> HomSubgroup:
        """Image of this value under g^*, for g: M' -> M (same truncations)."""
        a = -self.n
        Xs, _ = sub_at_least(g.source, a)
        ga = ChainMap(Xs, self.truncation,
                      {i: g[i] for i in Xs.degrees}, check=False)
        return HomSubgroup(Xs, self.I, [phi @ ga for phi in self.group.maps])


def virtual_truncation_value(I: Complex, n: int, M: Complex,
                             truncations=None) -> DetectorValue:
    """tau^{>=-n}(H_I) evaluated at M.

    ``truncations`` may supply (X_{n+1}, X_n, r) with r: X_n -> X_{n+1}
    replacing the stupid ones; r is the comparison map.
    """
    a = -n
    if truncations is None:
        Xn, _ = sub_at_least(M, a)
        Xn1, _ = sub_at_least(M, a - 1)
        r = ChainMap(Xn, Xn1, {i: Matrix.identity(M.coeff, Xn.rank(i))
                               for i in Xn.degrees}, check=False)
    else:
        Xn1, Xn, r = truncations
    gens = [phi @ r for phi in hom_generators(Xn1, I)]
    return DetectorValue(I, n, M, Xn, HomSubgroup(Xn, I, gens))


def detector_target(N: Complex, m: int) -> Complex:
    """I_0 = w>=m N, the stupid quotient in degrees <= -m."""
    return quotient_at_most(N, -m)[0]


def detector_test(g: ChainMap, m: int, n: int) -> bool:
    """True iff g^* kills tau^{>=-n}(H_{I_0}) with I_0 = w>=m N."""
    if m > n:
        raise ValueError(f"empty window [{m}, {n}]")
    I0 = detector_target(g.target, m)
    val = virtual_truncation_value(I0, n, g.target)
    return val.pullback(g).all_zero()


def detector_witness(g: ChainMap, m: int, n: int):
    """A generator of the value at the target whose pullback survives."""
    I0 = detector_target(g.target, m)
    val = virtual_truncation_value(I0, n, g.target)
    pb = val.pullback(g)
    if not pb.maps:
        return None
    B = _coboundaries(pb.C, I0)
    flags = columns_in_span(B, _vectors(pb.maps, pb.C, I0))
    for phi, ok in zip(val.group.maps, flags):
        if not ok:
            return phi
    return None


# ------------------------------------------------------- pure functors


@dataclass(frozen=True)
class PureFunctor:
    """Additive functor applied termwise: ``kind`` in
    {"identity", "tensor", "dual"}; ``p`` for tensor with F_p; ``group``
    (a GroupStructure) for Hom(-, G0)."""

    kind: str
    p: int = 0
    group: GroupStructure = None

    @classmethod
    def parse(cls, text: str) -> "PureFunctor":
        text = text.strip()
        if text in ("id", "identity"):
            return cls("identity")
        if text.startswith("tensor:F"):
            return cls("tensor", int(text[len("tensor:F"):]))
        if text.startswith("hom:"):
            return cls("dual", group=parse_group(text[4:]))
        raise ValueError(f"unsupported functor {text!r}")


def parse_group(text: str) -> GroupStructure:
    """'Z', 'Z^2+Z/4', '0' -> GroupStructure."""
    text = text.replace(" ", "")
    if text in ("0", ""):
        return GroupStructure(0)
    parts = []
    for tok in text.split("+"):
        if tok.startswith("Z/"):
            t = int(tok[2:])
            if t < 1:
                raise ValueError(f"bad cyclic order in {tok!r}")
            if t > 1:
                parts.append(GroupStructure(0, (t,)))
        elif tok == "Z":
            parts.append(GroupStructure(1))
        elif tok.startswith("Z^"):
            parts.append(GroupStructure(int(tok[2:])))
        else:
            raise ValueError(f"cannot parse group {text!r}")
    return direct_sum_structure(parts)


def mod_t_homology(C: Complex, i: int, t: int) -> GroupStructure:
    """H^i(C (x) Z/t) for a Z-complex C, as an abelian group."""
    n = C.rank(i)
    if not n:
        return GroupStructure(0)
    d = C.d(i)
    tI = Matrix.diag(ZZ, [t] * d.nrows)
    # Z = {x : d x in t Z^{n'}}
    K = kernel_basis(d.hstack(tI))
    Z = K.submatrix(range(n), range(K.ncols))
    rel = C.d(i - 1).hstack(Matrix.diag(ZZ, [t] * n))
    return subquotient_structure(ZZ, n, Z, rel)


def pure_homology(G: PureFunctor, M: Complex, i: int) -> GroupStructure:
    """i-th homology of the complex G(M^*)."""
    if G.kind == "identity":
        return homology(M, i)
    if G.kind == "tensor":
        if M.coeff != ZZ and M.coeff != GF(G.p):
            raise ValueError("tensor with F_p needs Z or F_p coefficients")
        return homology(M.change_ring(GF(G.p)), i)
    if G.kind == "dual":
        if M.coeff != ZZ:
            if G.group.torsion:
                raise ValueError("finite coefficient groups need Z input")
            return GroupStructure(homology(dualize(M), i).rank * G.group.rank)
        D = dualize(M)
        parts = [homology(D, i)] * G.group.rank
        parts += [mod_t_homology(D, i, t) for t in G.group.torsion]
        return direct_sum_structure(parts)
    raise ValueError(f"unsupported functor {G.kind!r}")


def detect_weight_range(M: Complex):
    """Weights [lo, hi] read off pure homology; None if all vanishes.

    lo = -(top degree with H^i(M) != 0); hi = top degree with
    H^i(dual M) != 0.
    """
    tops = [i for i in M.degrees if not homology(M, i).is_zero]
    if not tops:
        return None
    D = dualize(M)
    dtops = [i for i in D.degrees if not homology(D, i).is_zero]
    return (-max(tops), max(dtops))
