"""Bounded cochain complexes of finite free modules and their homotopy theory.

Degrees are cohomological: ``d[i]`` maps degree ``i`` to degree ``i + 1``.
Every question about the homotopy category asked here is linear (does
this map admit a nullhomotopy, a lift, a ranged witness) and is decided
by one exact solve.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import inf
from typing import Optional

from . import linalg
from .linalg import (Coefficients, GroupStructure, LinearSystem, Matrix,
                     ZZ, cokernel_structure, kernel_basis,
                     subquotient_structure)


class ComplexError(ValueError):
    """Malformed complex or chain map; carries the offending degree."""

    def __init__(self, message, degree=None):
        super().__init__(message)
        self.degree = degree


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    degree: Optional[int] = None
    message: str = ""

    def __bool__(self):
        return self.ok


def _as_matrix(coeff, m, nrows, ncols, where):
    if isinstance(m, Matrix):
        if m.ring != coeff:
            m = m.change_ring(coeff)
    else:
        rows = [list(r) for r in m]
        if not rows and nrows:
            rows = [[] for _ in range(nrows)]
        if len(rows) != nrows or any(len(r) != ncols for r in rows):
            raise ComplexError(
                f"{where}: expected a {nrows}x{ncols} matrix")
        m = Matrix(coeff, nrows, ncols, rows)
    if m.shape != (nrows, ncols):
        raise ComplexError(
            f"{where}: expected a {nrows}x{ncols} matrix, got "
            f"{m.nrows}x{m.ncols}")
    return m


class Complex:
    """Bounded cochain complex over ``coeff``.

    ``ranks`` maps degree to rank; ``diffs`` maps degree i to the matrix of
    d^i (shape rank(i+1) x rank(i)). Missing differentials are zero.
    """

    __slots__ = ("coeff", "_ranks", "_d")

    def __init__(self, coeff: Coefficients, ranks: dict, diffs: dict = None,
                 check: bool = True):
        self.coeff = coeff
        self._ranks = {int(i): int(r) for i, r in ranks.items() if r}
        for i, r in self._ranks.items():
            if r < 0:
                raise ComplexError(f"negative rank at degree {i}", i)
        self._d = {}
        for i, m in (diffs or {}).items():
            i = int(i)
            m = _as_matrix(coeff, m, self.rank(i + 1), self.rank(i),
                           f"d^{i}")
            if not m.is_zero():
                self._d[i] = m
        if check:
            rep = validate(self)
            if not rep:
                raise ComplexError(rep.message, rep.degree)

    # constructors -------------------------------------------------------

    @classmethod
    def zero(cls, coeff=ZZ) -> "Complex":
        return cls(coeff, {}, {}, check=False)

    @classmethod
    def concentrated(cls, coeff, degree: int, rank: int = 1) -> "Complex":
        """Free module of the given rank sitting in one degree."""
        return cls(coeff, {degree: rank}, {}, check=False)

    @classmethod
    def two_term(cls, coeff, degree: int, matrix) -> "Complex":
        """``matrix`` as the differential from ``degree`` to ``degree + 1``."""
        if not isinstance(matrix, Matrix):
            matrix = Matrix.from_rows(coeff, matrix)
        return cls(coeff, {degree: matrix.ncols, degree + 1: matrix.nrows},
                   {degree: matrix})

    # accessors ----------------------------------------------------------

    def rank(self, i: int) -> int:
        return self._ranks.get(i, 0)

    def d(self, i: int) -> Matrix:
        m = self._d.get(i)
        if m is None:
            return Matrix.zero(self.coeff, self.rank(i + 1), self.rank(i))
        return m

    @property
    def ranks(self) -> dict:
        return dict(sorted(self._ranks.items()))

    @property
    def diffs(self) -> dict:
        return dict(sorted(self._d.items()))

    @property
    def degrees(self) -> list:
        return sorted(self._ranks)

    @property
    def support(self):
        """(lo, hi) of nonzero terms, or None for the zero complex."""
        if not self._ranks:
            return None
        return (min(self._ranks), max(self._ranks))

    @property
    def lo(self):
        s = self.support
        return s[0] if s else None

    @property
    def hi(self):
        s = self.support
        return s[1] if s else None

    @property
    def is_zero(self) -> bool:
        return not self._ranks

    def total_rank(self) -> int:
        return sum(self._ranks.values())

    def __eq__(self, other):
        if not isinstance(other, Complex):
            return NotImplemented
        return (self.coeff == other.coeff and self._ranks == other._ranks
                and self._d == other._d)

    def __hash__(self):
        return hash((self.coeff, tuple(sorted(self._ranks.items()))))

    def __repr__(self):
        parts = [f"{i}:{r}" for i, r in sorted(self._ranks.items())]
        return f"Complex({self.coeff.tag}; {', '.join(parts) or '0'})"

    def change_ring(self, coeff) -> "Complex":
        return Complex(coeff, self._ranks,
                       {i: m.change_ring(coeff) for i, m in self._d.items()})


def validate(C: Complex) -> ValidationReport:
    for i, r in C._ranks.items():
        if r < 0:
            return ValidationReport(False, i, f"negative rank at degree {i}")
    for i, m in C._d.items():
        if m.shape != (C.rank(i + 1), C.rank(i)):
            return ValidationReport(
                False, i, f"d^{i} has shape {m.shape}, expected "
                f"{(C.rank(i + 1), C.rank(i))}")
    for i in sorted(C._d):
        if i + 1 in C._d and not (C._d[i + 1] @ C._d[i]).is_zero():
            return ValidationReport(
                False, i, f"d^{i + 1} * d^{i} != 0 (at degree {i})")
    return ValidationReport(True)


# ------------------------------------------------------------- chain maps


class ChainMap:
    """Degreewise matrices ``f[i]: source^i -> target^i`` commuting with d."""

    __slots__ = ("source", "target", "_f")

    def __init__(self, source: Complex, target: Complex, comps: dict = None,
                 check: bool = True):
        if source.coeff != target.coeff:
            raise ComplexError("chain map between different coefficient rings")
        self.source = source
        self.target = target
        self._f = {}
        for i, m in (comps or {}).items():
            i = int(i)
            m = _as_matrix(source.coeff, m, target.rank(i), source.rank(i),
                           f"f^{i}")
            if not m.is_zero():
                self._f[i] = m
        if check:
            bad = self.failing_degree()
            if bad is not None:
                raise ComplexError(
                    f"not a chain map: d f != f d at degree {bad}", bad)

    @property
    def coeff(self):
        return self.source.coeff

    def __getitem__(self, i) -> Matrix:
        m = self._f.get(i)
        if m is None:
            return Matrix.zero(self.coeff, self.target.rank(i),
                               self.source.rank(i))
        return m

    @property
    def components(self) -> dict:
        return dict(sorted(self._f.items()))

    def failing_degree(self):
        degs = set(self._f) | {i - 1 for i in self._f}
        degs |= set(self.source._d) | set(self.target._d)
        for i in sorted(degs):
            if self.target.d(i) @ self[i] != self[i + 1] @ self.source.d(i):
                return i
        return None

    @classmethod
    def identity(cls, C: Complex) -> "ChainMap":
        return cls(C, C, {i: Matrix.identity(C.coeff, r)
                          for i, r in C.ranks.items()}, check=False)

    @classmethod
    def zero(cls, source: Complex, target: Complex) -> "ChainMap":
        return cls(source, target, {}, check=False)

    def is_zero(self) -> bool:
        return not self._f

    def __matmul__(self, other: "ChainMap") -> "ChainMap":
        """Composition: (self @ other)[i] = self[i] * other[i]."""
        if other.target != self.source:
            raise ComplexError("composition of non-composable chain maps")
        comps = {i: self[i] @ other[i]
                 for i in set(self._f) & set(other._f)}
        return ChainMap(other.source, self.target, comps, check=False)

    def _check_parallel(self, other):
        if self.source != other.source or self.target != other.target:
            raise ComplexError("chain maps are not parallel")

    def __add__(self, other):
        self._check_parallel(other)
        degs = set(self._f) | set(other._f)
        return ChainMap(self.source, self.target,
                        {i: self[i] + other[i] for i in degs}, check=False)

    def __sub__(self, other):
        self._check_parallel(other)
        degs = set(self._f) | set(other._f)
        return ChainMap(self.source, self.target,
                        {i: self[i] - other[i] for i in degs}, check=False)

    def __neg__(self):
        return ChainMap(self.source, self.target,
                        {i: -m for i, m in self._f.items()}, check=False)

    def scale(self, c) -> "ChainMap":
        return ChainMap(self.source, self.target,
                        {i: m.scale(c) for i, m in self._f.items()},
                        check=False)

    def __eq__(self, other):
        if not isinstance(other, ChainMap):
            return NotImplemented
        return (self.source == other.source and self.target == other.target
                and self._f == other._f)

    def __hash__(self):
        return hash((self.source, self.target))

    def __repr__(self):
        return f"ChainMap({self.source!r} -> {self.target!r})"


@dataclass
class Homotopy:
    """``h[i]: source^i -> target^{i-1}`` with d h + h d = f - g."""

    f: ChainMap
    g: ChainMap
    h: dict = field(default_factory=dict)

    def __getitem__(self, i) -> Matrix:
        m = self.h.get(i)
        if m is None:
            return Matrix.zero(self.f.coeff, self.f.target.rank(i - 1),
                               self.f.source.rank(i))
        return m

    def failing_degree(self):
        S, T = self.f.source, self.f.target
        degs = set(S.degrees)
        for i in sorted(degs):
            lhs = T.d(i - 1) @ self[i] + self[i + 1] @ S.d(i)
            if lhs != self.f[i] - self.g[i]:
                return i
        return None

    def verify(self) -> bool:
        return self.failing_degree() is None


def homotopy_map(h: dict, source: Complex, target: Complex) -> ChainMap:
    """The nullhomotopic chain map d h + h d."""
    zero = lambda i: Matrix.zero(source.coeff, target.rank(i - 1),  # noqa
                                 source.rank(i))
    comps = {}
    for i in source.degrees:
        comps[i] = target.d(i - 1) @ h.get(i, zero(i)) + \
            h.get(i + 1, zero(i + 1)) @ source.d(i)
    return ChainMap(source, target, comps, check=False)


# -------------------------------------------------- triangle constructions


def shift(C: Complex, k: int) -> Complex:
    """C[k]^i = C^{i+k}, differential multiplied by (-1)^k."""
    sgn = -1 if k % 2 else 1
    return Complex(C.coeff, {i - k: r for i, r in C.ranks.items()},
                   {i - k: m.scale(sgn) if sgn < 0 else m
                    for i, m in C.diffs.items()}, check=False)


def shift_map(f: ChainMap, k: int) -> ChainMap:
    return ChainMap(shift(f.source, k), shift(f.target, k),
                    {i - k: m for i, m in f.components.items()}, check=False)


def direct_sum(*Cs: Complex, coeff=None) -> Complex:
    if not Cs:
        return Complex.zero(coeff or ZZ)
    coeff = Cs[0].coeff
    if any(C.coeff != coeff for C in Cs):
        raise ComplexError("direct sum of complexes over different rings")
    degs = sorted({i for C in Cs for i in C.degrees})
    ranks = {i: sum(C.rank(i) for C in Cs) for i in degs}
    diffs = {}
    for i in degs:
        if i + 1 not in ranks:
            continue
        blocks = {(k, k): C.d(i) for k, C in enumerate(Cs)}
        diffs[i] = linalg.block_matrix(coeff, blocks,
                                       [C.rank(i + 1) for C in Cs],
                                       [C.rank(i) for C in Cs])
    return Complex(coeff, ranks, diffs, check=False)


def sum_injection(Cs, k) -> ChainMap:
    """Inclusion of the k-th summand into direct_sum(*Cs)."""
    S = direct_sum(*Cs)
    coeff = S.coeff
    comps = {}
    for i in Cs[k].degrees:
        comps[i] = linalg.block_matrix(
            coeff, {(k, 0): Matrix.identity(coeff, Cs[k].rank(i))},
            [C.rank(i) for C in Cs], [Cs[k].rank(i)])
    return ChainMap(Cs[k], S, comps, check=False)


def sum_projection(Cs, k) -> ChainMap:
    S = direct_sum(*Cs)
    coeff = S.coeff
    comps = {}
    for i in Cs[k].degrees:
        comps[i] = linalg.block_matrix(
            coeff, {(0, k): Matrix.identity(coeff, Cs[k].rank(i))},
            [Cs[k].rank(i)], [C.rank(i) for C in Cs])
    return ChainMap(S, Cs[k], comps, check=False)


def direct_sum_maps(*fs: ChainMap) -> ChainMap:
    S = direct_sum(*[f.source for f in fs])
    T = direct_sum(*[f.target for f in fs])
    comps = {}
    for i in S.degrees:
        comps[i] = linalg.block_matrix(
            S.coeff, {(k, k): f[i] for k, f in enumerate(fs)},
            [f.target.rank(i) for f in fs], [f.source.rank(i) for f in fs])
    return ChainMap(S, T, comps, check=False)


@dataclass
class Cone:
    """cone(f) for f: C -> D, with D -> cone -> C[1]."""

    complex: Complex
    f: ChainMap
    inclusion: ChainMap
    projection: ChainMap


def cone(f: ChainMap) -> Cone:
    """cone^i = D^i + C^{i+1}, d = [[d_D, f], [0, -d_C]]."""
    C, D = f.source, f.target
    coeff = C.coeff
    degs = sorted(set(D.degrees) | {i - 1 for i in C.degrees})
    ranks = {i: D.rank(i) + C.rank(i + 1) for i in degs}
    diffs = {}
    for i in degs:
        diffs[i] = linalg.block_matrix(
            coeff, {(0, 0): D.d(i), (0, 1): f[i + 1],
                    (1, 1): -C.d(i + 1)},
            [D.rank(i + 1), C.rank(i + 2)], [D.rank(i), C.rank(i + 1)])
    K = Complex(coeff, ranks, diffs, check=linalg.CHECKS)
    inc = {i: linalg.block_matrix(coeff, {(0, 0): Matrix.identity(
        coeff, D.rank(i))}, [D.rank(i), C.rank(i + 1)], [D.rank(i)])
        for i in D.degrees}
    C1 = shift(C, 1)
    proj = {i: linalg.block_matrix(coeff, {(0, 1): Matrix.identity(
        coeff, C.rank(i + 1))}, [C.rank(i + 1)], [D.rank(i), C.rank(i + 1)])
        for i in C1.degrees}
    return Cone(K, f, ChainMap(D, K, inc, check=linalg.CHECKS),
                ChainMap(K, C1, proj, check=linalg.CHECKS))


# --------------------------------------------------------------- homology


def homology(C: Complex, i: int) -> GroupStructure:
    """ker d^i / im d^{i-1}."""
    if not C.rank(i):
        return GroupStructure(0)
    K = kernel_basis(C.d(i))
    return subquotient_structure(C.coeff, C.rank(i), K, C.d(i - 1))


def homology_all(C: Complex) -> dict:
    return {i: homology(C, i) for i in C.degrees}


def homology_nonzero(C: Complex) -> dict:
    return {i: g for i, g in homology_all(C).items() if not g.is_zero}


def cycles_and_boundaries(C: Complex, i: int):
    return kernel_basis(C.d(i)), C.d(i - 1)


# ------------------------------------------------------------ Hom complex


def _hom_degrees(C: Complex, D: Complex, k: int):
    return [i for i in C.degrees if D.rank(i + k)]


def hom_system(C: Complex, D: Complex) -> LinearSystem:
    """delta^0 on Hom^0(C, D): f -> d f - f d, unknown keys ("f", i)."""
    sys = LinearSystem(C.coeff)
    for i in _hom_degrees(C, D, 0):
        sys.unknown(("f", i), D.rank(i), C.rank(i))
    for i in _hom_degrees(C, D, 1):
        sys.equation(("c", i), D.rank(i + 1), C.rank(i))
    for i in _hom_degrees(C, D, 0):
        if D.rank(i + 1):
            sys.add(("c", i), ("f", i), left=D.d(i))
        if C.rank(i - 1) and ("c", i - 1) in sys.equations:
            sys.add(("c", i - 1), ("f", i), right=C.d(i - 1), sign=-1)
    return sys


def _homotopy_system(C: Complex, D: Complex, degrees=None) -> LinearSystem:
    """Unknowns h^i: C^i -> D^{i-1}; equations d h + h d in Hom^0.

    ``degrees`` restricts which h^i are allowed to be nonzero.
    """
    sys = LinearSystem(C.coeff)
    for i in _hom_degrees(C, D, 0):
        sys.equation(("e", i), D.rank(i), C.rank(i))
    for i in _hom_degrees(C, D, -1):
        if degrees is not None and i not in degrees:
            continue
        sys.unknown(("h", i), D.rank(i - 1), C.rank(i))
        if ("e", i) in sys.equations:
            sys.add(("e", i), ("h", i), left=D.d(i - 1))
        if ("e", i - 1) in sys.equations:
            sys.add(("e", i - 1), ("h", i), right=C.d(i - 1))
    return sys


def _hom_cocycle_basis(C: Complex, D: Complex):
    sys = hom_system(C, D)
    return sys, kernel_basis(sys.matrix()) if sys.shape[1] else \
        Matrix.zero(C.coeff, 0, 0)


def _coboundary_columns(C: Complex, D: Complex, sys0: LinearSystem) -> Matrix:
    """Columns: images d h + h d of the unit homotopies, in Hom^0 coords."""
    hs = _homotopy_system(C, D)
    B = hs.matrix()
    # hs equations ("e", i) and sys0 unknowns ("f", i) share shapes/order
    assert [k[1] for k in hs.equations] == [k[1] for k in sys0.unknowns]
    return B


def hom_group(C: Complex, D: Complex) -> GroupStructure:
    """Homotopy classes of chain maps C -> D as a group."""
    if C.coeff != D.coeff:
        raise ComplexError("Hom between complexes over different rings")
    sys0, Z = _hom_cocycle_basis(C, D)
    if Z.ncols == 0:
        return GroupStructure(0)
    B = _coboundary_columns(C, D, sys0)
    return subquotient_structure(C.coeff, Z.nrows, Z, B)


def hom_generators(C: Complex, D: Complex) -> list:
    """Chain maps whose classes generate hom_group(C, D)."""
    sys0, Z = _hom_cocycle_basis(C, D)
    out = []
    for col in Z.columns():
        blocks = sys0.decode(col)
        out.append(ChainMap(C, D, {k[1]: m for k, m in blocks.items()},
                            check=linalg.CHECKS))
    return out


def chain_map_vector(f: ChainMap, sys0: LinearSystem) -> list:
    v = [f.coeff.convert(0)] * sys0.shape[1]
    for (tag, i), (off, p, q) in sys0.unknowns.items():
        m = f[i]
        for r in range(p):
            v[off + r * q:off + (r + 1) * q] = m.rows[r]
    return v


# ----------------------------------------------------------- nullhomotopy


def find_nullhomotopy(f: ChainMap, degrees=None) -> Optional[Homotopy]:
    """Homotopy from f to 0, or None if f is not nullhomotopic.

    ``degrees`` restricts the support of the homotopy (used by the
    window computations).
    """
    S, T = f.source, f.target
    sys = _homotopy_system(S, T, degrees)
    rhs = {("e", i): f[i] for i in _hom_degrees(S, T, 0)}
    for i, m in f.components.items():
        if ("e", i) not in sys.equations and not m.is_zero():
            return None
    sol = sys.solve(rhs)
    if sol is None:
        return None
    h = {k[1]: m for k, m in sol.items() if not m.is_zero()}
    H = Homotopy(f, ChainMap.zero(S, T), h)
    if linalg.CHECKS and not H.verify():
        linalg._fail("nullhomotopy witness does not verify")
    return H


def find_homotopy(f: ChainMap, g: ChainMap) -> Optional[Homotopy]:
    H = find_nullhomotopy(f - g)
    if H is None:
        return None
    return Homotopy(f, g, H.h)


def is_nullhomotopic(f: ChainMap) -> bool:
    return find_nullhomotopy(f) is not None


def is_contractible(C: Complex) -> bool:
    return find_nullhomotopy(ChainMap.identity(C)) is not None


# ---------------------------------------------------------- ranged witness


@dataclass
class RangedWitness:
    """Witness for f ~_[k,l] 0.

    For k <= j <= l: d h^j + g^{j+1} d = f^j, and for k < j <= l:
    d h^j d = d g^j d. Outside the solved range the sequences are zero,
    except g^k := h^k and h^{l+1} := g^{l+1}.
    """

    f: ChainMap
    k: float
    l: float
    h: dict = field(default_factory=dict)
    g: dict = field(default_factory=dict)
    solved: tuple = None

    def _get(self, seq, j):
        m = seq.get(j)
        if m is None:
            return Matrix.zero(self.f.coeff, self.f.target.rank(j - 1),
                               self.f.source.rank(j))
        return m

    def verify(self) -> bool:
        if self.solved is None:
            return True
        k, l = self.solved
        S, T = self.f.source, self.f.target
        for j in range(k, l + 1):
            lhs = T.d(j - 1) @ self._get(self.h, j) + \
                self._get(self.g, j + 1) @ S.d(j)
            if lhs != self.f[j]:
                return False
        for j in range(k + 1, l + 1):
            a = T.d(j - 1) @ self._get(self.h, j) @ S.d(j - 1)
            b = T.d(j - 1) @ self._get(self.g, j) @ S.d(j - 1)
            if a != b:
                return False
        return True


def _check_window(k, l):
    if k == l and k in (inf, -inf):
        raise ValueError("window bounds are both infinite with the same sign")
    if k > l:
        raise ValueError(f"empty window [{k}, {l}]")


def find_ranged_witness(f: ChainMap, k, l) -> Optional[RangedWitness]:
    """Decide f ~_[k,l] 0 by one exact solve; bounds may be +-inf."""
    _check_window(k, l)
    S, T = f.source, f.target
    degs = S.degrees + T.degrees
    if not degs:
        return RangedWitness(f, k, l)
    lo, hi = min(degs), max(degs)
    kk = max(k, lo) if k != -inf else lo
    ll = min(l, hi) if l != inf else hi
    if kk > ll:
        return RangedWitness(f, k, l)
    kk, ll = int(kk), int(ll)
    sys = LinearSystem(f.coeff)
    for j in range(kk, ll + 1):
        sys.unknown(("h", j), T.rank(j - 1), S.rank(j))
        sys.unknown(("g", j + 1), T.rank(j), S.rank(j + 1))
        sys.equation(("e", j), T.rank(j), S.rank(j))
    for j in range(kk + 1, ll + 1):
        sys.equation(("c", j), T.rank(j), S.rank(j - 1))
    for j in range(kk, ll + 1):
        sys.add(("e", j), ("h", j), left=T.d(j - 1))
        sys.add(("e", j), ("g", j + 1), right=S.d(j))
    for j in range(kk + 1, ll + 1):
        sys.add(("c", j), ("h", j), left=T.d(j - 1), right=S.d(j - 1))
        sys.add(("c", j), ("g", j), left=T.d(j - 1), right=S.d(j - 1),
                sign=-1)
    sol = sys.solve({("e", j): f[j] for j in range(kk, ll + 1)})
    if sol is None:
        return None
    h = {j: m for (t, j), m in sol.items() if t == "h" and not m.is_zero()}
    g = {j: m for (t, j), m in sol.items() if t == "g" and not m.is_zero()}
    if kk in h:
        g[kk] = h[kk]
    if ll + 1 in g:
        h[ll + 1] = g[ll + 1]
    w = RangedWitness(f, k, l, h, g, (kk, ll))
    if linalg.CHECKS and not w.verify():
        linalg._fail("ranged witness does not verify")
    return w


# ------------------------------------------------------------------ duals


def dualize(C: Complex) -> Complex:
    """Degree -i holds (C^i)*, with d^{-i-1} = (d^i)^T."""
    return Complex(C.coeff, {-i: r for i, r in C.ranks.items()},
                   {-i - 1: m.T for i, m in C.diffs.items()}, check=False)


def dualize_map(f: ChainMap) -> ChainMap:
    return ChainMap(dualize(f.target), dualize(f.source),
                    {-i: m.T for i, m in f.components.items()}, check=False)


# ------------------------------------------------------- stupid truncation


def sub_at_least(C: Complex, a) -> tuple:
    """Subcomplex of degrees >= a and its inclusion."""
    X = Complex(C.coeff, {i: r for i, r in C.ranks.items() if i >= a},
                {i: m for i, m in C.diffs.items() if i >= a}, check=False)
    inc = ChainMap(X, C, {i: Matrix.identity(C.coeff, r)
                          for i, r in X.ranks.items()}, check=False)
    return X, inc


def quotient_at_most(C: Complex, b) -> tuple:
    """Quotient complex of degrees <= b and the projection."""
    Y = Complex(C.coeff, {i: r for i, r in C.ranks.items() if i <= b},
                {i: m for i, m in C.diffs.items() if i + 1 <= b},
                check=False)
    proj = ChainMap(C, Y, {i: Matrix.identity(C.coeff, r)
                           for i, r in Y.ranks.items()}, check=False)
    return Y, proj


# -------------------------------------------------------------- lifting


def _lift_system(A: Complex, B: Complex, C: Complex, v: ChainMap, side):
    """Unknown chain map x and homotopy H.

    side "left":  x: A -> B, equation v x - (dH + Hd) = u for u: A -> C.
    side "right": x: B -> C, equation x v - (dH + Hd) = u for u: A -> C,
    where v: A -> B.
    """
    sys = LinearSystem(A.coeff)
    X_src, X_tgt = (A, B) if side == "left" else (B, C)
    for i in _hom_degrees(X_src, X_tgt, 0):
        sys.unknown(("x", i), X_tgt.rank(i), X_src.rank(i))
    for i in _hom_degrees(X_src, X_tgt, 1):
        sys.equation(("c", i), X_tgt.rank(i + 1), X_src.rank(i))
    for i in _hom_degrees(X_src, X_tgt, 0):
        if ("c", i) in sys.equations:
            sys.add(("c", i), ("x", i), left=X_tgt.d(i))
        if ("c", i - 1) in sys.equations:
            sys.add(("c", i - 1), ("x", i), right=X_src.d(i - 1), sign=-1)
    for i in _hom_degrees(A, C, 0):
        sys.equation(("e", i), C.rank(i), A.rank(i))
    for i in _hom_degrees(A, C, -1):
        sys.unknown(("H", i), C.rank(i - 1), A.rank(i))
        if ("e", i) in sys.equations:
            sys.add(("e", i), ("H", i), left=C.d(i - 1), sign=-1)
        if ("e", i - 1) in sys.equations:
            sys.add(("e", i - 1), ("H", i), right=A.d(i - 1), sign=-1)
    for i in _hom_degrees(X_src, X_tgt, 0):
        if ("e", i) not in sys.equations:
            continue
        if side == "left":
            sys.add(("e", i), ("x", i), left=v[i])
        else:
            sys.add(("e", i), ("x", i), right=v[i])
    return sys


@dataclass
class Lift:
    x: ChainMap
    homotopy: Homotopy


def solve_lift(u: ChainMap, v: ChainMap) -> Optional[Lift]:
    """x with v x ~ u (u: A -> C, v: B -> C); homotopy from v x to u."""
    A, C = u.source, u.target
    B = v.source
    if v.target != C:
        raise ComplexError("lift: targets differ")
    sys = _lift_system(A, B, C, v, "left")
    sol = sys.solve({("e", i): u[i] for i in _hom_degrees(A, C, 0)})
    return _finish_lift(sol, A, B, v, u, "left")


def solve_extension(u: ChainMap, v: ChainMap) -> Optional[Lift]:
    """x with x v ~ u (u: A -> C, v: A -> B); homotopy from x v to u."""
    A, C = u.source, u.target
    B = v.target
    if v.source != A:
        raise ComplexError("extension: sources differ")
    sys = _lift_system(A, B, C, v, "right")
    sol = sys.solve({("e", i): u[i] for i in _hom_degrees(A, C, 0)})
    return _finish_lift(sol, B, C, v, u, "right")


def _finish_lift(sol, xs, xt, v, u, side):
    if sol is None:
        return None
    x = ChainMap(xs, xt, {i: m for (t, i), m in sol.items() if t == "x"},
                 check=linalg.CHECKS)
    H = {i: m for (t, i), m in sol.items() if t == "H" and not m.is_zero()}
    comp = v @ x if side == "left" else x @ v
    hom = Homotopy(comp, u, H)
    if linalg.CHECKS and not hom.verify():
        linalg._fail("lift homotopy does not verify")
    return Lift(x, hom)
