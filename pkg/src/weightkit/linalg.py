"""Exact linear algebra over Z, Q and prime fields.

Matrices are dense lists of Python ints (Z, F_p) or Fractions (Q).
The Smith normal form is the workhorse: solving, kernels, cokernels and
subquotients all go through it.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

# Self-checks on every SNF (UAV = D, unimodularity, divisibility) and on
# every kernel (saturation). Off by default; the test-suite switches it on.
CHECKS = os.environ.get("WEIGHTKIT_CHECKS", "") not in ("", "0")

_violations = 0


def set_checks(flag: bool) -> None:
    global CHECKS
    CHECKS = bool(flag)


def check_violations() -> int:
    return _violations


class InvariantViolation(AssertionError):
    pass


def _fail(msg):
    global _violations
    _violations += 1
    raise InvariantViolation(msg)


# ---------------------------------------------------------------- rings


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class Coefficients:
    """Base ring: ``"Z"``, ``"Q"`` or ``"Fp"`` with a prime ``p``."""

    kind: str
    p: int = 0

    def __post_init__(self):
        if self.kind not in ("Z", "Q", "Fp"):
            raise ValueError(f"unknown coefficient kind {self.kind!r}")
        if self.kind == "Fp" and not _is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if self.kind != "Fp" and self.p:
            raise ValueError("only prime fields carry p")

    @property
    def is_field(self) -> bool:
        return self.kind != "Z"

    @property
    def tag(self) -> str:
        return f"Fp:{self.p}" if self.kind == "Fp" else self.kind

    @classmethod
    def parse(cls, tag: str) -> "Coefficients":
        tag = tag.strip()
        if tag in ("Z", "Q"):
            return cls(tag)
        if tag.startswith("Fp:"):
            return cls("Fp", int(tag[3:]))
        if tag.startswith("F") and tag[1:].isdigit():
            return cls("Fp", int(tag[1:]))
        raise ValueError(f"bad coefficients tag {tag!r}")

    def __str__(self):
        return self.tag

    def __repr__(self):
        return f"Coefficients({self.tag})"

    # element arithmetic -------------------------------------------------

    def convert(self, x):
        if self.kind == "Z":
            if isinstance(x, Fraction):
                if x.denominator != 1:
                    raise ValueError(f"{x} is not an integer")
                return x.numerator
            if not isinstance(x, int):
                raise TypeError(f"expected an integer, got {x!r}")
            return int(x)
        if self.kind == "Q":
            return Fraction(x)
        x = Fraction(x)
        return x.numerator * pow(x.denominator, -1, self.p) % self.p

    def reduce(self, x):
        if self.kind == "Fp":
            return x % self.p
        return x

    def norm(self, x) -> int:
        """Euclidean size: |x| over Z, 0/1 over a field."""
        if self.kind == "Z":
            return abs(x)
        return 1 if x else 0

    def is_unit(self, x) -> bool:
        if self.kind == "Z":
            return x in (1, -1)
        return x != 0

    def inv(self, x):
        if self.kind == "Z":
            if x not in (1, -1):
                raise ZeroDivisionError(f"{x} is not a unit in Z")
            return x
        if self.kind == "Q":
            return 1 / Fraction(x)
        return pow(x, -1, self.p)

    def quo(self, a, b):
        """Euclidean quotient; exact over a field."""
        if self.kind == "Z":
            return a // b
        if self.kind == "Q":
            return Fraction(a) / b
        return a * pow(b, -1, self.p) % self.p

    def divides(self, a, b) -> bool:
        """True iff a | b."""
        if self.kind == "Z":
            return b == 0 if a == 0 else b % a == 0
        return a != 0 or b == 0

    def normalize(self, x):
        """Unit u with u*x the canonical associate of x."""
        if self.kind == "Z":
            return -1 if x < 0 else 1
        if not x:
            return 1
        return self.inv(x)


ZZ = Coefficients("Z")
QQ = Coefficients("Q")


def GF(p: int) -> Coefficients:
    return Coefficients("Fp", p)


# -------------------------------------------------------------- matrices


class Matrix:
    """Dense exact matrix. Treat as immutable once built."""

    __slots__ = ("ring", "nrows", "ncols", "rows")

    def __init__(self, ring: Coefficients, nrows: int, ncols: int, rows=None):
        self.ring = ring
        self.nrows = nrows
        self.ncols = ncols
        if rows is None:
            z = ring.convert(0)
            rows = [[z] * ncols for _ in range(nrows)]
        else:
            rows = [[ring.convert(x) for x in row] for row in rows]
            if len(rows) != nrows or any(len(r) != ncols for r in rows):
                raise ValueError(
                    f"entry grid does not match shape {nrows}x{ncols}")
        self.rows = rows

    @classmethod
    def _raw(cls, ring, nrows, ncols, rows):
        m = cls.__new__(cls)
        m.ring = ring
        m.nrows = nrows
        m.ncols = ncols
        m.rows = rows
        return m

    @classmethod
    def from_rows(cls, ring, rows, ncols=None) -> "Matrix":
        rows = [list(r) for r in rows]
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        return cls(ring, len(rows), ncols, rows)

    @classmethod
    def zero(cls, ring, nrows, ncols) -> "Matrix":
        z = ring.convert(0)
        return cls._raw(ring, nrows, ncols, [[z] * ncols for _ in range(nrows)])

    @classmethod
    def identity(cls, ring, n) -> "Matrix":
        m = cls.zero(ring, n, n)
        one = ring.convert(1)
        for i in range(n):
            m.rows[i][i] = one
        return m

    @classmethod
    def diag(cls, ring, entries, nrows=None, ncols=None) -> "Matrix":
        entries = list(entries)
        nrows = len(entries) if nrows is None else nrows
        ncols = len(entries) if ncols is None else ncols
        m = cls.zero(ring, nrows, ncols)
        for i, x in enumerate(entries):
            m.rows[i][i] = ring.convert(x)
        return m

    @classmethod
    def from_columns(cls, ring, nrows, cols) -> "Matrix":
        cols = [list(c) for c in cols]
        rows = [[c[i] for c in cols] for i in range(nrows)]
        return cls._raw(ring, nrows, len(cols), rows)

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def copy(self) -> "Matrix":
        return Matrix._raw(self.ring, self.nrows, self.ncols,
                           [list(r) for r in self.rows])

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def column(self, j) -> list:
        return [r[j] for r in self.rows]

    def columns(self) -> list:
        return [[r[j] for r in self.rows] for j in range(self.ncols)]

    def is_zero(self) -> bool:
        return all(not x for r in self.rows for x in r)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return (self.shape == other.shape and self.ring == other.ring
                and self.rows == other.rows)

    def __hash__(self):
        return hash((self.ring, self.shape,
                     tuple(tuple(r) for r in self.rows)))

    def __repr__(self):
        return f"Matrix({self.nrows}x{self.ncols}, {self.tolist()})"

    def tolist(self) -> list:
        if self.ring.kind == "Q":
            return [[int(x) if x.denominator == 1 else str(x) for x in r]
                    for r in self.rows]
        return [list(r) for r in self.rows]

    def _check_same(self, other):
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        if self.ring != other.ring:
            raise ValueError("coefficient mismatch")

    def __add__(self, other):
        self._check_same(other)
        red = self.ring.reduce
        rows = [[red(a + b) for a, b in zip(r, s)]
                for r, s in zip(self.rows, other.rows)]
        return Matrix._raw(self.ring, self.nrows, self.ncols, rows)

    def __sub__(self, other):
        self._check_same(other)
        red = self.ring.reduce
        rows = [[red(a - b) for a, b in zip(r, s)]
                for r, s in zip(self.rows, other.rows)]
        return Matrix._raw(self.ring, self.nrows, self.ncols, rows)

    def __neg__(self):
        red = self.ring.reduce
        return Matrix._raw(self.ring, self.nrows, self.ncols,
                           [[red(-a) for a in r] for r in self.rows])

    def scale(self, c):
        c = self.ring.convert(c)
        red = self.ring.reduce
        return Matrix._raw(self.ring, self.nrows, self.ncols,
                           [[red(c * a) for a in r] for r in self.rows])

    def __matmul__(self, other):
        if self.ncols != other.nrows:
            raise ValueError(
                f"cannot multiply {self.shape} by {other.shape}")
        if self.ring != other.ring:
            raise ValueError("coefficient mismatch")
        red = self.ring.reduce
        cols = list(zip(*other.rows)) if other.nrows else \
            [()] * other.ncols
        z = self.ring.convert(0)
        rows = []
        for r in self.rows:
            nz = [(k, a) for k, a in enumerate(r) if a]
            if not nz:
                rows.append([z] * other.ncols)
                continue
            rows.append([red(sum(a * c[k] for k, a in nz)) for c in cols])
        return Matrix._raw(self.ring, self.nrows, other.ncols, rows)

    def apply(self, v: Sequence) -> list:
        red = self.ring.reduce
        return [red(sum(a * x for a, x in zip(r, v) if a)) for r in self.rows]

    @property
    def T(self):
        return Matrix._raw(self.ring, self.ncols, self.nrows,
                           [list(c) for c in zip(*self.rows)]
                           if self.nrows else [[] for _ in range(self.ncols)])

    def submatrix(self, rows: Iterable[int], cols: Iterable[int]):
        rows = list(rows)
        cols = list(cols)
        return Matrix._raw(self.ring, len(rows), len(cols),
                           [[self.rows[i][j] for j in cols] for i in rows])

    def hstack(self, other):
        if self.nrows != other.nrows:
            raise ValueError("row count mismatch")
        return Matrix._raw(self.ring, self.nrows, self.ncols + other.ncols,
                           [r + s for r, s in zip(self.rows, other.rows)])

    def vstack(self, other):
        if self.ncols != other.ncols:
            raise ValueError("column count mismatch")
        return Matrix._raw(self.ring, self.nrows + other.nrows, self.ncols,
                           [list(r) for r in self.rows]
                           + [list(r) for r in other.rows])

    def change_ring(self, ring):
        """Reduce Z entries into F_p (or embed into Q)."""
        return Matrix(ring, self.nrows, self.ncols, self.rows)

    def det(self):
        """Exact determinant via fraction-free elimination."""
        if self.nrows != self.ncols:
            raise ValueError("determinant of a non-square matrix")
        n = self.nrows
        if self.ring.kind == "Fp":
            return _field_det(self.ring, [list(r) for r in self.rows])
        a = [[Fraction(x) for x in r] for r in self.rows]
        return self.ring.convert(_field_det(QQ, a)) if n else \
            self.ring.convert(1)


def _field_det(ring, a):
    n = len(a)
    det = ring.convert(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c]), None)
        if piv is None:
            return ring.convert(0)
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            det = ring.reduce(-det)
        inv = ring.inv(a[c][c])
        det = ring.reduce(det * a[c][c])
        for r in range(c + 1, n):
            f = a[r][c]
            if f:
                f = ring.reduce(f * inv)
                a[r] = [ring.reduce(x - f * y) for x, y in zip(a[r], a[c])]
    return det


def block_matrix(ring, blocks, row_sizes, col_sizes) -> Matrix:
    """Assemble a matrix from a dict {(bi, bj): Matrix}."""
    roff = [0]
    for s in row_sizes:
        roff.append(roff[-1] + s)
    coff = [0]
    for s in col_sizes:
        coff.append(coff[-1] + s)
    m = Matrix.zero(ring, roff[-1], coff[-1])
    for (bi, bj), blk in blocks.items():
        if blk.shape != (row_sizes[bi], col_sizes[bj]):
            raise ValueError(f"block {(bi, bj)} has shape {blk.shape}")
        for i, r in enumerate(blk.rows):
            m.rows[roff[bi] + i][coff[bj]:coff[bj] + len(r)] = r
    return m


# --------------------------------------------------------- group structure


@dataclass(frozen=True)
class GroupStructure:
    """Z^rank + (+) Z/t_i with t_1 | t_2 | ... and every t_i >= 2."""

    rank: int = 0
    torsion: tuple = ()

    def __post_init__(self):
        t = tuple(int(x) for x in self.torsion)
        object.__setattr__(self, "torsion", t)
        if self.rank < 0:
            raise ValueError("negative rank")
        for a, b in zip(t, t[1:]):
            if b % a:
                raise ValueError(f"torsion {t} is not a divisor chain")
        if any(x < 2 for x in t):
            raise ValueError(f"torsion invariants must be >= 2: {t}")

    @property
    def is_zero(self) -> bool:
        return self.rank == 0 and not self.torsion

    @property
    def is_free(self) -> bool:
        return not self.torsion

    def __add__(self, other):
        return direct_sum_structure([self, other])

    def __str__(self):
        parts = []
        if self.rank:
            parts.append("Z" if self.rank == 1 else f"Z^{self.rank}")
        parts += [f"Z/{t}" for t in self.torsion]
        return " + ".join(parts) if parts else "0"


def direct_sum_structure(groups) -> GroupStructure:
    groups = list(groups)
    rank = sum(g.rank for g in groups)
    ts = [t for g in groups for t in g.torsion]
    if not ts:
        return GroupStructure(rank)
    d = Matrix.diag(ZZ, ts)
    tors = [x for x in smith_normal_form(d).invariants if x >= 2]
    return GroupStructure(rank, tuple(tors))


# ------------------------------------------------------------ Smith form


@dataclass
class SmithForm:
    """U * A * V = D with U, V invertible over the ring."""

    A: Matrix
    U: Matrix
    D: Matrix
    V: Matrix
    Uinv: Matrix
    Vinv: Matrix
    rank: int

    @property
    def invariants(self) -> list:
        return [self.D.rows[i][i] for i in range(self.rank)]

    def verify(self) -> bool:
        """Raises InvariantViolation on the first broken condition."""
        A, U, D, V = self.A, self.U, self.D, self.V
        ring = A.ring
        if U @ A @ V != D:
            _fail("SNF: U*A*V != D")
        if (U @ self.Uinv != Matrix.identity(ring, A.nrows)
                or V @ self.Vinv != Matrix.identity(ring, A.ncols)):
            _fail("SNF: transforms are not invertible over the ring")
        for i in range(D.nrows):
            for j in range(D.ncols):
                x = D.rows[i][j]
                if x and (i != j or i >= self.rank):
                    _fail("SNF: D is not diagonal")
        inv = self.invariants
        if any(not x for x in inv):
            _fail("SNF: zero inside the invariant block")
        if ring.kind == "Z":
            if any(x < 0 for x in inv):
                _fail("SNF: negative invariant")
            if any(b % a for a, b in zip(inv, inv[1:])):
                _fail("SNF: divisibility chain broken")
        elif any(x != 1 for x in inv):
            _fail("SNF: field invariants must be 1")
        return True


def _snf(A: Matrix, want_u=True, want_v=True, extra=None):
    """Core Smith reduction.

    ``extra`` is a list of row-vectors-by-columns (an m x k matrix given as
    rows) that receives every row operation; used by ``solve`` so that U
    never has to be formed.
    """
    ring = A.ring
    red = ring.reduce
    norm = ring.norm
    m, n = A.nrows, A.ncols
    D = [list(r) for r in A.rows]
    one, zero = ring.convert(1), ring.convert(0)
    U = [[one if i == j else zero for j in range(m)] for i in range(m)] \
        if want_u else None
    Ui = [[one if i == j else zero for j in range(m)] for i in range(m)] \
        if want_u else None
    V = [[one if i == j else zero for j in range(n)] for i in range(n)] \
        if want_v else None
    Vi = [[one if i == j else zero for j in range(n)] for i in range(n)] \
        if want_v else None
    E = extra

    def row_addmul(dst, src, q):
        # row_dst -= q * row_src
        rs, rd = D[src], D[dst]
        for k in range(n):
            if rs[k]:
                rd[k] = red(rd[k] - q * rs[k])
        if U is not None:
            us, ud = U[src], U[dst]
            for k in range(m):
                if us[k]:
                    ud[k] = red(ud[k] - q * us[k])
            # inverse: col_src += q * col_dst
            for r in Ui:
                if r[dst]:
                    r[src] = red(r[src] + q * r[dst])
        if E is not None:
            es, ed = E[src], E[dst]
            for k in range(len(ed)):
                if es[k]:
                    ed[k] = red(ed[k] - q * es[k])

    def row_swap(a, b):
        D[a], D[b] = D[b], D[a]
        if U is not None:
            U[a], U[b] = U[b], U[a]
            for r in Ui:
                r[a], r[b] = r[b], r[a]
        if E is not None:
            E[a], E[b] = E[b], E[a]

    def row_scale(a, u):
        D[a] = [red(u * x) for x in D[a]]
        if U is not None:
            U[a] = [red(u * x) for x in U[a]]
            ui = ring.inv(u)
            for r in Ui:
                r[a] = red(r[a] * ui)
        if E is not None:
            E[a] = [red(u * x) for x in E[a]]

    def col_addmul(dst, src, q):
        # col_dst -= q * col_src
        for r in D:
            if r[src]:
                r[dst] = red(r[dst] - q * r[src])
        if V is not None:
            for r in V:
                if r[src]:
                    r[dst] = red(r[dst] - q * r[src])
            # inverse: row_src += q * row_dst
            vd, vs = Vi[dst], Vi[src]
            for k in range(n):
                if vd[k]:
                    vs[k] = red(vs[k] + q * vd[k])

    def col_swap(a, b):
        for r in D:
            r[a], r[b] = r[b], r[a]
        if V is not None:
            for r in V:
                r[a], r[b] = r[b], r[a]
            Vi[a], Vi[b] = Vi[b], Vi[a]

    t = 0
    while t < min(m, n):
        # pivot: minimal nonzero norm, row-major tie-break
        best = None
        for i in range(t, m):
            row = D[i]
            for j in range(t, n):
                x = row[j]
                if x:
                    s = norm(x)
                    if best is None or s < best[0]:
                        best = (s, i, j)
                        if s == 1:
                            break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        if i != t:
            row_swap(i, t)
        if j != t:
            col_swap(j, t)
        while True:
            p = D[t][t]
            dirty = False
            for i in range(t + 1, m):
                x = D[i][t]
                if x:
                    row_addmul(i, t, ring.quo(x, p))
                    if D[i][t]:
                        dirty = True
            for j in range(t + 1, n):
                x = D[t][j]
                if x:
                    col_addmul(j, t, ring.quo(x, p))
                    if D[t][j]:
                        dirty = True
            if dirty:
                # smaller remainder appeared in the pivot row/column
                cand = [(norm(D[i][t]), 0, i) for i in range(t + 1, m)
                        if D[i][t]]
                cand += [(norm(D[t][j]), 1, j) for j in range(t + 1, n)
                         if D[t][j]]
                _, kind, k = min(cand)
                if kind == 0:
                    row_swap(k, t)
                else:
                    col_swap(k, t)
                continue
            if ring.kind == "Z":
                bad = None
                for i in range(t + 1, m):
                    for j in range(t + 1, n):
                        if D[i][j] % p:
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is not None:
                    row_addmul(t, bad, -1)
                    continue
            break
        u = ring.normalize(D[t][t])
        if u != 1:
            row_scale(t, u)
        t += 1

    wrap = lambda rows, r, c: Matrix._raw(ring, r, c, rows)  # noqa: E731
    return (wrap(D, m, n), wrap(U, m, m) if U is not None else None,
            wrap(V, n, n) if V is not None else None,
            wrap(Ui, m, m) if Ui is not None else None,
            wrap(Vi, n, n) if Vi is not None else None, t)


def smith_normal_form(A: Matrix) -> SmithForm:
    """Smith normal form with both transforms and their inverses.

    Over a field the invariants are all 1 (rank normal form).
    """
    D, U, V, Ui, Vi, r = _snf(A)
    sf = SmithForm(A, U, D, V, Ui, Vi, r)
    if CHECKS:
        sf.verify()
    return sf


def rank(A: Matrix) -> int:
    return _snf(A, want_u=False, want_v=False)[5]


# ------------------------------------------------------------ solving etc.


def solve(A: Matrix, b: Sequence, coeff: Coefficients | None = None):
    """One solution x of A x = b in the ring, or None if there is none."""
    ring = coeff or A.ring
    if ring != A.ring:
        A = A.change_ring(ring)
    b = [ring.convert(x) for x in b]
    if len(b) != A.nrows:
        raise ValueError(f"rhs has length {len(b)}, expected {A.nrows}")
    if not any(b):
        return [ring.convert(0)] * A.ncols
    extra = [[x] for x in b]
    D, _, V, _, _, r = _snf(A, want_u=False, want_v=True, extra=extra)
    y = [ring.convert(0)] * A.ncols
    for i in range(A.nrows):
        c = extra[i][0]
        if i < r:
            p = D.rows[i][i]
            if not ring.divides(p, c):
                return None
            y[i] = ring.quo(c, p)
        elif c:
            return None
    x = V.apply(y)
    if CHECKS and A.apply(x) != b:
        _fail("solve: returned x does not satisfy A x = b")
    return x


def solve_matrix(A: Matrix, B: Matrix):
    """X with A X = B (one SNF for all columns), or None."""
    ring = A.ring
    if B.nrows != A.nrows:
        raise ValueError(f"rhs has {B.nrows} rows, expected {A.nrows}")
    extra = [list(r) for r in B.rows]
    D, _, V, _, _, r = _snf(A, want_u=False, want_v=True, extra=extra)
    Y = Matrix.zero(ring, A.ncols, B.ncols)
    for i in range(A.nrows):
        row = extra[i]
        if i < r:
            p = D.rows[i][i]
            for j, c in enumerate(row):
                if not ring.divides(p, c):
                    return None
                Y.rows[i][j] = ring.quo(c, p)
        elif any(row):
            return None
    X = V @ Y
    if CHECKS and A @ X != B:
        _fail("solve_matrix: A X != B")
    return X


def columns_in_span(A: Matrix, B: Matrix) -> list:
    """For each column of B, whether it lies in the column span of A."""
    ring = A.ring
    extra = [list(r) for r in B.rows]
    D, _, _, _, _, r = _snf(A, want_u=False, want_v=False, extra=extra)
    out = []
    for j in range(B.ncols):
        ok = True
        for i in range(A.nrows):
            c = extra[i][j]
            if i < r:
                if not ring.divides(D.rows[i][i], c):
                    ok = False
                    break
            elif c:
                ok = False
                break
        out.append(ok)
    return out


def kernel_basis(A: Matrix, coeff: Coefficients | None = None) -> Matrix:
    """Columns form a basis of ker A (saturated lattice over Z)."""
    ring = coeff or A.ring
    if ring != A.ring:
        A = A.change_ring(ring)
    _, _, V, _, _, r = _snf(A, want_u=False, want_v=True)
    K = V.submatrix(range(A.ncols), range(r, A.ncols))
    # sign-normalize: first nonzero entry of each column is canonical
    for j in range(K.ncols):
        lead = next((x for x in K.column(j) if x), None)
        if lead is not None:
            u = ring.normalize(lead) if ring.kind == "Z" else ring.inv(lead)
            if u != 1:
                for row in K.rows:
                    row[j] = ring.reduce(row[j] * u)
    if CHECKS:
        if not (A @ K).is_zero():
            _fail("kernel: A*K != 0")
        if ring.kind == "Z" and K.ncols:
            inv = smith_normal_form(K).invariants
            if len(inv) != K.ncols or any(x != 1 for x in inv):
                _fail("kernel: lattice basis is not saturated")
    return K


def image_basis(A: Matrix) -> Matrix:
    """Columns form a basis of the column span of A."""
    D, _, _, Ui, _, r = _snf(A, want_u=True, want_v=False)
    # column span of A = Uinv * column span of D
    cols = []
    for i in range(r):
        p = D.rows[i][i]
        cols.append([A.ring.reduce(Ui.rows[k][i] * p)
                     for k in range(A.nrows)])
    return Matrix.from_columns(A.ring, A.nrows, cols)


def cokernel_structure(A: Matrix, coeff: Coefficients | None = None
                       ) -> GroupStructure:
    """Structure of (target of A) / (column span of A)."""
    ring = coeff or A.ring
    if ring != A.ring:
        A = A.change_ring(ring)
    D, _, _, _, _, r = _snf(A, want_u=False, want_v=False)
    free = A.nrows - r
    if ring.is_field:
        return GroupStructure(free)
    tors = tuple(D.rows[i][i] for i in range(r) if D.rows[i][i] != 1)
    return GroupStructure(free, tors)


def subquotient_structure(ring: Coefficients, dim: int, gens: Matrix,
                          rels: Matrix) -> GroupStructure:
    """Structure of (span(gens) + span(rels)) / span(rels) inside ring^dim."""
    G = gens.hstack(rels) if rels.ncols else gens
    if G.ncols == 0:
        return GroupStructure(0)
    D, U, _, _, _, r = _snf(G, want_u=True, want_v=False)
    if r == 0:
        return GroupStructure(0)
    # coordinates of rels in the basis {Uinv e_i * d_i : i < r}
    ur = U @ rels if rels.ncols else Matrix.zero(ring, dim, 0)
    Y = Matrix.zero(ring, r, rels.ncols)
    for i in range(r):
        p = D.rows[i][i]
        Y.rows[i] = [ring.quo(x, p) for x in ur.rows[i]]
    return cokernel_structure(Y)


def in_span(A: Matrix, v: Sequence) -> bool:
    return solve(A, v) is not None


def is_unimodular(U: Matrix) -> bool:
    return U.nrows == U.ncols and U.ring.is_unit(U.det())


def random_unimodular(ring: Coefficients, n: int, rng, steps=None,
                      max_mult=2) -> tuple:
    """Random invertible matrix and its inverse, built from elementary ops."""
    P = Matrix.identity(ring, n)
    Pi = Matrix.identity(ring, n)
    if n < 2:
        if n == 1 and rng.random() < 0.5:
            P = P.scale(-1)
            Pi = Pi.scale(-1)
        return P, Pi
    red = ring.reduce
    for _ in range(steps if steps is not None else 2 * n):
        i, j = rng.sample(range(n), 2)
        q = ring.convert(rng.randint(-max_mult, max_mult))
        # P <- E P with E = I + q e_ij ; Pi <- Pi E^-1
        P.rows[i] = [red(a + q * b) for a, b in zip(P.rows[i], P.rows[j])]
        for r in Pi.rows:
            r[j] = red(r[j] - q * r[i])
    return P, Pi


def vec_gcd(v: Iterable[int]) -> int:
    g = 0
    for x in v:
        g = gcd(g, int(x))
    return g


class LinearSystem:
    """Linear equations whose unknowns and equations are matrix blocks.

    Terms have the form ``eq += sign * L @ X @ R``; blocks are flattened
    row-major. Used for every homotopy and lift search.
    """

    def __init__(self, ring: Coefficients):
        self.ring = ring
        self.unknowns = {}
        self.equations = {}
        self._nunk = 0
        self._neq = 0
        self._entries = {}

    def unknown(self, key, p, q):
        if key not in self.unknowns:
            self.unknowns[key] = (self._nunk, p, q)
            self._nunk += p * q
        return key

    def equation(self, key, p, q):
        if key not in self.equations:
            self.equations[key] = (self._neq, p, q)
            self._neq += p * q
        return key

    def add(self, eq, unk, left=None, right=None, sign=1):
        eo, P, Q = self.equations[eq]
        uo, p, q = self.unknowns[unk]
        if P * Q == 0 or p * q == 0:
            return
        lrows = left.rows if left is not None else None
        rrows = right.rows if right is not None else None
        if (left.nrows if left is not None else p) != P or \
                (right.ncols if right is not None else q) != Q or \
                (left.ncols if left is not None else p) != p or \
                (right.nrows if right is not None else q) != q:
            raise ValueError(f"term shape mismatch for {eq!r} <- {unk!r}")
        ent = self._entries
        red = self.ring.reduce
        for r in range(p):
            if lrows is None:
                lcol = [(r, 1)]
            else:
                lcol = [(i, lrows[i][r]) for i in range(P) if lrows[i][r]]
            if not lcol:
                continue
            for c in range(q):
                if rrows is None:
                    rrow = [(c, 1)]
                else:
                    rrow = [(j, x) for j, x in enumerate(rrows[c]) if x]
                col = uo + r * q + c
                for i, a in lcol:
                    base = eo + i * Q
                    for j, b in rrow:
                        k = (base + j, col)
                        ent[k] = red(ent.get(k, 0) + sign * a * b)

    @property
    def shape(self):
        return (self._neq, self._nunk)

    def matrix(self) -> Matrix:
        M = Matrix.zero(self.ring, self._neq, self._nunk)
        for (i, j), x in self._entries.items():
            if x:
                M.rows[i][j] = self.ring.convert(x)
        return M

    def rhs(self, blocks: dict) -> list:
        b = [self.ring.convert(0)] * self._neq
        for key, mat in blocks.items():
            if key not in self.equations:
                if not mat.is_zero():
                    raise ValueError(f"right-hand side for unknown equation {key!r}")
                continue
            eo, P, Q = self.equations[key]
            if mat.shape != (P, Q):
                raise ValueError(f"rhs block {key!r} has shape {mat.shape}")
            for i, row in enumerate(mat.rows):
                b[eo + i * Q:eo + (i + 1) * Q] = row
        return b

    def decode(self, x: Sequence) -> dict:
        out = {}
        for key, (uo, p, q) in self.unknowns.items():
            rows = [list(x[uo + r * q:uo + (r + 1) * q]) for r in range(p)]
            out[key] = Matrix._raw(self.ring, p, q, rows)
        return out

    def solve(self, blocks: dict):
        """Decoded solution of the system, or None."""
        b = self.rhs(blocks)
        if self._nunk == 0:
            return {} if not any(b) else None
        x = solve(self.matrix(), b)
        return None if x is None else self.decode(x)
