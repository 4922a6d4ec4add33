"""Splitting a complex into elementary pieces.

Over a PID every bounded complex of finite free modules is isomorphic
(not merely homotopy equivalent) to a direct sum of

* contractible pieces ``R --1--> R`` in degrees j-1, j,
* free summands ``R^r`` in degree j,
* torsion pieces ``R^k --diag(t)--> R^k`` in degrees j-1, j (Z only).

The isomorphism is built from saturated kernel bases and one Smith form
per degree; it is returned together with its inverse.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import linalg
from .complexes import (ChainMap, Complex, Homotopy, direct_sum,
                        find_nullhomotopy, homology)
from .linalg import GroupStructure, Matrix, smith_normal_form


@dataclass(frozen=True)
class Piece:
    """``kind`` is "contractible", "free" or "torsion"; ``degree`` is the
    top degree (the only degree for free summands)."""

    kind: str
    degree: int
    rank: int
    invariants: tuple = ()

    @property
    def degrees(self) -> tuple:
        if self.kind == "free":
            return (self.degree,)
        return (self.degree - 1, self.degree)

    def complex(self, coeff) -> Complex:
        j = self.degree
        if self.kind == "free":
            return Complex.concentrated(coeff, j, self.rank)
        diag = [1] * self.rank if self.kind == "contractible" else \
            list(self.invariants)
        return Complex.two_term(coeff, j - 1, Matrix.diag(coeff, diag))

    def homology(self) -> dict:
        if self.kind == "free":
            return {self.degree: GroupStructure(self.rank)}
        if self.kind == "torsion":
            return {self.degree: GroupStructure(0, self.invariants)}
        return {}

    def describe(self) -> str:
        if self.kind == "free":
            return f"free(degree {self.degree}, rank {self.rank})"
        if self.kind == "torsion":
            t = ",".join(map(str, self.invariants))
            return f"torsion(degree {self.degree}, [{t}])"
        return f"contractible(degrees {self.degree - 1},{self.degree}" \
            f" x{self.rank})"


# basis vector roles in the split basis of one degree
W, E, F = "w", "e", "f"


@dataclass
class NormalForm:
    """Elementary pieces with an explicit isomorphism to the input.

    ``to_input``/``from_input`` are mutually inverse chain maps between
    ``complex`` (the direct sum of the pieces) and ``source``.
    ``minimal`` drops the contractible pieces; ``min_homotopy`` is a
    homotopy from id_source to min_to_input @ input_to_min.
    """

    source: Complex
    pieces: list
    complex: Complex
    to_input: ChainMap
    from_input: ChainMap
    labels: dict
    minimal: Complex = None
    min_to_input: ChainMap = None
    input_to_min: ChainMap = None
    min_homotopy: Homotopy = None

    @property
    def coeff(self):
        return self.source.coeff

    def essential_pieces(self) -> list:
        return [p for p in self.pieces if p.kind != "contractible"]

    def homology(self) -> dict:
        out = {}
        for p in self.pieces:
            for j, g in p.homology().items():
                out[j] = out[j] + g if j in out else g
        return out

    def verify(self) -> bool:
        """Round trips are identities and the minimal model retracts."""
        S, N = self.source, self.complex
        for f in (self.to_input, self.from_input):
            if f.failing_degree() is not None:
                return False
        if self.to_input @ self.from_input != ChainMap.identity(S):
            return False
        if self.from_input @ self.to_input != ChainMap.identity(N):
            return False
        if self.input_to_min @ self.min_to_input != \
                ChainMap.identity(self.minimal):
            return False
        return self.min_homotopy.verify()

    def transport(self, g: ChainMap, other: "NormalForm") -> ChainMap:
        """g: self.source -> other.source in split coordinates."""
        return other.from_input @ g @ self.to_input


def normal_form(M: Complex) -> NormalForm:
    ring = M.coeff
    degs = M.degrees
    # per degree: kernel basis K (saturated) and complement W, both as
    # column lists in ambient coordinates
    K, Wc = {}, {}
    for i in degs:
        n = M.rank(i)
        d = M.d(i)
        sf = smith_normal_form(d)
        r = sf.rank
        # columns r.. of V span ker d; columns ..r complement it
        cols = sf.V.columns()
        Wc[i] = cols[:r]
        K[i] = cols[r:]
    # adapt the kernel basis at degree i to the image of d^{i-1} on W_{i-1}
    new_w, new_k, tvals = {}, {}, {}
    for i in degs:
        kcols = K[i]
        wprev = Wc.get(i - 1, [])
        if not wprev or not kcols:
            new_k[i] = kcols
            tvals[i] = []
            continue
        Kmat = Matrix.from_columns(ring, M.rank(i), kcols)
        img = M.d(i - 1) @ Matrix.from_columns(ring, M.rank(i - 1), wprev)
        A = linalg.solve_matrix(Kmat, img)
        if A is None:
            raise linalg.InvariantViolation("image not inside kernel")
        sf = smith_normal_form(A)
        r = sf.rank
        if r != len(wprev):
            raise linalg.InvariantViolation("d restricted to W not injective")
        Wn = Matrix.from_columns(ring, M.rank(i - 1), wprev) @ sf.V
        Kn = Kmat @ sf.Uinv
        new_w[i - 1] = Wn.columns()
        new_k[i] = Kn.columns()
        tvals[i] = sf.invariants
    for i in degs:
        new_w.setdefault(i, Wc[i])
    # pieces, ordered by degree; within a degree: contractible, torsion, free
    pieces = []
    for i in degs:
        ts = tvals[i]
        n_unit = sum(1 for t in ts if t == 1)
        tors = tuple(t for t in ts if t != 1)
        if n_unit:
            pieces.append(Piece("contractible", i, n_unit))
        if tors:
            pieces.append(Piece("torsion", i, len(tors), tors))
        nfree = len(new_k[i]) - len(ts)
        if nfree:
            pieces.append(Piece("free", i, nfree))
    # split basis: per degree, columns for each piece in piece order
    cols, labels = {i: [] for i in degs}, {i: [] for i in degs}
    for idx, p in enumerate(pieces):
        i = p.degree
        ts = tvals[i]
        if p.kind == "free":
            vecs = new_k[i][len(ts):]
            cols[i] += vecs
            labels[i] += [(idx, F, 0)] * len(vecs)
            continue
        sel = [k for k, t in enumerate(ts)
               if (t == 1) == (p.kind == "contractible")]
        for k in sel:
            cols[i - 1].append(new_w[i - 1][k])
            labels[i - 1].append((idx, W, ts[k]))
        for k in sel:
            cols[i].append(new_k[i][k])
            labels[i].append((idx, E, ts[k]))
    N = direct_sum(*[p.complex(ring) for p in pieces], coeff=ring)
    # the direct sum orders basis vectors per degree in piece order, with
    # the w-block of a piece in its lower degree: same as cols
    P = {i: Matrix.from_columns(ring, M.rank(i), cols[i]) for i in degs}
    Pinv = {i: _inverse(P[i]) for i in degs}
    to_input = ChainMap(N, M, P, check=linalg.CHECKS)
    from_input = ChainMap(M, N, Pinv, check=linalg.CHECKS)
    nf = NormalForm(M, pieces, N, to_input, from_input, labels)
    _attach_minimal(nf)
    if linalg.CHECKS and not nf.verify():
        linalg._fail("normal form does not verify")
    return nf


def _inverse(P: Matrix) -> Matrix:
    sf = smith_normal_form(P)
    if sf.rank != P.nrows or any(not P.ring.is_unit(x)
                                 for x in sf.invariants):
        raise linalg.InvariantViolation("split basis is not unimodular")
    # U P V = I  =>  P^{-1} = V U
    return sf.V @ sf.U


def _attach_minimal(nf: NormalForm) -> None:
    ring = nf.coeff
    N = nf.complex
    keep = {i: [k for k, lab in enumerate(nf.labels[i])
                if nf.pieces[lab[0]].kind != "contractible"]
            for i in N.degrees}
    Mn = Complex(ring, {i: len(ks) for i, ks in keep.items()},
                 {i: N.d(i).submatrix(keep.get(i + 1, []), keep[i])
                  for i in N.degrees}, check=linalg.CHECKS)
    inc, proj = {}, {}
    for i in N.degrees:
        m = Matrix.zero(ring, N.rank(i), len(keep[i]))
        for c, k in enumerate(keep[i]):
            m.rows[k][c] = ring.convert(1)
        inc[i] = m
        proj[i] = m.T
    inc = ChainMap(Mn, N, inc, check=linalg.CHECKS)
    proj = ChainMap(N, Mn, proj, check=linalg.CHECKS)
    # homotopy on N: e -> w on each contractible pair
    H = {}
    for i in N.degrees:
        es = [(k, lab) for k, lab in enumerate(nf.labels[i])
              if lab[1] == E and nf.pieces[lab[0]].kind == "contractible"]
        if not es:
            continue
        ws = [k for k, lab in enumerate(nf.labels[i - 1])
              if lab[1] == W and nf.pieces[lab[0]].kind == "contractible"]
        h = Matrix.zero(ring, N.rank(i - 1), N.rank(i))
        for (k, _), kw in zip(es, ws):
            h.rows[kw][k] = ring.convert(1)
        H[i] = h
    P, Pinv = nf.to_input, nf.from_input
    nf.minimal = Mn
    nf.min_to_input = P @ inc
    nf.input_to_min = proj @ Pinv
    HM = {i: P[i - 1] @ h @ Pinv[i] for i, h in H.items()}
    nf.min_homotopy = Homotopy(ChainMap.identity(nf.source),
                               nf.min_to_input @ nf.input_to_min, HM)


def reassemble(nf: NormalForm) -> Complex:
    return direct_sum(*[p.complex(nf.coeff) for p in nf.pieces],
                      coeff=nf.coeff)


def roundtrip_witnesses(nf: NormalForm) -> tuple:
    """Homotopies id ~ to_input @ from_input on both sides (found by solve)."""
    a = find_nullhomotopy(ChainMap.identity(nf.source)
                          - nf.to_input @ nf.from_input)
    b = find_nullhomotopy(ChainMap.identity(nf.complex)
                          - nf.from_input @ nf.to_input)
    return a, b


def sharp_interval_from_pieces(pieces) -> tuple | None:
    """Weight interval [lo, hi] covered by the non-contractible pieces."""
    ws = [-j for p in pieces if p.kind != "contractible" for j in p.degrees]
    if not ws:
        return None
    return (min(ws), max(ws))


def homology_matches(nf: NormalForm) -> bool:
    pred = nf.homology()
    for i in set(nf.source.degrees) | set(pred):
        if homology(nf.source, i) != pred.get(i, GroupStructure(0)):
            return False
    return True
