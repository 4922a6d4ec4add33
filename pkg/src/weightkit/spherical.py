"""Homological criteria for complexes of finitely generated free abelian
groups.

Over Z a complex splits into free summands and two-term torsion pieces
(see ``normal_form``), so the homotopy-category questions asked by the
weights module collapse to statements about homology groups and one
extra invariant of maps, the secondary class.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .complexes import ChainMap, Complex, dualize, homology
from .detectors import mod_t_homology
from .linalg import (GroupStructure, Matrix, ZZ, columns_in_span,
                     direct_sum_structure, kernel_basis)
from .normal_form import E, F, W, normal_form
from .weights import as_window


def _require_z(C: Complex):
    if C.coeff != ZZ:
        raise ValueError("this criterion needs integer coefficients")


def homology_map_is_zero(g: ChainMap, d: int) -> bool:
    """H^d(g) = 0: g maps cycles of degree d to boundaries."""
    M, N = g.source, g.target
    if not M.rank(d) or not N.rank(d):
        return True
    Z = kernel_basis(M.d(d))
    if not Z.ncols:
        return True
    return all(columns_in_span(N.d(d - 1), g[d] @ Z))


def homology_without_weights(M: Complex, win) -> bool:
    """H^j = 0 on the degree window and H at the degree just above free."""
    _require_z(M)
    a, b = as_window(win).degrees
    if any(not homology(M, j).is_zero for j in range(a, b + 1)):
        return False
    return homology(M, b + 1).is_free


def homology_skeleton_test(M: Complex, n: int) -> bool:
    """M is homotopy equivalent to a complex in degrees >= -n."""
    _require_z(M)
    if any(not homology(M, j).is_zero for j in M.degrees if j < -n):
        return False
    return homology(M, -n).is_free


def acyclicity_test(M: Complex) -> bool:
    return all(homology(M, i).is_zero for i in M.degrees)


# ------------------------------------------------------- secondary class


@dataclass
class SecondaryClass:
    """Class of g in Ext^1(H^i M, N^{i-1}/B^{i-1} N).

    ``cocycle`` holds, for each torsion generator w_k of M at degree
    i-1 (d w_k = t_k e_k), the split coordinates of g(w_k) in N^{i-1};
    ``moduli`` gives the modulus of every coordinate (0 = dropped).
    ``ambient`` contains ``ext`` = Ext^1(H^i M, H^{i-1} N) as a summand.
    """

    degree: int
    orders: tuple
    cocycle: Matrix
    moduli: list
    ambient: GroupStructure
    ext: GroupStructure
    residues: list

    @property
    def is_zero(self) -> bool:
        return all(r == 0 for col in self.residues for r in col)

    @property
    def in_ext_summand(self) -> bool:
        return all(r == 0 for col, mods in zip(self.residues, self.moduli)
                   for r, (role, _) in zip(col, mods) if role == W)


def secondary_class(g: ChainMap, i: int, nfM=None, nfN=None
                    ) -> SecondaryClass:
    """Needs H^{i-1}(g) = 0; computed in split coordinates."""
    _require_z(g.source)
    if not homology_map_is_zero(g, i - 1):
        raise ValueError(f"secondary class at {i} needs H^{i - 1}(g) = 0")
    nfM = nfM or normal_form(g.source)
    nfN = nfN or normal_form(g.target)
    gs = nfN.from_input @ g @ nfM.to_input
    gens = [(k, lab[2]) for k, lab in enumerate(nfM.labels.get(i - 1, []))
            if lab[1] == W and nfM.pieces[lab[0]].kind == "torsion"
            and nfM.pieces[lab[0]].degree == i]
    labs = nfN.labels.get(i - 1, [])
    roles = []
    for lab in labs:
        kind = nfN.pieces[lab[0]].kind
        if lab[1] == E and kind == "contractible":
            roles.append(("unit", 1))
        elif lab[1] == E:
            roles.append((E, lab[2]))
        else:
            roles.append((lab[1], 0))
    G = gs[i - 1]
    cols, moduli, residues, amb, ext = [], [], [], [], []
    for k, t in gens:
        col = G.column(k) if G.ncols else []
        mods = []
        res = []
        for x, (role, s) in zip(col, roles):
            if role == "unit":
                q = 1
            elif role == E:
                q = gcd(s, t)
            else:
                q = t
            mods.append((role, q))
            res.append(x % q)
            if q > 1:
                cyc = GroupStructure(0, (q,))
                amb.append(cyc)
                if role != W:
                    ext.append(cyc)
        cols.append(col)
        moduli.append(mods)
        residues.append(res)
    cocycle = Matrix.from_columns(ZZ, len(labs), cols)
    return SecondaryClass(i, tuple(t for _, t in gens), cocycle, moduli,
                          direct_sum_structure(amb),
                          direct_sum_structure(ext), residues)


def kills_weight_homology(g: ChainMap, n: int) -> bool:
    """g kills the single weight n: H^{-n}(g) = 0 and the secondary class
    at degree 1-n vanishes."""
    _require_z(g.source)
    d = -n
    if not homology_map_is_zero(g, d):
        return False
    return secondary_class(g, d + 1).is_zero


# --------------------------------------------- Eilenberg-MacLane cohomology


QZ = "Q/Z"


@dataclass(frozen=True)
class DualGroup:
    """Pontryagin dual of Z^r + (+)Z/t: (Q/Z)^r + (+)Z/t."""

    divisible_rank: int
    torsion: tuple

    @property
    def is_zero(self) -> bool:
        return self.divisible_rank == 0 and not self.torsion

    def __str__(self):
        parts = []
        if self.divisible_rank:
            parts.append("Q/Z" if self.divisible_rank == 1
                         else f"(Q/Z)^{self.divisible_rank}")
        parts += [f"Z/{t}" for t in self.torsion]
        return " + ".join(parts) if parts else "0"


def em_cohomology(M: Complex, G0, i: int):
    """H^i of Hom(M^{-*}, G0); G0 a GroupStructure or the string "Q/Z"."""
    _require_z(M)
    if isinstance(G0, str):
        if G0 != QZ:
            raise ValueError(f"unsupported coefficient group {G0!r}")
        # Q/Z is injective: the answer is the dual of H^{-i}(M)
        h = homology(M, -i)
        return DualGroup(h.rank, h.torsion)
    if not isinstance(G0, GroupStructure):
        raise ValueError(f"unsupported coefficient group {G0!r}")
    D = dualize(M)
    parts = [homology(D, i)] * G0.rank
    parts += [mod_t_homology(D, i, t) for t in G0.torsion]
    return direct_sum_structure(parts)


def qz_dual_test(M: Complex, n: int) -> bool:
    """H^i(M; Q/Z) = 0 for every i < n."""
    _require_z(M)
    return all(em_cohomology(M, QZ, -j).is_zero
               for j in M.degrees if -j < n)


def universal_coefficients(M: Complex, t: int, i: int) -> GroupStructure:
    """Prediction for H^i(Hom(M^{-*}, Z/t)) from the homology of M."""
    def tensor(G):
        parts = [GroupStructure(0, (t,))] * G.rank if t > 1 else []
        parts += [GroupStructure(0, (gcd(s, t),)) for s in G.torsion
                  if gcd(s, t) > 1]
        return parts

    def tor(G):
        return [GroupStructure(0, (gcd(s, t),)) for s in G.torsion
                if gcd(s, t) > 1]

    D = dualize(M)
    return direct_sum_structure(tensor(homology(D, i))
                                + tor(homology(D, i + 1)))
