"""The stupid weight structure on bounded complexes.

Weight/degree dictionary (used everywhere in this package): a module
sitting in cohomological degree j has weight -j. So

* X is in w<=l  iff X lives in degrees >= -l,
* Y is in w>=l  iff Y lives in degrees <= -l,
* the weight window [m, n] is the degree window [-n, -m].

Public functions take weights; the degree window is ``Window.degrees``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Optional

from . import linalg
from .complexes import (ChainMap, Complex, ComplexError, Homotopy,
                        RangedWitness, cone, direct_sum, find_nullhomotopy,
                        find_ranged_witness, quotient_at_most, solve_extension,
                        solve_lift, sub_at_least, sum_injection,
                        sum_projection)
from .linalg import InvariantViolation, Matrix, random_unimodular
from .normal_form import (NormalForm, normal_form,
                          sharp_interval_from_pieces)

METHODS = ("direct", "weak_homotopy", "homology", "detector")


class WindowError(ValueError):
    pass


@dataclass(frozen=True)
class Window:
    """Weights m..n; m > n is an input error."""

    m: int
    n: int

    def __post_init__(self):
        if self.m > self.n:
            raise WindowError(f"empty weight window [{self.m}, {self.n}]")

    @property
    def degrees(self) -> tuple:
        return (-self.n, -self.m)

    def __iter__(self):
        return iter(range(self.m, self.n + 1))

    def __str__(self):
        return f"[{self.m},{self.n}]"


def as_window(win) -> Window:
    return win if isinstance(win, Window) else Window(*win)


# ---------------------------------------------------- triangle certificate


@dataclass
class TriangleCertificate:
    """cone(iota) ~ Y via phi: cone -> Y and psi: Y -> cone.

    ``phi_psi`` is a homotopy id_Y ~ phi psi, ``psi_phi`` one for the cone.
    """

    cone: Complex
    phi: ChainMap
    psi: ChainMap
    phi_psi: Homotopy
    psi_phi: Homotopy

    def verify(self) -> bool:
        for f in (self.phi, self.psi):
            if f.failing_degree() is not None:
                return False
        return self.phi_psi.verify() and self.psi_phi.verify()


def certify_triangle(iota: ChainMap, p: ChainMap, psi: ChainMap = None,
                     K: dict = None) -> Optional[TriangleCertificate]:
    """Certificate that X -> M -> Y is distinguished, or None.

    K (a nullhomotopy of p iota) and psi are found by solving when not
    supplied.
    """
    X, M, Y = iota.source, iota.target, p.target
    if K is None:
        H = find_nullhomotopy(p @ iota)
        if H is None:
            return None
        K = H.h
    C = cone(iota)
    coeff = M.coeff
    comps = {}
    for i in C.complex.degrees:
        kk = K.get(i + 1, Matrix.zero(coeff, Y.rank(i), X.rank(i + 1)))
        comps[i] = linalg.block_matrix(coeff, {(0, 0): p[i], (0, 1): kk},
                                       [Y.rank(i)],
                                       [M.rank(i), X.rank(i + 1)])
    phi = ChainMap(C.complex, Y, comps, check=False)
    if phi.failing_degree() is not None:
        return None
    if psi is None:
        lift = solve_lift(ChainMap.identity(Y), phi)
        if lift is None:
            return None
        psi = lift.x
    h1 = find_nullhomotopy(ChainMap.identity(Y) - phi @ psi)
    h2 = find_nullhomotopy(ChainMap.identity(C.complex) - psi @ phi)
    if h1 is None or h2 is None:
        return None
    idY, idC = ChainMap.identity(Y), ChainMap.identity(C.complex)
    return TriangleCertificate(C.complex, phi, psi,
                               Homotopy(idY, phi @ psi, h1.h),
                               Homotopy(idC, psi @ phi, h2.h))


# ----------------------------------------------------- weight decompositions


@dataclass
class WeightDecomposition:
    """X = w<=l M -> M -> Y = w>=l+1 M."""

    M: Complex
    l: int
    X: Complex
    Y: Complex
    inclusion: ChainMap
    projection: ChainMap
    certificate: TriangleCertificate
    stupid: bool = True

    def verify(self) -> bool:
        if self.X.degrees and min(self.X.degrees) < -self.l:
            return False
        if self.Y.degrees and max(self.Y.degrees) > -self.l - 1:
            return False
        return self.certificate is not None and self.certificate.verify()


def truncate(M: Complex, l: int) -> WeightDecomposition:
    """Stupid truncation: X = degrees >= -l, Y = degrees <= -l-1."""
    X, iota = sub_at_least(M, -l)
    Y, p = quotient_at_most(M, -l - 1)
    coeff = M.coeff
    k = -l - 1
    psi = {}
    for i in Y.degrees:
        blocks = {(0, 0): Matrix.identity(coeff, Y.rank(i))}
        if i == k and X.rank(k + 1):
            blocks[(1, 0)] = -M.d(k)
        psi[i] = linalg.block_matrix(coeff, blocks,
                                     [M.rank(i), X.rank(i + 1)],
                                     [Y.rank(i)])
    C = cone(iota)
    psi = ChainMap(Y, C.complex, psi, check=linalg.CHECKS)
    cert = certify_triangle(iota, p, psi=psi, K={})
    if cert is None:
        raise InvariantViolation("stupid truncation triangle failed")
    return WeightDecomposition(M, l, X, Y, iota, p, cert)


def perturb_decomposition(dec: WeightDecomposition,
                          rng: random.Random) -> WeightDecomposition:
    """Same triangle up to isomorphism, with X and Y padded by contractible
    summands and conjugated by random invertible matrices."""
    coeff = dec.M.coeff

    def pad(Z: Complex, lo: int, hi: int):
        if lo > hi:
            return Z, ChainMap.identity(Z), ChainMap.identity(Z)
        j = rng.randint(lo, hi)
        r = rng.randint(1, 2)
        E = Complex.two_term(coeff, j - 1, Matrix.identity(coeff, r))
        parts = [Z, E]
        S = direct_sum(*parts, coeff=coeff)
        P = {i: random_unimodular(coeff, S.rank(i), rng) for i in S.degrees}
        Sd = Complex(coeff, S.ranks,
                     {i: P[i + 1][0] @ S.d(i) @ P[i][1]
                      for i in S.degrees if S.rank(i + 1)},
                     check=linalg.CHECKS)
        to = ChainMap(S, Sd, {i: P[i][0] for i in S.degrees},
                      check=linalg.CHECKS)
        back = ChainMap(Sd, S, {i: P[i][1] for i in S.degrees},
                        check=linalg.CHECKS)
        return Sd, to @ sum_injection(parts, 0), \
            sum_projection(parts, 0) @ back

    a = -dec.l
    X2, x_in, x_out = pad(dec.X, a + 1, a + 3)
    Y2, y_in, y_out = pad(dec.Y, a - 3, a - 1)
    iota = dec.inclusion @ x_out
    p = y_in @ dec.projection
    cert = certify_triangle(iota, p)
    if cert is None:
        raise InvariantViolation("perturbed triangle failed to certify")
    return WeightDecomposition(dec.M, dec.l, X2, Y2, iota, p, cert,
                               stupid=False)


def sharp_weight_interval(M: Complex, nf: NormalForm = None):
    """Smallest weight interval containing M up to homotopy, or None."""
    nf = nf or normal_form(M)
    return sharp_interval_from_pieces(nf.pieces)


# ------------------------------------------------- morphisms of triangles


@dataclass
class DecompositionMorphism:
    h: ChainMap
    j: ChainMap
    left_square: Homotopy
    right_square: Homotopy

    def verify(self) -> bool:
        return self.left_square.verify() and self.right_square.verify()


def extend_to_decomposition_morphism(g: ChainMap, dm: WeightDecomposition,
                                     dl: WeightDecomposition,
                                     method: str = "auto"
                                     ) -> DecompositionMorphism:
    """(h, j) with dl.inclusion h ~ g dm.inclusion and
    j dm.projection ~ dl.projection g.

    Stupid decompositions get the componentwise restriction of g; other
    decompositions (or method="solve") go through the lift solver.
    """
    if dm.l > dl.l:
        raise ValueError("extension needs m <= l")
    if dm.M != g.source or dl.M != g.target:
        raise ComplexError("decompositions do not match the map")
    u = g @ dm.inclusion
    w = dl.projection @ g
    if method == "auto" and dm.stupid and dl.stupid:
        h = ChainMap(dm.X, dl.X, {i: g[i] for i in dm.X.degrees},
                     check=linalg.CHECKS)
        j = ChainMap(dm.Y, dl.Y, {i: g[i] for i in dl.Y.degrees},
                     check=linalg.CHECKS)
        left = Homotopy(dl.inclusion @ h, u, {})
        right = Homotopy(j @ dm.projection, w, {})
    else:
        lift = solve_lift(u, dl.inclusion)
        ext = solve_extension(w, dm.projection)
        if lift is None or ext is None:
            raise InvariantViolation("no morphism of weight decompositions")
        h, j = lift.x, ext.x
        left, right = lift.homotopy, ext.homotopy
    out = DecompositionMorphism(h, j, left, right)
    if linalg.CHECKS and not out.verify():
        linalg._fail("morphism of decompositions does not verify")
    return out


# --------------------------------------------------------- killing weights


@dataclass
class Factorization:
    """x: w<=n M -> w<=m-1 N and a homotopy from iota_N x to g iota_M."""

    x: ChainMap
    homotopy: Homotopy

    def verify(self) -> bool:
        return (self.x.failing_degree() is None and self.homotopy.verify())


@dataclass
class KillsWeightsVerdict:
    verdict: bool
    method: str
    window: Window
    certificate: object = None
    witness: object = None
    note: str = ""
    submethods: dict = field(default_factory=dict)

    def __bool__(self):
        return self.verdict

    def summary(self) -> str:
        if self.submethods:
            return ", ".join(f"{k}={v.verdict}"
                             for k, v in self.submethods.items())
        return f"{self.method}={self.verdict}"


def _direct(g: ChainMap, win: Window, decompositions=None):
    a, b = win.degrees
    M, N = g.source, g.target
    if decompositions is None:
        XM, iM = sub_at_least(M, a)
        YN, pN = quotient_at_most(N, b)
    else:
        dM, dN = decompositions
        XM, iM, YN, pN = dM.X, dM.inclusion, dN.Y, dN.projection
    c = pN @ g @ iM
    H = find_nullhomotopy(c)
    if H is None:
        return KillsWeightsVerdict(False, "direct", win, witness=c)
    if decompositions is not None:
        return KillsWeightsVerdict(True, "direct", win, certificate=H)
    # x = g iota - (dH + Hd) vanishes in degrees <= b, so factors through
    # the subcomplex of degrees >= b+1
    X1, i1 = sub_at_least(N, b + 1)
    coeff = g.coeff

    def h(i):
        m = H.h.get(i)
        return m if m is not None else \
            Matrix.zero(coeff, N.rank(i - 1), M.rank(i))

    comps = {}
    for i in XM.degrees:
        if i > b:
            comps[i] = g[i] - N.d(i - 1) @ h(i) - h(i + 1) @ M.d(i)
    x = ChainMap(XM, X1, comps, check=linalg.CHECKS)
    hom = Homotopy(g @ iM, i1 @ x, dict(H.h))
    fac = Factorization(x, hom)
    if linalg.CHECKS and not fac.verify():
        linalg._fail("kills-weights factorization does not verify")
    return KillsWeightsVerdict(True, "direct", win, certificate=fac)


def _weak(g, win):
    a, b = win.degrees
    w = find_ranged_witness(g, a, b)
    if w is None:
        return KillsWeightsVerdict(False, "weak_homotopy", win)
    return KillsWeightsVerdict(True, "weak_homotopy", win, certificate=w)


def _homology(g, win):
    from . import spherical
    a, b = win.degrees
    if g.coeff.is_field:
        # no torsion pieces: only the induced maps on homology matter
        for d in range(a, b + 1):
            if not spherical.homology_map_is_zero(g, d):
                return KillsWeightsVerdict(
                    False, "homology", win, witness=("H", d),
                    note="field coefficients: torsion-free criterion")
        return KillsWeightsVerdict(
            True, "homology", win,
            note="field coefficients: torsion-free criterion")
    for d in range(a, b + 1):
        if not spherical.homology_map_is_zero(g, d):
            return KillsWeightsVerdict(False, "homology", win,
                                       witness=("H", d))
        sc = spherical.secondary_class(g, d + 1)
        if not sc.is_zero:
            return KillsWeightsVerdict(False, "homology", win,
                                       witness=("secondary", d + 1, sc))
    return KillsWeightsVerdict(True, "homology", win)


def _detector(g, win):
    from . import detectors
    ok = detectors.detector_test(g, win.m, win.n)
    wit = None if ok else detectors.detector_witness(g, win.m, win.n)
    return KillsWeightsVerdict(ok, "detector", win, witness=wit)


_RUNNERS = {"direct": _direct, "weak_homotopy": _weak,
            "homology": _homology, "detector": _detector}


def kills_weights(g: ChainMap, win, method: str = "direct",
                  decompositions=None) -> KillsWeightsVerdict:
    """Does g kill weights m..n?

    ``method`` is one of direct, weak_homotopy, homology, detector or
    all. With "all" every method runs and a disagreement raises
    InvariantViolation.
    """
    win = as_window(win)
    if method == "weakhtpy":
        method = "weak_homotopy"
    if method == "all":
        subs = {}
        for name in METHODS:
            if name == "direct":
                subs[name] = _direct(g, win, decompositions)
            else:
                subs[name] = _RUNNERS[name](g, win)
        values = {v.verdict for v in subs.values()}
        if len(values) != 1:
            linalg._fail("kills_weights methods disagree: " + ", ".join(
                f"{k}={v.verdict}" for k, v in subs.items()))
        out = subs["direct"]
        return KillsWeightsVerdict(out.verdict, "all", win, out.certificate,
                                   out.witness, submethods=subs)
    if method not in _RUNNERS:
        raise ValueError(f"unknown method {method!r}")
    if method == "direct":
        return _direct(g, win, decompositions)
    return _RUNNERS[method](g, win)


def without_weights(M: Complex, win, method: str = "all"
                    ) -> KillsWeightsVerdict:
    """id_M kills weights m..n."""
    return kills_weights(ChainMap.identity(M), win, method)


# ------------------------------------------------- avoiding decompositions


@dataclass
class AvoidingDecomposition:
    """X -> M -> Y with X in w<=m-1 and Y in w>=n+1."""

    M: Complex
    window: Window
    X: Complex
    Y: Complex
    inclusion: ChainMap
    projection: ChainMap
    certificate: TriangleCertificate

    def verify(self) -> bool:
        a, b = self.window.degrees
        if self.X.degrees and min(self.X.degrees) < b + 1:
            return False
        if self.Y.degrees and max(self.Y.degrees) > a - 1:
            return False
        return self.certificate is not None and self.certificate.verify()


class NotWithoutWeights(ValueError):
    pass


def avoiding_decomposition(M: Complex, win, nf: NormalForm = None,
                           check: bool = True) -> AvoidingDecomposition:
    """Split the normal form of M around the window.

    Pieces living in degrees >= 1-m form X, pieces in degrees <= -n-1
    form Y; contractible pieces meeting the window are dropped.
    """
    win = as_window(win)
    if check and not without_weights(M, win, "direct").verdict:
        raise NotWithoutWeights(f"complex is not without weights {win}")
    a, b = win.degrees
    nf = nf or normal_form(M)
    coeff = M.coeff
    xs, ys = [], []
    for idx, p in enumerate(nf.pieces):
        if min(p.degrees) >= b + 1:
            xs.append(idx)
        elif max(p.degrees) <= a - 1:
            ys.append(idx)
        elif p.kind != "contractible":
            raise NotWithoutWeights(
                f"piece {p.describe()} meets the window {win}")
    N = nf.complex

    def select(idxs):
        keep = {i: [k for k, lab in enumerate(nf.labels[i])
                    if lab[0] in idxs] for i in N.degrees}
        Z = Complex(coeff, {i: len(ks) for i, ks in keep.items()},
                    {i: N.d(i).submatrix(keep.get(i + 1, []), keep[i])
                     for i in N.degrees}, check=linalg.CHECKS)
        inc = {}
        for i in N.degrees:
            m = Matrix.zero(coeff, N.rank(i), len(keep[i]))
            for c, k in enumerate(keep[i]):
                m.rows[k][c] = coeff.convert(1)
            inc[i] = m
        s = ChainMap(Z, N, inc, check=linalg.CHECKS)
        r = ChainMap(N, Z, {i: m.T for i, m in inc.items()},
                     check=linalg.CHECKS)
        return Z, s, r

    X, sx, _ = select(set(xs))
    Y, sy, ry = select(set(ys))
    iota = nf.to_input @ sx
    p = ry @ nf.from_input
    C = cone(iota)
    psi = {}
    s_y = nf.to_input @ sy
    for i in Y.degrees:
        psi[i] = linalg.block_matrix(coeff, {(0, 0): s_y[i]},
                                     [M.rank(i), X.rank(i + 1)],
                                     [Y.rank(i)])
    psi = ChainMap(Y, C.complex, psi, check=linalg.CHECKS)
    cert = certify_triangle(iota, p, psi=psi, K={})
    if cert is None:
        raise InvariantViolation("avoiding triangle failed to certify")
    dec = AvoidingDecomposition(M, win, X, Y, iota, p, cert)
    if linalg.CHECKS and not dec.verify():
        linalg._fail("avoiding decomposition does not verify")
    return dec


@dataclass
class IdempotentCheck:
    """u = t z on w<=n M, idempotent up to homotopy."""

    z: ChainMap
    t: ChainMap
    u: ChainMap
    homotopy: Homotopy

    def verify(self) -> bool:
        return self.homotopy.verify()


def idempotent_cross_check(M: Complex, win) -> Optional[IdempotentCheck]:
    """z lifts w<=n M -> M through w<=m-1 M; t includes back.

    Returns None when no lift exists (M not without weights).
    """
    win = as_window(win)
    a, b = win.degrees
    Xn, i_n = sub_at_least(M, a)
    Xm, i_m = sub_at_least(M, b + 1)
    lift = solve_lift(i_n, i_m)
    if lift is None:
        return None
    z = lift.x
    t = ChainMap(Xm, Xn, {i: Matrix.identity(M.coeff, Xm.rank(i))
                          for i in Xm.degrees}, check=False)
    u = t @ z
    H = find_nullhomotopy(u @ u - u)
    if H is None:
        linalg._fail("t z is not idempotent up to homotopy")
    return IdempotentCheck(z, t, u, Homotopy(u @ u, u, H.h))


# ----------------------------------------------------- heart factorization


@dataclass
class HeartFactorization:
    """f ~ g2 h f1 with f1: M -> Y1, h: Y1 -> X2, g2: X2 -> N."""

    f1: ChainMap
    h: ChainMap
    g2: ChainMap
    homotopy: Homotopy

    def verify(self) -> bool:
        return self.homotopy.verify()


def heart_factorization(f: ChainMap) -> HeartFactorization:
    """Factor f: M -> N (M in w<=0, N in w>=0) through degree-0 objects."""
    M, N = f.source, f.target
    if M.degrees and min(M.degrees) < 0:
        raise ValueError("source must live in degrees >= 0")
    if N.degrees and max(N.degrees) > 0:
        raise ValueError("target must live in degrees <= 0")
    coeff = M.coeff
    Y1, f1 = quotient_at_most(M, 0)
    X2, g2 = sub_at_least(N, 0)
    h = ChainMap(Y1, X2, {0: f[0]} if Y1.rank(0) and X2.rank(0) else {},
                 check=linalg.CHECKS)
    comp = g2 @ h @ f1
    H = find_nullhomotopy(f - comp)
    if H is None:
        linalg._fail("heart factorization does not reproduce f")
    return HeartFactorization(f1, h, g2, Homotopy(f, comp, H.h))
