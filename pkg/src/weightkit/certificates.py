"""Serialized certificates and their stand-alone re-verification.

A certificate document carries every matrix needed to re-check a positive
answer with matrix products only; no solver is consulted on the way back.
"""

from __future__ import annotations

from .complexes import (ChainMap, Complex, Homotopy, RangedWitness, cone,
                        quotient_at_most, sub_at_least)
from .io import (DocumentError, _degree, _matrix, complex_to_doc,
                 matrices_doc, parse_complex)
from .weights import Factorization, TriangleCertificate, as_window


def _maps(doc, S: Complex, T: Complex, where, shift=0):
    """Matrices S^i -> T^{i+shift} keyed by degree i."""
    out = {}
    for k, rows in (doc or {}).items():
        i = _degree(k, where)
        out[i] = _matrix(S.coeff, rows, T.rank(i + shift), S.rank(i),
                         f"{where}.{k}")
    return out


def _chain_map(doc, S, T, where):
    f = ChainMap(S, T, _maps(doc, S, T, where), check=False)
    if f.failing_degree() is not None:
        raise DocumentError("not a chain map", f"{where}.{f.failing_degree()}")
    return f


# ------------------------------------------------------------ kills weights


def factorization_doc(fac: Factorization) -> dict:
    return {"x": matrices_doc(fac.x.components),
            "homotopy": matrices_doc(fac.homotopy.h)}


def recheck_factorization(g: ChainMap, win, doc) -> bool:
    """g iota_M ~ iota_N x with x: degrees >= a of M -> degrees >= b+1 of N."""
    a, b = as_window(win).degrees
    XM, iM = sub_at_least(g.source, a)
    X1, i1 = sub_at_least(g.target, b + 1)
    try:
        x = _chain_map(doc.get("x"), XM, X1, "certificate.x")
        h = _maps(doc.get("homotopy"), XM, g.target, "certificate.homotopy",
                  shift=-1)
    except DocumentError:
        return False
    return Homotopy(g @ iM, i1 @ x, h).verify()


def ranged_witness_doc(w: RangedWitness) -> dict:
    return {"h": matrices_doc(w.h), "g": matrices_doc(w.g)}


def recheck_ranged_witness(f: ChainMap, win, doc) -> bool:
    """The window equations hold on every degree where f can be nonzero."""
    k, l = as_window(win).degrees
    degs = f.source.degrees + f.target.degrees
    S, T = f.source, f.target
    try:
        h = _maps(doc.get("h"), S, T, "certificate.h", shift=-1)
        g = _maps(doc.get("g"), S, T, "certificate.g", shift=-1)
    except DocumentError:
        return False
    if not degs or max(k, min(degs)) > min(l, max(degs)):
        return True
    solved = (max(k, min(degs)), min(l, max(degs)))
    return RangedWitness(f, k, l, h, g, solved).verify()


# ----------------------------------------------------------------- triangles


def triangle_doc(iota: ChainMap, p: ChainMap,
                 cert: TriangleCertificate) -> dict:
    return {"X": complex_to_doc(iota.source),
            "Y": complex_to_doc(p.target),
            "inclusion": matrices_doc(iota.components),
            "projection": matrices_doc(p.components),
            "phi": matrices_doc(cert.phi.components),
            "psi": matrices_doc(cert.psi.components),
            "phi_psi": matrices_doc(cert.phi_psi.h),
            "psi_phi": matrices_doc(cert.psi_phi.h)}


def recheck_triangle(M: Complex, doc) -> bool:
    """X -> M -> Y is distinguished: phi restricts to the projection on M
    and is a homotopy equivalence cone(inclusion) -> Y with inverse psi."""
    try:
        X = parse_complex(doc["X"], "certificate.X")
        Y = parse_complex(doc["Y"], "certificate.Y")
        iota = _chain_map(doc.get("inclusion"), X, M, "certificate.inclusion")
        p = _chain_map(doc.get("projection"), M, Y, "certificate.projection")
        C = cone(iota).complex
        phi = _chain_map(doc.get("phi"), C, Y, "certificate.phi")
        psi = _chain_map(doc.get("psi"), Y, C, "certificate.psi")
        h1 = _maps(doc.get("phi_psi"), Y, Y, "certificate.phi_psi", -1)
        h2 = _maps(doc.get("psi_phi"), C, C, "certificate.psi_phi", -1)
    except (DocumentError, KeyError, TypeError):
        return False
    for i in M.degrees:
        block = phi[i].submatrix(range(Y.rank(i)), range(M.rank(i)))
        if block != p[i]:
            return False
    idY, idC = ChainMap.identity(Y), ChainMap.identity(C)
    return (Homotopy(idY, phi @ psi, h1).verify()
            and Homotopy(idC, psi @ phi, h2).verify())


def recheck_supports(doc, lo=None, hi=None) -> bool:
    """X lives in degrees >= lo and Y in degrees <= hi."""
    X = parse_complex(doc["X"], "certificate.X")
    Y = parse_complex(doc["Y"], "certificate.Y")
    ok = True
    if lo is not None and X.degrees:
        ok &= min(X.degrees) >= lo
    if hi is not None and Y.degrees:
        ok &= max(Y.degrees) <= hi
    return ok


def truncation_parts(M: Complex, l: int):
    """The stupid pieces the truncation certificate must reproduce."""
    return sub_at_least(M, -l)[0], quotient_at_most(M, -l - 1)[0]
