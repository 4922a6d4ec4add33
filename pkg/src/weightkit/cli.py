"""Command line front end.

Each subcommand prints a human report followed by one ``RESULT`` line of
JSON. Exit codes: 0 true/success, 1 false, 2 bad input, 3 a certificate
failed re-verification or an internal invariant broke.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import certificates, linalg
from .complexes import ChainMap, homology
from .io import DocumentError, dumps, load_complex, load_map
from .linalg import InvariantViolation

EXIT_TRUE, EXIT_FALSE, EXIT_INPUT, EXIT_INVARIANT = 0, 1, 2, 3

METHOD_CHOICES = ("direct", "weakhtpy", "homology", "detector", "all")


class InputError(Exception):
    pass


def fmt_group(g, coeff) -> str:
    """Groups over a field print as vector spaces."""
    if not coeff.is_field:
        return str(g)
    if g.rank == 0:
        return "0"
    name = f"F{coeff.p}" if coeff.kind == "Fp" else coeff.tag
    return name + ("" if g.rank == 1 else f"^{g.rank}")


def _hom_line(C):
    return ", ".join(f"{i}:{fmt_group(homology(C, i), C.coeff)}"
                     for i in C.degrees) or "0"


def _emit(out, lines, result, code):
    for line in lines:
        print(line, file=out)
    print("RESULT " + json.dumps(result, sort_keys=True), file=out)
    return code


def _roundtrip(doc):
    # certificates are re-checked from their serialized form only
    return json.loads(json.dumps(doc))


# ---------------------------------------------------------------- commands


def cmd_homology(args, out):
    M = load_complex(args.complex)
    groups = {i: fmt_group(homology(M, i), M.coeff) for i in M.degrees}
    lines = [f"H^{i} = {g}" for i, g in groups.items()] or ["all homology 0"]
    return _emit(out, lines, {"command": "homology",
                              "homology": {str(i): str(g)
                                           for i, g in groups.items()}},
                 EXIT_TRUE)


def cmd_normal_form(args, out):
    from .normal_form import (homology_matches, normal_form,
                              sharp_interval_from_pieces)
    M = load_complex(args.complex)
    nf = normal_form(M)
    ok = nf.verify() and homology_matches(nf)
    lines = [p.describe() for p in nf.pieces] or ["zero complex"]
    iv = sharp_interval_from_pieces(nf.pieces)
    lines.append(f"weights up to homotopy: {list(iv) if iv else 'none'}")
    lines.append(f"round trip verified: {ok}")
    pieces = [{"kind": p.kind, "degree": p.degree, "rank": p.rank,
               "invariants": list(p.invariants)} for p in nf.pieces]
    return _emit(out, lines, {"command": "normal-form", "pieces": pieces,
                              "weights": list(iv) if iv else None,
                              "verified": ok},
                 EXIT_TRUE if ok else EXIT_INVARIANT)


def cmd_truncate(args, out):
    from .weights import truncate
    M = load_complex(args.complex)
    dec = truncate(M, args.l)
    doc = _roundtrip(certificates.triangle_doc(dec.inclusion, dec.projection,
                                               dec.certificate))
    X, Y = certificates.truncation_parts(M, args.l)
    ok = (certificates.recheck_triangle(M, doc)
          and certificates.recheck_supports(doc, -args.l, -args.l - 1)
          and certificates.parse_complex(doc["X"]) == X
          and certificates.parse_complex(doc["Y"]) == Y)
    lines = [f"w<={args.l}: degrees {dec.X.degrees}",
             f"w>={args.l + 1}: degrees {dec.Y.degrees}",
             f"certificate re-verified: {ok}"]
    return _emit(out, lines, {"command": "truncate", "l": args.l,
                              "verified": ok, "certificate": doc},
                 EXIT_TRUE if ok else EXIT_INVARIANT)


def _kills_result(g, win, method, command):
    from .weights import kills_weights
    v = kills_weights(g, win, method)
    lines = [f"window {win}: {v.summary()}"]
    if v.note:
        lines.append(f"note: {v.note}")
    result = {"command": command, "window": [win.m, win.n], "method": method,
              "verdict": v.verdict}
    if v.submethods:
        result["methods"] = {k: s.verdict for k, s in v.submethods.items()}
    ok = True
    if v.verdict and v.certificate is not None:
        cert = v.certificate
        if method in ("weakhtpy", "weak_homotopy"):
            doc = _roundtrip(certificates.ranged_witness_doc(cert))
            ok = certificates.recheck_ranged_witness(g, win, doc)
            result["certificate"] = {"ranged_witness": doc}
        else:
            doc = _roundtrip(certificates.factorization_doc(cert))
            ok = certificates.recheck_factorization(g, win, doc)
            result["certificate"] = {"factorization": doc}
        lines.append(f"certificate re-verified: {ok}")
    if not v.verdict and v.witness is not None and \
            isinstance(v.witness, tuple):
        lines.append(f"obstruction: {v.witness[0]} at degree {v.witness[1]}")
    if not ok:
        return lines, result, EXIT_INVARIANT
    return lines, result, EXIT_TRUE if v.verdict else EXIT_FALSE


def _window(args):
    from .weights import Window, WindowError
    try:
        return Window(args.m, args.n)
    except WindowError as e:
        raise InputError(str(e))


def cmd_kills(args, out):
    g = load_map(args.map)
    return _emit(out, *_kills_result(g, _window(args), args.method, "kills"))


def cmd_without(args, out):
    M = load_complex(args.complex)
    return _emit(out, *_kills_result(ChainMap.identity(M), _window(args),
                                     args.method, "without"))


def cmd_avoid(args, out):
    from .weights import NotWithoutWeights, avoiding_decomposition
    M = load_complex(args.complex)
    win = _window(args)
    try:
        dec = avoiding_decomposition(M, win)
    except NotWithoutWeights as e:
        return _emit(out, [str(e)], {"command": "avoid",
                                     "window": [win.m, win.n],
                                     "exists": False}, EXIT_FALSE)
    doc = _roundtrip(certificates.triangle_doc(dec.inclusion, dec.projection,
                                               dec.certificate))
    a, b = win.degrees
    ok = (certificates.recheck_triangle(M, doc)
          and certificates.recheck_supports(doc, b + 1, a - 1))
    lines = [f"X (w<={win.m - 1}): degrees {dec.X.degrees}, homology "
             + _hom_line(dec.X),
             f"Y (w>={win.n + 1}): degrees {dec.Y.degrees}, homology "
             + _hom_line(dec.Y),
             f"certificate re-verified: {ok}"]
    return _emit(out, lines, {"command": "avoid", "window": [win.m, win.n],
                              "exists": True, "verified": ok,
                              "certificate": doc},
                 EXIT_TRUE if ok else EXIT_INVARIANT)


def cmd_detect_weights(args, out):
    from .detectors import PureFunctor, detect_weight_range, pure_homology
    from .weights import sharp_weight_interval
    M = load_complex(args.complex)
    got = detect_weight_range(M)
    sharp = sharp_weight_interval(M)
    lines = [f"weights read off pure homology: "
             f"{list(got) if got else 'none'}",
             f"weights from the normal form: "
             f"{list(sharp) if sharp else 'none'}"]
    table = {}
    for text in args.functor or ():
        try:
            G = PureFunctor.parse(text)
            vals = {i: pure_homology(G, M, i)
                    for i in range(min(M.degrees, default=0) - 1,
                                   max(M.degrees, default=0) + 2)}
        except ValueError as e:
            raise InputError(str(e))
        ring = linalg.GF(G.p) if G.kind == "tensor" else M.coeff
        vals = {i: fmt_group(v, ring) for i, v in vals.items()}
        table[text] = {str(i): v for i, v in vals.items()}
        lines.append(f"{text}: " + ", ".join(f"{i}:{v}"
                                              for i, v in vals.items()))
    agree = got == sharp
    result = {"command": "detect-weights", "weights": list(got) if got
              else None, "agrees": agree}
    if table:
        result["pure_homology"] = table
    return _emit(out, lines, result, EXIT_TRUE if agree else EXIT_INVARIANT)


def cmd_em_cohomology(args, out):
    from .detectors import parse_group
    from .spherical import QZ, em_cohomology
    M = load_complex(args.complex)
    if M.coeff != linalg.ZZ:
        raise InputError("em-cohomology needs integer coefficients")
    if args.group.replace(" ", "") == QZ:
        G = QZ
    else:
        try:
            G = parse_group(args.group)
        except ValueError as e:
            raise InputError(str(e))
    if args.degree is not None:
        degs = [args.degree]
    else:
        degs = sorted(-i for i in M.degrees) or [0]
        degs = list(range(degs[0] - 1, degs[-1] + 2))
    vals = {i: em_cohomology(M, G, i) for i in degs}
    lines = [f"H^{i}(M; {args.group}) = {v}" for i, v in vals.items()]
    return _emit(out, lines, {"command": "em-cohomology",
                              "group": args.group,
                              "cohomology": {str(i): str(v)
                                             for i, v in vals.items()}},
                 EXIT_TRUE)


def cmd_paper_examples(args, out):
    from .counterexamples import worked_examples_report
    try:
        coeff = linalg.Coefficients.parse(args.coefficients)
    except ValueError as e:
        raise InputError(str(e))
    if not coeff.is_field:
        raise InputError("the worked examples live over a field")
    text = worked_examples_report(coeff)
    verdicts = [ln.split(": ", 1)[1] for ln in text.splitlines()
                if ln.startswith("result: ")]
    ok = verdicts == ["verified", "verified"]
    return _emit(out, text.rstrip("\n").splitlines(),
                 {"command": "paper-examples", "verified": ok},
                 EXIT_TRUE if ok else EXIT_INVARIANT)


def cmd_fuzz(args, out):
    from .fuzz import FuzzConfig, run_property_suite
    try:
        cfg = FuzzConfig(seed=args.seed, trials=args.trials,
                         max_rank=args.max_rank,
                         degree_span=args.degree_span,
                         max_entry=args.max_entry,
                         coefficients=tuple(args.coefficients.split(",")),
                         properties=tuple(args.property or ()),
                         mutate=args.mutate)
    except ValueError as e:
        raise InputError(str(e))
    rep = run_property_suite(cfg)
    text = rep.text()
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        with open(os.path.join(args.out, "report.txt"), "w") as fh:
            fh.write(text)
        for k, f in enumerate(rep.failures):
            path = os.path.join(args.out, f"failure-{k:03d}.json")
            with open(path, "w") as fh:
                fh.write(dumps(f))
    counts = {f"{p}/{t}": [c.checked, c.skipped, c.failed]
              for (p, t), c in rep.counts.items()}
    return _emit(out, text.rstrip("\n").splitlines(),
                 {"command": "fuzz", "ok": rep.ok, "counts": counts,
                  "failures": len(rep.failures),
                  "violations": rep.violations},
                 EXIT_TRUE if rep.ok else EXIT_FALSE)


# ------------------------------------------------------------------ parser


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="weightkit",
        description="Weight structures on bounded complexes, exactly.")
    ap.add_argument("--checks", action="store_true",
                    help="enable internal self-checks on every call")
    sub = ap.add_subparsers(dest="command", required=True)

    def with_complex(name, help_):
        p = sub.add_parser(name, help=help_)
        p.add_argument("complex", help="complex document (JSON)")
        return p

    def window(p):
        p.add_argument("--m", type=int, required=True, help="lowest weight")
        p.add_argument("--n", type=int, required=True, help="highest weight")

    with_complex("homology", "homology groups per degree").set_defaults(
        func=cmd_homology)
    with_complex("normal-form", "canonical splitting").set_defaults(
        func=cmd_normal_form)
    p = with_complex("truncate", "weight decomposition at l")
    p.add_argument("--l", type=int, required=True)
    p.set_defaults(func=cmd_truncate)

    p = sub.add_parser("kills", help="does a map kill weights m..n")
    p.add_argument("map", help="map document (JSON)")
    window(p)
    p.add_argument("--method", choices=METHOD_CHOICES, default="direct")
    p.set_defaults(func=cmd_kills)

    p = with_complex("without", "is a complex without weights m..n")
    window(p)
    p.add_argument("--method", choices=METHOD_CHOICES, default="all")
    p.set_defaults(func=cmd_without)

    p = with_complex("avoid", "decomposition avoiding weights m..n")
    window(p)
    p.set_defaults(func=cmd_avoid)

    p = with_complex("detect-weights", "weight range from pure homology")
    p.add_argument("--functor", action="append",
                   help="also tabulate id, tensor:Fp or hom:<group>")
    p.set_defaults(func=cmd_detect_weights)

    p = with_complex("em-cohomology", "cohomology with coefficients")
    p.add_argument("--group", required=True,
                   help="Z, Z/t, sums like Z+Z/4, or Q/Z")
    p.add_argument("--degree", type=int)
    p.set_defaults(func=cmd_em_cohomology)

    p = sub.add_parser("paper-examples",
                       help="reproduce the two worked counterexamples")
    p.add_argument("--coefficients", default="Q")
    p.set_defaults(func=cmd_paper_examples)

    p = sub.add_parser("fuzz", help="seeded property suite")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--max-rank", type=int, default=4)
    p.add_argument("--degree-span", type=int, default=7)
    p.add_argument("--max-entry", type=int, default=3)
    p.add_argument("--coefficients", default="Z,F2,F3,Q")
    p.add_argument("--property", action="append",
                   help="restrict to a property (repeatable)")
    p.add_argument("--mutate", action="store_true",
                   help="also inject single-entry mutations")
    p.add_argument("--out", help="directory for the report and failures")
    p.set_defaults(func=cmd_fuzz)
    return ap


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    if args.checks:
        linalg.set_checks(True)
    try:
        return args.func(args, out)
    except (DocumentError, InputError) as e:
        print(f"input error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except InvariantViolation as e:
        print(f"invariant violation: {e}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
