"""JSON documents for complexes and chain maps.

Complex document::

    {"coefficients": "Z",
     "degrees": {"0": 1, "1": 1},
     "differentials": {"0": [[2]]}}

Map document: ``{"source": ..., "target": ..., "components": {...}}``
where source/target are complex documents or paths to them (relative to
the map document).
"""

from __future__ import annotations

import json
import os
import re
from fractions import Fraction

from .complexes import ChainMap, Complex, ComplexError
from .linalg import Coefficients, Matrix

COMPLEX_KEYS = {"coefficients", "degrees", "differentials"}
MAP_KEYS = {"source", "target", "components"}


class DocumentError(ValueError):
    """Malformed document; ``where`` locates the problem."""

    def __init__(self, message, where=""):
        super().__init__(f"{where}: {message}" if where else message)
        self.where = where


def _degree(key, where):
    if isinstance(key, int):
        return key
    try:
        return int(str(key).strip())
    except ValueError:
        raise DocumentError(f"degree key {key!r} is not an integer", where)


def _entry(x, where):
    if isinstance(x, bool):
        raise DocumentError("boolean matrix entry", where)
    if isinstance(x, int):
        return x
    if isinstance(x, str):
        try:
            return Fraction(x)
        except ValueError:
            pass
    raise DocumentError(f"bad matrix entry {x!r}", where)


def _matrix(coeff, rows, nrows, ncols, where):
    if not isinstance(rows, list) or any(not isinstance(r, list)
                                         for r in rows):
        raise DocumentError("matrix must be a list of rows", where)
    if not rows and nrows:
        rows = [[] for _ in range(nrows)]
    if len(rows) != nrows:
        raise DocumentError(f"expected {nrows} rows, got {len(rows)}", where)
    for k, r in enumerate(rows):
        if len(r) != ncols:
            raise DocumentError(
                f"row {k} has {len(r)} entries, expected {ncols}", where)
    try:
        return Matrix(coeff, nrows, ncols,
                      [[_entry(x, f"{where}[{k}]") for x in r]
                       for k, r in enumerate(rows)])
    except (TypeError, ValueError) as e:
        if isinstance(e, DocumentError):
            raise
        raise DocumentError(str(e), where)


def parse_complex(doc, where="complex") -> Complex:
    if not isinstance(doc, dict):
        raise DocumentError("expected an object", where)
    unknown = set(doc) - COMPLEX_KEYS
    if unknown:
        raise DocumentError(f"unknown keys {sorted(unknown)}", where)
    try:
        coeff = Coefficients.parse(str(doc.get("coefficients", "Z")))
    except ValueError as e:
        raise DocumentError(str(e), f"{where}.coefficients")
    degs = doc.get("degrees", {})
    if not isinstance(degs, dict):
        raise DocumentError("degrees must be an object", f"{where}.degrees")
    ranks = {}
    for k, r in degs.items():
        i = _degree(k, f"{where}.degrees")
        if not isinstance(r, int) or isinstance(r, bool) or r < 0:
            raise DocumentError(f"bad rank {r!r}", f"{where}.degrees.{k}")
        ranks[i] = r
    diffs = {}
    for k, rows in (doc.get("differentials") or {}).items():
        i = _degree(k, f"{where}.differentials")
        diffs[i] = _matrix(coeff, rows, ranks.get(i + 1, 0),
                           ranks.get(i, 0), f"{where}.differentials.{k}")
    try:
        return Complex(coeff, ranks, diffs)
    except ComplexError as e:
        raise DocumentError(str(e), f"{where}.differentials.{e.degree}")


def _mat_doc(m: Matrix):
    return m.tolist()


def complex_to_doc(C: Complex) -> dict:
    return {"coefficients": C.coeff.tag,
            "degrees": {str(i): r for i, r in C.ranks.items()},
            "differentials": {str(i): _mat_doc(m)
                              for i, m in C.diffs.items()}}


def _resolve(ref, base, where):
    if isinstance(ref, str):
        path = ref if os.path.isabs(ref) or base is None \
            else os.path.join(base, ref)
        return parse_complex(load_json(path), where)
    return parse_complex(ref, where)


def parse_map(doc, base=None, where="map") -> ChainMap:
    if not isinstance(doc, dict):
        raise DocumentError("expected an object", where)
    unknown = set(doc) - MAP_KEYS
    if unknown:
        raise DocumentError(f"unknown keys {sorted(unknown)}", where)
    if "source" not in doc or "target" not in doc:
        raise DocumentError("map needs source and target", where)
    S = _resolve(doc["source"], base, f"{where}.source")
    T = _resolve(doc["target"], base, f"{where}.target")
    if S.coeff != T.coeff:
        raise DocumentError("source and target coefficients differ", where)
    comps = {}
    for k, rows in (doc.get("components") or {}).items():
        i = _degree(k, f"{where}.components")
        comps[i] = _matrix(S.coeff, rows, T.rank(i), S.rank(i),
                           f"{where}.components.{k}")
    try:
        return ChainMap(S, T, comps)
    except ComplexError as e:
        raise DocumentError(str(e), f"{where}.components.{e.degree}")


def map_to_doc(f: ChainMap) -> dict:
    return {"source": complex_to_doc(f.source),
            "target": complex_to_doc(f.target),
            "components": {str(i): _mat_doc(m)
                           for i, m in f.components.items()}}


def matrices_doc(ms: dict) -> dict:
    return {str(i): _mat_doc(m) for i, m in sorted(ms.items())
            if not m.is_zero()}


def load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as e:
        raise DocumentError(f"cannot read: {e.strerror}", str(path))
    except json.JSONDecodeError as e:
        raise DocumentError(f"invalid JSON: {e.msg} (line {e.lineno})",
                            str(path))


def load_complex(path) -> Complex:
    return parse_complex(load_json(path), str(path))


def load_map(path) -> ChainMap:
    return parse_map(load_json(path), os.path.dirname(os.path.abspath(path)),
                     str(path))


_ROW = re.compile(r"\[[^\[\]{}]*\]")


def dumps(doc) -> str:
    """Stable text form: sorted keys, one matrix row per line."""
    text = json.dumps(doc, indent=1, sort_keys=True)
    text = _ROW.sub(lambda m: json.dumps(json.loads(m.group())), text)
    return text + "\n"
