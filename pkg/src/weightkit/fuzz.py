"""Seeded property suite.

Every property draws its own instance from a generator seeded by
(seed, property, ring, trial), so a failing trial can be replayed alone
and the report does not depend on scheduling. Set WEIGHTKIT_JOBS to run
trials in worker processes.
"""

from __future__ import annotations

import json
import os
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from . import linalg
from .complexes import (ChainMap, Complex, ComplexError, direct_sum,
                        direct_sum_maps, dualize, dualize_map,
                        find_ranged_witness, homology, is_contractible,
                        quotient_at_most, sub_at_least, validate)
from .detectors import detect_weight_range
from .generators import (RING_TAGS, random_chain_map, random_complex,
                         random_instance, random_window, ring_from_tag)
from .io import complex_to_doc, map_to_doc
from .linalg import GroupStructure, InvariantViolation, Matrix
from .normal_form import homology_matches, normal_form, reassemble
from .weights import (METHODS, NotWithoutWeights, avoiding_decomposition,
                      idempotent_cross_check, kills_weights,
                      perturb_decomposition, sharp_weight_interval, truncate,
                      without_weights)

JOBS_ENV = "WEIGHTKIT_JOBS"

PASS, SKIP = "pass", "skip"
# a pass on an instance where the kills verdict was true
POSITIVE = "pass+"


@dataclass(frozen=True)
class FuzzConfig:
    seed: int = 0
    trials: int = 100
    max_rank: int = 4
    degree_span: int = 7
    max_entry: int = 3
    coefficients: tuple = RING_TAGS
    properties: tuple = ()
    mutate: bool = False

    def __post_init__(self):
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must fit in 64 bits")
        for name in ("trials", "max_rank", "degree_span", "max_entry"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")
        for tag in self.coefficients:
            ring_from_tag(tag)
        unknown = set(self.properties) - set(PROPERTIES)
        if unknown:
            raise ValueError(f"unknown properties {sorted(unknown)}")

    def describe(self) -> str:
        return (f"seed {self.seed}, trials {self.trials}, max_rank "
                f"{self.max_rank}, degree_span {self.degree_span}, "
                f"max_entry {self.max_entry}, rings "
                f"{','.join(self.coefficients)}")


class Failure(Exception):
    """Property violated; ``artifact`` holds documents for the instance."""

    def __init__(self, message, artifact=None):
        super().__init__(message)
        self.artifact = artifact or {}


def _check(cond, message, artifact=None):
    if not cond:
        raise Failure(message, artifact)


def _kills(g, win):
    return kills_weights(g, win, "direct").verdict


def _map_artifact(g, win=None, **extra):
    art = {"map": map_to_doc(g)}
    if win is not None:
        art["window"] = list(win)
    art.update(extra)
    return art


# ------------------------------------------------------------ generators


def _instance(rng, coeff, cfg):
    return random_instance(rng, coeff, cfg.max_rank, cfg.degree_span,
                           cfg.max_entry)


def _complex(rng, coeff, cfg, max_rank=None):
    return random_complex(rng, coeff, max_rank or cfg.max_rank,
                          cfg.degree_span, cfg.max_entry)


def _outside(rng, coeff, cfg, a, b) -> Complex:
    """Random complex with nothing in degrees a..b."""
    span = max(1, cfg.degree_span // 2)
    hi = random_complex(rng, coeff, cfg.max_rank, span, cfg.max_entry,
                        lo=b + 1)
    lo = random_complex(rng, coeff, cfg.max_rank, span, cfg.max_entry,
                        lo=a - span)
    return direct_sum(lo, hi, coeff=coeff)


def _factored(rng, coeff, cfg, M, N, a, b) -> ChainMap:
    """A map M -> N factoring through a complex empty in degrees a..b;
    it kills the corresponding weights."""
    Z = _outside(rng, coeff, cfg, a, b)
    return random_chain_map(rng, Z, N, zero_prob=0) @ \
        random_chain_map(rng, M, Z, zero_prob=0)


def _killing_or_random(rng, coeff, cfg, M, N, win):
    a, b = (-win[1], -win[0])
    if rng.random() < 0.5:
        return _factored(rng, coeff, cfg, M, N, a, b)
    return random_chain_map(rng, M, N)


# ----------------------------------------------------- equivalence suite


def prop_methods_agree(rng, coeff, cfg):
    M, N, g = _instance(rng, coeff, cfg)
    win = random_window(rng, M, N)
    verdicts = {}
    for name in METHODS:
        v = kills_weights(g, win, name)
        verdicts[name] = v.verdict
        if name == "direct" and v.verdict:
            _check(v.certificate.verify(), "direct certificate fails",
                   _map_artifact(g, win))
        if name == "weak_homotopy" and v.verdict:
            _check(v.certificate.verify(), "ranged witness fails",
                   _map_artifact(g, win))
    _check(len(set(verdicts.values())) == 1,
           "methods disagree: " + ", ".join(f"{k}={v}"
                                            for k, v in verdicts.items()),
           _map_artifact(g, win))
    return POSITIVE if verdicts["direct"] else PASS


def prop_decomposition_choice(rng, coeff, cfg):
    """The direct verdict does not depend on the chosen decompositions."""
    M, N, g = _instance(rng, coeff, cfg)
    m, n = random_window(rng, M, N)
    dM = perturb_decomposition(truncate(M, n), rng)
    dN = perturb_decomposition(truncate(N, m - 1), rng)
    v1 = _kills(g, (m, n))
    v2 = kills_weights(g, (m, n), "direct", decompositions=(dM, dN)).verdict
    _check(v1 == v2, f"stupid {v1} vs perturbed {v2}",
           _map_artifact(g, (m, n)))
    return PASS


# ------------------------------------------------- avoiding decompositions


def _predicted(nf, keep):
    out = {}
    for p in nf.pieces:
        if keep(p):
            for j, h in p.homology().items():
                out[j] = out[j] + h if j in out else h
    return out


def prop_avoid_sound(rng, coeff, cfg):
    M = _complex(rng, coeff, cfg)
    if rng.random() < 0.5:
        # splice in a gap so the window is more often free of homology
        a0 = rng.randint(-2, 2)
        M = direct_sum(M if not M.degrees or min(M.degrees) > a0 + 1
                       else sub_at_least(M, a0 + 2)[0],
                       _outside(rng, coeff, cfg, a0, a0 + 1), coeff=coeff)
        m, n = -(a0 + 1), -a0
    else:
        m, n = random_window(rng, M)
    art = {"complex": complex_to_doc(M), "window": [m, n]}
    ok = without_weights(M, (m, n), "direct").verdict
    if not ok:
        try:
            avoiding_decomposition(M, (m, n), check=False)
        except NotWithoutWeights:
            return SKIP
        raise Failure("decomposition built for a complex with weights", art)
    dec = avoiding_decomposition(M, (m, n))
    a, b = -n, -m
    _check(dec.certificate.verify(), "triangle certificate fails", art)
    _check(not dec.X.degrees or min(dec.X.degrees) >= b + 1,
           "X support too low", art)
    _check(not dec.Y.degrees or max(dec.Y.degrees) <= a - 1,
           "Y support too high", art)
    nf = normal_form(M)
    for Z, keep in ((dec.X, lambda p: min(p.degrees) >= b + 1),
                    (dec.Y, lambda p: max(p.degrees) <= a - 1)):
        pred = _predicted(nf, keep)
        for i in set(Z.degrees) | set(pred):
            _check(homology(Z, i) == pred.get(i, GroupStructure(0)),
                   f"component homology differs at {i}", art)
    ic = idempotent_cross_check(M, (m, n))
    _check(ic is not None and ic.verify(), "idempotent route fails", art)
    return PASS


# ----------------------------------------------------------- normal form


def prop_normal_form(rng, coeff, cfg):
    M = random_complex(rng, coeff, max(cfg.max_rank, 5), cfg.degree_span,
                       cfg.max_entry)
    art = {"complex": complex_to_doc(M)}
    nf = normal_form(M)
    _check(nf.verify(), "normal form round trip fails", art)
    _check(reassemble(nf) == nf.complex, "reassembled pieces differ", art)
    _check(homology_matches(nf), "homology differs from pieces", art)
    h = nf.min_homotopy
    _check(h is None or h.verify(), "minimal model homotopy fails", art)
    return PASS


# ------------------------------------------------------ criteria over Z


def prop_criteria_agree(rng, coeff, cfg):
    from .spherical import (homology_skeleton_test, homology_without_weights,
                            kills_weight_homology)
    M, N, g = _instance(rng, coeff, cfg)
    m, n = random_window(rng, M)
    art = {"complex": complex_to_doc(M), "window": [m, n]}
    _check(homology_without_weights(M, (m, n))
           == without_weights(M, (m, n), "direct").verdict,
           "homology_without_weights disagrees", art)
    k = rng.randint(-(M.hi or 0) - 1, -(M.lo or 0) + 1)
    skel = homology_skeleton_test(M, k)
    ranged = find_ranged_witness(ChainMap.identity(M), float("-inf"),
                                 -k - 1) is not None
    support = all(min(p.degrees) >= -k
                  for p in normal_form(M).essential_pieces())
    _check(skel == ranged == support,
           f"skeleton {skel}, ranged {ranged}, support {support} at {k}",
           dict(art, n=k))
    w = random_window(rng, M, N, max_width=1)[0]
    _check(kills_weight_homology(g, w) == _kills(g, (w, w)),
           f"single weight {w} disagrees", _map_artifact(g, (w, w)))
    return PASS


def prop_detect_weights(rng, coeff, cfg):
    M = _complex(rng, coeff, cfg)
    got = detect_weight_range(M)
    want = sharp_weight_interval(M)
    _check(got == want, f"detected {got}, sharp {want}",
           {"complex": complex_to_doc(M)})
    return PASS


def prop_em_cohomology(rng, coeff, cfg):
    from .spherical import (QZ, em_cohomology, qz_dual_test,
                            universal_coefficients)
    M = _complex(rng, coeff, cfg)
    art = {"complex": complex_to_doc(M)}
    t = rng.choice((2, 3, 4, 6))
    for i in range(-(M.hi or 0) - 1, -(M.lo or 0) + 2):
        got = em_cohomology(M, GroupStructure(0, (t,)), i)
        _check(got == universal_coefficients(M, t, i),
               f"Z/{t} coefficients disagree at {i}", art)
    n = rng.randint(-(M.hi or 0) - 1, -(M.lo or 0) + 1)
    direct = all(em_cohomology(M, QZ, i).is_zero
                 for i in range(-(M.hi or 0) - 2, n))
    _check(qz_dual_test(M, n) == direct, "Q/Z test disagrees", art)
    return PASS


# --------------------------------------------------------- structural laws


def prop_monotonicity(rng, coeff, cfg):
    M, N, g = _instance(rng, coeff, cfg)
    m, n = random_window(rng, M, N)
    if rng.random() < 0.5:
        g = _factored(rng, coeff, cfg, M, N, -n, -m)
    if _kills(g, (m, n)):
        for m2 in range(m, n + 1):
            for n2 in range(m2, n + 1):
                _check(_kills(g, (m2, n2)),
                       f"kills [{m},{n}] but not [{m2},{n2}]",
                       _map_artifact(g, (m, n)))
        return POSITIVE
    for m2, n2 in ((m - 1, n), (m, n + 1)):
        _check(not _kills(g, (m2, n2)),
               f"kills [{m2},{n2}] but not [{m},{n}]",
               _map_artifact(g, (m, n)))
    return PASS


def prop_ideal(rng, coeff, cfg):
    M, N, g = _instance(rng, coeff, cfg)
    win = random_window(rng, M, N)
    g = _killing_or_random(rng, coeff, cfg, M, N, win)
    h = _killing_or_random(rng, coeff, cfg, M, N, win)
    kg, kh = _kills(g, win), _kills(h, win)
    art = _map_artifact(g, win, other=map_to_doc(h))
    _check(_kills(direct_sum_maps(g, h), win) == (kg and kh),
           "direct sum and retracts disagree", art)
    if not kg:
        return PASS
    if kh:
        _check(_kills(g + h, win), "sum of killing maps does not kill", art)
    P = _complex(rng, coeff, cfg)
    Q = _complex(rng, coeff, cfg)
    j = random_chain_map(rng, N, P)
    j2 = random_chain_map(rng, Q, M)
    _check(_kills(j @ g, win), "post-composition does not kill", art)
    _check(_kills(g @ j2, win), "pre-composition does not kill", art)
    _check(_kills(g.scale(coeff.convert(rng.randint(-3, 3))), win),
           "multiple does not kill", art)
    return POSITIVE


def prop_composition(rng, coeff, cfg):
    M = _complex(rng, coeff, cfg)
    lo = M.lo if M.lo is not None else 0
    N = random_complex(rng, coeff, cfg.max_rank, cfg.degree_span,
                       cfg.max_entry, lo=lo + rng.randint(-2, 1))
    P = random_complex(rng, coeff, cfg.max_rank, cfg.degree_span,
                       cfg.max_entry, lo=lo + rng.randint(-2, 1))
    m, n = random_window(rng, M, N, max_width=2)
    m1 = m - rng.randint(1, 2)
    g = _killing_or_random(rng, coeff, cfg, M, N, (m, n))
    h = _killing_or_random(rng, coeff, cfg, N, P, (m1, m - 1))
    if not (_kills(g, (m, n)) and _kills(h, (m1, m - 1))):
        return SKIP
    _check(_kills(h @ g, (m1, n)), "composite does not kill [m',n]",
           _map_artifact(g, (m, n), other=map_to_doc(h),
                         other_window=[m1, m - 1]))
    return PASS


def prop_merging(rng, coeff, cfg):
    a = rng.randint(-3, 2)
    w1, w2 = rng.randint(1, 2), rng.randint(1, 2)
    # weights [m, n] and [n+1, n2] are degrees [a, b] and [a-w2, a-1]
    m, n = -(a + w1 - 1), -a
    n2 = n + w2
    M = _complex(rng, coeff, cfg)
    if rng.random() < 0.6:
        M = direct_sum(_outside(rng, coeff, cfg, -n2, -m),
                       M if rng.random() < 0.3 else Complex.zero(coeff),
                       coeff=coeff)
    if not (without_weights(M, (m, n), "direct").verdict
            and without_weights(M, (n + 1, n2), "direct").verdict):
        return SKIP
    _check(without_weights(M, (m, n2), "direct").verdict,
           "windows do not merge",
           {"complex": complex_to_doc(M), "windows": [[m, n], [n + 1, n2]]})
    return PASS


def prop_self_duality(rng, coeff, cfg):
    M, N, g = _instance(rng, coeff, cfg)
    m, n = random_window(rng, M, N)
    if rng.random() < 0.4:
        g = _factored(rng, coeff, cfg, M, N, -n, -m)
    v = _kills(g, (m, n))
    _check(v == _kills(dualize_map(g), (-n, -m)),
           "dual verdict differs", _map_artifact(g, (m, n)))
    return POSITIVE if v else PASS


# ----------------------------------------------------------- invariants


def prop_ranged_degreewise(rng, coeff, cfg):
    M, N, g = _instance(rng, coeff, cfg)
    a, b = random_window(rng, M, N)
    k, l = -b, -a
    whole = find_ranged_witness(g, k, l)
    each = all(find_ranged_witness(g, i, i) is not None
               for i in range(k, l + 1))
    _check((whole is not None) == each, "ranged relation not degreewise",
           _map_artifact(g, (a, b)))
    _check(whole is None or whole.verify(), "ranged witness fails",
           _map_artifact(g, (a, b)))
    return PASS


def prop_contractible(rng, coeff, cfg):
    M = _complex(rng, coeff, cfg)
    acyclic = all(homology(M, i).is_zero for i in M.degrees)
    _check(is_contractible(M) == acyclic, "contractible differs from acyclic",
           {"complex": complex_to_doc(M)})
    D = dualize(dualize(M))
    _check(D == M, "dualize is not an involution",
           {"complex": complex_to_doc(M)})
    return PASS


def prop_linear_algebra(rng, coeff, cfg):
    r, c = rng.randint(0, 6), rng.randint(0, 6)
    A = Matrix(coeff, r, c, [[rng.randint(-cfg.max_entry, cfg.max_entry)
                              for _ in range(c)] for _ in range(r)])
    sf = linalg.smith_normal_form(A)
    art = {"matrix": A.tolist()}
    _check(sf.verify(), "Smith form fails", art)
    K = linalg.kernel_basis(A)
    _check((A @ K).is_zero() and K.ncols == c - sf.rank, "kernel wrong", art)
    return PASS


PROPERTIES = {
    "methods_agree": (prop_methods_agree, RING_TAGS),
    "decomposition_choice": (prop_decomposition_choice, RING_TAGS),
    "avoid_sound": (prop_avoid_sound, RING_TAGS),
    "normal_form": (prop_normal_form, ("Z",)),
    "criteria_agree": (prop_criteria_agree, ("Z",)),
    "detect_weights": (prop_detect_weights, RING_TAGS),
    "em_cohomology": (prop_em_cohomology, ("Z",)),
    "monotonicity": (prop_monotonicity, RING_TAGS),
    "ideal": (prop_ideal, RING_TAGS),
    "composition": (prop_composition, RING_TAGS),
    "merging": (prop_merging, RING_TAGS),
    "self_duality": (prop_self_duality, RING_TAGS),
    "ranged_degreewise": (prop_ranged_degreewise, RING_TAGS),
    "contractible": (prop_contractible, RING_TAGS),
    "linear_algebra": (prop_linear_algebra, RING_TAGS),
}


# -------------------------------------------------------------- mutation


def _mutate(rng, coeff, cfg):
    """Flip one entry of a generated differential or map component.

    Returns (kind, detected); kind "invalid" when the flip broke the
    chain conditions.
    """
    M, N, g = _instance(rng, coeff, cfg)
    slots = [("d", i) for i, m in M.diffs.items() if m.nrows and m.ncols]
    slots += [("g", i) for i, m in g.components.items()
              if m.nrows and m.ncols]
    if not slots:
        return None
    kind, i = rng.choice(slots)
    src = M.diffs if kind == "d" else g.components
    mat = Matrix(coeff, src[i].nrows, src[i].ncols,
                 [list(r) for r in src[i].rows])
    r, c = rng.randrange(mat.nrows), rng.randrange(mat.ncols)
    mat.rows[r][c] = coeff.convert(mat.rows[r][c] + 1)
    if kind == "d":
        diffs = dict(M.diffs)
        diffs[i] = mat
        M2 = Complex(coeff, M.ranks, diffs, check=False)
        broken = not validate(M2).ok
        if not broken:
            return ("valid", True)
        try:
            Complex(coeff, M.ranks, diffs)
        except ComplexError:
            return ("invalid", True)
        return ("invalid", False)
    comps = dict(g.components)
    comps[i] = mat
    g2 = ChainMap(M, N, comps, check=False)
    if g2.failing_degree() is None:
        # still a chain map: the suite must still agree on it
        win = random_window(rng, M, N)
        try:
            kills_weights(g2, win, "all")
        except InvariantViolation:
            return ("valid", False)
        return ("valid", True)
    try:
        ChainMap(M, N, comps)
    except ComplexError:
        return ("invalid", True)
    return ("invalid", False)


# ---------------------------------------------------------------- runner


def _rng(cfg, name, tag, trial):
    return random.Random(f"{cfg.seed}/{name}/{tag}/{trial}")


def _run_one(cfg, name, tag, trial):
    coeff = ring_from_tag(tag)
    rng = _rng(cfg, name, tag, trial)
    if name == "mutation":
        return _mutate(rng, coeff, cfg)
    fn = PROPERTIES[name][0]
    try:
        return (fn(rng, coeff, cfg), None, None)
    except Failure as e:
        return ("fail", str(e), e.artifact)
    except InvariantViolation as e:
        return ("fail", f"invariant violation: {e}", None)


def _run_chunk(args):
    cfg, checks, tasks = args
    linalg.set_checks(checks)
    out = [(t, _run_one(cfg, *t)) for t in tasks]
    return out, linalg.check_violations()


@dataclass
class PropertyCounts:
    checked: int = 0
    positive: int = 0
    skipped: int = 0
    failed: int = 0


@dataclass
class FuzzReport:
    config: FuzzConfig
    counts: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)
    mutations: dict = field(default_factory=dict)
    violations: int = 0

    @property
    def ok(self) -> bool:
        return not self.failures and not self.violations and \
            self.mutations.get("invalid_missed", 0) == 0 and \
            self.mutations.get("valid_disagree", 0) == 0

    def total(self, name) -> PropertyCounts:
        out = PropertyCounts()
        for (p, _), c in self.counts.items():
            if p == name:
                out.checked += c.checked
                out.positive += c.positive
                out.skipped += c.skipped
                out.failed += c.failed
        return out

    def text(self) -> str:
        lines = ["weightkit property suite", self.config.describe(), "",
                 f"{'property':<22}{'ring':<6}{'checked':>8}{'positive':>9}"
                 f"{'skipped':>9}{'failed':>8}"]
        for (p, tag), c in self.counts.items():
            lines.append(f"{p:<22}{tag:<6}{c.checked:>8}{c.positive:>9}"
                         f"{c.skipped:>9}"
                         f"{c.failed:>8}")
        if self.mutations:
            mu = self.mutations
            lines += ["", f"mutations: {mu['injected']} injected, "
                      f"{mu['invalid']} broke a chain condition "
                      f"({mu['invalid']-mu['invalid_missed']} detected), "
                      f"{mu['valid']} still valid "
                      f"({mu['valid_disagree']} disagreements)"]
        lines += ["", f"invariant violations: {self.violations}"]
        for f in self.failures:
            lines += ["", f"FAIL {f['property']} ring {f['ring']} trial "
                      f"{f['trial']}: {f['message']}"]
            if f.get("artifact"):
                lines.append(json.dumps(f["artifact"], sort_keys=True))
        lines.append(f"status: {'PASS' if self.ok else 'FAIL'}")
        return "\n".join(lines) + "\n"


def jobs_from_env() -> int:
    raw = os.environ.get(JOBS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise ValueError(f"{JOBS_ENV} must be an integer, got {raw!r}")


def run_property_suite(cfg: FuzzConfig, jobs: int = None) -> FuzzReport:
    jobs = jobs or jobs_from_env()
    names = list(cfg.properties or PROPERTIES)
    tasks = []
    for name in names:
        rings = PROPERTIES[name][1]
        for tag in cfg.coefficients:
            if tag in rings or (tag.startswith("Fp:") and "F2" in rings):
                tasks += [(name, tag, t) for t in range(cfg.trials)]
    if cfg.mutate:
        tasks += [("mutation", tag, t) for tag in cfg.coefficients
                  for t in range(cfg.trials)]
    before = linalg.check_violations()
    if jobs == 1:
        results = [(t, _run_one(cfg, *t)) for t in tasks]
        violations = linalg.check_violations() - before
    else:
        chunks = [tasks[k::jobs] for k in range(jobs)]
        results, violations = [], 0
        with ProcessPoolExecutor(jobs) as ex:
            for res, v in ex.map(_run_chunk,
                                 [(cfg, linalg.CHECKS, c) for c in chunks]):
                results += res
                violations += v
    results.sort(key=lambda r: (names.index(r[0][0])
                                if r[0][0] in names else len(names),
                                cfg.coefficients.index(r[0][1]),
                                r[0][2]))
    rep = FuzzReport(cfg, violations=violations)
    mu = {"injected": 0, "invalid": 0, "invalid_missed": 0, "valid": 0,
          "valid_disagree": 0}
    for (name, tag, trial), res in results:
        if name == "mutation":
            if res is None:
                continue
            kind, detected = res
            mu["injected"] += 1
            mu[kind] += 1
            if not detected:
                mu["invalid_missed" if kind == "invalid"
                   else "valid_disagree"] += 1
            continue
        c = rep.counts.setdefault((name, tag), PropertyCounts())
        status, msg, art = res
        if status in (PASS, POSITIVE):
            c.checked += 1
            c.positive += status == POSITIVE
        elif status == SKIP:
            c.skipped += 1
        else:
            c.failed += 1
            rep.failures.append({"property": name, "ring": tag,
                                 "trial": trial, "message": msg,
                                 "artifact": shrink(cfg, name, tag, trial,
                                                    art)})
    if cfg.mutate:
        rep.mutations = mu
    return rep


# ------------------------------------------------------------- shrinking


def shrink(cfg, name, tag, trial, artifact):
    """Greedy reduction of a failing map instance.

    Truncates the source from below and the target from above while the
    same property still fails on the smaller map.
    """
    if not artifact or "map" not in artifact or "window" not in artifact:
        return artifact
    from .io import parse_map
    g = parse_map(artifact["map"])
    win = tuple(artifact["window"])
    if name not in ("methods_agree", "self_duality", "ranged_degreewise"):
        return artifact

    def fails(f):
        try:
            if name == "methods_agree":
                vs = {kills_weights(f, win, m).verdict for m in METHODS}
                return len(vs) > 1
            if name == "self_duality":
                return _kills(f, win) != _kills(dualize_map(f),
                                                (-win[1], -win[0]))
            whole = find_ranged_witness(f, -win[1], -win[0]) is not None
            return whole != all(find_ranged_witness(f, i, i) is not None
                                for i in range(-win[1], -win[0] + 1))
        except (InvariantViolation, ComplexError, ValueError):
            return True

    changed = True
    while changed:
        changed = False
        S, T = g.source, g.target
        cands = []
        if S.degrees:
            X, inc = sub_at_least(S, min(S.degrees) + 1)
            cands.append(g @ inc)
        if T.degrees:
            Y, proj = quotient_at_most(T, max(T.degrees) - 1)
            cands.append(proj @ g)
        for f in cands:
            if fails(f):
                g, changed = f, True
                break
    return dict(artifact, map=map_to_doc(g))
