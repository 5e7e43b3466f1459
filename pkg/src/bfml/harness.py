"""Theorem verification harness.

Each registered theorem yields a stream of cases and checks them one at a
time; a failing case becomes a counterexample carrying enough data to be
replayed with :func:`replay`.  Everything is deterministic given the
parameters (and seed), and counterexamples are reported sorted.
"""

from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import comb, gcd
from typing import Callable, Iterator, Optional

from .classes import (
    LINEAR,
    MATROIDAL,
    ClassId,
    check_polymatroid,
    family_f_abc,
    family_f_alpha,
    family_f_u24,
    fano_rank,
    graphic_matroid_rank,
    in_class,
    is_linear,
    is_matroidal,
    non_fano_rank,
    polymatroid_triples,
    uniform_matroid_rank,
)
from .core import BinaryFunction, MinorSpec, _primitive, canonical_numerators, default_labels
from .errors import BadParameters, BudgetExceeded, UnknownTheorem
from .io import function_from_document, function_to_document
from .minors import (
    GENERAL_GRID,
    LINEAR_GRID,
    all_minors_defined,
    budget,
    certify_excluded_minor,
    find_order_one_minor,
    grid_functions,
    has_minor_isomorphic,
    minor_by_masks,
    proper_minors_in_class,
    search_excluded_minors,
    spec_masks,
)
from .rank import (
    rank_minor_identities_all,
    from_rank_function,
    is_rankable,
    is_stable,
    rank_function,
)

__all__ = ["Report", "THEOREMS", "verify_theorem", "replay", "theorem_ids", "F_MINUS_ONE", "G_ORDER_TWO"]

F_MINUS_ONE = family_f_alpha(-1)
G_ORDER_TWO = family_f_abc(0, 0, 0)
F_U24 = family_f_u24()


@dataclass
class Report:
    theorem_id: str
    instances_checked: int
    counterexamples: list
    wall_time: float
    params: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.counterexamples

    def to_dict(self, timing: bool = False) -> dict:
        out = {
            "theorem_id": self.theorem_id,
            "params": self.params,
            "instances_checked": self.instances_checked,
            "counterexamples": self.counterexamples,
            "ok": self.ok,
        }
        if timing:
            out["wall_time"] = round(self.wall_time, 3)
        return out


@dataclass
class Theorem:
    theorem_id: str
    title: str
    defaults: dict
    cases: Callable[[dict], Iterator[tuple]]
    check: Callable[[tuple, dict], Optional[str]]


THEOREMS: dict[str, Theorem] = {}


def _register(theorem_id, title, **defaults):
    def wrap(cls):
        THEOREMS[theorem_id] = Theorem(theorem_id, title, defaults, cls.cases, cls.check)
        return cls

    return wrap


def theorem_ids() -> list[str]:
    return sorted(THEOREMS)


# ---------------------------------------------------------------- encoding
# A case is a tuple whose first entry is a tag; BinaryFunctions inside are
# encoded as function documents so counterexamples are self-contained JSON.


def _encode(case) -> list:
    return [function_to_document(x) if isinstance(x, BinaryFunction) else _plain(x) for x in case]


def _plain(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    return x


def _decode(data) -> tuple:
    return tuple(function_from_document(x) if isinstance(x, dict) and "ground_set" in x else
                 (tuple(x) if isinstance(x, list) else x) for x in data)


# ---------------------------------------------------------------- populations


def _grid(params, key="grid"):
    return [Fraction(v) for v in params[key]]


def _population(params) -> Iterator[BinaryFunction]:
    """Exhaustive grid functions of order <= params['order'], then seeded samples."""
    grid = _grid(params)
    total = sum(len(grid) ** ((1 << n) - 1) for n in range(params["order"] + 1))
    if total > budget():
        raise BudgetExceeded("%d grid instances exceed the budget of %d" % (total, budget()))
    for n in range(params["order"] + 1):
        yield from grid_functions(n, grid)
    samples = params.get("samples", 0)
    if samples:
        yield from _samples(params["sample_order"], grid, samples, params.get("seed", 0))


def _samples(order, grid, count, seed) -> Iterator[BinaryFunction]:
    rng = random.Random(seed)
    labels = default_labels(order)
    lcm = 1
    for v in grid:
        lcm = lcm * v.denominator // gcd(lcm, v.denominator)
    ints = [int(v * lcm) for v in grid]
    for _ in range(count):
        yield BinaryFunction(labels, _primitive([lcm] + [rng.choice(ints) for _ in range((1 << order) - 1)]))


# ---------------------------------------------------------------- oracles


def _rank_transform_defined(f: BinaryFunction) -> bool:
    """Qf(X) = log2(S(E)/S(E\\X)) has a defined, positive argument for every X,
    with each sum taken directly over the table."""
    n = len(f.ground_set)
    num = f.num
    full = (1 << n) - 1

    def direct(x):
        return sum(num[m] for m in range(x + 1) if m & x == m)

    top = direct(full)
    for x in range(full + 1):
        bottom = direct(full ^ x)
        if bottom == 0 or (top > 0) != (bottom > 0):
            return False
    return True


def _order_one_minor_at_most(f: BinaryFunction, bound: int) -> Optional[MinorSpec]:
    """A defined order-one minor f_alpha with alpha <= bound, or None."""
    found = find_order_one_minor(f, lambda p, q: p <= bound * q)
    return None if found is None else found[0]


def _has_listed_linear_minor(f: BinaryFunction) -> Optional[str]:
    if find_order_one_minor(f, lambda p, q: p != 0 and p != q) is not None:
        return "f_alpha"
    if has_minor_isomorphic(f, G_ORDER_TWO) is not None:
        return "g"
    if has_minor_isomorphic(f, F_U24) is not None:
        return "f_U24"
    return None


# ---------------------------------------------------------------- theorems


@_register("thm-stable", "stable <=> every minor defined <=> no f_{-1} minor",
           order=3, grid=[str(v) for v in GENERAL_GRID])
class _Stable:
    @staticmethod
    def cases(p):
        for f in _population(p):
            yield ("f", f)

    @staticmethod
    def check(case, p):
        f = case[1]
        a = is_stable(f)
        b = all_minors_defined(f)
        c = has_minor_isomorphic(f, F_MINUS_ONE) is None
        if a == b == c:
            return None
        return "is_stable=%s, all minors defined=%s, no f_-1 minor=%s" % (a, b, c)


@_register("prop-rankable-criterion", "rankable <=> every subset sum positive",
           order=3, grid=[str(v) for v in GENERAL_GRID])
class _RankCriterion:
    @staticmethod
    def cases(p):
        for f in _population(p):
            yield ("f", f)

    @staticmethod
    def check(case, p):
        f = case[1]
        a, b = is_rankable(f), _rank_transform_defined(f)
        return None if a == b else "positive subset sums=%s, rank transform defined=%s" % (a, b)


@_register("prop-rankable-stable", "rankable => stable", order=3, grid=[str(v) for v in GENERAL_GRID])
class _RankableStable:
    @staticmethod
    def cases(p):
        for f in _population(p):
            yield ("f", f)

    @staticmethod
    def check(case, p):
        f = case[1]
        return "rankable but unstable" if is_rankable(f) and not is_stable(f) else None


@_register("thm-rankable", "rankable <=> no f_alpha minor with alpha <= -1",
           order=3, grid=[str(v) for v in GENERAL_GRID])
class _Rankable:
    @staticmethod
    def cases(p):
        for f in _population(p):
            yield ("f", f)

    @staticmethod
    def check(case, p):
        f = case[1]
        a = is_rankable(f)
        b = _rank_transform_defined(f)
        c = _order_one_minor_at_most(f, -1) is None
        if a == b == c:
            return None
        return "is_rankable=%s, rank transform defined=%s, no f_alpha<=-1 minor=%s" % (a, b, c)


@_register("prop-rank-minor", "rank transform commutes with minors",
           order=3, grid=[str(v) for v in GENERAL_GRID])
class _RankMinor:
    @staticmethod
    def cases(p):
        for f in _population(p):
            if is_rankable(f):
                yield ("f", f)

    @staticmethod
    def check(case, p):
        f = case[1]
        bad = rank_minor_identities_all(f)
        return None if bad is None else "identity fails for minor %s" % MinorSpec(f.subset(bad[0]), f.subset(bad[1]))


@_register("thm-nonlinear-propagates", "a nonlinear {0,1}-valued function has a nonlinear proper minor",
           order=4, samples=0, sample_order=5, seed=0)
class _NonlinearPropagates:
    @staticmethod
    def cases(p):
        for n in range(p["order"] + 1):
            for f in grid_functions(n, (0, 1)):
                yield ("f", f)
        if p["samples"]:
            for f in _samples(p["sample_order"], [Fraction(0), Fraction(1)], p["samples"], p["seed"]):
                yield ("f", f)

    @staticmethod
    def check(case, p):
        f = case[1]
        if is_linear(f):
            return None
        n = len(f.ground_set)
        # single-step minors first; the argument only ever needs a deletion
        for i in range(n):
            for c, d in ((0, 1 << i), (1 << i, 0)):
                g = minor_by_masks(f, c, d)
                if g is not None and not is_linear(g):
                    return None
        for c, d in spec_masks(n):
            if c | d:
                g = minor_by_masks(f, c, d)
                if g is not None and not is_linear(g):
                    return None
        return "nonlinear but every proper minor is linear"


def _canon_set(funcs) -> list:
    return sorted({(len(f.ground_set), canonical_numerators(f.num, len(f.ground_set))[0]) for f in funcs})


@_register("thm-linear-excluded", "linear <=> no f_alpha (alpha not 0,1), g or f_U24 minor",
           order=2, grid=[str(v) for v in LINEAR_GRID])
class _LinearExcluded:
    @staticmethod
    def cases(p):
        grid = _grid(p)
        for a in sorted(set(grid) | {Fraction(-1), Fraction(-1, 2), Fraction(1, 2), Fraction(2), Fraction(3)}):
            if a not in (0, 1):
                yield ("certify", family_f_alpha(a))
        yield ("certify", G_ORDER_TWO)
        yield ("certify", F_U24)
        for f in _population(p):
            yield ("equiv", f)
        for order in (1, 2):
            if order <= max(p["order"], 2):
                yield ("search", order, [str(v) for v in grid])

    @staticmethod
    def check(case, p):
        tag = case[0]
        if tag == "certify":
            f = case[1]
            cert = certify_excluded_minor(f, LINEAR)
            if cert.verdict != "ExcludedMinor":
                return "verdict %s" % cert.verdict
            if not proper_minors_in_class(f, LINEAR):
                return "single-step and all-proper-minor forms disagree"
            return None
        if tag == "equiv":
            f = case[1]
            lin = is_linear(f)
            listed = _has_listed_linear_minor(f)
            if lin == (listed is None):
                return None
            return "is_linear=%s, listed minor=%s" % (lin, listed)
        order, grid = case[1], [Fraction(v) for v in case[2]]
        found = _canon_set(search_excluded_minors(LINEAR, order, grid))
        if order == 1:
            expect = _canon_set(family_f_alpha(a) for a in grid if a not in (0, 1))
        else:
            expect = _canon_set([G_ORDER_TWO]) if {Fraction(-1), Fraction(1)} <= set(grid) else []
        return None if found == expect else "search found %s, expected %s" % (found, expect)


def _alpha_probe_points(k: int, grid) -> list:
    pts = set(grid)
    for j in range(k + 2):
        b = Fraction(2 ** j - 1)
        pts |= {b, b - Fraction(1, 2), b + Fraction(1, 2)}
    return sorted(pts)


def _triple_grid(k: int) -> list:
    vals = set(GENERAL_GRID)
    for t in polymatroid_triples(k):
        vals |= set(family_f_abc(*t).table)
    return sorted(vals)


@_register("thm-polymatroid-excluded", "k-polymatroidal <=> no f_alpha (alpha not 0,1,3,..,2^k-1) or f_abc minor",
           k=4, grid=[str(v) for v in GENERAL_GRID], search=True)
class _PolymatroidExcluded:
    @staticmethod
    def cases(p):
        for k in range(1, p["k"] + 1):
            for t in polymatroid_triples(k):
                yield ("triple", k, list(t))
            yield ("count", k)
            for a in _alpha_probe_points(k, _grid(p)):
                yield ("alpha", k, str(a))
            if p["search"]:
                yield ("search", k)

    @staticmethod
    def check(case, p):
        tag, k = case[0], case[1]
        cls = ClassId.polymatroidal(k)
        if tag == "triple":
            a, b, c = case[2]
            f = family_f_abc(a, b, c)
            cert = certify_excluded_minor(f, cls)
            if cert.verdict != "ExcludedMinor":
                return "verdict %s" % cert.verdict
            ranks = rank_function(f).integer_values()
            if ranks != (0, a, b, a + c + 1):
                return "rank function %s" % (ranks,)
            v = check_polymatroid(f, k)
            if [(x.axiom, x.subset) for x in v] != [("R3", ())]:
                return "violations %s" % [(x.axiom, x.subset) for x in v]
            return None
        if tag == "count":
            # every ordered triple in the box [0, k]^3, kept only when certified
            certified = 0
            for a, b, c in product(range(k + 1), repeat=3):
                if a <= b <= c and certify_excluded_minor(family_f_abc(a, b, c), cls).verdict == "ExcludedMinor":
                    certified += 1
            expect = comb(k + 2, 3)
            return None if certified == expect else "certified %d triples, expected %d" % (certified, expect)
        if tag == "alpha":
            a = Fraction(case[2])
            allowed = {Fraction(2 ** j - 1) for j in range(k + 1)}
            excluded = certify_excluded_minor(family_f_alpha(a), cls).verdict == "ExcludedMinor"
            return None if excluded == (a not in allowed) else "f_%s excluded=%s" % (a, excluded)
        found = _canon_set(search_excluded_minors(cls, 2, _triple_grid(k)))
        expect = _canon_set(family_f_abc(*t) for t in polymatroid_triples(k))
        return None if found == expect else "order-2 search found %d forms, expected %d" % (len(found), len(expect))


@_register("cor-matroidal-excluded", "matroidal <=> no f_alpha (alpha not 0,1) or g minor",
           grid=[str(v) for v in GENERAL_GRID])
class _MatroidalExcluded:
    @staticmethod
    def cases(p):
        yield ("search", ["-1", "0", "1", "3"])
        for a in sorted(set(_grid(p)) | {Fraction(3)}):
            yield ("alpha", str(a))

    @staticmethod
    def check(case, p):
        if case[0] == "search":
            found = search_excluded_minors(MATROIDAL, 2, [Fraction(v) for v in case[1]])
            tables = [f.table for f in found]
            return None if tables == [(1, 1, 1, -1)] else "search found %s" % (tables,)
        a = Fraction(case[1])
        excluded = certify_excluded_minor(family_f_alpha(a), MATROIDAL).verdict == "ExcludedMinor"
        return None if excluded == (a not in (0, 1)) else "f_%s excluded=%s" % (a, excluded)


def named_matroids() -> dict:
    """Rank oracles for the Tutte check, with whether each is binary."""
    k4 = [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]
    return {
        "U2,4": (uniform_matroid_rank(2, 4), False),
        "U1,3": (uniform_matroid_rank(1, 3), True),
        "M(K4)": (graphic_matroid_rank(k4, name="M(K4)"), True),
        "F7": (fano_rank(), True),
        "F7-": (non_fano_rank(), False),
    }


@_register("thm-tutte", "a matroidal function is linear <=> it has no f_U24 minor")
class _Tutte:
    @staticmethod
    def cases(p):
        yield ("u24",)
        for name in named_matroids():
            yield ("matroid", name)

    @staticmethod
    def check(case, p):
        if case[0] == "u24":
            return None if from_rank_function(uniform_matroid_rank(2, 4)) == F_U24 else "image of U2,4 is not f_U24"
        m, binary = named_matroids()[case[1]]
        f = from_rank_function(m)
        if not is_matroidal(f):
            return "image is not matroidal"
        if rank_function(f).integer_values() != m.values:
            return "rank transform does not return the matroid"
        lin = is_linear(f)
        has_u24 = has_minor_isomorphic(f, F_U24) is not None
        if lin == has_u24:
            return "linear=%s but f_U24 minor=%s" % (lin, has_u24)
        if lin != binary:
            return "linear=%s for a matroid that is %sbinary" % (lin, "" if binary else "not ")
        return None


@_register("remark-inverse-rank", "Q(from_rank_function(rho)) = rho for integer rho",
           order=3, low=-2, high=5, samples=100000, seed=0)
class _InverseRank:
    @staticmethod
    def cases(p):
        lo, hi = p["low"], p["high"]
        span = list(range(lo, hi + 1))
        for n in range(p["order"] + 1):
            labels = list(default_labels(n))
            width = (1 << n) - 1
            if len(span) ** width <= p["samples"]:
                for vals in product(span, repeat=width):
                    yield ("rho", labels, [0, *vals])
            else:
                rng = random.Random(p["seed"] + n)
                for _ in range(p["samples"]):
                    yield ("rho", labels, [0] + [rng.randint(lo, hi) for _ in range(width)])

    @staticmethod
    def check(case, p):
        labels, vals = case[1], tuple(case[2])
        f = from_rank_function(labels, vals)
        got = rank_function(f).integer_values()
        return None if got == vals else "rank of image is %s" % (got,)


@_register("minor-closed", "class membership passes to every defined minor",
           order=2, grid=[str(v) for v in GENERAL_GRID], samples=0, sample_order=4, seed=0,
           classes=["stable", "rankable", "linear", "polymatroidal:1", "polymatroidal:2", "polymatroidal:3"])
class _MinorClosed:
    @staticmethod
    def cases(p):
        for f in _population(p):
            yield ("f", f)

    @staticmethod
    def check(case, p):
        f = case[1]
        for name in p["classes"]:
            cls = ClassId.parse(name)
            if not in_class(f, cls):
                continue
            for c, d in spec_masks(len(f.ground_set)):
                g = minor_by_masks(f, c, d)
                if g is not None and not in_class(g, cls):
                    return "%s, but minor %s is not" % (cls, MinorSpec(f.subset(c), f.subset(d)))
        return None


@_register("excluded-minor-forms", "single-step and all-proper-minor excluded-minor tests agree",
           order=2, grid=[str(v) for v in GENERAL_GRID],
           classes=["stable", "rankable", "linear", "polymatroidal:1", "polymatroidal:2"])
class _ExcludedForms:
    @staticmethod
    def cases(p):
        for f in _population(p):
            yield ("f", f)

    @staticmethod
    def check(case, p):
        f = case[1]
        for name in p["classes"]:
            cls = ClassId.parse(name)
            single = certify_excluded_minor(f, cls).verdict == "ExcludedMinor"
            full = not in_class(f, cls) and proper_minors_in_class(f, cls)
            if single != full:
                return "%s: single-step=%s, all proper minors=%s" % (cls, single, full)
        return None


# ---------------------------------------------------------------- driver


def _params(theorem: Theorem, params: Optional[dict]) -> dict:
    p = dict(theorem.defaults)
    for key, v in (params or {}).items():
        if v is None:
            continue
        if key not in p:
            raise BadParameters("%s does not take parameter %r" % (theorem.theorem_id, key))
        p[key] = v
    if "grid" in p:
        p["grid"] = [str(Fraction(v)) for v in p["grid"]]
    return p


def verify_theorem(theorem_id: str, params: Optional[dict] = None, **kwargs) -> Report:
    try:
        theorem = THEOREMS[theorem_id]
    except KeyError:
        raise UnknownTheorem("unknown theorem %r; known: %s" % (theorem_id, ", ".join(theorem_ids()))) from None
    p = _params(theorem, {**(params or {}), **kwargs})
    start = time.perf_counter()
    checked = 0
    bad = []
    for case in theorem.cases(p):
        checked += 1
        reason = theorem.check(case, p)
        if reason is not None:
            bad.append({"case": _encode(case), "reason": reason})
    bad.sort(key=lambda c: json.dumps(c, sort_keys=True))
    return Report(theorem_id, checked, bad, time.perf_counter() - start, p)


def replay(report: Report) -> list[bool]:
    """Re-run each counterexample; True where it is still a genuine failure."""
    theorem = THEOREMS[report.theorem_id]
    return [theorem.check(_decode(c["case"]), report.params) is not None for c in report.counterexamples]
