"""One test per acceptance criterion, each at its stated tolerance and time bound.

Every check is exact (rational equality); the time bounds are wall-clock
seconds on a single core.  A summary line per criterion is printed at the
end of the pytest run.
"""

import random
import time
from fractions import Fraction
from pathlib import Path

from conftest import ACCEPTANCE
from bfml import (
    LINEAR,
    MATROIDAL,
    ClassId,
    certify_excluded_minor,
    family_f_abc,
    family_f_alpha,
    family_f_u24,
    from_rank_function,
    has_minor_isomorphic,
    is_linear,
    is_matroidal,
    make_binary_function,
    mobius_invert,
    rank_function,
    search_excluded_minors,
    subset_sums,
    uniform_matroid_rank,
)
from bfml.classes import polymatroid_triples
from bfml.harness import named_matroids, verify_theorem
from bfml.io import parse_function, parse_rank, serialize_function, serialize_rank
from bfml.minors import GENERAL_GRID

GRID = [str(v) for v in GENERAL_GRID]
ORDER3_POPULATION = sum(7 ** ((1 << n) - 1) for n in range(4))  # 823894
FIXTURES = Path(__file__).parent / "fixtures"


def criterion(number, title, bound):
    """Run body(), record PASS/FAIL with timing, then assert."""

    def wrap(body):
        def test():
            start = time.perf_counter()
            try:
                ok, detail = body()
            except Exception as exc:  # recorded, then re-raised
                ACCEPTANCE.append("AC%d FAIL %s: %s: %s" % (number, title, type(exc).__name__, exc))
                raise
            elapsed = time.perf_counter() - start
            in_time = elapsed < bound
            status = "PASS" if ok and in_time else "FAIL"
            ACCEPTANCE.append("AC%d %s %s: %s; %.1fs (bound %ds)" % (number, status, title, detail, elapsed, bound))
            assert ok, detail
            assert in_time, "took %.1fs, bound %ds" % (elapsed, bound)

        test.__name__ = body.__name__
        return test

    return wrap


def _report(r, expect_instances=None):
    ok = r.ok and (expect_instances is None or r.instances_checked == expect_instances)
    return ok, "%d instances, %d counterexamples" % (r.instances_checked, len(r.counterexamples))


@criterion(1, "stability three-way equivalence", 120)
def test_ac1_stability():
    return _report(verify_theorem("thm-stable", {"order": 3, "grid": GRID}), ORDER3_POPULATION)


@criterion(2, "rankability three-way equivalence", 120)
def test_ac2_rankability():
    return _report(verify_theorem("thm-rankable", {"order": 3, "grid": GRID}), ORDER3_POPULATION)


@criterion(3, "rankable implies stable", 120)
def test_ac3_implication():
    return _report(verify_theorem("prop-rankable-stable", {"order": 3, "grid": GRID}), ORDER3_POPULATION)


@criterion(4, "rank-minor identities", 120)
def test_ac4_rank_minor():
    r = verify_theorem("prop-rank-minor", {"order": 3, "grid": GRID})
    return _report(r)


@criterion(5, "nonlinearity propagates to a proper minor", 60)
def test_ac5_nonlinear():
    r = verify_theorem("thm-nonlinear-propagates", {"order": 4, "samples": 10000, "sample_order": 5, "seed": 0})
    return _report(r, sum(2 ** ((1 << n) - 1) for n in range(5)) + 10000)


def _tables(fs):
    return sorted(f.table for f in fs)


def _show(tables):
    return "[%s]" % ", ".join("(%s)" % ", ".join(str(v) for v in t) for t in tables)


@criterion(6, "linear excluded minors", 60)
def test_ac6_linear():
    subjects = [family_f_alpha(a) for a in (-1, Fraction(-1, 2), Fraction(1, 2), 2, 3)]
    subjects += [family_f_abc(0, 0, 0), family_f_u24()]
    certified = all(certify_excluded_minor(f, LINEAR).verdict == "ExcludedMinor" for f in subjects)
    grid = [Fraction(v) for v in (-1, 0, 1, 2)]
    order2 = _tables(search_excluded_minors(LINEAR, 2, grid))
    order1 = _tables(search_excluded_minors(LINEAR, 1, grid))
    expect1 = sorted((1, a) for a in grid if a not in (0, 1))
    r = verify_theorem("thm-linear-excluded", {"order": 2, "grid": ["-1", "0", "1", "2"]})
    ok = certified and order2 == [(1, 1, 1, -1)] and order1 == expect1 and r.ok
    return ok, "7 certified=%s, order-2 search %s, order-1 search %s, harness %d/%d" % (
        certified, _show(order2), _show(order1), r.instances_checked - len(r.counterexamples), r.instances_checked)


@criterion(7, "k-polymatroidal excluded minors, k=1..4", 60)
def test_ac7_polymatroid():
    counts = []
    ok = True
    for k in (1, 2, 3, 4):
        cls = ClassId.polymatroidal(k)
        # direct enumeration of the triples, independent of polymatroid_triples
        triples = [(a, b, c) for a in range(k) for b in range(k) for c in range(k) if a <= b <= c]
        ok &= sorted(triples) == sorted(polymatroid_triples(k))
        certified = [t for t in triples if certify_excluded_minor(family_f_abc(*t), cls).verdict == "ExcludedMinor"]
        ok &= certified == triples
        ok &= all(rank_function(family_f_abc(a, b, c)).integer_values() == (0, a, b, a + c + 1)
                  for a, b, c in triples)
        counts.append(len(certified))
    ok &= counts == [1, 4, 10, 20]
    r = verify_theorem("thm-polymatroid-excluded", {"k": 4})
    ok &= r.ok
    return ok, "certified counts %s, harness %d cases, %d counterexamples" % (
        counts, r.instances_checked, len(r.counterexamples))


@criterion(8, "matroidal corollary", 60)
def test_ac8_matroidal():
    found = _tables(search_excluded_minors(MATROIDAL, 2, [-1, 0, 1, 3]))
    probe = sorted(set(GENERAL_GRID) | {Fraction(3), Fraction(-3, 2), Fraction(5, 2)})
    agree = all((certify_excluded_minor(family_f_alpha(a), MATROIDAL).verdict == "ExcludedMinor") == (a not in (0, 1))
                for a in probe)
    return found == [(1, 1, 1, -1)] and agree, "search %s, f_alpha verdicts agree on %d points: %s" % (
        _show(found), len(probe), agree)


@criterion(9, "inverse rank transform round trip", 120)
def test_ac9_inverse_rank():
    r = verify_theorem("remark-inverse-rank", {"order": 3, "low": -2, "high": 5, "samples": 100000, "seed": 0})
    return _report(r)


@criterion(10, "Tutte at desk scale", 180)
def test_ac10_tutte():
    linear, has_u24, matroidal = set(), set(), True
    u24 = family_f_u24()
    for name, (m, _) in named_matroids().items():
        f = from_rank_function(m)
        matroidal &= is_matroidal(f)
        if is_linear(f):
            linear.add(name)
        if has_minor_isomorphic(f, u24) is not None:
            has_u24.add(name)
    same = from_rank_function(uniform_matroid_rank(2, 4)).table == u24.table
    r = verify_theorem("thm-tutte")
    ok = matroidal and linear == {"U1,3", "M(K4)", "F7"} and has_u24 == {"U2,4", "F7-"} and same and r.ok
    return ok, "linear %s, f_U24 minor %s, U2,4 image equals f_U24: %s" % (sorted(linear), sorted(has_u24), same)


@criterion(11, "subset-sum and document round trips", 30)
def test_ac11_round_trips():
    checked = 0
    for path in sorted(FIXTURES.glob("*.json")):
        text = path.read_text()
        if path.stem.endswith("_rank"):
            gs, vals = parse_rank(text)
            assert parse_rank(serialize_rank(gs, vals)) == (gs, vals)
        else:
            f = parse_function(text)
            assert mobius_invert(subset_sums(f)) == f
            assert parse_function(serialize_function(f)) == f
        checked += 1
    rng = random.Random(2024)
    for _ in range(10000):
        n = rng.randint(0, 5)
        vals = [1] + [Fraction(rng.randint(-20, 20), rng.randint(1, 12)) for _ in range((1 << n) - 1)]
        f = make_binary_function(list("abcde"[:n]), vals)
        if mobius_invert(subset_sums(f)) != f or parse_function(serialize_function(f)) != f:
            return False, "round trip failed on %r" % (f,)
        checked += 1
    return True, "%d fixtures and random instances" % checked
