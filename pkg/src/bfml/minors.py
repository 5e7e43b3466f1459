"""Minor enumeration, minor-isomorphism search and excluded-minor certification.

Policy for undefined minors: when certifying an excluded minor, a proper
minor whose deletion is undefined is treated as vacuously acceptable.  Without
that, f_{-1} (whose only deletion is undefined) could not be an excluded
minor for the stable class.  Certificates list undefined minors explicitly.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product
from typing import Iterator, Optional, Sequence

from .classes import ClassId, class_violations, in_class
from .core import (
    BinaryFunction,
    MinorSpec,
    _primitive,
    _to_fraction,
    canonical_numerators,
    cardinality_profile,
    default_labels,
    minor_by_masks,
    minor_plan,
)
from .errors import BadParameters, BudgetExceeded

__all__ = [
    "DEFAULT_BUDGET",
    "GENERAL_GRID",
    "LINEAR_GRID",
    "MinorWitness",
    "MinorVerdict",
    "Certificate",
    "budget",
    "spec_masks",
    "enumerate_minors",
    "undefined_specs",
    "has_minor_isomorphic",
    "has_minor_matching",
    "order_one_minor_values",
    "find_order_one_minor",
    "all_minors_defined",
    "proper_minors_in_class",
    "certify_excluded_minor",
    "grid_functions",
    "search_excluded_minors",
]

DEFAULT_BUDGET = 10 ** 7
GENERAL_GRID = (Fraction(-2), Fraction(-1), Fraction(-1, 2), Fraction(0), Fraction(1, 2), Fraction(1), Fraction(2))
LINEAR_GRID = (Fraction(-1), Fraction(0), Fraction(1), Fraction(2))


def budget() -> int:
    """Search budget in candidate tables; BFML_BUDGET overrides the default."""
    env = os.environ.get("BFML_BUDGET")
    if env:
        try:
            return int(env)
        except ValueError:
            raise BadParameters("BFML_BUDGET must be an integer, got %r" % env) from None
    return DEFAULT_BUDGET


@lru_cache(maxsize=None)
def _all_specs(n: int) -> tuple[tuple[int, int], ...]:
    out = []
    for assignment in product((0, 1, 2), repeat=n):
        c = d = 0
        for i, a in enumerate(assignment):
            if a == 1:
                c |= 1 << i
            elif a == 2:
                d |= 1 << i
        out.append((c, d))
    return tuple(out)


def spec_masks(n: int) -> tuple[tuple[int, int], ...]:
    """All 3^n disjoint (contract mask, delete mask) pairs, in a fixed order."""
    return _all_specs(n)


@lru_cache(maxsize=None)
def _delete_sums(n: int) -> tuple[tuple[int, tuple[int, ...]], ...]:
    return tuple((c, d, minor_plan(n, c, d)[2]) for c, d in _all_specs(n))


def _spec(f: BinaryFunction, cmask: int, dmask: int) -> MinorSpec:
    return MinorSpec(f.subset(cmask), f.subset(dmask))


def enumerate_minors(f: BinaryFunction) -> Iterator[tuple[MinorSpec, Optional[BinaryFunction]]]:
    """Every (spec, minor) pair; the minor is None when its deletion is undefined.

    The improper pair (empty, empty) comes first; ``spec.is_improper`` flags it.
    """
    for cmask, dmask in spec_masks(len(f.ground_set)):
        yield _spec(f, cmask, dmask), minor_by_masks(f, cmask, dmask)


def undefined_specs(f: BinaryFunction) -> list[MinorSpec]:
    """Brute force: every spec whose one-shot denominator sum over D vanishes.

    Sums each denominator directly from the table for each of the 3^n specs,
    independently of the subset-sum transform.
    """
    n = len(f.ground_set)
    num = f.num
    out = []
    for cmask, dmask, subs in _delete_sums(n):
        if sum([num[z] for z in subs]) == 0:
            out.append(_spec(f, cmask, dmask))
    return out


def all_minors_defined(f: BinaryFunction) -> bool:
    """Same brute-force denominator sums as undefined_specs, stopping at the first zero."""
    num = f.num
    for _, _, subs in _delete_sums(len(f.ground_set)):
        if sum([num[z] for z in subs]) == 0:
            return False
    return True


@dataclass(frozen=True)
class MinorWitness:
    """host/C\\D relabelled through ``bijection`` equals the pattern."""

    spec: MinorSpec
    bijection: dict
    result: BinaryFunction

    def to_dict(self) -> dict:
        return {
            "contract": sorted(self.spec.contract_set),
            "delete": sorted(self.spec.delete_set),
            "bijection": dict(sorted(self.bijection.items())),
        }


@lru_cache(maxsize=None)
def _specs_of_order(n: int, m: int) -> tuple[tuple[int, int], ...]:
    """Specs leaving exactly m elements: choose the survivors, split the rest."""
    full = (1 << n) - 1
    out = []
    for keep in combinations(range(n), m):
        kmask = sum(1 << i for i in keep)
        rest = [i for i in range(n) if not kmask >> i & 1]
        for dsel in product((0, 1), repeat=len(rest)):
            dmask = sum(1 << i for i, s in zip(rest, dsel) if s)
            out.append((full ^ kmask ^ dmask, dmask))
    return tuple(out)


@lru_cache(maxsize=None)
def _order_plans(n: int, m: int):
    return tuple((c, d) + minor_plan(n, c, d)[1:] for c, d in _specs_of_order(n, m))


def has_minor_isomorphic(host: BinaryFunction, pattern: BinaryFunction) -> Optional[MinorWitness]:
    """Some defined minor of host isomorphic to pattern, with the witnessing map."""
    n, m = len(host.ground_set), len(pattern.ground_set)
    if m > n:
        return None
    target, ppat = canonical_numerators(pattern.num, m)
    values = sorted(pattern.num)
    profile = cardinality_profile(pattern.num, m)
    num = host.num
    for cmask, dmask, fulls, subs in _order_plans(n, m):
        if len(subs) == 1:
            out = [num[x] for x in fulls]
        else:
            out = [sum([num[x | z] for z in subs]) for x in fulls]
            if not out[0]:
                continue
        out = _primitive(out)
        if sorted(out) != values or (m > 2 and cardinality_profile(out, m) != profile):
            continue
        table, perm = canonical_numerators(out, m)
        if table != target:
            continue
        keep = minor_plan(n, cmask, dmask)[0]
        g = BinaryFunction(tuple(host.ground_set[i] for i in keep), out)
        phi = {g.ground_set[perm[i]]: pattern.ground_set[ppat[i]] for i in range(m)}
        return MinorWitness(_spec(host, cmask, dmask), phi, g)
    return None


def has_minor_matching(host: BinaryFunction, order: int, predicate) -> Optional[tuple[MinorSpec, BinaryFunction]]:
    """First defined minor of the given order satisfying predicate(minor)."""
    n = len(host.ground_set)
    if order > n:
        return None
    for cmask, dmask in _specs_of_order(n, order):
        g = minor_by_masks(host, cmask, dmask)
        if g is not None and predicate(g):
            return _spec(host, cmask, dmask), g
    return None


def order_one_minor_values(f: BinaryFunction) -> dict[MinorSpec, Fraction]:
    """alpha for every defined order-one minor f/C\\D = f_alpha (C u D = E minus one element)."""
    n = len(f.ground_set)
    num = f.num
    out = {}
    for cmask, dmask, fulls, subs in _order_plans(n, 1):
        den = sum([num[z] for z in subs])
        if den == 0:
            continue
        e = fulls[1]
        out[_spec(f, cmask, dmask)] = Fraction(sum([num[e | z] for z in subs]), den)
    return out


def find_order_one_minor(f: BinaryFunction, accept) -> Optional[tuple[MinorSpec, Fraction]]:
    """First defined order-one minor f_alpha with accept(p, q) true, where alpha = p/q, q > 0.

    Integer-only until a hit, so it is cheap enough for exhaustive sweeps.
    """
    num = f.num
    for cmask, dmask, fulls, subs in _order_plans(len(f.ground_set), 1):
        den = sum([num[z] for z in subs])
        if den == 0:
            continue
        e = fulls[1]
        top = sum([num[e | z] for z in subs])
        if den < 0:
            top, den = -top, -den
        if accept(top, den):
            return _spec(f, cmask, dmask), Fraction(top, den)
    return None


@dataclass(frozen=True)
class MinorVerdict:
    element: str
    operation: str  # "contract" or "delete"
    status: str  # "in", "out" or "undefined"


@dataclass
class Certificate:
    subject: BinaryFunction
    class_id: ClassId
    verdict: str  # InClass, NotInClass or ExcludedMinor
    minors: list = field(default_factory=list)
    violations: list = field(default_factory=list)

    @property
    def undefined(self) -> list:
        return [v for v in self.minors if v.status == "undefined"]

    def to_dict(self) -> dict:
        from .io import function_to_document

        return {
            "subject": function_to_document(self.subject),
            "class": str(self.class_id),
            "verdict": self.verdict,
            "minors": [
                {"element": v.element, "operation": v.operation, "status": v.status} for v in self.minors
            ],
            "violations": [v.to_dict() for v in self.violations],
        }


def certify_excluded_minor(f: BinaryFunction, class_id: ClassId) -> Certificate:
    """Classify f against class_id using its 2n single-step minors."""
    violations = class_violations(f, class_id)
    minors = []
    ok = True
    for i, e in enumerate(f.ground_set):
        for op, cmask, dmask in (("contract", 1 << i, 0), ("delete", 0, 1 << i)):
            g = minor_by_masks(f, cmask, dmask)
            if g is None:
                status = "undefined"
            else:
                status = "in" if in_class(g, class_id) else "out"
                ok = ok and status == "in"
            minors.append(MinorVerdict(e, op, status))
    if not violations:
        verdict = "InClass"
    elif ok:
        verdict = "ExcludedMinor"
    else:
        verdict = "NotInClass"
    return Certificate(f, class_id, verdict, minors, violations)


def proper_minors_in_class(f: BinaryFunction, class_id: ClassId) -> bool:
    """The 'all proper minors' form: every defined proper minor lies in the class."""
    for cmask, dmask in spec_masks(len(f.ground_set)):
        if cmask | dmask:
            g = minor_by_masks(f, cmask, dmask)
            if g is not None and not in_class(g, class_id):
                return False
    return True


def grid_functions(order: int, grid: Sequence, labels: Optional[Sequence[str]] = None) -> Iterator[BinaryFunction]:
    """Every function of the given order whose nonempty-set values lie in grid."""
    labels = tuple(labels) if labels is not None else default_labels(order)
    vals = [_to_fraction(v) for v in grid]
    lcm = 1
    for v in vals:
        lcm = lcm * v.denominator // math.gcd(lcm, v.denominator)
    ints = [v.numerator * (lcm // v.denominator) for v in vals]
    for combo in product(ints, repeat=(1 << order) - 1):
        yield BinaryFunction(labels, _primitive((lcm,) + combo))


def _sort_key(f: BinaryFunction):
    return (len(f.ground_set), f.table)


def search_excluded_minors(class_id: ClassId, order: int, grid: Sequence,
                           max_candidates: Optional[int] = None) -> list[BinaryFunction]:
    """Canonical forms of every grid function of this order certified as an excluded minor."""
    if order < 0 or order > 4:
        raise BadParameters("search order must be between 0 and 4")
    grid = sorted({_to_fraction(v) for v in grid})
    limit = budget() if max_candidates is None else max_candidates
    count = len(grid) ** ((1 << order) - 1)
    if count > limit:
        raise BudgetExceeded("%d candidate tables exceed the budget of %d" % (count, limit))
    found = {}
    for f in grid_functions(order, grid):
        if in_class(f, class_id):
            continue
        if _single_step_minors_in_class(f, class_id):
            table, _ = canonical_numerators(f.num, order)
            found[table] = BinaryFunction(f.ground_set, table)
    return sorted(found.values(), key=_sort_key)


def _single_step_minors_in_class(f: BinaryFunction, class_id: ClassId) -> bool:
    for i in range(len(f.ground_set)):
        for cmask, dmask in ((1 << i, 0), (0, 1 << i)):
            g = minor_by_masks(f, cmask, dmask)
            if g is not None and not in_class(g, class_id):
                return False
    return True
