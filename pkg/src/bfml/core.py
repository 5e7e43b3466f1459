"""Binary functions and their minors.

A binary function on a ground set E is a map f: 2^E -> Q with f(empty) = 1.
Subsets are bitmasks over the ground-set ordering (bit i <-> ground_set[i]).

Internally a function is held as a tuple of integer numerators over a
common positive denominator.  Because f(empty) = 1, that denominator is the
first numerator, so the representation is just a primitive integer vector
with a positive leading entry.  Contraction and deletion then reduce to
integer sums; no Fraction arithmetic happens on the hot paths.
"""

from __future__ import annotations

import math
import numbers
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Optional, Sequence

from .errors import (
    BadEmptySetValue,
    BadMinorSpec,
    DuplicateLabel,
    OrderTooLarge,
    SizeMismatch,
    UndefinedMinor,
    UnknownLabel,
)

MAX_ORDER = 20

__all__ = [
    "MAX_ORDER",
    "BinaryFunction",
    "MinorSpec",
    "make_binary_function",
    "evaluate",
    "contract",
    "delete",
    "minor",
    "relabel",
    "reorder",
    "is_isomorphic",
    "canonical_form",
    "default_labels",
    "popcount",
]


def popcount(x: int) -> int:
    return bin(x).count("1")


def default_labels(n: int) -> tuple[str, ...]:
    """The fixed alphabet used for canonical forms and unlabeled constructors."""
    if n <= 26:
        return tuple("abcdefghijklmnopqrstuvwxyz"[:n])
    return tuple("e%d" % i for i in range(n))


def _primitive(num: Sequence[int]) -> tuple[int, ...]:
    g = math.gcd(*num)
    if num[0] < 0:
        g = -g
    if g == 1:
        return tuple(num)
    return tuple(x // g for x in num)


def _to_fraction(v) -> Fraction:
    if isinstance(v, bool):
        raise TypeError("boolean is not a table value")
    if isinstance(v, Fraction):
        return v
    if isinstance(v, numbers.Rational):
        return Fraction(v.numerator, v.denominator)
    if isinstance(v, str):
        return Fraction(v)
    raise TypeError("table values must be exact rationals (int, Fraction or 'p/q'), got %r" % (v,))


class BinaryFunction:
    """An immutable binary function.

    ``ground_set`` is the tuple of labels, ``num`` the primitive numerator
    vector (``num[0]`` is the shared denominator).  Use
    :func:`make_binary_function` to build one from a rational table.
    """

    __slots__ = ("ground_set", "num", "_index", "_table")

    def __init__(self, ground_set: tuple[str, ...], num: tuple[int, ...]):
        # trusted constructor: callers guarantee a primitive vector, num[0] > 0
        self.ground_set = ground_set
        self.num = num
        self._index = None
        self._table = None

    @classmethod
    def from_numerators(cls, ground_set: Sequence[str], num: Sequence[int]) -> "BinaryFunction":
        ground_set = tuple(ground_set)
        if len(num) != 1 << len(ground_set):
            raise SizeMismatch("expected %d numerators, got %d" % (1 << len(ground_set), len(num)))
        if num[0] == 0:
            raise BadEmptySetValue("leading numerator (the denominator) must be nonzero")
        return cls(ground_set, _primitive(num))

    @property
    def order(self) -> int:
        return len(self.ground_set)

    @property
    def denominator(self) -> int:
        return self.num[0]

    @property
    def table(self) -> tuple[Fraction, ...]:
        if self._table is None:
            d = self.num[0]
            self._table = tuple(Fraction(x, d) for x in self.num)
        return self._table

    @property
    def full_mask(self) -> int:
        return (1 << len(self.ground_set)) - 1

    def index(self) -> dict[str, int]:
        if self._index is None:
            self._index = {label: i for i, label in enumerate(self.ground_set)}
        return self._index

    def mask(self, subset: Iterable[str]) -> int:
        if isinstance(subset, str):
            subset = [subset]
        idx = self.index()
        m = 0
        for label in subset:
            try:
                m |= 1 << idx[label]
            except KeyError:
                raise UnknownLabel("%r is not in the ground set %r" % (label, self.ground_set)) from None
        return m

    def subset(self, mask: int) -> tuple[str, ...]:
        return tuple(label for i, label in enumerate(self.ground_set) if mask >> i & 1)

    def value_at(self, mask: int) -> Fraction:
        return Fraction(self.num[mask], self.num[0])

    def __call__(self, subset: Iterable[str]) -> Fraction:
        return self.value_at(self.mask(subset))

    def items(self):
        """(subset labels, value) pairs in bitmask order."""
        for m, v in enumerate(self.table):
            yield self.subset(m), v

    def __eq__(self, other):
        if not isinstance(other, BinaryFunction):
            return NotImplemented
        if self.ground_set == other.ground_set:
            return self.num == other.num
        if set(self.ground_set) != set(other.ground_set) or len(self.ground_set) != len(other.ground_set):
            return False
        return reorder(other, self.ground_set).num == self.num

    def __hash__(self):
        return hash((frozenset(self.ground_set), tuple(sorted(self.num))))

    def __repr__(self):
        vals = ", ".join(str(v) for v in self.table)
        return "BinaryFunction(%r, (%s))" % (list(self.ground_set), vals)


def make_binary_function(ground_set: Sequence[str], table: Sequence) -> BinaryFunction:
    """Validate and build a binary function from a dense table in bitmask order."""
    ground_set = tuple(ground_set)
    n = len(ground_set)
    if n > MAX_ORDER:
        raise OrderTooLarge("order %d exceeds the cap of %d" % (n, MAX_ORDER))
    for label in ground_set:
        if not isinstance(label, str):
            raise TypeError("labels must be strings, got %r" % (label,))
    if len(set(ground_set)) != n:
        seen = set()
        dup = next(x for x in ground_set if x in seen or seen.add(x))
        raise DuplicateLabel("label %r appears more than once" % dup)
    table = [_to_fraction(v) for v in table]
    if len(table) != 1 << n:
        raise SizeMismatch("order %d needs a table of length %d, got %d" % (n, 1 << n, len(table)))
    if table[0] != 1:
        raise BadEmptySetValue("f(empty) must be 1, got %s" % table[0])
    lcm = 1
    for v in table:
        d = v.denominator
        lcm = lcm * d // math.gcd(lcm, d)
    num = [v.numerator * (lcm // v.denominator) for v in table]
    return BinaryFunction(ground_set, _primitive(num))


def evaluate(f: BinaryFunction, subset: Iterable[str]) -> Fraction:
    return f(subset)


@dataclass(frozen=True)
class MinorSpec:
    """A disjoint (contract, delete) pair naming the minor f/C\\D."""

    contract_set: frozenset = frozenset()
    delete_set: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "contract_set", frozenset(self.contract_set))
        object.__setattr__(self, "delete_set", frozenset(self.delete_set))
        overlap = self.contract_set & self.delete_set
        if overlap:
            raise BadMinorSpec("contract and delete sets overlap on %s" % sorted(overlap))

    @property
    def is_improper(self) -> bool:
        return not self.contract_set and not self.delete_set

    @property
    def size(self) -> int:
        return len(self.contract_set) + len(self.delete_set)

    def sort_key(self):
        return (sorted(self.contract_set), sorted(self.delete_set))

    def __str__(self):
        return "/{%s}\\{%s}" % (",".join(sorted(self.contract_set)), ",".join(sorted(self.delete_set)))


@lru_cache(maxsize=1 << 14)
def minor_plan(n: int, cmask: int, dmask: int):
    """Index plan for f/C\\D on an order-n function.

    Returns ``(keep, fulls, subs)``: the surviving positions, the full mask
    of each compact result subset, and all submasks of the delete mask.
    """
    keep = tuple(i for i in range(n) if not (cmask | dmask) >> i & 1)
    fulls = [0]
    for i in keep:
        bit = 1 << i
        fulls += [m | bit for m in fulls]
    subs = [0]
    for i in range(n):
        if dmask >> i & 1:
            bit = 1 << i
            subs += [m | bit for m in subs]
    return keep, tuple(fulls), tuple(subs)


def minor_numerators(num: Sequence[int], n: int, cmask: int, dmask: int) -> Optional[tuple[int, ...]]:
    """Numerator vector of f/C\\D, or None if the deletion is undefined.

    The result is not reduced; out[0] is the (possibly negative) denominator
    sum over subsets of D.
    """
    _, fulls, subs = minor_plan(n, cmask, dmask)
    if len(subs) == 1:
        return tuple([num[m] for m in fulls])
    out = tuple([sum([num[m | z] for z in subs]) for m in fulls])
    if out[0] == 0:
        return None
    return out


def _masks_of(f: BinaryFunction, contract_set, delete_set) -> tuple[int, int]:
    cmask = f.mask(contract_set)
    dmask = f.mask(delete_set)
    if cmask & dmask:
        raise BadMinorSpec("contract and delete sets overlap")
    return cmask, dmask


def minor_by_masks(f: BinaryFunction, cmask: int, dmask: int) -> Optional[BinaryFunction]:
    n = len(f.ground_set)
    out = minor_numerators(f.num, n, cmask, dmask)
    if out is None:
        return None
    keep = minor_plan(n, cmask, dmask)[0]
    return BinaryFunction(tuple(f.ground_set[i] for i in keep), _primitive(out))


def minor(f: BinaryFunction, spec: MinorSpec) -> BinaryFunction:
    """f/C\\D computed in one shot: contract C, then delete D with denominator S(D)."""
    cmask, dmask = _masks_of(f, spec.contract_set, spec.delete_set)
    g = minor_by_masks(f, cmask, dmask)
    if g is None:
        raise UndefinedMinor(f.subset(dmask))
    return g


def contract(f: BinaryFunction, subset: Iterable[str]) -> BinaryFunction:
    return minor_by_masks(f, f.mask(subset), 0)


def delete(f: BinaryFunction, subset: Iterable[str]) -> BinaryFunction:
    dmask = f.mask(subset)
    g = minor_by_masks(f, 0, dmask)
    if g is None:
        raise UndefinedMinor(f.subset(dmask))
    return g


def relabel(f: BinaryFunction, mapping) -> BinaryFunction:
    """Rename ground-set labels; the table (and label order) is unchanged."""
    labels = tuple(mapping[x] for x in f.ground_set)
    if len(set(labels)) != len(labels):
        raise DuplicateLabel("relabelling is not injective")
    return BinaryFunction(labels, f.num)


def permuted_numerators(num: Sequence[int], perm: Sequence[int]) -> tuple[int, ...]:
    """Table of g where bit i of g's index means original position perm[i]."""
    fulls = [0]
    for p in perm:
        bit = 1 << p
        fulls += [m | bit for m in fulls]
    return tuple([num[m] for m in fulls])


def reorder(f: BinaryFunction, ground_set: Sequence[str]) -> BinaryFunction:
    """The same set function with its ground set listed in a different order."""
    idx = f.index()
    try:
        perm = [idx[x] for x in ground_set]
    except KeyError as exc:
        raise UnknownLabel(str(exc)) from None
    if len(perm) != len(f.ground_set) or len(set(perm)) != len(perm):
        raise BadMinorSpec("new ordering must list every label exactly once")
    return BinaryFunction(tuple(ground_set), permuted_numerators(f.num, perm))


def cardinality_profile(num: Sequence[int], n: int) -> tuple:
    """Sorted numerators per subset size; an isomorphism invariant."""
    buckets = [[] for _ in range(n + 1)]
    for m, v in enumerate(num):
        buckets[popcount(m)].append(v)
    return tuple(tuple(sorted(b)) for b in buckets)


def canonical_numerators(num: Sequence[int], n: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Least table over all orderings, with one ordering attaining it.

    Branch and bound over positions: once positions 0..j-1 are fixed, the
    table entries with index < 2^j are fixed too, so each new position is
    chosen to minimise the next block of 2^j entries.  All ties are kept.
    Numerators share a positive denominator, so integer order is value order.
    """
    if n < 2:
        return tuple(num), tuple(range(n))
    cands = [((), (0,))]
    for _ in range(n):
        best = None
        nxt = []
        for perm, fulls in cands:
            for e in range(n):
                if e in perm:
                    continue
                bit = 1 << e
                ext = [m | bit for m in fulls]
                block = [num[m] for m in ext]
                if best is None or block < best:
                    best = block
                    nxt = [(perm + (e,), fulls + tuple(ext))]
                elif block == best:
                    nxt.append((perm + (e,), fulls + tuple(ext)))
        cands = nxt
    perm, fulls = cands[0]
    return tuple([num[m] for m in fulls]), perm


def canonical_form(f: BinaryFunction) -> BinaryFunction:
    """Lexicographically least relabelled table, on the labels a, b, c, ...

    Cost grows like n! for highly symmetric functions; fine up to order 8.
    """
    table, _ = canonical_numerators(f.num, len(f.ground_set))
    return BinaryFunction(default_labels(len(f.ground_set)), table)


def is_isomorphic(f: BinaryFunction, g: BinaryFunction) -> Optional[dict[str, str]]:
    """A bijection phi with f(X) = g(phi(X)) for all X, or None."""
    n = len(f.ground_set)
    if n != len(g.ground_set) or f.num[0] != g.num[0]:
        return None
    if cardinality_profile(f.num, n) != cardinality_profile(g.num, n):
        return None
    tf, pf = canonical_numerators(f.num, n)
    tg, pg = canonical_numerators(g.num, n)
    if tf != tg:
        return None
    return {f.ground_set[pf[i]]: g.ground_set[pg[i]] for i in range(n)}
