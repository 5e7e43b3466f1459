"""Subset sums, stability, rankability and the rank transform.

S(X) = sum of f(Y) over Y subset of X.  Every deletion denominator that can
arise in a minor f/C\\D is S(D) (contraction leaves surviving values alone),
so f is stable iff S never vanishes, and rankable iff S is positive.

The rank transform is Qf(X) = log2(S(E) / S(E\\X)).  Ranks are kept as exact
ratios; the base-2 logarithm is extracted only when the ratio is a power of 2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .core import (
    BinaryFunction,
    MinorSpec,
    _primitive,
    _to_fraction,
    minor_numerators,
    minor_plan,
)
from .errors import BadEmptySetValue, NonIntegerRank, NotRankable, SizeMismatch, UnknownLabel

__all__ = [
    "SubsetSumTable",
    "RankValue",
    "RankFunction",
    "zeta",
    "mobius",
    "subset_sums",
    "mobius_invert",
    "is_stable",
    "is_rankable",
    "rank",
    "rank_function",
    "from_rank_function",
    "rank_minor_identities_all",
    "check_rank_minor_identities",
    "stepwise_defined",
    "exact_log2",
]


def zeta(values: Sequence, n: int) -> list:
    """In-place style sweep: n * 2^(n-1) additions."""
    out = list(values)
    step = 1
    for _ in range(n):
        for m in range(len(out)):
            if m & step:
                out[m] += out[m ^ step]
        step <<= 1
    return out


def mobius(values: Sequence, n: int) -> list:
    out = list(values)
    step = 1
    for _ in range(n):
        for m in range(len(out)):
            if m & step:
                out[m] -= out[m ^ step]
        step <<= 1
    return out


class SubsetSumTable:
    """S(X) for every subset X, in bitmask order over ``ground_set``."""

    __slots__ = ("ground_set", "values")

    def __init__(self, ground_set: Sequence[str], values: Sequence):
        self.ground_set = tuple(ground_set)
        vals = tuple(_to_fraction(v) for v in values)
        if len(vals) != 1 << len(self.ground_set):
            raise SizeMismatch("subset-sum table has the wrong length")
        self.values = vals

    def __getitem__(self, mask: int) -> Fraction:
        return self.values[mask]

    def __eq__(self, other):
        if not isinstance(other, SubsetSumTable):
            return NotImplemented
        return self.ground_set == other.ground_set and self.values == other.values

    def __repr__(self):
        return "SubsetSumTable(%r, (%s))" % (list(self.ground_set), ", ".join(map(str, self.values)))


def _scaled_sums(f: BinaryFunction) -> list[int]:
    # S scaled by the denominator num[0] > 0: signs and ratios are preserved
    return zeta(f.num, len(f.ground_set))


def subset_sums(f: BinaryFunction) -> SubsetSumTable:
    d = f.num[0]
    return SubsetSumTable(f.ground_set, [Fraction(s, d) for s in _scaled_sums(f)])


def mobius_invert(S: SubsetSumTable) -> BinaryFunction:
    """The binary function whose subset sums are S."""
    if S.values[0] != 1:
        raise BadEmptySetValue("S(empty) must be 1, got %s" % S.values[0])
    n = len(S.ground_set)
    lcm = 1
    for v in S.values:
        lcm = lcm * v.denominator // math.gcd(lcm, v.denominator)
    ints = [v.numerator * (lcm // v.denominator) for v in S.values]
    return BinaryFunction(S.ground_set, _primitive(mobius(ints, n)))


def is_stable(f: BinaryFunction) -> bool:
    return all(_scaled_sums(f))


def is_rankable(f: BinaryFunction) -> bool:
    return min(_scaled_sums(f)) > 0


def exact_log2(ratio: Fraction) -> Optional[int]:
    """k with ratio == 2**k, or None."""
    p, q = ratio.numerator, ratio.denominator
    if p <= 0 or p & (p - 1) or q & (q - 1):
        return None
    return p.bit_length() - q.bit_length()


@dataclass(frozen=True)
class RankValue:
    """Qf(X) held as the exact ratio numerator/denominator = S(E)/S(E\\X)."""

    numerator: Fraction
    denominator: Fraction
    integer_log: Optional[int]

    def __post_init__(self):
        if self.numerator <= 0 or self.denominator <= 0:
            raise NotRankable("rank ratio parts must be positive")

    @property
    def ratio(self) -> Fraction:
        return self.numerator / self.denominator

    def log2(self) -> float:
        """Floating value for display only."""
        r = self.ratio
        return math.log2(r.numerator) - math.log2(r.denominator)

    def __str__(self):
        if self.integer_log is not None:
            return str(self.integer_log)
        return "log2(%s)" % self.ratio


def _rank_value(top: int, bottom: int, scale: int) -> RankValue:
    ratio = Fraction(top, bottom)
    return RankValue(Fraction(top, scale), Fraction(bottom, scale), exact_log2(ratio))


def rank(f: BinaryFunction, subset: Iterable[str]) -> RankValue:
    xmask = f.mask(subset)
    s = _scaled_sums(f)
    full = f.full_mask
    top, bottom = s[full], s[full ^ xmask]
    if top <= 0 or bottom <= 0:
        raise NotRankable("S(E) = %s and S(E\\X) = %s must both be positive"
                          % (Fraction(top, f.num[0]), Fraction(bottom, f.num[0])))
    return _rank_value(top, bottom, f.num[0])


class RankFunction:
    """Qf on every subset; ``values[mask]`` is a RankValue."""

    __slots__ = ("ground_set", "values", "_index")

    def __init__(self, ground_set: Sequence[str], values: Sequence[RankValue]):
        self.ground_set = tuple(ground_set)
        self.values = tuple(values)
        self._index = {x: i for i, x in enumerate(self.ground_set)}

    def mask(self, subset) -> int:
        if isinstance(subset, str):
            subset = [subset]
        m = 0
        for x in subset:
            if x not in self._index:
                raise UnknownLabel(x)
            m |= 1 << self._index[x]
        return m

    def __call__(self, subset) -> RankValue:
        return self.values[self.mask(subset)]

    def integer_values(self) -> Optional[tuple[int, ...]]:
        """The ranks as integers, or None if some rank is not an integer."""
        logs = tuple(v.integer_log for v in self.values)
        return None if None in logs else logs

    def __repr__(self):
        return "RankFunction(%r, (%s))" % (list(self.ground_set), ", ".join(map(str, self.values)))


def rank_function(f: BinaryFunction) -> RankFunction:
    s = _scaled_sums(f)
    if min(s) <= 0:
        bad = next(m for m, v in enumerate(s) if v <= 0)
        raise NotRankable("S(%s) = %s is not positive" % (set(f.subset(bad)) or "{}", Fraction(s[bad], f.num[0])))
    full = f.full_mask
    top = s[full]
    d = f.num[0]
    return RankFunction(f.ground_set, [_rank_value(top, s[full ^ m], d) for m in range(len(s))])


def from_rank_function(rho, values: Optional[Sequence] = None) -> BinaryFunction:
    """A binary function f with Qf = rho, for integer-valued rho with rho(empty) = 0.

    Call as ``from_rank_function(ground_set, values)`` with values in bitmask
    order, or pass any object with ``ground_set`` and ``values`` attributes
    (e.g. a MatroidRank).
    """
    if values is None:
        ground_set, values = rho.ground_set, rho.values
    else:
        ground_set = rho
    ground_set = tuple(ground_set)
    n = len(ground_set)
    if len(values) != 1 << n:
        raise SizeMismatch("rank table needs %d entries, got %d" % (1 << n, len(values)))
    ints = []
    for v in values:
        if isinstance(v, bool):
            raise NonIntegerRank("boolean rank value")
        try:
            fv = _to_fraction(v)
        except (TypeError, ValueError):
            raise NonIntegerRank("rank values must be integers, got %r" % (v,)) from None
        if fv.denominator != 1:
            raise NonIntegerRank("rank values must be integers, got %s" % fv)
        ints.append(fv.numerator)
    if ints[0] != 0:
        raise BadEmptySetValue("rho(empty) must be 0, got %d" % ints[0])
    full = (1 << n) - 1
    top = ints[full]
    # S(X) = 2^(rho(E) - rho(E\X)), scaled by 2^shift to stay integral
    exps = [top - ints[full ^ m] for m in range(1 << n)]
    shift = -min(exps)
    sums = [1 << (e + shift) for e in exps]
    return BinaryFunction(ground_set, _primitive(mobius(sums, n)))


def check_rank_minor_identities(f: BinaryFunction, spec: MinorSpec) -> bool:
    """Check Q(f/C\\D)(Y) = Qf(Y u C) - Qf(C) for every Y in the minor's ground set.

    With D empty this is the contraction identity, with C empty it reduces to
    Q(f\\D)(Y) = Qf(Y).  Compared as exact S-ratios by cross-multiplication:
    S_g(E')/S_g(E'\\Y) == S(E\\C)/S(E\\(C u Y)).
    """
    s = _rankable_sums(f)
    return _identities_hold(f.num, len(f.ground_set), s, f.mask(spec.contract_set), f.mask(spec.delete_set))


def rank_minor_identities_all(f: BinaryFunction) -> Optional[tuple[int, int]]:
    """Check the identities for all 3^n specs; the first failing (C, D) masks or None."""
    from .minors import spec_masks

    s = _rankable_sums(f)
    n = len(f.ground_set)
    for cmask, dmask in spec_masks(n):
        if not _identities_hold(f.num, n, s, cmask, dmask):
            return cmask, dmask
    return None


def _rankable_sums(f: BinaryFunction) -> list:
    s = _scaled_sums(f)
    if min(s) <= 0:
        raise NotRankable("identities need a rankable function")
    return s


def _identities_hold(num, n: int, s, cmask: int, dmask: int) -> bool:
    g = minor_numerators(num, n, cmask, dmask)
    if g is None:
        return False
    keep, fulls, _ = minor_plan(n, cmask, dmask)
    if g[0] < 0:
        g = [-x for x in g]
    sg = zeta(g, len(keep))
    gfull = len(fulls) - 1
    top_g = sg[gfull]
    rest = ((1 << n) - 1) ^ cmask
    base = s[rest]
    for y, ym in enumerate(fulls):
        # S_g(E'\Y) * S(E\C) == S_g(E') * S(E\(C u Y))
        if sg[gfull ^ y] * base != top_g * s[rest ^ ym]:
            return False
    return True


def stepwise_defined(f: BinaryFunction, spec: MinorSpec, order: Optional[Sequence[str]] = None) -> bool:
    """Oracle: apply the operations one element at a time (contractions first,
    then deletions in ``order``) and report whether every step is defined."""
    labels = list(f.ground_set)
    num = f.num
    for x in sorted(spec.contract_set, key=labels.index):
        i = labels.index(x)
        num = minor_numerators(num, len(labels), 1 << i, 0)
        labels.pop(i)
    dels = list(order) if order is not None else sorted(spec.delete_set, key=labels.index)
    for x in dels:
        i = labels.index(x)
        num = minor_numerators(num, len(labels), 0, 1 << i)
        if num is None:
            return False
        labels.pop(i)
    return True
