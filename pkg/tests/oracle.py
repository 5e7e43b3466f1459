"""Naive reference implementations used as test oracles.

Functions here are dicts from frozenset to Fraction and every quantity is
computed straight from its definition: no bitmasks, no transforms, no
shared code with the package.
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import chain, combinations, permutations


def subsets(s):
    s = sorted(s)
    return [frozenset(c) for c in chain.from_iterable(combinations(s, r) for r in range(len(s) + 1))]


def as_dict(f) -> dict:
    """Package BinaryFunction -> {frozenset: Fraction}."""
    return {frozenset(labels): Fraction(v) for labels, v in f.items()}


def ground(d) -> frozenset:
    return max(d, key=len)


def S(d, x) -> Fraction:
    return sum((d[y] for y in subsets(x)), Fraction(0))


def contract(d, x):
    rest = ground(d) - x
    return {y: d[y] for y in subsets(rest)}


def delete(d, x):
    """None when the denominator vanishes."""
    den = S(d, x)
    if den == 0:
        return None
    rest = ground(d) - x
    return {y: sum((d[y | z] for z in subsets(x)), Fraction(0)) / den for y in subsets(rest)}


def minor(d, c, dl):
    g = contract(d, frozenset(c))
    return delete(g, frozenset(dl))


def all_minors(d):
    """(C, D, minor-or-None) for every disjoint pair."""
    e = sorted(ground(d))
    out = []
    for assign in _assignments(len(e)):
        c = frozenset(x for x, a in zip(e, assign) if a == 1)
        dl = frozenset(x for x, a in zip(e, assign) if a == 2)
        out.append((c, dl, minor(d, c, dl)))
    return out


def _assignments(n):
    if n == 0:
        yield ()
        return
    for rest in _assignments(n - 1):
        for a in (0, 1, 2):
            yield rest + (a,)


def is_stable(d) -> bool:
    return all(m is not None for _, _, m in all_minors(d))


def rank_ratio(d, x):
    """S(E)/S(E\\X), or None if either is nonpositive."""
    e = ground(d)
    top, bot = S(d, e), S(d, e - x)
    if top <= 0 or bot <= 0:
        return None
    return top / bot


def int_log2(r: Fraction):
    if r <= 0 or r.numerator & (r.numerator - 1) or r.denominator & (r.denominator - 1):
        return None
    return int(math.log2(r.numerator)) - int(math.log2(r.denominator))


def ranks(d):
    """{X: integer rank} if every rank is an integer, else None."""
    out = {}
    for x in subsets(ground(d)):
        r = rank_ratio(d, x)
        if r is None or int_log2(r) is None:
            return None
        out[x] = int_log2(r)
    return out


def is_linear(d) -> bool:
    if any(v not in (0, 1) for v in d.values()):
        return False
    support = {x for x, v in d.items() if v == 1}
    return all((x ^ y) in support for x in support for y in support)


def is_polymatroid_rank(rho, k) -> bool:
    e = max(rho, key=len)
    for x in rho:
        if rho[x] < 0 or rho[x] > k * len(x):
            return False
    for x in rho:
        for y in rho:
            if x <= y and rho[x] > rho[y]:
                return False
            if rho[x | y] + rho[x & y] > rho[x] + rho[y]:
                return False
    return rho[frozenset()] == 0 and e is not None


def is_k_polymatroidal(d, k) -> bool:
    r = ranks(d)
    return r is not None and is_polymatroid_rank(r, k)


def from_rank(rho):
    """Mobius inversion of S(X) = 2^(rho(E) - rho(E\\X)) by the alternating sum."""
    e = max(rho, key=len)
    s = {x: Fraction(2) ** (rho[e] - rho[e - x]) for x in rho}
    return {x: sum(((-1) ** len(x - y) * s[y] for y in subsets(x)), Fraction(0)) for x in rho}


def isomorphic(d1, d2):
    e1, e2 = sorted(ground(d1)), sorted(ground(d2))
    if len(e1) != len(e2):
        return None
    for p in permutations(e2):
        phi = dict(zip(e1, p))
        if all(d2[frozenset(phi[a] for a in x)] == v for x, v in d1.items()):
            return phi
    return None


def has_minor_iso(host, pattern) -> bool:
    m = len(ground(pattern))
    for c, dl, g in all_minors(host):
        if g is not None and len(ground(g)) == m and isomorphic(g, pattern) is not None:
            return True
    return False


def canonical_table(d):
    """Lexicographically least value vector over all orderings, in bitmask order."""
    e = sorted(ground(d))
    best = None
    for p in permutations(e):
        vec = tuple(d[frozenset(p[i] for i in range(len(p)) if m >> i & 1)] for m in range(1 << len(p)))
        if best is None or vec < best:
            best = vec
    return best


def gf2_rank(vectors) -> int:
    rows = [int("".join(map(str, v)), 2) if not isinstance(v, int) else v for v in vectors]
    r = 0
    rows = [x for x in rows if x]
    while rows:
        pivot = max(rows)
        top = pivot.bit_length() - 1
        rows = [x ^ pivot if x >> top & 1 else x for x in rows if x != pivot]
        rows = [x for x in rows if x]
        r += 1
    return r
