"""Class membership (linear, k-polymatroidal, matroidal), the named
excluded-minor families, and small matroid rank oracles."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Optional, Sequence

from .core import BinaryFunction, _to_fraction, default_labels, make_binary_function, popcount
from .errors import BadParameters, DimensionMismatch, NotAMatroid
from .rank import exact_log2, from_rank_function, zeta

__all__ = [
    "ClassId",
    "STABLE",
    "RANKABLE",
    "LINEAR",
    "MATROIDAL",
    "AxiomViolation",
    "MatroidRank",
    "is_linear",
    "linear_violations",
    "check_polymatroid",
    "is_polymatroidal",
    "is_matroidal",
    "least_polymatroid_k",
    "class_violations",
    "in_class",
    "family_f_alpha",
    "family_f_abc",
    "family_f_u24",
    "polymatroid_triples",
    "uniform_matroid_rank",
    "gf2_matroid_rank",
    "gf2_rank",
    "graphic_matroid_rank",
    "relax",
    "fano_rank",
    "non_fano_rank",
]


@dataclass(frozen=True)
class ClassId:
    """One of the minor-closed classes.  Matroidal is Polymatroidal(1)."""

    kind: str
    k: Optional[int] = None

    KINDS = ("stable", "rankable", "linear", "polymatroidal")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise BadParameters("unknown class %r" % self.kind)
        if self.kind == "polymatroidal":
            if not isinstance(self.k, int) or self.k < 1:
                raise BadParameters("polymatroidal needs a positive integer k")
        elif self.k is not None:
            raise BadParameters("only polymatroidal takes k")

    @classmethod
    def polymatroidal(cls, k: int) -> "ClassId":
        return cls("polymatroidal", k)

    @classmethod
    def parse(cls, name: str, k: Optional[int] = None) -> "ClassId":
        """'stable', 'rankable', 'linear', 'matroidal', 'polymatroidal' (+k)
        or the compact 'polymatroidal:3'."""
        name = name.strip().lower()
        if ":" in name:
            name, _, kk = name.partition(":")
            k = int(kk)
        if name == "matroidal":
            return cls("polymatroidal", 1)
        if name == "polymatroidal":
            return cls("polymatroidal", 2 if k is None else k)
        return cls(name)

    def __str__(self):
        if self.kind == "polymatroidal":
            return "matroidal" if self.k == 1 else "polymatroidal:%d" % self.k
        return self.kind

    def contains(self, f: BinaryFunction) -> bool:
        return in_class(f, self)


STABLE = ClassId("stable")
RANKABLE = ClassId("rankable")
LINEAR = ClassId("linear")
MATROIDAL = ClassId("polymatroidal", 1)


@dataclass(frozen=True)
class AxiomViolation:
    """A failed axiom with its witness.

    ``axiom`` is R0..R3 or NotRankable for the polymatroid check; the other
    class predicates use Unstable, NonBinaryValue and NotClosed.
    ``subset`` is the X of the axiom, ``elements`` the e (R2) or a, b (R3)
    or, for NotClosed, the second support set Y.
    """

    axiom: str
    subset: tuple
    elements: tuple = ()
    detail: dict = field(default_factory=dict, compare=False)

    def to_dict(self) -> dict:
        return {
            "axiom": self.axiom,
            "subset": list(self.subset),
            "elements": list(self.elements),
            "detail": {k: str(v) for k, v in self.detail.items()},
        }

    def confirm(self, f: BinaryFunction, k: Optional[int] = None) -> bool:
        """Re-evaluate the witness on f from scratch."""
        x = f.mask(self.subset)
        if self.axiom in ("NotRankable", "Unstable"):
            total = sum(f.value_at(m) for m in range(x + 1) if m & x == m)
            return total <= 0 if self.axiom == "NotRankable" else total == 0
        if self.axiom == "NonBinaryValue":
            return f.value_at(x) not in (0, 1)
        if self.axiom == "NotClosed":
            y = f.mask(self.elements)
            return f.value_at(x) == 1 and f.value_at(y) == 1 and f.value_at(x ^ y) != 1
        q = _ratio_oracle(f)
        if self.axiom == "R0":
            log = exact_log2(q(x))
            return log is None or log < 0
        if self.axiom == "R1":
            return q(x) > Fraction(2) ** (k * popcount(x))
        if self.axiom == "R2":
            return q(x) > q(x | f.mask(self.elements))
        if self.axiom == "R3":
            a, b = (f.mask([e]) for e in self.elements)
            return q(x) * q(x | a | b) > q(x | a) * q(x | b)
        raise ValueError(self.axiom)


def _ratio_oracle(f: BinaryFunction):
    # 2^Qf(X) by direct summation, no transform involved
    full = f.full_mask

    def S(x):
        return sum(f.value_at(m) for m in range(x + 1) if m & x == m)

    top = S(full)
    return lambda x: top / S(full ^ x)


def _xor_rank(vectors) -> int:
    basis = []
    for v in vectors:
        for b in basis:
            v = min(v, v ^ b)
        if v:
            basis.append(v)
    return len(basis)


def linear_violations(f: BinaryFunction) -> list[AxiomViolation]:
    d = f.num[0]
    for m, v in enumerate(f.num):
        if v != 0 and v != d:
            return [AxiomViolation("NonBinaryValue", f.subset(m), detail={"value": Fraction(v, d)})]
    support = [m for m, v in enumerate(f.num) if v]
    if 1 << _xor_rank(support) == len(support):
        return []
    inside = set(support)
    for x, y in combinations(support, 2):
        if x ^ y not in inside:
            return [AxiomViolation("NotClosed", f.subset(x), f.subset(y),
                                   detail={"symmetric_difference": ",".join(f.subset(x ^ y))})]
    raise AssertionError("support rank and closure disagree")  # pragma: no cover


def is_linear(f: BinaryFunction) -> bool:
    """{0,1}-valued with support closed under symmetric difference."""
    d = f.num[0]
    support = []
    for m, v in enumerate(f.num):
        if v:
            if v != d:
                return False
            support.append(m)
    # the support contains the empty set, so closure <=> it is its own GF(2) span
    return 1 << _xor_rank(support) == len(support)


def check_polymatroid(f: BinaryFunction, k: int) -> list[AxiomViolation]:
    """All failed axioms (at most one witness each), empty iff f is k-polymatroidal.

    With s(X) = S(E\\X) > 0 and T = S(E), 2^Qf(X) = T / s(X), so every axiom
    becomes an exact integer comparison:
      R0: T/s(X) is 2^j with j >= 0
      R1: T <= 2^(k|X|) s(X)
      R2: s(X u e) <= s(X)
      R3: s(X u a) s(X u b) <= s(X) s(X u a u b)
    """
    if k < 1:
        raise BadParameters("k must be a positive integer")
    n = len(f.ground_set)
    d = f.num[0]
    S = zeta(f.num, n)
    full = (1 << n) - 1
    if min(S) <= 0:
        bad = next(m for m, v in enumerate(S) if v <= 0)
        return [AxiomViolation("NotRankable", f.subset(bad), detail={"subset_sum": Fraction(S[bad], d)})]
    T = S[full]
    s = [S[full ^ m] for m in range(full + 1)]
    out = []
    for x in range(full + 1):
        r = Fraction(T, s[x])
        j = exact_log2(r)
        if j is None or j < 0:
            out.append(AxiomViolation("R0", f.subset(x), detail={"ratio": r}))
            break
    for x in range(full + 1):
        if T > s[x] << (k * popcount(x)):
            out.append(AxiomViolation("R1", f.subset(x), detail={"ratio": Fraction(T, s[x]), "bound": 2 ** (k * popcount(x))}))
            break
    r2 = None
    for x in range(full + 1):
        for e in range(n):
            if not x >> e & 1 and s[x | 1 << e] > s[x]:
                r2 = AxiomViolation("R2", f.subset(x), f.subset(1 << e),
                                    detail={"ratio_X": Fraction(T, s[x]), "ratio_Xe": Fraction(T, s[x | 1 << e])})
                break
        if r2:
            out.append(r2)
            break
    r3 = None
    for x in range(full + 1):
        free = [1 << e for e in range(n) if not x >> e & 1]
        for a, b in combinations(free, 2):
            if s[x | a] * s[x | b] > s[x] * s[x | a | b]:
                r3 = AxiomViolation("R3", f.subset(x), f.subset(a) + f.subset(b),
                                    detail={"lhs": Fraction(T, s[x]) * Fraction(T, s[x | a | b]),
                                            "rhs": Fraction(T, s[x | a]) * Fraction(T, s[x | b])})
                break
        if r3:
            out.append(r3)
            break
    return out


def is_polymatroidal(f: BinaryFunction, k: int) -> bool:
    return not check_polymatroid(f, k)


def is_matroidal(f: BinaryFunction) -> bool:
    return not check_polymatroid(f, 1)


def least_polymatroid_k(f: BinaryFunction) -> Optional[int]:
    """Smallest k >= 1 with f in M_k, or None if f is in no M_k."""
    violations = check_polymatroid(f, 1)
    if not violations:
        return 1
    if any(v.axiom != "R1" for v in violations):
        return None
    n = len(f.ground_set)
    S = zeta(f.num, n)
    full = (1 << n) - 1
    k = 1
    for x in range(1, full + 1):
        q = exact_log2(Fraction(S[full], S[full ^ x]))
        c = popcount(x)
        k = max(k, -(-q // c))
    return k


def class_violations(f: BinaryFunction, cls: ClassId) -> list[AxiomViolation]:
    if cls.kind == "polymatroidal":
        return check_polymatroid(f, cls.k)
    if cls.kind == "linear":
        return linear_violations(f)
    S = zeta(f.num, len(f.ground_set))
    d = f.num[0]
    if cls.kind == "stable":
        for m, v in enumerate(S):
            if v == 0:
                return [AxiomViolation("Unstable", f.subset(m), detail={"subset_sum": 0})]
        return []
    for m, v in enumerate(S):
        if v <= 0:
            return [AxiomViolation("NotRankable", f.subset(m), detail={"subset_sum": Fraction(v, d)})]
    return []


def in_class(f: BinaryFunction, cls: ClassId) -> bool:
    kind = cls.kind
    if kind == "linear":
        return is_linear(f)
    if kind == "polymatroidal":
        return not check_polymatroid(f, cls.k)
    S = zeta(f.num, len(f.ground_set))
    if kind == "stable":
        return all(S)
    return min(S) > 0


def family_f_alpha(alpha, label: str = "e") -> BinaryFunction:
    """The order-one function with value alpha on its single element."""
    return make_binary_function([label], [1, _to_fraction(alpha)])


def family_f_abc(alpha: int, beta: int, gamma: int, labels: Sequence[str] = ("a", "b")) -> BinaryFunction:
    """The order-two excluded minor of M_k with Qf = (0, alpha, beta, alpha+gamma+1).

    Any k > gamma makes it an excluded minor; the caller enforces gamma <= k-1.
    """
    for v in (alpha, beta, gamma):
        if isinstance(v, bool) or not isinstance(v, int):
            raise BadParameters("parameters must be integers")
    if not 0 <= alpha <= beta <= gamma:
        raise BadParameters("need 0 <= alpha <= beta <= gamma, got (%d, %d, %d)" % (alpha, beta, gamma))
    fa = 2 ** (alpha + gamma - beta + 1) - 1
    fb = 2 ** (gamma + 1) - 1
    fab = 2 ** (alpha + gamma + 1) - 2 ** (gamma + 1) - 2 ** (alpha + gamma - beta + 1) + 1
    return make_binary_function(labels, [1, fa, fb, fab])


def polymatroid_triples(k: int) -> list[tuple[int, int, int]]:
    """All integer triples 0 <= alpha <= beta <= gamma <= k-1."""
    return [(a, b, c) for c in range(k) for b in range(c + 1) for a in range(b + 1)]


def family_f_u24(labels: Sequence[str] = ("a", "b", "c", "d")) -> BinaryFunction:
    by_size = {0: 1, 1: 0, 2: 0, 3: 1, 4: -1}
    return make_binary_function(labels, [by_size[popcount(m)] for m in range(16)])


class MatroidRank:
    """A validated matroid rank oracle: ``values[mask]`` is the rank of that subset."""

    __slots__ = ("ground_set", "values", "name")

    def __init__(self, ground_set: Sequence[str], values: Sequence[int], name: str = ""):
        self.ground_set = tuple(ground_set)
        self.values = tuple(values)
        self.name = name
        n = len(self.ground_set)
        if len(set(self.ground_set)) != n:
            raise BadParameters("duplicate labels")
        if len(self.values) != 1 << n:
            raise BadParameters("rank table needs %d entries" % (1 << n))
        problem = _matroid_axiom_failure(self.values, n)
        if problem:
            raise NotAMatroid(problem)

    def __call__(self, subset) -> int:
        idx = {x: i for i, x in enumerate(self.ground_set)}
        if isinstance(subset, str):
            subset = [subset]
        return self.values[sum(1 << idx[x] for x in subset)]

    @property
    def rank(self) -> int:
        return self.values[-1]

    def binary_function(self) -> BinaryFunction:
        return from_rank_function(self)

    def __repr__(self):
        return "MatroidRank(%s%r, rank=%d)" % (self.name + " " if self.name else "", list(self.ground_set), self.rank)


def _matroid_axiom_failure(r: Sequence[int], n: int) -> Optional[str]:
    full = (1 << n) - 1
    for x in range(full + 1):
        v = r[x]
        if not isinstance(v, int) or isinstance(v, bool) or v < 0:
            return "R0 fails at mask %d" % x
        if v > popcount(x):
            return "R1 fails at mask %d" % x
        for e in range(n):
            bit = 1 << e
            if not x & bit and r[x | bit] < v:
                return "R2 fails at mask %d, element %d" % (x, e)
        free = [1 << e for e in range(n) if not x >> e & 1]
        for a, b in combinations(free, 2):
            if v + r[x | a | b] > r[x | a] + r[x | b]:
                return "R3 fails at mask %d" % x
    return None


def _labels(n, labels):
    if labels is None:
        return default_labels(n)
    labels = tuple(labels)
    if len(labels) != n:
        raise BadParameters("need %d labels, got %d" % (n, len(labels)))
    return labels


def uniform_matroid_rank(r: int, n: int, labels: Optional[Sequence[str]] = None) -> MatroidRank:
    if not (isinstance(r, int) and isinstance(n, int)) or r < 0 or n < 1 or r > n:
        raise BadParameters("uniform matroid needs 0 <= r <= n and n >= 1")
    return MatroidRank(_labels(n, labels), [min(r, popcount(m)) for m in range(1 << n)], name="U%d,%d" % (r, n))


def _as_bits(col) -> int:
    if isinstance(col, int):
        return col
    v = 0
    for i, bit in enumerate(col):
        if bit in ("0", "1"):
            bit = int(bit)
        if bit not in (0, 1):
            raise BadParameters("GF(2) entries must be 0 or 1")
        v |= bit << i
    return v


def gf2_rank(vectors) -> int:
    """Rank over GF(2) of integer-encoded vectors (Gaussian elimination by XOR)."""
    return _xor_rank(vectors)


def gf2_matroid_rank(columns: Sequence, labels: Optional[Sequence[str]] = None, name: str = "") -> MatroidRank:
    """Column matroid of a 0/1 matrix over GF(2); one element per column.

    Columns are 0/1 sequences of a common length (or pre-packed ints).
    """
    cols = list(columns)
    lengths = {len(c) for c in cols if not isinstance(c, int)}
    if len(lengths) > 1:
        raise DimensionMismatch("columns have differing dimensions %s" % sorted(lengths))
    vecs = [_as_bits(c) for c in cols]
    n = len(vecs)
    values = [_xor_rank([vecs[i] for i in range(n) if m >> i & 1]) for m in range(1 << n)]
    return MatroidRank(_labels(n, labels), values, name=name)


def graphic_matroid_rank(edges: Sequence[tuple], labels: Optional[Sequence[str]] = None, name: str = "") -> MatroidRank:
    """Cycle matroid: rank(X) = touched vertices - components of (V(X), X)."""
    edges = [tuple(e) for e in edges]
    n = len(edges)
    values = []
    for m in range(1 << n):
        parent = {}

        def find(v):
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        r = 0
        for i in range(n):
            if m >> i & 1:
                u, v = edges[i]
                parent.setdefault(u, u)
                parent.setdefault(v, v)
                ru, rv = find(u), find(v)
                if ru != rv:
                    parent[ru] = rv
                    r += 1
        values.append(r)
    return MatroidRank(_labels(n, labels), values, name=name)


def relax(m: MatroidRank, circuit_hyperplane: Sequence[str], name: str = "") -> MatroidRank:
    """Relax a circuit-hyperplane H: its rank goes up by one, all else unchanged."""
    idx = {x: i for i, x in enumerate(m.ground_set)}
    h = sum(1 << idx[x] for x in circuit_hyperplane)
    if m.values[h] != m.rank - 1 or popcount(h) != m.rank:
        raise BadParameters("not a circuit-hyperplane")
    values = list(m.values)
    values[h] = m.rank
    return MatroidRank(m.ground_set, values, name=name)


_FANO_COLUMNS = [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 0), (1, 0, 1), (0, 1, 1), (1, 1, 1)]


def fano_rank(labels: Optional[Sequence[str]] = None) -> MatroidRank:
    """F7: the seven nonzero vectors of GF(2)^3."""
    return gf2_matroid_rank(_FANO_COLUMNS, labels, name="F7")


def non_fano_rank(labels: Optional[Sequence[str]] = None) -> MatroidRank:
    """F7-: F7 with the line {110, 101, 011} relaxed."""
    f7 = fano_rank(labels)
    line = [f7.ground_set[3], f7.ground_set[4], f7.ground_set[5]]
    return relax(f7, line, name="F7-")
