"""Closed-form extremal values for the matching and intersection problems.

Matching side: the maximum size of a family of k-subsets of [n] with no
ell pairwise-disjoint members is conjecturally

    max{ C(k*ell-1, k), C(n,k) - C(n-ell+1, k) }            (erdos_value)

and provably equals

    max_{1<=i<=k}  sum_{j>=i} C(ell*i-1, j) C(n-ell*i+1, k-j)

(matching_formula_value).  ``lemma2_check`` compares the two without
presuming they agree.

Intersection side: for s-wise t-intersecting families the conjectured
value is a max over Frankl-type constructions indexed by r >= 0
(intersect_value); ``section3_bound`` evaluates the wider sweep over all
prefix lengths a that the divisibility argument reduces to the r-sweep.
"""

from dataclasses import dataclass

from .errors import DomainError
from .exactmath import binom

__all__ = [
    "MatchingParams",
    "IntersectParams",
    "EqualityReport",
    "matching_term",
    "matching_formula_value",
    "erdos_value",
    "lemma2_check",
    "a_sweep_matching",
    "a_sweep_term",
    "intersect_term",
    "intersect_value",
    "section3_bound",
    "step_dominance_check",
]


@dataclass(frozen=True)
class MatchingParams:
    """Parameters (ell, n, k) of the forbidden-matching problem."""

    ell: int
    n: int
    k: int

    def __post_init__(self):
        if self.ell < 2:
            raise DomainError(f"ell must be >= 2, got {self.ell}")
        if not 1 <= self.k <= self.n:
            raise DomainError(f"need 1 <= k <= n, got k={self.k}, n={self.n}")


@dataclass(frozen=True)
class IntersectParams:
    """Parameters (s, n, k, t) of the s-wise t-intersecting problem."""

    s: int
    n: int
    k: int
    t: int

    def __post_init__(self):
        if self.s < 2:
            raise DomainError(f"s must be >= 2, got {self.s}")
        if not 1 <= self.t <= self.k <= self.n:
            raise DomainError(
                f"need 1 <= t <= k <= n, got t={self.t}, k={self.k}, n={self.n}"
            )

    @property
    def degenerate(self) -> bool:
        """Whole C(n,k) is s-wise t-intersecting when s*k >= (s-1)*n + t."""
        return self.s * self.k >= (self.s - 1) * self.n + self.t


@dataclass(frozen=True)
class EqualityReport:
    lhs: int
    rhs: int
    equal: bool
    argmax_index: int


def matching_term(p: MatchingParams, i: int) -> int:
    """Size of {A in C(n,k) : |A cap [ell*i-1]| >= i} by direct summation."""
    if not 1 <= i <= p.k:
        raise DomainError(f"i must be in [1, k], got {i}")
    a = p.ell * i - 1
    if a > p.n:
        raise DomainError(f"infeasible i={i}: ell*i-1 = {a} > n = {p.n}")
    return sum(binom(a, j) * binom(p.n - a, p.k - j) for j in range(i, p.k + 1))


def _feasible_is(p: MatchingParams):
    return [i for i in range(1, p.k + 1) if p.ell * i - 1 <= p.n]


def matching_formula_value(p: MatchingParams) -> tuple[int, int]:
    """Max of matching_term over feasible i; ties broken toward smaller i."""
    best_val, best_i = -1, 0
    for i in _feasible_is(p):
        v = matching_term(p, i)
        if v > best_val:
            best_val, best_i = v, i
    return best_val, best_i


def erdos_value(p: MatchingParams) -> int:
    """max{ C(k*ell-1, k), C(n,k) - C(n-ell+1, k) }."""
    return max(
        binom(p.k * p.ell - 1, p.k),
        binom(p.n, p.k) - binom(p.n - p.ell + 1, p.k),
    )


def lemma2_check(p: MatchingParams) -> EqualityReport:
    """Compare the i-sweep value against the two-term max; report, never assert."""
    lhs, argmax_i = matching_formula_value(p)
    rhs = erdos_value(p)
    return EqualityReport(lhs=lhs, rhs=rhs, equal=lhs == rhs, argmax_index=argmax_i)


def a_sweep_term(a: int, n: int, k: int, ell: int) -> int:
    """sum over j > a/ell of C(a,j) C(n-a,k-j)."""
    lo = a // ell + 1  # strict inequality j > a/ell
    return sum(binom(a, j) * binom(n - a, k - j) for j in range(lo, k + 1))


def a_sweep_matching(p: MatchingParams) -> tuple[int, int]:
    """Max over a in [k*ell - 1] of the a-sweep term; smallest argmax wins ties."""
    if p.k * p.ell - 1 < 1:
        raise DomainError("k*ell - 1 must be >= 1")
    best_val, best_a = -1, 0
    for a in range(1, p.k * p.ell):
        if a > p.n:
            break
        v = a_sweep_term(a, p.n, p.k, p.ell)
        if v > best_val:
            best_val, best_a = v, a
    return best_val, best_a


def intersect_term(q: IntersectParams, r: int) -> int:
    """Size of the Frankl-type family {E : |E cap [t+rs]| >= t+(s-1)r}."""
    if r < 0:
        raise DomainError(f"r must be >= 0, got {r}")
    a = q.t + r * q.s
    m = q.t + (q.s - 1) * r
    if a > q.n or m > q.k:
        raise DomainError(f"infeasible r={r}: t+rs={a} (n={q.n}), t+(s-1)r={m} (k={q.k})")
    return sum(binom(a, j) * binom(q.n - a, q.k - j) for j in range(m, q.k + 1))


def _feasible_rs(q: IntersectParams):
    return [
        r
        for r in range(0, q.k + 1)
        if q.t + r * q.s <= q.n and q.t + (q.s - 1) * r <= q.k
    ]


def intersect_value(q: IntersectParams) -> tuple[int, int]:
    """Conjectured N(s,n,k,t); (C(n,k), -1) in the degenerate regime."""
    if q.degenerate:
        return binom(q.n, q.k), -1
    best_val, best_r = -1, 0
    for r in _feasible_rs(q):
        v = intersect_term(q, r)
        if v > best_val:
            best_val, best_r = v, r
    return best_val, best_r


def section3_bound(q: IntersectParams) -> int:
    """Max over all prefix lengths a = t + s*p + r (0 <= r < s) of the tail sum.

    The prefix length is capped at min(n, k+d) with d = floor((k-t)/(s-1)):
    beyond that even whole-prefix sets cannot stay s-wise t-intersecting.
    """
    if q.degenerate:
        raise DomainError("section3_bound is defined in the non-degenerate regime only")
    d = (q.k - q.t) // (q.s - 1)
    a_cap = min(q.n, q.k + d)
    best = 0
    for p in range(0, q.k + 1):
        for r in range(0, q.s):
            a = q.t + q.s * p + r
            if a < 1 or a > a_cap:
                continue
            m = q.t + (q.s - 1) * p + r
            if m > q.k:
                continue
            v = sum(binom(a, i) * binom(q.n - a, q.k - i) for i in range(m, q.k + 1))
            best = max(best, v)
    return best


def step_dominance_check(a: int, n: int, k: int, i: int) -> bool:
    """True iff shrinking the prefix by one (and the threshold with it) never loses.

    Compares sum_{j>=i-1} C(a-1,j)C(n-a+1,k-j) against sum_{j>=i} C(a,j)C(n-a,k-j).
    """
    if not 1 <= a <= n or not 1 <= i <= k:
        raise DomainError(f"need 1 <= a <= n and 1 <= i <= k, got a={a}, n={n}, i={i}, k={k}")
    lhs = sum(binom(a - 1, j) * binom(n - a + 1, k - j) for j in range(i - 1, k + 1))
    rhs = sum(binom(a, j) * binom(n - a, k - j) for j in range(i, k + 1))
    return lhs >= rhs
