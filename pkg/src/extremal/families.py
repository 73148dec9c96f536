"""Bitmask families of k-subsets of [n] and the extremal constructions.

Sets are n-bit masks (bit i set <=> element i+1 in the set), n <= 64, so
disjointness and intersection checks are single AND/popcount operations.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .errors import CapacityError, DegenerateError, DomainError
from .formulas import IntersectParams, MatchingParams

__all__ = [
    "KSet",
    "SetFamily",
    "HalfspaceSpec",
    "WeightVector",
    "all_ksets",
    "build_matching_extremal",
    "build_intersect_extremal",
    "has_l_matching",
    "is_swise_t_intersecting",
    "left_compress",
    "is_left_compressed",
    "halfspace_family",
    "weight_to_beta",
    "canonical_matching_witness",
    "canonical_swise_witness",
    "step_beta",
    "dump_family",
    "load_family",
]

SWISE_MEMBER_CAP = 5000  # s >= 3 searches beyond this are refused, not attempted


@dataclass(frozen=True, order=True)
class KSet:
    """A k-element subset of [n] stored as an n-bit mask."""

    mask: int
    n: int
    k: int

    def __post_init__(self):
        if self.n > 64:
            raise CapacityError(f"ground set capped at 64 elements, got n={self.n}")
        if self.mask >> self.n:
            raise DomainError(f"mask {self.mask:#x} has bits above position {self.n - 1}")
        if self.mask.bit_count() != self.k:
            raise DomainError(
                f"mask {self.mask:#x} has {self.mask.bit_count()} bits, expected k={self.k}"
            )

    @classmethod
    def from_elements(cls, elements: Iterable[int], n: int) -> "KSet":
        mask = 0
        for e in elements:
            if not 1 <= e <= n:
                raise DomainError(f"element {e} outside [1, {n}]")
            mask |= 1 << (e - 1)
        return cls(mask=mask, n=n, k=mask.bit_count())

    def elements(self) -> tuple[int, ...]:
        return tuple(i + 1 for i in range(self.n) if self.mask >> i & 1)

    def __repr__(self):
        return "{" + ",".join(map(str, self.elements())) + "}"


@dataclass(frozen=True)
class SetFamily:
    """Distinct k-sets over a shared (n, k), kept in ascending mask order."""

    members: tuple[KSet, ...]
    n: int
    k: int

    def __post_init__(self):
        masks = [m.mask for m in self.members]
        if len(set(masks)) != len(masks):
            raise DomainError("duplicate members")
        if any(m.n != self.n or m.k != self.k for m in self.members):
            raise DomainError("members disagree on (n, k)")
        if masks != sorted(masks):
            object.__setattr__(
                self, "members", tuple(sorted(self.members, key=lambda m: m.mask))
            )

    @classmethod
    def from_masks(cls, masks: Iterable[int], n: int, k: int) -> "SetFamily":
        return cls(tuple(KSet(m, n, k) for m in sorted(set(masks))), n, k)

    def masks(self) -> list[int]:
        return [m.mask for m in self.members]

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __contains__(self, item):
        if isinstance(item, KSet):
            item = item.mask
        return any(m.mask == item for m in self.members)


@dataclass(frozen=True)
class WeightVector:
    """Nonincreasing real weights, one per ground-set element."""

    omega: tuple[float, ...]

    def __post_init__(self):
        w = self.omega
        if any(w[j] < w[j + 1] for j in range(len(w) - 1)):
            raise DomainError("weights must be nonincreasing")


@dataclass(frozen=True)
class HalfspaceSpec:
    """Membership rule {x : (beta, x) > delta} for nonincreasing beta >= 0."""

    beta: tuple
    delta: object  # float or Fraction

    def __post_init__(self):
        b = self.beta
        if any(v < 0 for v in b):
            raise DomainError("beta must be componentwise nonnegative")
        if any(b[j] < b[j + 1] for j in range(len(b) - 1)):
            raise DomainError("beta must be nonincreasing")


def step_beta(a: int, length: Optional[int] = None, exact: bool = True) -> tuple:
    """Step weight vector: 1/a on the first a coordinates, 0 beyond."""
    if a < 1:
        raise DomainError(f"step support must be >= 1, got a={a}")
    length = a if length is None else length
    v = Fraction(1, a) if exact else 1.0 / a
    return tuple(v if j < a else type(v)(0) for j in range(length))


def all_ksets(n: int, k: int) -> SetFamily:
    """All C(n,k) k-subsets of [n], ascending mask order (Gosper's hack)."""
    if not 0 <= k <= n:
        raise DomainError(f"need 0 <= k <= n, got k={k}, n={n}")
    if n > 64:
        raise CapacityError(f"ground set capped at 64 elements, got n={n}")
    if k == 0:
        return SetFamily.from_masks([0], n, 0)
    masks = []
    v = (1 << k) - 1
    limit = 1 << n
    while v < limit:
        masks.append(v)
        c = v & -v
        r = v + c
        v = (((r ^ v) >> 2) // c) | r
    return SetFamily.from_masks(masks, n, k)


def build_matching_extremal(p: MatchingParams, i: int) -> SetFamily:
    """The family {A : |A cap [ell*i - 1]| >= i}."""
    a = p.ell * i - 1
    if not 1 <= i <= p.k or a > p.n:
        raise DomainError(f"infeasible i={i} for {p}")
    prefix = (1 << a) - 1
    masks = [m for m in _kset_masks(p.n, p.k) if (m & prefix).bit_count() >= i]
    return SetFamily.from_masks(masks, p.n, p.k)


def build_intersect_extremal(q: IntersectParams, r: int) -> SetFamily:
    """The Frankl-type family {E : |E cap [t + r*s]| >= t + (s-1)*r}."""
    a = q.t + r * q.s
    m = q.t + (q.s - 1) * r
    if r < 0 or a > q.n or m > q.k:
        raise DomainError(f"infeasible r={r} for {q}")
    prefix = (1 << a) - 1
    masks = [x for x in _kset_masks(q.n, q.k) if (x & prefix).bit_count() >= m]
    return SetFamily.from_masks(masks, q.n, q.k)


def _kset_masks(n: int, k: int) -> list[int]:
    return all_ksets(n, k).masks()


def has_l_matching(
    F: SetFamily, ell: int, restrict_to_prefix: bool = False
) -> list[KSet]:
    """Find ell pairwise-disjoint members, or return [].

    ``restrict_to_prefix`` limits the search to members inside [ell*k]; it is
    only sound for left-compressed families and is never the default.
    """
    if ell < 1:
        raise DomainError(f"ell must be >= 1, got {ell}")
    masks = F.masks()
    if restrict_to_prefix:
        prefix = (1 << (ell * F.k)) - 1
        masks = [m for m in masks if m & ~prefix == 0]

    witness: list[int] = []

    def extend(cands: list[int], depth: int) -> bool:
        if depth == ell:
            return True
        for idx, m in enumerate(cands):
            witness.append(m)
            nxt = [c for c in cands[idx + 1 :] if c & m == 0]
            if len(nxt) >= ell - depth - 1 and extend(nxt, depth + 1):
                return True
            witness.pop()
        return False

    if extend(masks, 0):
        return [KSet(m, F.n, F.k) for m in witness]
    return []


def is_swise_t_intersecting(F: SetFamily, s: int, t: int) -> list[KSet]:
    """Return [] if every s members share >= t elements, else one violating s-tuple.

    DFS over index-increasing tuples carrying the running intersection; as soon
    as the intersection of a prefix drops below t elements, any completion with
    distinct further members violates, so one is returned immediately.
    """
    if s < 2 or t < 1:
        raise DomainError(f"need s >= 2 and t >= 1, got s={s}, t={t}")
    masks = F.masks()
    if s >= 3 and len(masks) > SWISE_MEMBER_CAP:
        raise CapacityError(
            f"{len(masks)} members exceeds the s>=3 search cap of {SWISE_MEMBER_CAP}"
        )
    nmask = len(masks)

    def search(start: int, inter: int, chosen: list[int]) -> Optional[list[int]]:
        depth = len(chosen)
        if depth == s:
            return chosen if inter.bit_count() < t else None
        for idx in range(start, nmask - (s - depth) + 1):
            new_inter = inter & masks[idx]
            if new_inter.bit_count() < t:
                # intersection can only shrink: complete with the next members
                tail = [m for m in masks[idx + 1 :]][: s - depth - 1]
                return chosen + [masks[idx]] + tail
            found = search(idx + 1, new_inter, chosen + [masks[idx]])
            if found is not None:
                return found
        return None

    full = (1 << F.n) - 1
    bad = search(0, full, [])
    if bad is None:
        return []
    return [KSet(m, F.n, F.k) for m in bad]


def left_compress(F: SetFamily) -> SetFamily:
    """Fixpoint of the shifts S_{i,j} (replace j by i where legal), i < j."""
    masks = set(F.masks())
    n = F.n
    changed = True
    while changed:
        changed = False
        for i in range(n):
            for j in range(i + 1, n):
                bi, bj = 1 << i, 1 << j
                for m in sorted(masks):
                    if m & bj and not m & bi:
                        shifted = (m & ~bj) | bi
                        if shifted not in masks:
                            masks.remove(m)
                            masks.add(shifted)
                            changed = True
    return SetFamily.from_masks(masks, F.n, F.k)


def is_left_compressed(F: SetFamily) -> bool:
    """Closed under every single downward shift S_{i,j}."""
    masks = set(F.masks())
    for m in masks:
        for j in range(F.n):
            if not m >> j & 1:
                continue
            for i in range(j):
                if m >> i & 1:
                    continue
                if ((m & ~(1 << j)) | (1 << i)) not in masks:
                    return False
    return True


def halfspace_family(h: HalfspaceSpec, n: int, k: int) -> SetFamily:
    """{x in C(n,k) : (beta, x) > delta}, strict inequality.

    Pass Fraction beta/delta for exact threshold decisions.
    """
    beta = list(h.beta) + [0] * (n - len(h.beta))
    masks = []
    for m in _kset_masks(n, k):
        dot = sum(beta[i] for i in range(n) if m >> i & 1)
        if dot > h.delta:
            masks.append(m)
    return SetFamily.from_masks(masks, n, k)


def weight_to_beta(w: WeightVector, k: int, ell: int) -> HalfspaceSpec:
    """Reduce a nonincreasing weight vector on [k*ell] to normalized beta.

    alpha_j = (w_j - w_{j+1}) / (k*ell) for j in [k*ell - 1];
    beta_j = sum_{m>=j} alpha_m / sum_m m*alpha_m.  The returned delta makes
    (beta, x) > delta equivalent to (omega, x) > 0 for x inside [k*ell].
    """
    L = k * ell
    omega = list(w.omega)
    if len(omega) < L:
        raise DomainError(f"need weights on all of [k*ell] = [{L}]")
    omega = omega[:L]
    alpha = [
        Fraction(omega[j] - omega[j + 1]) / (L) for j in range(L - 1)
    ]
    if any(a < 0 for a in alpha):
        raise DomainError("weights must be nonincreasing on [k*ell]")
    normalizer = sum((m + 1) * alpha[m] for m in range(L - 1))
    if normalizer == 0:
        raise DegenerateError("all weights equal on [k*ell]: zero normalizer")
    beta = tuple(sum(alpha[j:]) / normalizer for j in range(L - 1))
    delta = Fraction(-omega[-1]) * k / (L * normalizer)
    return HalfspaceSpec(beta=beta, delta=delta)


def canonical_matching_witness(ell: int, k: int, n: Optional[int] = None) -> list[KSet]:
    """The ell disjoint sets x_j = {j, j+ell, ..., j+(k-1)ell}, j in [ell]."""
    if n is None:
        n = ell * k
    if n < ell * k:
        raise DomainError(f"ground set must have >= ell*k = {ell * k} elements")
    witness = [
        KSet.from_elements([j + m * ell for m in range(k)], n) for j in range(1, ell + 1)
    ]
    for a in range(len(witness)):
        for b in range(a + 1, len(witness)):
            assert witness[a].mask & witness[b].mask == 0
    return witness


def canonical_swise_witness(s: int, t: int, k: int, n: int) -> list[KSet]:
    """s distinct k-sets that are NOT s-wise t-intersecting; always verified.

    x_1 carries [t-1] but skips element t; x_2..x_s carry [t] plus pairwise
    distinct filler blocks disjoint from x_1's filler, so the full
    intersection is contained in [t-1].  The built tuple is re-checked with
    is_swise_t_intersecting and the construction fails loudly if it does not
    violate the property.
    """
    if s < 2 or not 1 <= t <= k:
        raise DomainError(f"need s >= 2 and 1 <= t <= k, got s={s}, t={t}, k={k}")
    if n < 2 * k - t + 1:
        raise DomainError(
            f"ground set too small: need n >= 2k - t + 1 = {2 * k - t + 1}, got {n}"
        )
    from itertools import combinations

    x1 = list(range(1, t)) + list(range(t + 1, t + 1 + (k - t + 1)))
    pool = list(range(k + 2, n + 1))
    fillers = []
    for combo in combinations(pool, k - t):
        fillers.append(list(combo))
        if len(fillers) == s - 1:
            break
    if len(fillers) < s - 1:
        raise DomainError(f"ground set [{n}] cannot host {s - 1} distinct filler blocks")
    tuples = [x1] + [list(range(1, t + 1)) + f for f in fillers]
    witness = [KSet.from_elements(tup, n) for tup in tuples]

    fam = SetFamily(tuple(sorted(witness, key=lambda m: m.mask)), n, k)
    if len(fam) != s or not is_swise_t_intersecting(fam, s, t):
        raise DomainError(
            f"built tuple fails to violate s-wise t-intersection: {witness}"
        )
    return witness


def dump_family(F: SetFamily) -> str:
    """Line format: header 'n=<n> k=<k>', then sorted comma-separated elements."""
    lines = [f"n={F.n} k={F.k}"]
    lines.extend(",".join(map(str, m.elements())) for m in F.members)
    return "\n".join(lines) + "\n"


def load_family(text: str) -> SetFamily:
    lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("n="):
        raise DomainError("missing 'n=<n> k=<k>' header")
    head = dict(part.split("=") for part in lines[0].split())
    n, k = int(head["n"]), int(head["k"])
    members = [
        KSet.from_elements([int(e) for e in ln.split(",")], n) for ln in lines[1:]
    ]
    if any(m.k != k for m in members):
        raise DomainError("member size disagrees with header k")
    return SetFamily(tuple(sorted(members, key=lambda m: m.mask)), n, k)
