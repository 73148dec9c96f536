"""Exact maximum-family search for the matching and intersection problems.

Branch and bound over candidate k-sets in colexicographic order (ascending
mask order) with include/exclude branching.  The upper bound comes from a
greedy partition of the candidates into "blocks" that the constraint caps:

  * matching problem: a block of pairwise-disjoint sets can contribute at
    most ell-1 members (any ell of them form an ell-matching);
  * intersection problem: a block of pairwise < t-intersecting sets can
    contribute at most s-1 members (any s of them contain a bad pair, and
    the common intersection is no larger than any pairwise one).

The incumbent starts at the best closed-form construction, so the search
only ever has to prove optimality or beat it.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass
from typing import Callable, Optional

from .errors import CapacityError
from .exactmath import binom
from .families import (
    SetFamily,
    all_ksets,
    build_intersect_extremal,
    build_matching_extremal,
    dump_family,
    has_l_matching,
    is_left_compressed,
    is_swise_t_intersecting,
)
from .formulas import (
    IntersectParams,
    MatchingParams,
    erdos_value,
    intersect_term,
    intersect_value,
    matching_formula_value,
    matching_term,
)

__all__ = ["OracleResult", "Budget", "max_no_matching", "max_swise_t_intersecting", "audit"]

MATCHING_VERTEX_CAP = 120
PAIRWISE_VERTEX_CAP = 126
SWISE_VERTEX_CAP = 60


@dataclass(frozen=True)
class Budget:
    max_nodes: int = 10**8
    max_seconds: float = 300.0


@dataclass
class OracleResult:
    max_size: int
    witness: SetFamily
    nodes_explored: int
    optimal: bool
    elapsed: float

    def to_json(self, include_elapsed: bool = False) -> str:
        payload = {
            "max_size": self.max_size,
            "optimal": self.optimal,
            "nodes_explored": self.nodes_explored,
            "witness": dump_family(self.witness),
        }
        if include_elapsed:
            payload["elapsed"] = self.elapsed
        return json.dumps(payload, separators=(",", ":"))


def _greedy_blocks(masks: list[int], compatible: Callable[[int, int], bool]) -> list[int]:
    """First-fit partition into blocks whose members are pairwise 'compatible'.

    Returns the block id of each candidate.  For the matching problem
    compatibility is disjointness (blocks stay pairwise disjoint, so a
    running union mask suffices); for the intersection problem it is
    pairwise small intersection (checked against every block member).
    """
    block_of = [0] * len(masks)
    blocks: list[list[int]] = []
    for idx, m in enumerate(masks):
        placed = False
        for b, members in enumerate(blocks):
            if all(compatible(m, other) for other in members):
                members.append(m)
                block_of[idx] = b
                placed = True
                break
        if not placed:
            block_of[idx] = len(blocks)
            blocks.append([m])
    return block_of


def _shift_images(mask: int, n: int) -> list[int]:
    """All single downward shifts S_{i,j} of the set (j in set, i < j not in set)."""
    out = []
    for j in range(n):
        if not mask >> j & 1:
            continue
        for i in range(j):
            if not mask >> i & 1:
                out.append((mask & ~(1 << j)) | (1 << i))
    return out


class _BranchAndBound:
    def __init__(
        self,
        masks: list[int],
        n: int,
        can_add: Callable[[int], bool],
        push: Callable[[int], object],
        pop: Callable[[int, object], None],
        block_of: list[int],
        block_cap: int,
        seed_masks: list[int],
        budget: Budget,
        compressed: bool,
    ):
        self.masks = masks
        self.n = n
        self.can_add = can_add
        self.push = push
        self.pop = pop
        self.block_of = block_of
        self.block_cap = block_cap
        self.budget = budget
        self.compressed = compressed

        nblocks = max(block_of) + 1 if block_of else 0
        self.rem = [0] * nblocks
        for b in block_of:
            self.rem[b] += 1
        self.cho = [0] * nblocks
        # bound = sum over blocks of min(cap, cho + rem)
        self.bound = sum(min(self.block_cap, r) for r in self.rem)

        self.best = len(seed_masks)
        self.best_masks = list(seed_masks)
        self.chosen: list[int] = []
        self.chosen_set: set[int] = set()
        self.nodes = 0
        self.exhausted = False
        self.t0 = time.monotonic()

    def _tick(self) -> bool:
        self.nodes += 1
        if self.nodes >= self.budget.max_nodes:
            self.exhausted = True
        elif self.nodes % 4096 == 0 and time.monotonic() - self.t0 > self.budget.max_seconds:
            self.exhausted = True
        return self.exhausted

    def _block_delta(self, b: int, dcho: int, drem: int) -> None:
        before = min(self.block_cap, self.cho[b] + self.rem[b])
        self.cho[b] += dcho
        self.rem[b] += drem
        after = min(self.block_cap, self.cho[b] + self.rem[b])
        self.bound += after - before

    def run(self) -> None:
        self._dfs(0)

    def _dfs(self, idx: int) -> None:
        if self.exhausted or self._tick():
            return
        if len(self.chosen) > self.best:
            self.best = len(self.chosen)
            self.best_masks = list(self.chosen)
        if idx == len(self.masks) or self.bound <= self.best:
            return
        m = self.masks[idx]
        b = self.block_of[idx]

        feasible = self.can_add(m)
        if feasible and self.compressed:
            feasible = all(
                img in self.chosen_set for img in _shift_images(m, self.n) if img != m
            )
        if feasible:
            state = self.push(m)
            self.chosen.append(m)
            self.chosen_set.add(m)
            self._block_delta(b, +1, -1)
            self._dfs(idx + 1)
            self._block_delta(b, -1, +1)
            self.chosen_set.remove(m)
            self.chosen.pop()
            self.pop(m, state)
            if self.exhausted:
                return

        self._block_delta(b, 0, -1)
        self._dfs(idx + 1)
        self._block_delta(b, 0, +1)


class _MaxClique:
    """Greedy-coloring branch and bound for maximum clique on a bitset graph.

    Used for the pairwise (s = 2) intersection problem, where the family is a
    maximum clique of the compatibility graph; the block bound of the generic
    search is far too weak there.
    """

    def __init__(self, adj: list[int], seed: list[int], budget: Budget):
        self.adj = adj
        self.best = len(seed)
        self.best_clique = list(seed)
        self.budget = budget
        self.nodes = 0
        self.exhausted = False
        self.t0 = time.monotonic()

    def run(self) -> None:
        self._expand([], (1 << len(self.adj)) - 1)

    def _expand(self, R: list[int], P: int) -> None:
        self.nodes += 1
        if self.nodes >= self.budget.max_nodes or (
            self.nodes % 4096 == 0
            and time.monotonic() - self.t0 > self.budget.max_seconds
        ):
            self.exhausted = True
        if self.exhausted:
            return
        # greedy coloring of P: bound for a vertex is its color index
        order: list[int] = []
        bounds: list[int] = []
        U = P
        color = 0
        while U:
            color += 1
            Q = U
            while Q:
                v = (Q & -Q).bit_length() - 1
                bit = 1 << v
                Q &= ~self.adj[v] & ~bit
                U &= ~bit
                order.append(v)
                bounds.append(color)
        for i in range(len(order) - 1, -1, -1):
            if len(R) + bounds[i] <= self.best:
                return
            v = order[i]
            R.append(v)
            if len(R) > self.best:
                self.best = len(R)
                self.best_clique = list(R)
            P2 = P & self.adj[v]
            if P2:
                self._expand(R, P2)
            R.pop()
            P &= ~(1 << v)
            if self.exhausted:
                return


def _has_disjoint_tuple(masks: list[int], count: int) -> bool:
    """Any `count` pairwise-disjoint masks in the list?"""
    if count == 0:
        return True

    def extend(cands: list[int], need: int) -> bool:
        if need == 0:
            return True
        for i, m in enumerate(cands):
            nxt = [c for c in cands[i + 1 :] if c & m == 0]
            if len(nxt) >= need - 1 and extend(nxt, need - 1):
                return True
        return False

    return extend(masks, count)


def max_no_matching(
    n: int,
    k: int,
    ell: int,
    budget: Budget = Budget(),
    compressed: bool = False,
) -> OracleResult:
    """Exact M(ell, n, k): largest family with no ell pairwise-disjoint members."""
    p = MatchingParams(ell=ell, n=n, k=k)
    nv = binom(n, k)
    if nv > MATCHING_VERTEX_CAP:
        raise CapacityError(
            f"C({n},{k}) = {nv} exceeds the matching envelope of {MATCHING_VERTEX_CAP}"
        )
    masks = all_ksets(n, k).masks()
    block_of = _greedy_blocks(masks, lambda a, b: a & b == 0)

    chosen: list[int] = []

    def can_add(c: int) -> bool:
        dis = [m for m in chosen if m & c == 0]
        return not _has_disjoint_tuple(dis, ell - 1)

    def push(c: int):
        chosen.append(c)

    def pop(c: int, _state):
        chosen.pop()

    _, best_i = matching_formula_value(p)
    seed = build_matching_extremal(p, best_i).masks()

    bb = _BranchAndBound(
        masks, n, can_add, push, pop, block_of, ell - 1, seed, budget, compressed
    )
    bb.run()
    witness = SetFamily.from_masks(bb.best_masks, n, k)
    if has_l_matching(witness, ell):
        raise AssertionError("oracle witness re-verification failed")
    return OracleResult(
        max_size=bb.best,
        witness=witness,
        nodes_explored=bb.nodes,
        optimal=not bb.exhausted,
        elapsed=time.monotonic() - bb.t0,
    )


def max_swise_t_intersecting(
    n: int,
    k: int,
    s: int,
    t: int,
    budget: Budget = Budget(),
    compressed: bool = False,
) -> OracleResult:
    """Exact N(s, n, k, t): largest s-wise t-intersecting family."""
    q = IntersectParams(s=s, n=n, k=k, t=t)
    nv = binom(n, k)
    cap = PAIRWISE_VERTEX_CAP if s == 2 else SWISE_VERTEX_CAP
    if nv > cap:
        raise CapacityError(f"C({n},{k}) = {nv} exceeds the s={s} envelope of {cap}")
    masks = all_ksets(n, k).masks()

    if q.degenerate:
        seed = masks
    else:
        _, best_r = intersect_value(q)
        seed = build_intersect_extremal(q, best_r).masks()

    if s == 2 and not compressed:
        # maximum clique of the compatibility graph |A cap B| >= t
        index_of = {m: i for i, m in enumerate(masks)}
        adj = [0] * len(masks)
        for i, a in enumerate(masks):
            for j in range(i + 1, len(masks)):
                if (a & masks[j]).bit_count() >= t:
                    adj[i] |= 1 << j
                    adj[j] |= 1 << i
        mc = _MaxClique(adj, [index_of[m] for m in seed], budget)
        mc.run()
        witness = SetFamily.from_masks([masks[i] for i in mc.best_clique], n, k)
        if is_swise_t_intersecting(witness, s, t):
            raise AssertionError("oracle witness re-verification failed")
        return OracleResult(
            max_size=mc.best,
            witness=witness,
            nodes_explored=mc.nodes,
            optimal=not mc.exhausted,
            elapsed=time.monotonic() - mc.t0,
        )

    block_of = _greedy_blocks(masks, lambda a, b: (a & b).bit_count() < t)

    # inter[j] = distinct intersection masks of j-subsets of the chosen family
    inter: list[set[int]] = [set() for _ in range(s)]  # index 1..s-1 used

    def can_add(c: int) -> bool:
        for m in inter[s - 1]:
            if (m & c).bit_count() < t:
                return False
        return True

    def push(c: int):
        added: list[tuple[int, int]] = []
        for j in range(s - 1, 1, -1):
            for m in inter[j - 1]:
                nm = m & c
                if nm not in inter[j]:
                    inter[j].add(nm)
                    added.append((j, nm))
        if c not in inter[1]:
            inter[1].add(c)
            added.append((1, c))
        return added

    def pop(c: int, added):
        for j, nm in added:
            inter[j].remove(nm)

    bb = _BranchAndBound(
        masks, n, can_add, push, pop, block_of, s - 1, seed, budget, compressed
    )
    bb.run()
    witness = SetFamily.from_masks(bb.best_masks, n, k)
    if is_swise_t_intersecting(witness, s, t):
        raise AssertionError("oracle witness re-verification failed")
    return OracleResult(
        max_size=bb.best,
        witness=witness,
        nodes_explored=bb.nodes,
        optimal=not bb.exhausted,
        elapsed=time.monotonic() - bb.t0,
    )


def audit(params, budget: Budget = Budget()) -> dict:
    """Join the exact search with the closed-form values; report agreement."""
    if isinstance(params, MatchingParams):
        res = max_no_matching(params.n, params.k, params.ell, budget)
        formula, argmax_i = matching_formula_value(params)
        erdos = erdos_value(params)
        return {
            "problem": "matching",
            "ell": params.ell,
            "n": params.n,
            "k": params.k,
            "oracle": res.max_size,
            "formula": formula,
            "argmax_i": argmax_i,
            "erdos": erdos,
            "oracle_equals_formula": res.max_size == formula,
            "formula_equals_erdos": formula == erdos,
            "optimal": res.optimal,
            "witness": dump_family(res.witness),
            "witness_left_compressed": is_left_compressed(res.witness),
        }
    if isinstance(params, IntersectParams):
        res = max_swise_t_intersecting(params.n, params.k, params.s, params.t, budget)
        conjecture, argmax_r = intersect_value(params)
        return {
            "problem": "intersect",
            "s": params.s,
            "t": params.t,
            "n": params.n,
            "k": params.k,
            "oracle": res.max_size,
            "conjecture": conjecture,
            "argmax_r": argmax_r,
            "oracle_equals_conjecture": res.max_size == conjecture,
            "optimal": res.optimal,
            "witness": dump_family(res.witness),
            "witness_left_compressed": is_left_compressed(res.witness),
        }
    raise TypeError(f"unsupported parameter type {type(params)!r}")
