import json
from itertools import combinations

from extremal.families import (
    SetFamily,
    all_ksets,
    build_intersect_extremal,
    build_matching_extremal,
    has_l_matching,
    is_swise_t_intersecting,
)
from extremal.formulas import (
    IntersectParams,
    MatchingParams,
    intersect_value,
    matching_formula_value,
)
from extremal.oracle import Budget, audit, max_no_matching, max_swise_t_intersecting


def reference_mis(adjacency):
    """Textbook maximum-independent-set recursion on a bitmask graph.

    Branches on the lowest remaining vertex (in or out), no coloring bounds.
    Independent cross-check of the branch-and-bound search on pairwise
    (ell=2 / s=2) instances.
    """

    def rec(remaining):
        if remaining == 0:
            return 0
        v = (remaining & -remaining).bit_length() - 1
        bit = 1 << v
        best = rec(remaining & ~bit)
        return max(best, 1 + rec(remaining & ~(bit | adjacency[v])))

    return rec((1 << len(adjacency)) - 1)


def disjointness_adjacency(n, k):
    masks = all_ksets(n, k).masks()
    adj = [0] * len(masks)
    for i, j in combinations(range(len(masks)), 2):
        if masks[i] & masks[j] == 0:
            adj[i] |= 1 << j
            adj[j] |= 1 << i
    return adj


class TestMaxNoMatching:
    def test_examples(self):
        assert max_no_matching(4, 2, 2, Budget()).max_size == 3
        assert max_no_matching(6, 3, 2, Budget()).max_size == 10
        assert max_no_matching(6, 2, 3, Budget()).max_size == 10

    def test_reference_mis_cross_check(self):
        # ell=2 is maximum independent set in the Kneser graph
        for n, k in [(4, 2), (5, 2), (6, 2), (7, 2), (8, 2), (6, 3)]:
            adj = disjointness_adjacency(n, k)
            assert len(adj) <= 60
            res = max_no_matching(n, k, 2, Budget())
            assert res.optimal
            assert res.max_size == reference_mis(adj)

    def test_witness_reverified(self):
        for n, k, ell in [(6, 3, 2), (7, 2, 3), (8, 2, 2)]:
            res = max_no_matching(n, k, ell, Budget())
            assert len(res.witness) == res.max_size
            assert has_l_matching(res.witness, ell) == []

    def test_lower_bound_from_construction(self):
        for n, k, ell in [(6, 3, 2), (8, 2, 3), (9, 3, 2)]:
            p = MatchingParams(ell=ell, n=n, k=k)
            value, i = matching_formula_value(p)
            assert max_no_matching(n, k, ell, Budget()).max_size >= len(
                build_matching_extremal(p, i)
            )

    def test_determinism(self):
        a = max_no_matching(7, 2, 2, Budget())
        b = max_no_matching(7, 2, 2, Budget())
        assert a.max_size == b.max_size
        assert a.witness.masks() == b.witness.masks()
        assert a.nodes_explored == b.nodes_explored

    def test_budget_exhaustion_flags_partial(self):
        res = max_no_matching(9, 2, 3, Budget(max_nodes=50))
        assert not res.optimal
        # partial result is still a valid lower bound with a valid witness
        assert has_l_matching(res.witness, 3) == []
        full = max_no_matching(9, 2, 3, Budget())
        assert full.optimal
        assert res.max_size <= full.max_size

    def test_compressed_mode_agrees(self):
        for n, k, ell in [(6, 3, 2), (7, 2, 3), (8, 2, 2)]:
            full = max_no_matching(n, k, ell, Budget())
            comp = max_no_matching(n, k, ell, Budget(), compressed=True)
            assert comp.max_size == full.max_size


class TestMaxSwise:
    def test_examples(self):
        assert max_swise_t_intersecting(6, 3, 2, 1, Budget()).max_size == 10
        assert max_swise_t_intersecting(8, 4, 2, 2, Budget()).max_size == 17
        assert max_swise_t_intersecting(5, 3, 3, 1, Budget()).max_size == 6

    def test_witness_reverified(self):
        for n, k, s, t in [(6, 3, 2, 1), (8, 4, 2, 2), (6, 3, 3, 1)]:
            res = max_swise_t_intersecting(n, k, s, t, Budget())
            assert len(res.witness) == res.max_size
            assert is_swise_t_intersecting(res.witness, s, t) == []

    def test_lower_bound_from_construction(self):
        for n, k, s, t in [(7, 3, 2, 1), (8, 4, 2, 2), (6, 3, 3, 1)]:
            q = IntersectParams(s=s, t=t, n=n, k=k)
            value, r = intersect_value(q)
            res = max_swise_t_intersecting(n, k, s, t, Budget())
            if r >= 0:
                assert res.max_size >= len(build_intersect_extremal(q, r))

    def test_compressed_mode_agrees(self):
        for n, k, s, t in [(6, 3, 2, 1), (7, 3, 3, 1), (8, 4, 2, 2)]:
            full = max_swise_t_intersecting(n, k, s, t, Budget())
            comp = max_swise_t_intersecting(n, k, s, t, Budget(), compressed=True)
            assert comp.max_size == full.max_size

    def test_determinism(self):
        a = max_swise_t_intersecting(7, 3, 2, 1, Budget())
        b = max_swise_t_intersecting(7, 3, 2, 1, Budget())
        assert a.max_size == b.max_size
        assert a.witness.masks() == b.witness.masks()


class TestAudit:
    def test_matching_example(self):
        rec = audit(MatchingParams(ell=2, n=6, k=3))
        assert rec["oracle"] == 10 and rec["formula"] == 10 and rec["erdos"] == 10
        assert rec["oracle_equals_formula"] and rec["formula_equals_erdos"]

    def test_intersect_example(self):
        rec = audit(IntersectParams(s=2, t=2, n=8, k=4))
        assert rec["oracle"] == 17 and rec["conjecture"] == 17
        assert rec["oracle_equals_conjecture"]

    def test_l3_n7_k2(self):
        rec = audit(MatchingParams(ell=3, n=7, k=2))
        assert rec["oracle"] == 11
        assert rec["erdos"] == 11  # max{C(5,2)=10, C(7,2)-C(5,2)=11}
        assert rec["oracle_equals_formula"]


def test_result_json_shape():
    res = max_no_matching(6, 3, 2, Budget())
    rec = json.loads(res.to_json())
    assert rec["max_size"] == 10
    assert rec["optimal"] is True
    assert rec["witness"].startswith("n=6 k=3")
    assert "elapsed" not in rec
    rec = json.loads(res.to_json(include_elapsed=True))
    assert "elapsed" in rec
