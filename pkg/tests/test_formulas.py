import random
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from extremal.errors import DomainError
from extremal.exactmath import binom
from extremal.formulas import (
    IntersectParams,
    MatchingParams,
    a_sweep_matching,
    a_sweep_term,
    erdos_value,
    intersect_term,
    intersect_value,
    lemma2_check,
    matching_formula_value,
    matching_term,
    section3_bound,
    step_dominance_check,
)


def brute_prefix_count(n, k, prefix, minimum):
    """|{A in C([n],k) : |A cap [prefix]| >= minimum}| by direct enumeration."""
    return sum(
        1
        for A in combinations(range(1, n + 1), k)
        if sum(1 for e in A if e <= prefix) >= minimum
    )


class TestMatchingTerm:
    def test_examples(self):
        assert matching_term(MatchingParams(ell=2, n=6, k=3), 1) == 10
        assert matching_term(MatchingParams(ell=3, n=9, k=3), 2) == 50
        assert matching_term(MatchingParams(ell=3, n=9, k=3), 3) == 56

    def test_infeasible_i(self):
        with pytest.raises(DomainError):
            matching_term(MatchingParams(ell=3, n=7, k=3), 3)  # 3*3-1 > 7

    def test_against_enumeration(self):
        for ell in (2, 3):
            for k in (2, 3, 4):
                for n in range(k, 13):
                    p = MatchingParams(ell=ell, n=n, k=k)
                    for i in range(1, k + 1):
                        if ell * i - 1 > n:
                            continue
                        assert matching_term(p, i) == brute_prefix_count(
                            n, k, ell * i - 1, i
                        )


class TestMatchingFormula:
    def test_examples(self):
        assert matching_formula_value(MatchingParams(ell=2, n=6, k=3)) == (10, 1)
        assert matching_formula_value(MatchingParams(ell=3, n=9, k=3)) == (56, 3)
        assert matching_formula_value(MatchingParams(ell=2, n=100, k=3)) == (4851, 1)

    def test_tie_breaks_to_smaller_i(self):
        # all three terms equal 10 at (2,6,3)
        value, i = matching_formula_value(MatchingParams(ell=2, n=6, k=3))
        assert i == 1


class TestErdosValue:
    def test_examples(self):
        assert erdos_value(MatchingParams(ell=2, n=6, k=3)) == 10
        assert erdos_value(MatchingParams(ell=3, n=9, k=3)) == 56
        assert erdos_value(MatchingParams(ell=2, n=4, k=2)) == 3

    def test_closed_form(self):
        p = MatchingParams(ell=4, n=30, k=5)
        expect = max(binom(5 * 4 - 1, 5), binom(30, 5) - binom(30 - 3, 5))
        assert erdos_value(p) == expect


class TestLemma2:
    def test_examples(self):
        for ell, n, k in [(2, 6, 3), (3, 9, 3), (2, 10, 4)]:
            rep = lemma2_check(MatchingParams(ell=ell, n=n, k=k))
            assert rep.equal
            assert rep.lhs == rep.rhs

    def test_moderate_grid(self):
        bad = []
        for ell in range(2, 5):
            for k in range(1, 6):
                for n in range(max(k, ell * k - 1), 41):
                    rep = lemma2_check(MatchingParams(ell=ell, n=n, k=k))
                    if not rep.equal:
                        bad.append((ell, k, n))
        assert bad == []


class TestASweep:
    def test_examples(self):
        assert a_sweep_matching(MatchingParams(ell=2, n=6, k=3)) == (10, 1)
        assert a_sweep_matching(MatchingParams(ell=3, n=9, k=3)) == (56, 8)
        assert a_sweep_matching(MatchingParams(ell=2, n=5, k=2)) == (4, 1)

    def test_agrees_with_formula(self):
        for ell in range(2, 5):
            for k in range(1, 6):
                for n in range(max(k, ell * k - 1), 31):
                    p = MatchingParams(ell=ell, n=n, k=k)
                    assert a_sweep_matching(p)[0] == matching_formula_value(p)[0]


class TestIntersectTerm:
    def test_examples(self):
        assert intersect_term(IntersectParams(s=2, t=2, n=8, k=4), 1) == 17
        assert intersect_term(IntersectParams(s=3, t=1, n=5, k=3), 0) == 6
        assert intersect_term(IntersectParams(s=2, t=1, n=8, k=3), 0) == 21

    def test_infeasible_r(self):
        with pytest.raises(DomainError):
            intersect_term(IntersectParams(s=2, t=2, n=8, k=4), 5)

    def test_against_enumeration(self):
        for s in (2, 3):
            for t in (1, 2):
                for k in range(t, 5):
                    for n in range(k, 12):
                        q = IntersectParams(s=s, t=t, n=n, k=k)
                        for r in range(0, k + 1):
                            if t + r * s > n or t + (s - 1) * r > k:
                                continue
                            assert intersect_term(q, r) == brute_prefix_count(
                                n, k, t + r * s, t + (s - 1) * r
                            )


class TestIntersectValue:
    def test_examples(self):
        assert intersect_value(IntersectParams(s=2, t=2, n=8, k=4)) == (17, 1)
        assert intersect_value(IntersectParams(s=3, t=1, n=5, k=3)) == (6, 0)
        assert intersect_value(IntersectParams(s=2, t=1, n=4, k=3)) == (4, -1)

    def test_degenerate_regime_sentinel(self):
        q = IntersectParams(s=3, t=2, n=5, k=4)  # 12 >= 2*5+2
        assert q.degenerate
        assert intersect_value(q) == (binom(5, 4), -1)


class TestSection3Bound:
    def test_examples(self):
        assert section3_bound(IntersectParams(s=2, t=2, n=8, k=4)) == 17
        assert section3_bound(IntersectParams(s=3, t=1, n=5, k=3)) == 6
        assert section3_bound(IntersectParams(s=2, t=1, n=6, k=3)) == 10

    def test_at_least_conjecture_value(self):
        # the bound maximizes over a superset of the conjecture's supports
        for s in (2, 3):
            for t in (1, 2):
                for k in range(t, 5):
                    for n in range(k + 1, 11):
                        q = IntersectParams(s=s, t=t, n=n, k=k)
                        if q.degenerate:
                            continue
                        assert section3_bound(q) >= intersect_value(q)[0]


class TestStepDominance:
    def test_examples(self):
        assert step_dominance_check(4, 8, 3, 2)
        assert step_dominance_check(1, 5, 2, 1)
        assert step_dominance_check(6, 9, 3, 3)

    def test_random_sample(self):
        rng = random.Random(7)
        for _ in range(2000):
            n = rng.randint(1, 60)
            k = rng.randint(1, min(n, 10))
            a = rng.randint(1, n)
            i = rng.randint(1, k)
            assert step_dominance_check(a, n, k, i)


def test_monotonicity_audit_small_grid():
    # the a-sweep term is claimed nonincreasing as a decreases within each
    # window (l(i-1), l*i - 1]; violations are findings and expected absent
    findings = []
    for ell in range(2, 5):
        for k in range(1, 6):
            for n in range(k, 31):
                for i in range(1, k + 1):
                    hi = min(ell * i - 1, n)
                    lo = ell * (i - 1) + 1
                    for a in range(hi, lo, -1):
                        if a_sweep_term(a - 1, n, k, ell) > a_sweep_term(a, n, k, ell):
                            findings.append((ell, k, n, i, a))
    assert findings == []


def test_param_validation():
    with pytest.raises(DomainError):
        MatchingParams(ell=1, n=6, k=3)
    with pytest.raises(DomainError):
        MatchingParams(ell=2, n=3, k=4)
    with pytest.raises(DomainError):
        IntersectParams(s=1, t=1, n=6, k=3)
    with pytest.raises(DomainError):
        IntersectParams(s=2, t=4, n=6, k=3)


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 3), st.integers(1, 4), st.integers(0, 8), st.integers(1, 4))
def test_matching_term_matches_enumeration_random(ell, k, extra, i):
    n = k + extra
    if i > k or ell * i - 1 > n:
        return
    p = MatchingParams(ell=ell, n=n, k=k)
    assert matching_term(p, i) == brute_prefix_count(n, k, ell * i - 1, i)
