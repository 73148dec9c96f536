"""Exact integer binomial coefficients with out-of-range conventions.

Every counting formula in this package runs through :func:`binom`, so the
conventions live in exactly one place:

    C(a, b) = 0   whenever a < 0, b < 0 or b > a
    C(a, 0) = 1   for a >= 0

With these conventions the various truncated sums over j never need
per-call-site feasibility guards.
"""

from math import comb

__all__ = ["binom"]


def binom(a: int, b: int) -> int:
    """Binomial coefficient C(a, b), zero outside 0 <= b <= a."""
    if a < 0 or b < 0 or b > a:
        return 0
    return comb(a, b)
