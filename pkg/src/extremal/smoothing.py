"""Smoothed counting of halfspace families and its constrained maximization.

The discrete family size |{x : (beta, x) > delta}| is replaced by

    Y = sum over all k-sets x of phi(((beta, x) - delta) / sigma)

with phi the standard normal CDF.  As sigma -> 0 this converges to the
exact count whenever delta avoids the attainable values of (beta, x).
``maximize`` runs projected gradient ascent on Y subject to the constraint
that no forbidden configuration (an ell-matching, or a non s-wise
t-intersecting s-tuple) fits inside the family, annealing sigma downward;
``kkt_check`` evaluates the first-order conditions at the result.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

import numpy as np
from scipy.special import ndtr

from .errors import CapacityError, DegenerateError, DomainError
from .exactmath import binom
from .families import (
    KSet,
    all_ksets,
    canonical_matching_witness,
    canonical_swise_witness,
)
from .formulas import IntersectParams, MatchingParams

__all__ = [
    "SmoothingConfig",
    "KktReport",
    "gaussian_cdf",
    "smoothed_membership",
    "smoothed_count",
    "grad_smoothed_count",
    "witness_penalty",
    "project_monotone_simplex",
    "maximize",
    "kkt_check",
    "gamma_threshold",
    "psi_threshold",
    "admissible_count",
    "trace_to_csv",
]

_SQRT2 = math.sqrt(2.0)
_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)
ENUMERATION_CAP = 2_000_000


@dataclass(frozen=True)
class SmoothingConfig:
    sigma: float = 1e-3          # final smoothing width
    sigma_initial: float = 0.5   # annealing start
    mu: float = 0.1              # membership slack
    mu1: float = 0.1             # witness-constraint slack (matching problem)
    mu2: float = 0.1             # witness-constraint slack (intersection problem)
    delta: float = 0.5           # initial threshold
    epsilon1: float = 1e-6       # count-approximation tolerance
    step: float = 0.2            # gradient step size
    sigma_floor: float = 0.02    # smallest sigma used while optimizing
    max_iter: int = 2000
    seed: int = 0

    def __post_init__(self):
        if self.sigma <= 0 or self.sigma_initial <= 0:
            raise DomainError("sigma must be positive")
        if not 0 < self.mu < 1 or not 0 < self.mu1 < 1 or not 0 < self.mu2 < 1:
            raise DomainError("slacks must lie in (0, 1)")
        if self.epsilon1 <= 0:
            raise DomainError("epsilon1 must be positive")


@dataclass
class KktReport:
    lambdas: np.ndarray
    stationarity_residual: float
    slackness_violation: float
    delta_residual: float

    @property
    def min_lambda(self) -> float:
        return float(self.lambdas.min()) if self.lambdas.size else 0.0


def gaussian_cdf(x: float) -> float:
    """Standard normal CDF via erfc; absolute error well under 1e-12."""
    return 0.5 * math.erfc(-x / _SQRT2)


def _incidence(n: int, k: int) -> np.ndarray:
    """0/1 matrix, one row per k-set of [n] in ascending mask order."""
    masks = all_ksets(n, k).masks()
    if len(masks) > ENUMERATION_CAP:
        raise CapacityError(f"C({n},{k}) exceeds the enumeration cap")
    X = np.zeros((len(masks), n), dtype=np.float64)
    for r, m in enumerate(masks):
        for i in range(n):
            if m >> i & 1:
                X[r, i] = 1.0
    return X


def _pad_beta(beta: Sequence, n: int) -> np.ndarray:
    b = np.asarray([float(v) for v in beta], dtype=np.float64)
    if len(b) > n:
        raise DomainError(f"beta longer than the ground set ({len(b)} > {n})")
    return np.concatenate([b, np.zeros(n - len(b))])


def _is_step(beta: Sequence) -> Optional[int]:
    """Support size a if beta is exactly 1/a on a prefix and 0 beyond, else None."""
    vals = [Fraction(v) if not isinstance(v, Fraction) else v for v in beta]
    pos = [v for v in vals if v != 0]
    a = len(pos)
    if a == 0:
        return None
    if any(v != 0 for v in vals[a:]) or any(v == 0 for v in vals[:a]):
        return None
    if all(v == Fraction(1, a) or float(v) == 1.0 / a for v in pos):
        return a
    return None


def smoothed_membership(x: KSet, beta: Sequence, delta: float, sigma: float) -> float:
    """Z(x, sigma) = phi(((beta, x) - delta) / sigma)."""
    if sigma <= 0:
        raise DomainError("sigma must be positive")
    dot = sum(float(beta[i]) for i in range(min(len(beta), x.n)) if x.mask >> i & 1)
    return gaussian_cdf((dot - float(delta)) / sigma)


def smoothed_count(
    beta: Sequence,
    delta: float,
    sigma: float,
    n: int,
    k: int,
    force_generic: bool = False,
) -> float:
    """Sum of Z(x, sigma) over all k-subsets of [n].

    Step vectors take a grouped fast path over p = |x cap [a]|; the generic
    path enumerates all C(n, k) sets (capacity-capped).
    """
    if sigma <= 0:
        raise DomainError("sigma must be positive")
    if not force_generic:
        a = _is_step(beta)
        if a is not None:
            return sum(
                binom(a, p)
                * binom(n - a, k - p)
                * gaussian_cdf((p / a - float(delta)) / sigma)
                for p in range(0, k + 1)
            )
    if binom(n, k) > ENUMERATION_CAP:
        raise CapacityError(f"C({n},{k}) exceeds the enumeration cap and beta is not a step vector")
    X = _incidence(n, k)
    args = (X @ _pad_beta(beta, n) - float(delta)) / sigma
    return float(ndtr(args).sum())  # ndtr matches gaussian_cdf to ~1e-16


def grad_smoothed_count(
    beta: Sequence,
    delta: float,
    sigma: float,
    n: int,
    k: int,
    eliminated: int,
) -> np.ndarray:
    """Gradient of the smoothed count with coordinate `eliminated` dependent.

    `eliminated` is the 1-based last support index a; beta_a is treated as
    1 - sum of the others, so component j (1-based, j in [a-1]) is

        (1 / (sigma sqrt(2 pi))) * sum_x exp(-((beta,x)-delta)^2 / (2 sigma^2))
                                          * (x_j - x_a).
    """
    a = eliminated
    if not 1 <= a <= n:
        raise DomainError(f"eliminated index must be in [1, n], got {a}")
    X = _incidence(n, k)
    args = (X @ _pad_beta(beta, n) - float(delta)) / sigma
    w = np.exp(-0.5 * args**2) * (_INV_SQRT_2PI / sigma)
    diff = X[:, : a - 1] - X[:, a - 1 : a]
    return diff.T @ w


def witness_penalty(
    witness: Sequence[KSet],
    beta: Sequence,
    delta: float,
    sigma: float,
    mu1: float = 0.1,
) -> float:
    """Hinge excess of sum_m Z(x_m) over ell - 1 + mu1 (single forbidden tuple)."""
    if not witness:
        raise DomainError("witness must be nonempty")
    ell = len(witness)
    total = sum(smoothed_membership(x, beta, delta, sigma) for x in witness)
    return max(0.0, total - (ell - 1 + mu1))


def _pav_nonincreasing(y: np.ndarray) -> np.ndarray:
    """Isotonic regression onto the nonincreasing cone (pool adjacent violators)."""
    vals = []
    counts = []
    for v in y:
        vals.append(float(v))
        counts.append(1)
        while len(vals) > 1 and vals[-2] < vals[-1]:
            total = vals[-1] * counts[-1] + vals[-2] * counts[-2]
            cnt = counts[-1] + counts[-2]
            vals.pop(), counts.pop()
            vals[-1] = total / cnt
            counts[-1] = cnt
    out = np.empty_like(y, dtype=np.float64)
    pos = 0
    for v, c in zip(vals, counts):
        out[pos : pos + c] = v
        pos += c
    return out


def project_monotone_simplex(y: Sequence) -> np.ndarray:
    """Euclidean projection onto {b : b_1 >= ... >= b_L >= 0, sum b = 1}.

    Dualizing the sum constraint shifts y uniformly, and projecting a vector
    onto the nonincreasing-nonnegative cone is clipped isotonic regression
    (pool-adjacent-violators, then clamp at zero).  The shifted solution is
    therefore max(PAV(y) - lam, 0), and since PAV(y) is already sorted
    nonincreasing, lam comes from the standard simplex water-filling rule.
    This is exact and finite, no iteration needed.
    """
    u = _pav_nonincreasing(np.asarray([float(v) for v in y], dtype=np.float64))
    L = len(u)
    css = np.cumsum(u)
    idx = np.arange(1, L + 1)
    active = np.nonzero(u - (css - 1.0) / idx > 0.0)[0]
    m = int(active[-1]) + 1 if active.size else 1
    lam = (css[m - 1] - 1.0) / m
    return np.maximum(u - lam, 0.0)


def _witness_matrix(witness: Sequence[KSet], n: int) -> np.ndarray:
    W = np.zeros((len(witness), n))
    for r, x in enumerate(witness):
        for i in range(n):
            if x.mask >> i & 1:
                W[r, i] = 1.0
    return W


@dataclass
class MaximizeResult:
    beta: np.ndarray
    delta: float
    trace: list
    kkt: KktReport
    converged: bool
    count: float


TUPLE_CAP = 200_000


def _matching_tuples(masks: Sequence[int], ell: int) -> list:
    """Index tuples of all unordered ell-tuples of pairwise disjoint sets."""
    out = []
    m = len(masks)

    def rec(start, chosen, used):
        if len(out) > TUPLE_CAP:
            return
        if len(chosen) == ell:
            out.append(tuple(chosen))
            return
        for i in range(start, m):
            if masks[i] & used:
                continue
            chosen.append(i)
            rec(i + 1, chosen, used | masks[i])
            chosen.pop()

    rec(0, [], 0)
    return out


def _intersect_tuples(masks: Sequence[int], s: int, t: int, n: int) -> list:
    """Index tuples of all unordered s-tuples with |common intersection| < t."""
    out = []
    m = len(masks)
    full = (1 << n) - 1

    def rec(start, chosen, inter):
        if len(out) > TUPLE_CAP:
            return
        if len(chosen) == s:
            if bin(inter).count("1") < t:
                out.append(tuple(chosen))
            return
        for i in range(start, m):
            chosen.append(i)
            rec(i + 1, chosen, inter & masks[i])
            chosen.pop()

    rec(0, [], full)
    return out


def maximize(
    problem: Union[MatchingParams, IntersectParams],
    config: SmoothingConfig = SmoothingConfig(),
    support: Optional[int] = None,
) -> MaximizeResult:
    """Projected gradient ascent on the smoothed count over feasible halfspaces.

    Every forbidden tuple (each ell-tuple of pairwise disjoint sets, or each
    s-tuple intersecting in fewer than t elements) contributes one constraint
    sum_m Z(x_m) <= ell - 1 + slack; when the tuples exceed the enumeration
    cap only the canonical witness is kept.  The support length is k*ell - 1
    for the matching problem and n - 1 for the intersection problem; iterates
    live on the monotone simplex, delta is restored to the constraint boundary
    each iteration, beta follows the reduced gradient along that boundary, and
    sigma anneals geometrically from sigma_initial down to sigma_floor.
    Passing `support` caps the number of free coordinates (forcing, e.g., a
    star family at support=1).
    """
    if isinstance(problem, MatchingParams):
        n, k = problem.n, problem.k
        L = min(problem.k * problem.ell - 1, n - 1)
        witness = canonical_matching_witness(problem.ell, problem.k, n)
        slack = config.mu1
    elif isinstance(problem, IntersectParams):
        n, k = problem.n, problem.k
        L = n - 1
        witness = canonical_swise_witness(problem.s, problem.t, problem.k, n)
        slack = config.mu2
    else:
        raise TypeError(f"unsupported problem type {type(problem)!r}")
    if support is not None:
        if not 1 <= support <= L:
            raise DomainError(f"support must be in [1, {L}], got {support}")
        L = support

    ell = len(witness)
    family = all_ksets(n, k)
    masks = family.masks()
    X = _incidence(n, k)
    XL = X[:, :L]

    if isinstance(problem, MatchingParams):
        tuples = _matching_tuples(masks, problem.ell)
    else:
        tuples = _intersect_tuples(masks, problem.s, problem.t, n)
    if not tuples or len(tuples) > TUPLE_CAP:
        # fall back to the single canonical forbidden tuple
        mask_row = {mk: r for r, mk in enumerate(masks)}
        tuples = [tuple(mask_row[x.mask] for x in witness)]
    tup = np.asarray(tuples, dtype=np.intp)

    rng = np.random.default_rng(config.seed)
    beta = project_monotone_simplex(rng.random(L))

    n_iter = config.max_iter
    floor = max(config.sigma, config.sigma_floor)
    sig_ratio = (floor / config.sigma_initial) ** (1.0 / max(1, n_iter - 1))
    sigma = config.sigma_initial

    trace = []
    threshold = ell - 1 + slack
    delta = 0.0
    for it in range(n_iter):
        # the smoothed count is maximized in delta at the constraint boundary,
        # so delta is restored exactly each iteration and beta ascends the
        # reduced gradient along the boundary manifold delta = delta*(beta)
        setvals = XL @ beta
        delta = _min_feasible_delta(setvals[tup], sigma, threshold)
        args = (setvals - delta) / sigma
        pdf = np.exp(-0.5 * args**2) * (_INV_SQRT_2PI / sigma)
        gbeta = XL.T @ pdf
        if delta > 0.0:
            # delta*(beta) follows the binding tuples; a softmax over
            # near-binding tuples keeps the derivative from chattering when
            # symmetry makes several tuples bind at once
            sums = ndtr((setvals[tup] - delta) / sigma).sum(axis=1)
            wts = np.exp((sums - sums.max()) / 0.02)
            P = pdf[tup]
            den = P.sum(axis=1)
            live = den > 0.0
            if np.any(live):
                num = np.einsum("tl,tlj->tj", P, XL[tup])
                per_tuple = num[live] / den[live, None]
                w = wts[live] / wts[live].sum()
                ddelta_dbeta = w @ per_tuple
                gbeta = gbeta - float(pdf.sum()) * ddelta_dbeta

        scale = max(1.0, float(np.abs(gbeta).max()))
        beta = project_monotone_simplex(beta + config.step * gbeta / scale)

        if it % 25 == 0 or it == n_iter - 1:
            setvals = XL @ beta
            wz = float(ndtr((setvals[tup] - delta) / sigma).sum(axis=1).max())
            y_now = float(ndtr((setvals - delta) / sigma).sum())
            trace.append(
                {
                    "iter": it,
                    "Y": y_now,
                    "penalty": max(0.0, wz - threshold),
                    "sigma": sigma,
                    "max_step_deviation": _step_deviation(beta),
                }
            )
        sigma = max(floor, sigma * sig_ratio)

    # final threshold: for fixed beta any delta between the forced exclusion
    # level and the next attainable value gives the same discrete family, so
    # place it mid-gap where the smoothed count matches the exact size
    setvals = XL @ beta
    delta = float(np.min(setvals[tup], axis=1).max())
    above = setvals[setvals > delta + 1e-9]
    if above.size:
        delta = 0.5 * (delta + float(above.min()))
    else:
        delta = delta + 0.5

    sigma = config.sigma
    count = smoothed_count(beta, delta, sigma, n, k, force_generic=True)
    a = int(np.sum(beta > 0.5 / L))
    a = max(1, a)
    # diagnostics need a width at which the witness still carries gradient;
    # at the final annealed sigma its Gaussian weights underflow to zero
    sigma_kkt = max(sigma, 0.05)
    kkt = kkt_check(beta, delta, sigma_kkt, witness, support=a)
    converged = _step_deviation(beta) < 1e-4
    return MaximizeResult(
        beta=beta, delta=delta, trace=trace, kkt=kkt, converged=converged, count=count
    )


def _min_feasible_delta(wvals: np.ndarray, sigma: float, threshold: float) -> float:
    """Smallest delta in [0, 1] keeping every tuple's membership sum <= threshold.

    `wvals` holds the witness values (beta, x), one row per forbidden tuple.
    """
    wvals = np.atleast_2d(wvals)

    def excess(d: float) -> float:
        return float(ndtr((wvals - d) / sigma).sum(axis=1).max()) - threshold

    if excess(0.0) <= 0.0:
        return 0.0
    lo, hi = 0.0, 1.0
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if excess(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return hi


def _step_deviation(beta: np.ndarray) -> float:
    """Max-norm distance from beta to the nearest exact step vector."""
    L = len(beta)
    best = math.inf
    for a in range(1, L + 1):
        step = np.zeros(L)
        step[:a] = 1.0 / a
        best = min(best, float(np.max(np.abs(beta - step))))
    return best


def kkt_check(
    beta: Sequence,
    delta: float,
    sigma: float,
    witness: Sequence[KSet],
    support: Optional[int] = None,
    active_tol: float = 1e-6,
) -> KktReport:
    """First-order multiplier diagnostics at (beta, delta).

    The constraint multiplier lambda comes from the threshold equation
    Y'_delta = lambda * Z'_delta (Z'_delta < 0 always, else degenerate);
    monotonicity multipliers lambda_j are solved from the stationarity
    equations where the constraint beta_j = beta_a is active and forced to 0
    elsewhere, so the reported residual is the defect of the inactive rows
    and negative lambda_j values signal a KKT failure.
    """
    if not witness:
        raise DomainError("witness must be nonempty")
    n, k = witness[0].n, witness[0].k
    b = np.asarray([float(v) for v in beta], dtype=np.float64)
    a = support if support is not None else int(np.sum(b > 1e-12))
    if a < 1:
        raise DomainError("beta has empty support")

    X = _incidence(n, k)
    bp = _pad_beta(b, n)
    args = (X @ bp - float(delta)) / sigma
    pdf = np.exp(-0.5 * args**2) * (_INV_SQRT_2PI / sigma)
    diff = X[:, : a - 1] - X[:, a - 1 : a]
    Yg = diff.T @ pdf
    Yd = -float(pdf.sum())

    Wfull = _witness_matrix(witness, n)
    wargs = (Wfull @ bp - float(delta)) / sigma
    wpdf = np.exp(-0.5 * wargs**2) * (_INV_SQRT_2PI / sigma)
    wdiff = Wfull[:, : a - 1] - Wfull[:, a - 1 : a]
    Zg = wdiff.T @ wpdf
    Zd = -float(wpdf.sum())
    if abs(Zd) < 1e-300:
        raise DegenerateError("Z'_delta vanishes: constraint multiplier undefined")

    lam = Yd / Zd
    beta_a = bp[a - 1]
    lambdas = np.zeros(a - 1)
    residuals = np.zeros(a - 1)
    for j in range(a - 1):
        if abs(bp[j] - beta_a) <= active_tol:
            lambdas[j] = (lam * Zg[j] - Yg[j]) / 2.0
        else:
            residuals[j] = abs(Yg[j] - lam * Zg[j])
    slackness = (
        float(np.max(np.abs(lambdas * (beta_a - bp[: a - 1])))) if a > 1 else 0.0
    )
    return KktReport(
        lambdas=lambdas,
        stationarity_residual=float(residuals.max()) if a > 1 else 0.0,
        slackness_violation=slackness,
        delta_residual=abs(Yd - lam * Zd),
    )


def gamma_threshold(delta: float, n: int, k: int) -> float:
    """Second root of the two-value dichotomy: 2(d - (k-1)/(n-2)) / (1 - 2(k-1)/(n-2))."""
    if n <= 2:
        raise DomainError("need n > 2")
    ratio = (k - 1) / (n - 2)
    denom = 1.0 - 2.0 * ratio
    if denom == 0.0:
        raise DomainError(f"vanishing denominator at n = 2k (n={n}, k={k})")
    return 2.0 * (float(delta) - ratio) / denom


def psi_threshold(m: int, ell: int, p: int) -> tuple[int, float]:
    """Support size a = (m-1)*ell + p and threshold psi = (m-1)/a."""
    if m < 1 or not 0 <= p < ell:
        raise DomainError(f"need m >= 1 and 0 <= p < ell, got m={m}, p={p}, ell={ell}")
    a = (m - 1) * ell + p
    if a < 1:
        raise DomainError(f"a = (m-1)*ell + p = {a} must be >= 1")
    return a, (m - 1) / a


def admissible_count(a: int, m: int, n: int, k: int) -> int:
    """sum_{j >= m} C(a, j) C(n - a, k - j)."""
    if not 1 <= a <= n:
        raise DomainError(f"need 1 <= a <= n, got a={a}, n={n}")
    return sum(binom(a, j) * binom(n - a, k - j) for j in range(max(m, 0), k + 1))


def trace_to_csv(trace: list) -> str:
    """Iteration trace as CSV: iter, Y, penalty, sigma, max-step-deviation."""
    lines = ["iter,Y,penalty,sigma,max_step_deviation"]
    for rec in trace:
        lines.append(
            f"{rec['iter']},{rec['Y']:.12g},{rec['penalty']:.12g},"
            f"{rec['sigma']:.12g},{rec['max_step_deviation']:.12g}"
        )
    return "\n".join(lines) + "\n"
