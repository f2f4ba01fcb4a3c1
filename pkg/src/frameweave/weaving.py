"""Exhaustive woven certification, universal bounds and sufficient conditions.

Two families F and G of equal size are woven when every index subset sigma
produces a spanning weaving {f_i : i in sigma} + {g_i : i not in sigma}. The
certifier enumerates all subsets as bitmasks, computes the extremal
eigenvalues of every weaving's frame operator, and reduces them to universal
bounds. The reduction (min, max, lexicographically-smallest witness) is
associative, so splitting the mask range across threads cannot change the
report.
"""

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import (
    BadDimensions,
    EmptyList,
    EnumerationLimitExceeded,
    NotWovenPremise,
    ShapeMismatch,
    TooFewVectors,
    ZeroFamily,
)
from .frames import (
    Frame,
    Scope,
    apply_frame_operator,
    canonical_dual,
    frame_operator,
    is_frame,
    optimal_bounds,
    synthesis,
)
from . import linalg
from .linalg import DEFAULT_TOLERANCE, Tolerance

__all__ = [
    "IndexSubset",
    "SubsetPolicy",
    "WovenReport",
    "ConditionReport",
    "Problem",
    "Counterexample",
    "ExplorationReport",
    "DEFAULT_ENUMERATION_LIMIT",
    "weaving_family",
    "weaving_operator",
    "certify_woven",
    "certify_woven_sequences",
    "bessel_sum_bound",
    "synthesis_norm_bound",
    "surjectivity_check",
    "check_perturbation",
    "check_corollary",
    "check_norm_sum",
    "explore_problem",
]

DEFAULT_ENUMERATION_LIMIT = 24


class SubsetPolicy(enum.Enum):
    """Which subsets a certification enumerates."""

    ALL = "all"
    NONTRIVIAL_ONLY = "nontrivial"


@dataclass(frozen=True)
class IndexSubset:
    """Subset of {1, ..., m} packed as a bitmask: bit i-1 set means index i selected."""

    m: int
    mask: int

    def __post_init__(self):
        if self.m < 1:
            raise ValueError(f"index set size must be positive, got {self.m}")
        if not 0 <= self.mask < (1 << self.m):
            raise ValueError(f"mask {self.mask} out of range for m={self.m}")

    @classmethod
    def empty(cls, m: int) -> "IndexSubset":
        return cls(m, 0)

    @classmethod
    def full(cls, m: int) -> "IndexSubset":
        return cls(m, (1 << m) - 1)

    @classmethod
    def from_indices(cls, m: int, indices) -> "IndexSubset":
        mask = 0
        for index in indices:
            if not 1 <= index <= m:
                raise ValueError(f"index {index} out of range 1..{m}")
            mask |= 1 << (index - 1)
        return cls(m, mask)

    @classmethod
    def from_bits(cls, bits: str) -> "IndexSubset":
        """Parse a binary numeral whose least-significant bit is index 1."""
        return cls(len(bits), int(bits, 2))

    @property
    def complement(self) -> "IndexSubset":
        return IndexSubset(self.m, self.mask ^ ((1 << self.m) - 1))

    @property
    def members(self) -> tuple[int, ...]:
        return tuple(i for i in range(1, self.m + 1) if (self.mask >> (i - 1)) & 1)

    @property
    def bits(self) -> str:
        return format(self.mask, f"0{self.m}b")

    @property
    def is_trivial(self) -> bool:
        return self.mask == 0 or self.mask == (1 << self.m) - 1

    def selector(self) -> np.ndarray:
        """Boolean pick vector of length m (entry i-1 is True when index i selected)."""
        return ((self.mask >> np.arange(self.m)) & 1).astype(bool)

    def __contains__(self, index: int) -> bool:
        return 1 <= index <= self.m and bool((self.mask >> (index - 1)) & 1)


@dataclass(frozen=True)
class WovenReport:
    """Outcome of an exhaustive woven certification."""

    woven: bool
    universal_lower: float
    universal_upper: float
    worst_subset: IndexSubset
    breaking_subset: IndexSubset | None
    subsets_examined: int
    subset_policy: SubsetPolicy


@dataclass(frozen=True)
class ConditionReport:
    """Outcome of a sufficient-condition check (lhs < rhs means it holds)."""

    condition_holds: bool
    lhs: float
    rhs: float
    guaranteed_lower: float | None = None
    guaranteed_upper: float | None = None
    note: str | None = None


def _check_pair(frame_f: Frame, frame_g: Frame) -> None:
    if len(frame_f) != len(frame_g) or frame_f.ambient_dim != frame_g.ambient_dim:
        raise ShapeMismatch(
            f"families disagree in shape: {len(frame_f)}x{frame_f.ambient_dim} "
            f"vs {len(frame_g)}x{frame_g.ambient_dim}"
        )


def weaving_family(frame_f: Frame, frame_g: Frame, sigma: IndexSubset) -> Frame:
    """Mix the families index-wise: f_i where i is selected, g_i elsewhere."""
    _check_pair(frame_f, frame_g)
    if sigma.m != len(frame_f):
        raise ShapeMismatch(f"subset is over {sigma.m} indices but the families have {len(frame_f)}")
    pick = sigma.selector()[:, None]
    return Frame(np.where(pick, frame_f.vectors, frame_g.vectors))


def weaving_operator(frame_f: Frame, frame_g: Frame, sigma: IndexSubset) -> np.ndarray:
    """Frame operator of the chosen weaving (symmetric positive semidefinite)."""
    return frame_operator(weaving_family(frame_f, frame_g, sigma))


def _mask_range(policy: SubsetPolicy, m: int) -> tuple[int, int]:
    if policy is SubsetPolicy.NONTRIVIAL_ONLY:
        return 1, (1 << m) - 1
    return 0, 1 << m


def _weaving_rows(f_rows, g_rows, mask: int, positions) -> np.ndarray:
    keep = ((mask >> positions) & 1).astype(bool)
    return np.where(keep[:, None], f_rows, g_rows)


def _scan_masks(f_rows, g_rows, lo: int, hi: int, positions):
    """Reduce a contiguous mask range: (min lambda_min with first mask, max lambda_max)."""
    best_low = math.inf
    best_mask = -1
    best_high = -math.inf
    for mask in range(lo, hi):
        rows = _weaving_rows(f_rows, g_rows, mask, positions)
        eigs = np.linalg.eigvalsh(rows.T @ rows)
        low = float(eigs[0])
        high = float(eigs[-1])
        if low < best_low:
            best_low = low
            best_mask = mask
        if high > best_high:
            best_high = high
    return best_low, best_mask, best_high


def certify_woven(
    frame_f: Frame,
    frame_g: Frame,
    policy: SubsetPolicy = SubsetPolicy.ALL,
    tol: Tolerance = DEFAULT_TOLERANCE,
    *,
    limit: int = DEFAULT_ENUMERATION_LIMIT,
    jobs: int = 1,
) -> WovenReport:
    """Decide woven-ness exhaustively and report universal bounds with witnesses.

    Every subset under `policy` contributes the extremal eigenvalues of its
    weaving's frame operator. The pair counts as woven when the universal
    lower bound exceeds frame_rel times the universal upper bound (a relative
    test, so the verdict is scale invariant). The worst subset is the
    lexicographically smallest mask attaining the minimum; when the verdict
    is negative, the breaking subset is the smallest mask whose weaving fails
    the threshold. `jobs` splits the mask range across threads; the reduction
    is order independent, so the report is identical for any job count.
    """
    _check_pair(frame_f, frame_g)
    m = len(frame_f)
    if m > limit:
        raise EnumerationLimitExceeded(
            f"family size {m} exceeds the enumeration limit {limit} (would visit 2^{m} subsets)"
        )
    if policy is SubsetPolicy.NONTRIVIAL_ONLY and m < 2:
        raise TooFewVectors("nontrivial subsets require at least two vectors")
    start, stop = _mask_range(policy, m)
    f_rows = frame_f.vectors
    g_rows = frame_g.vectors
    positions = np.arange(m)

    if jobs > 1 and stop - start > 1:
        chunk = max(1, math.ceil((stop - start) / jobs))
        ranges = [(lo, min(lo + chunk, stop)) for lo in range(start, stop, chunk)]
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            partials = list(
                pool.map(lambda r: _scan_masks(f_rows, g_rows, r[0], r[1], positions), ranges)
            )
    else:
        partials = [_scan_masks(f_rows, g_rows, start, stop, positions)]

    universal_lower = math.inf
    worst_mask = -1
    universal_upper = -math.inf
    for low, mask, high in partials:
        if low < universal_lower:
            universal_lower = low
            worst_mask = mask
        if high > universal_upper:
            universal_upper = high

    threshold = tol.frame_rel * universal_upper
    woven = universal_lower > threshold
    breaking = None
    if not woven:
        for mask in range(start, stop):
            rows = _weaving_rows(f_rows, g_rows, mask, positions)
            if float(np.linalg.eigvalsh(rows.T @ rows)[0]) <= threshold:
                breaking = IndexSubset(m, mask)
                break
    return WovenReport(
        woven=woven,
        universal_lower=universal_lower,
        universal_upper=universal_upper,
        worst_subset=IndexSubset(m, worst_mask),
        breaking_subset=breaking,
        subsets_examined=stop - start,
        subset_policy=policy,
    )


def certify_woven_sequences(
    frame_f: Frame,
    frame_g: Frame,
    tol: Tolerance = DEFAULT_TOLERANCE,
    *,
    limit: int = DEFAULT_ENUMERATION_LIMIT,
    jobs: int = 1,
) -> WovenReport:
    """Woven certification for frame sequences.

    Only nontrivial subsets count (each family alone need not span), and a
    qualifying weaving must span the full ambient space, which is exactly the
    eigenvalue test of certify_woven.
    """
    return certify_woven(
        frame_f, frame_g, SubsetPolicy.NONTRIVIAL_ONLY, tol, limit=limit, jobs=jobs
    )


def bessel_sum_bound(upper_bounds) -> float:
    """Upper bound valid for every weaving: the sum of the families' upper bounds."""
    values = [float(b) for b in upper_bounds]
    if not values:
        raise EmptyList("at least one upper bound is required")
    return float(sum(values))


def synthesis_norm_bound(upper_bounds) -> float:
    """Bound on any weaving's synthesis operator norm: sqrt of the Bessel sum."""
    return math.sqrt(bessel_sum_bound(upper_bounds))


def surjectivity_check(
    frame_f: Frame,
    frame_g: Frame,
    sigma: IndexSubset,
    tol: Tolerance = DEFAULT_TOLERANCE,
) -> bool:
    """True when the chosen weaving's synthesis matrix has full row rank."""
    family = weaving_family(frame_f, frame_g, sigma)
    return linalg.numerical_rank(synthesis(family), tol) == family.ambient_dim


def check_perturbation(
    frame_f: Frame,
    frame_g: Frame,
    frame_h: Frame,
    tol: Tolerance = DEFAULT_TOLERANCE,
    *,
    limit: int = DEFAULT_ENUMERATION_LIMIT,
    jobs: int = 1,
) -> ConditionReport:
    """Perturbation condition: F stays woven with H when H is close enough to G.

    Requires F and G woven (certified here, never taken on trust); the
    condition is (||T_G|| + ||T_H||) * ||T_G - T_H|| < A with A the pair's
    universal lower bound. When it holds, the weavings of (F, H) have a
    guaranteed lower bound (A - lhs)^2 / (B + B_H) and upper bound B + B_H,
    where B is the pair's universal upper bound and B_H the upper bound of H
    on its span.
    """
    _check_pair(frame_f, frame_g)
    _check_pair(frame_g, frame_h)
    base = certify_woven(frame_f, frame_g, SubsetPolicy.ALL, tol, limit=limit, jobs=jobs)
    if not base.woven:
        raise NotWovenPremise("the first two families are not woven, so the premise fails")
    norm_g = linalg.operator_norm(synthesis(frame_g))
    norm_h = linalg.operator_norm(synthesis(frame_h))
    norm_diff = linalg.operator_norm(synthesis(frame_g) - synthesis(frame_h))
    lhs = (norm_g + norm_h) * norm_diff
    rhs = base.universal_lower
    holds = lhs < rhs
    upper_h = optimal_bounds(frame_h, Scope.SPAN_OF_FAMILY, tol).upper
    guaranteed_lower = None
    guaranteed_upper = None
    if holds:
        guaranteed_lower = (rhs - lhs) ** 2 / (base.universal_upper + upper_h)
        guaranteed_upper = base.universal_upper + upper_h
    return ConditionReport(holds, lhs, rhs, guaranteed_lower, guaranteed_upper)


def check_corollary(
    frame_f: Frame,
    frame_g: Frame,
    tol: Tolerance = DEFAULT_TOLERANCE,
) -> ConditionReport:
    """Closeness condition: G is woven with the frame F when their synthesis
    matrices differ by little.

    The condition is ||T_F - T_G|| * (||T_F|| + ||T_G||) < A with A the
    optimal lower bound of F. The guarantee follows from the perturbation
    condition applied to the trivially woven pair (F, F).
    """
    _check_pair(frame_f, frame_g)
    bounds_f = optimal_bounds(frame_f, Scope.AMBIENT, tol)
    norm_f = linalg.operator_norm(synthesis(frame_f))
    norm_g = linalg.operator_norm(synthesis(frame_g))
    norm_diff = linalg.operator_norm(synthesis(frame_f) - synthesis(frame_g))
    lhs = norm_diff * (norm_f + norm_g)
    rhs = bounds_f.lower
    holds = lhs < rhs
    upper_g = optimal_bounds(frame_g, Scope.SPAN_OF_FAMILY, tol).upper
    guaranteed_lower = None
    guaranteed_upper = None
    if holds:
        guaranteed_lower = (rhs - lhs) ** 2 / (bounds_f.upper + upper_g)
        guaranteed_upper = bounds_f.upper + upper_g
    return ConditionReport(holds, lhs, rhs, guaranteed_lower, guaranteed_upper)


def check_norm_sum(
    frame_f: Frame,
    frame_g: Frame,
    tol: Tolerance = DEFAULT_TOLERANCE,
) -> ConditionReport:
    """Energy condition comparing total vector energy against the lower bound of F.

    With lambda_1 = sqrt(sum ||f_i||^2) and lambda_2 = sqrt(sum ||g_i||^2),
    the condition is lambda_1 sqrt(B_1) + lambda_2 sqrt(B_2) < A_1. The
    stated premise also wants both lambdas inside (0, 1); violations are
    reported in `note` while the inequality is still evaluated.
    """
    _check_pair(frame_f, frame_g)
    if not frame_g.vectors.any():
        raise ZeroFamily("the second family has only zero vectors")
    bounds_f = optimal_bounds(frame_f, Scope.AMBIENT, tol)
    lam1 = float(np.linalg.norm(frame_f.vectors))
    lam2 = float(np.linalg.norm(frame_g.vectors))
    upper_g = optimal_bounds(frame_g, Scope.SPAN_OF_FAMILY, tol).upper
    lhs = lam1 * math.sqrt(bounds_f.upper) + lam2 * math.sqrt(upper_g)
    rhs = bounds_f.lower
    holds = lhs < rhs
    notes = []
    if not 0.0 < lam1 < 1.0:
        notes.append(f"root energy of the first family is {lam1:.6g}, outside (0, 1)")
    if not 0.0 < lam2 < 1.0:
        notes.append(f"root energy of the second family is {lam2:.6g}, outside (0, 1)")
    guaranteed_lower = None
    guaranteed_upper = None
    if holds:
        guaranteed_lower = (rhs - lhs) ** 2 / (bounds_f.upper + upper_g)
        guaranteed_upper = bounds_f.upper + upper_g
    return ConditionReport(
        holds, lhs, rhs, guaranteed_lower, guaranteed_upper, "; ".join(notes) or None
    )


class Problem(enum.Enum):
    """Partner construction explored by the randomized search harness."""

    FRAME_OPERATOR_IMAGE = 1
    CANONICAL_DUAL = 2


@dataclass(frozen=True, eq=False)
class Counterexample:
    """First not-woven pair a search run encountered."""

    trial_index: int
    frame_vectors: np.ndarray
    partner_vectors: np.ndarray
    breaking_subset: IndexSubset


@dataclass(frozen=True, eq=False)
class ExplorationReport:
    """Evidence from a seeded random search; no mathematical claim attached."""

    problem: Problem
    trials: int
    ambient_dim: int
    family_size: int
    seed: int
    woven_count: int
    not_woven_count: int
    min_universal_lower: float
    counterexample: Counterexample | None


def _random_frame(rng: np.random.Generator, n: int, m: int, tol: Tolerance) -> Frame:
    # Standard normal entries; resample until the family spans R^n.
    while True:
        frame = Frame(rng.standard_normal((m, n)))
        if is_frame(frame, tol):
            return frame


def explore_problem(
    which: Problem,
    trials: int,
    dims: tuple[int, int],
    seed: int,
    tol: Tolerance = DEFAULT_TOLERANCE,
) -> ExplorationReport:
    """Search random frames for pairs that fail to be woven with their partner.

    The partner is the frame-operator image or the canonical dual. Sampling
    is standard normal with rejection on rank-deficient draws, fully
    determined by `seed`. The report carries counts and the first
    counterexample; it asserts nothing beyond what the run saw.
    """
    n, m = dims
    if not (1 <= n <= 6) or not (n <= m <= 10):
        raise BadDimensions(f"need 1 <= n <= 6 and n <= m <= 10, got n={n}, m={m}")
    if trials < 1:
        raise BadDimensions(f"trials must be at least 1, got {trials}")
    rng = np.random.default_rng(seed)
    woven_count = 0
    counterexample = None
    min_lower = math.inf
    for trial in range(trials):
        frame = _random_frame(rng, n, m, tol)
        if which is Problem.FRAME_OPERATOR_IMAGE:
            partner = apply_frame_operator(frame)
        else:
            partner = canonical_dual(frame, tol)
        report = certify_woven(frame, partner, SubsetPolicy.ALL, tol)
        min_lower = min(min_lower, report.universal_lower)
        if report.woven:
            woven_count += 1
        elif counterexample is None:
            counterexample = Counterexample(
                trial_index=trial,
                frame_vectors=frame.vectors,
                partner_vectors=partner.vectors,
                breaking_subset=report.breaking_subset,
            )
    return ExplorationReport(
        problem=which,
        trials=trials,
        ambient_dim=n,
        family_size=m,
        seed=seed,
        woven_count=woven_count,
        not_woven_count=trials - woven_count,
        min_universal_lower=min_lower,
        counterexample=counterexample,
    )
