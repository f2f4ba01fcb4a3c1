"""Finite frames in R^n: bounds, duals, spark tests and derived families.

A Frame is an ordered family of m row vectors in R^n. Order is significant
throughout the package because weaving mixes two families index by index.
Every finite family is a frame for its own span, so frame sequences need no
separate type: ask for bounds relative to the span instead of the ambient
space.
"""

import enum
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from . import geometry, linalg
from .errors import (
    DimensionMismatch,
    NonSquare,
    NotAFrame,
    NotFinite,
    TooFewVectors,
    ZeroCoefficient,
)
from .linalg import DEFAULT_TOLERANCE, Tolerance

__all__ = [
    "Frame",
    "FrameBounds",
    "LinearMapProfile",
    "Scope",
    "Closure",
    "synthesis",
    "frame_operator",
    "apply_frame_operator",
    "optimal_bounds",
    "is_frame",
    "canonical_dual",
    "is_full_spark",
    "is_weak_full_spark",
    "difference_family",
    "linear_comb_family",
    "apply_operator",
    "profile_operator",
]


class Scope(enum.Enum):
    """Reference space for frame bounds."""

    AMBIENT = "ambient"
    SPAN_OF_FAMILY = "span"


class Closure(enum.Enum):
    """Rule for the successor of the last vector in sliding-window constructions."""

    ZERO_TAIL = "zero"
    WRAP_AROUND = "wrap"


class Frame:
    """Ordered family of m vectors in R^n, stored as the rows of `vectors`."""

    def __init__(self, vectors) -> None:
        arr = np.array(vectors, dtype=float)
        if arr.ndim != 2:
            raise ValueError(f"expected an (m, n) array of row vectors, got shape {arr.shape}")
        if arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError("a frame needs at least one vector of positive dimension")
        if not np.isfinite(arr).all():
            raise NotFinite("frame vectors contain NaN or Inf entries")
        arr.setflags(write=False)
        self.vectors = arr

    @property
    def ambient_dim(self) -> int:
        return self.vectors.shape[1]

    def __len__(self) -> int:
        return self.vectors.shape[0]

    def __repr__(self) -> str:
        return f"Frame(m={len(self)}, n={self.ambient_dim})"


@dataclass(frozen=True)
class FrameBounds:
    """Optimal two-sided energy bounds and the space they refer to."""

    lower: float
    upper: float
    relative_to: Scope


@dataclass(frozen=True, eq=False)
class LinearMapProfile:
    """A square operator together with structural flags computed at tolerance."""

    matrix: np.ndarray
    is_idempotent: bool
    is_invertible: bool
    range_equals_range_of_adjoint: bool
    inverse_norm: float | None


def synthesis(frame: Frame) -> np.ndarray:
    """Synthesis matrix of the family: column j is vector j."""
    return frame.vectors.T


def frame_operator(frame: Frame) -> np.ndarray:
    """Sum of the outer products v v^T over the family (equals T T^T)."""
    return frame.vectors.T @ frame.vectors


def apply_frame_operator(frame: Frame) -> Frame:
    """Image of the family under its own frame operator, order preserved."""
    return Frame(frame.vectors @ frame_operator(frame))


def is_frame(frame: Frame, tol: Tolerance = DEFAULT_TOLERANCE) -> bool:
    """True when the family spans the whole ambient space."""
    return linalg.numerical_rank(synthesis(frame), tol) == frame.ambient_dim


def optimal_bounds(
    frame: Frame,
    relative_to: Scope = Scope.AMBIENT,
    tol: Tolerance = DEFAULT_TOLERANCE,
) -> FrameBounds:
    """Optimal frame bounds: extremal eigenvalues of the frame operator.

    With Scope.AMBIENT the family must span R^n, otherwise NotAFrame is
    raised. With Scope.SPAN_OF_FAMILY the operator is restricted to the span,
    which keeps only the eigenvalues above the rank cutoff; the all-zero
    family gets (0, 0).
    """
    if relative_to is Scope.AMBIENT:
        if not is_frame(frame, tol):
            raise NotAFrame(
                f"family of {len(frame)} vectors spans a proper subspace of R^{frame.ambient_dim}"
            )
        low, high = linalg.sym_extremal_eigs(frame_operator(frame))
        return FrameBounds(max(low, 0.0), high, Scope.AMBIENT)
    svals = linalg.singular_values(synthesis(frame))
    top = float(svals[0]) if svals.size else 0.0
    if top == 0.0:
        return FrameBounds(0.0, 0.0, Scope.SPAN_OF_FAMILY)
    kept = svals[svals > tol.rank_rel * top]
    return FrameBounds(float(kept[-1] ** 2), float(top**2), Scope.SPAN_OF_FAMILY)


def canonical_dual(frame: Frame, tol: Tolerance = DEFAULT_TOLERANCE) -> Frame:
    """Dual family S^{-1} f_i, which reconstructs every vector of R^n."""
    if not is_frame(frame, tol):
        raise NotAFrame("canonical dual requires a frame for the ambient space")
    dual_columns = np.linalg.solve(frame_operator(frame), synthesis(frame))
    return Frame(dual_columns.T)


def is_full_spark(frame: Frame, tol: Tolerance = DEFAULT_TOLERANCE) -> bool:
    """True when every n-element subfamily spans R^n (C(m, n) rank tests)."""
    m, n = frame.vectors.shape
    if m < n:
        raise TooFewVectors(f"full spark needs at least {n} vectors, got {m}")
    for subset in combinations(range(m), n):
        if linalg.numerical_rank(frame.vectors[list(subset)].T, tol) < n:
            return False
    return True


def is_weak_full_spark(frame: Frame, tol: Tolerance = DEFAULT_TOLERANCE) -> bool:
    """True when every vector lies in the span of the remaining ones."""
    m = len(frame)
    if m < 2:
        raise TooFewVectors(f"weak full spark needs at least 2 vectors, got {m}")
    whole = linalg.numerical_rank(synthesis(frame), tol)
    for i in range(m):
        others = np.delete(frame.vectors, i, axis=0)
        if linalg.numerical_rank(others.T, tol) != whole:
            return False
    return True


def _shifted_rows(frame: Frame, closure: Closure) -> np.ndarray:
    rows = frame.vectors
    tail = np.zeros_like(rows[:1]) if closure is Closure.ZERO_TAIL else rows[:1]
    return np.vstack([rows[1:], tail])


def difference_family(frame: Frame, closure: Closure = Closure.ZERO_TAIL) -> Frame:
    """Successive differences f_i - f_{i+1}; the final successor follows `closure`."""
    return Frame(frame.vectors - _shifted_rows(frame, closure))


def linear_comb_family(
    frame: Frame,
    alpha: float,
    beta: float,
    closure: Closure = Closure.ZERO_TAIL,
) -> Frame:
    """Sliding combinations alpha*f_i + beta*f_{i+1}; both coefficients nonzero."""
    if alpha == 0.0 or beta == 0.0:
        raise ZeroCoefficient(f"coefficients must be nonzero, got alpha={alpha}, beta={beta}")
    return Frame(alpha * frame.vectors + beta * _shifted_rows(frame, closure))


def apply_operator(profile: LinearMapProfile, frame: Frame) -> Frame:
    """Image {T f_i} of the family under the profiled operator, order preserved."""
    mat = profile.matrix
    if mat.shape[0] != frame.ambient_dim:
        raise DimensionMismatch(
            f"operator acts on R^{mat.shape[0]} but the frame lives in R^{frame.ambient_dim}"
        )
    return Frame(frame.vectors @ mat.T)


def profile_operator(matrix, tol: Tolerance = DEFAULT_TOLERANCE) -> LinearMapProfile:
    """Classify a square operator: idempotency, invertibility, range vs adjoint range.

    Idempotency compares ||M^2 - M|| against rank_rel * max(1, ||M||^2); range
    equality compares the gap between the column spans of M and M^T against
    rank_rel; invertibility is a full-rank test, and then the inverse norm
    1/sigma_min is recorded.
    """
    mat = linalg.as_matrix(matrix)
    n, cols = mat.shape
    if n != cols:
        raise NonSquare(f"expected a square operator, got {n}x{cols}")
    if n == 0:
        raise ValueError("operator must act on at least one dimension")
    norm = linalg.operator_norm(mat)
    idempotent = linalg.operator_norm(mat @ mat - mat) <= tol.rank_rel * max(1.0, norm**2)
    col_span = linalg.orthonormal_basis(mat, tol)
    row_span = linalg.orthonormal_basis(mat.T, tol)
    ranges_equal = geometry.gap(col_span, row_span) <= tol.rank_rel
    invertible = linalg.numerical_rank(mat, tol) == n
    inverse_norm = None
    if invertible:
        inverse_norm = float(1.0 / linalg.singular_values(mat)[-1])
    mat = mat.copy()
    mat.setflags(write=False)
    return LinearMapProfile(
        matrix=mat,
        is_idempotent=bool(idempotent),
        is_invertible=bool(invertible),
        range_equals_range_of_adjoint=bool(ranges_equal),
        inverse_norm=inverse_norm,
    )
