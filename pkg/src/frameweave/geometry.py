"""Gap and angle computations between subspaces of R^n.

The directed gap delta(M, N) = sup over unit x in M of dist(x, N) equals the
operator norm of (I - P_N) P_M, and the minimal-angle cosine equals the norm
of P_M P_N; both reduce to small SVDs of basis products. The gap is the
symmetrized maximum, and the (non-minimal) angle cosine is measured after
removing the common intersection from both sides.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from . import linalg
from .errors import DimensionMismatch, TrivialSubset
from .linalg import DEFAULT_TOLERANCE, Subspace, Tolerance

if TYPE_CHECKING:
    from .frames import Frame
    from .weaving import IndexSubset

__all__ = [
    "GapAngleReport",
    "Subspace",
    "directed_gap",
    "gap",
    "min_angle_cos",
    "angle_cos",
    "gap_angle_report",
    "weaving_span_geometry",
]


@dataclass(frozen=True)
class GapAngleReport:
    """All gap/angle quantities for an ordered pair of subspaces (a, b)."""

    directed_gap_ab: float
    directed_gap_ba: float
    gap: float
    min_angle_cos: float
    angle_cos: float


def _check_same_ambient(first: Subspace, second: Subspace) -> None:
    if first.ambient_dim != second.ambient_dim:
        raise DimensionMismatch(
            f"ambient dimensions differ: {first.ambient_dim} vs {second.ambient_dim}"
        )


def _clip_unit(value: float) -> float:
    return float(min(max(value, 0.0), 1.0))


def directed_gap(source: Subspace, target: Subspace) -> float:
    """How far the unit sphere of `source` sticks out of `target`.

    Zero exactly when source is contained in target; the supremum over the
    empty sphere of the trivial subspace is 0.
    """
    _check_same_ambient(source, target)
    if source.is_trivial:
        return 0.0
    residual = source.basis - target.basis @ (target.basis.T @ source.basis)
    return _clip_unit(float(np.linalg.svd(residual, compute_uv=False)[0]))


def gap(first: Subspace, second: Subspace) -> float:
    """Symmetrized gap: the larger of the two directed gaps (0 iff equal)."""
    return max(directed_gap(first, second), directed_gap(second, first))


def min_angle_cos(first: Subspace, second: Subspace) -> float:
    """Cosine of the minimal angle: ||P_first P_second||, 0 if either is trivial."""
    _check_same_ambient(first, second)
    if first.is_trivial or second.is_trivial:
        return 0.0
    return _clip_unit(float(np.linalg.svd(first.basis.T @ second.basis, compute_uv=False)[0]))


def _remove_common(space: Subspace, common: Subspace, tol: Tolerance) -> Subspace:
    if common.is_trivial:
        return space
    residual = space.basis - common.basis @ (common.basis.T @ space.basis)
    # The columns have unit scale, so the cutoff is absolute: anything below
    # rank_rel is projection round-off, not a leftover direction.
    u, s, _ = np.linalg.svd(residual, full_matrices=False)
    keep = int(np.count_nonzero(s > tol.rank_rel))
    if keep == 0:
        return Subspace.trivial(space.ambient_dim)
    return Subspace(space.ambient_dim, u[:, :keep].copy())


def angle_cos(first: Subspace, second: Subspace, tol: Tolerance = DEFAULT_TOLERANCE) -> float:
    """Minimal-angle cosine after removing the common intersection from both sides.

    Coincides with min_angle_cos when the intersection is trivial; equal
    subspaces give 0 because nothing is left after the reduction.
    """
    _check_same_ambient(first, second)
    common = linalg.subspace_intersection(first, second, tol)
    return min_angle_cos(_remove_common(first, common, tol), _remove_common(second, common, tol))


def gap_angle_report(first: Subspace, second: Subspace, tol: Tolerance = DEFAULT_TOLERANCE) -> GapAngleReport:
    """Bundle every gap/angle quantity for the ordered pair (first, second)."""
    forward = directed_gap(first, second)
    backward = directed_gap(second, first)
    return GapAngleReport(
        directed_gap_ab=forward,
        directed_gap_ba=backward,
        gap=max(forward, backward),
        min_angle_cos=min_angle_cos(first, second),
        angle_cos=angle_cos(first, second, tol),
    )


def weaving_span_geometry(
    frame_f: "Frame",
    frame_g: "Frame",
    sigma: "IndexSubset",
    tol: Tolerance = DEFAULT_TOLERANCE,
) -> GapAngleReport:
    """Gap/angle report between the spans of the two complementary weavings.

    The first span collects f_i on the selected indices and g_i elsewhere;
    the second swaps the roles. Trivial subsets are rejected because both
    spans would repeat a single family.
    """
    from .weaving import weaving_family

    if sigma.is_trivial:
        raise TrivialSubset("sigma must be neither empty nor the full index set")
    first = linalg.orthonormal_basis(weaving_family(frame_f, frame_g, sigma).vectors.T, tol)
    second = linalg.orthonormal_basis(weaving_family(frame_g, frame_f, sigma).vectors.T, tol)
    return gap_angle_report(first, second, tol)
