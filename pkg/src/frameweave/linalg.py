"""Dense real linear-algebra kernels used by every other module.

Extremal eigenvalues of symmetric matrices, singular values, numerical rank,
Moore-Penrose pseudo-inverse, orthonormalization, orthogonal projections and
subspace intersection. Everything works on plain float64 numpy arrays; all
functions are pure and inputs are never mutated. Matrices here are desk scale
(n up to a few dozen), so LAPACK via numpy is both the fastest and the most
accurate option available.
"""

import numpy as np
from dataclasses import dataclass

from .errors import DimensionMismatch, NonSquare, NonSymmetric, NotFinite

__all__ = [
    "Tolerance",
    "DEFAULT_TOLERANCE",
    "Subspace",
    "as_matrix",
    "sym_extremal_eigs",
    "singular_values",
    "numerical_rank",
    "operator_norm",
    "pseudo_inverse",
    "orthonormal_basis",
    "projection",
    "subspace_intersection",
]

# Relative defect above which a matrix no longer counts as symmetric.
_SYMMETRY_RTOL = 1e-12
# Orthonormality defect allowed in a Subspace basis.
_ORTHO_TOL = 1e-12


@dataclass(frozen=True)
class Tolerance:
    """Numerical decision thresholds.

    rank_rel: relative singular-value cutoff used by rank decisions.
    frame_rel: relative threshold under which a lower frame bound counts as zero.
    """

    rank_rel: float = 1e-10
    frame_rel: float = 1e-10

    def __post_init__(self):
        for name in ("rank_rel", "frame_rel"):
            value = getattr(self, name)
            if not (0.0 < value < 1.0):
                raise ValueError(f"{name} must lie strictly between 0 and 1, got {value!r}")


DEFAULT_TOLERANCE = Tolerance()


def as_matrix(values, name: str = "matrix") -> np.ndarray:
    """Coerce to a finite 2-d float64 array, raising NotFinite on NaN/Inf."""
    mat = np.asarray(values, dtype=float)
    if mat.ndim != 2:
        raise ValueError(f"{name} must be two-dimensional, got shape {mat.shape}")
    if mat.size and not np.isfinite(mat).all():
        raise NotFinite(f"{name} contains NaN or Inf entries")
    return mat


class Subspace:
    """A linear subspace of R^n, stored as an orthonormal basis matrix.

    The basis is n x k with orthonormal columns; k may be 0 (the trivial
    subspace). Instances are immutable.
    """

    def __init__(self, ambient_dim: int, basis) -> None:
        if ambient_dim < 1:
            raise ValueError(f"ambient dimension must be positive, got {ambient_dim}")
        mat = np.array(basis, dtype=float).reshape(ambient_dim, -1)
        if mat.size and not np.isfinite(mat).all():
            raise NotFinite("subspace basis contains NaN or Inf entries")
        if mat.shape[1] > ambient_dim:
            raise ValueError(f"basis has {mat.shape[1]} columns in dimension {ambient_dim}")
        if mat.shape[1]:
            defect = np.abs(mat.T @ mat - np.eye(mat.shape[1])).max()
            if defect > _ORTHO_TOL:
                raise ValueError(f"basis columns are not orthonormal (defect {defect:.3g})")
        mat.setflags(write=False)
        self.ambient_dim = ambient_dim
        self.basis = mat

    @classmethod
    def trivial(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, np.zeros((ambient_dim, 0)))

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    @property
    def is_trivial(self) -> bool:
        return self.basis.shape[1] == 0

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}, ambient_dim={self.ambient_dim})"


def _require_nonempty(mat: np.ndarray, what: str) -> None:
    if mat.size == 0:
        raise ValueError(f"{what} requires a nonempty matrix, got shape {mat.shape}")


def sym_extremal_eigs(matrix) -> tuple[float, float]:
    """Smallest and largest eigenvalue of a symmetric matrix.

    The symmetry defect must stay below 1e-12 relative to the matrix scale;
    the symmetrized matrix is handed to LAPACK, so the relative accuracy is
    far better than the 1e-10 contract.
    """
    mat = as_matrix(matrix)
    rows, cols = mat.shape
    if rows != cols:
        raise NonSquare(f"expected a square matrix, got {rows}x{cols}")
    _require_nonempty(mat, "eigenvalue computation")
    scale = float(np.abs(mat).max())
    defect = float(np.abs(mat - mat.T).max())
    if defect > _SYMMETRY_RTOL * scale:
        raise NonSymmetric(f"symmetry defect {defect:.3g} exceeds {_SYMMETRY_RTOL:g} * scale {scale:.3g}")
    eigs = np.linalg.eigvalsh(0.5 * (mat + mat.T))
    return float(eigs[0]), float(eigs[-1])


def singular_values(matrix) -> np.ndarray:
    """Singular values in descending order (empty array for empty input)."""
    mat = as_matrix(matrix)
    if mat.size == 0:
        return np.zeros(0)
    return np.linalg.svd(mat, compute_uv=False)


def numerical_rank(matrix, tol: Tolerance = DEFAULT_TOLERANCE) -> int:
    """Number of singular values above rank_rel times the largest one.

    The zero matrix has rank 0; the cutoff is relative, so the answer is
    invariant under global scaling.
    """
    svals = singular_values(matrix)
    if svals.size == 0:
        return 0
    top = float(svals[0])
    if top == 0.0:
        return 0
    return int(np.count_nonzero(svals > tol.rank_rel * top))


def operator_norm(matrix) -> float:
    """Largest singular value."""
    mat = as_matrix(matrix)
    _require_nonempty(mat, "operator norm")
    return float(np.linalg.svd(mat, compute_uv=False)[0])


def pseudo_inverse(matrix, tol: Tolerance = DEFAULT_TOLERANCE) -> np.ndarray:
    """Moore-Penrose pseudo-inverse with a relative singular-value cutoff."""
    mat = as_matrix(matrix)
    if mat.size == 0:
        return np.zeros(mat.shape[::-1])
    u, s, vt = np.linalg.svd(mat, full_matrices=False)
    if s[0] == 0.0:
        return np.zeros(mat.shape[::-1])
    keep = s > tol.rank_rel * s[0]
    inverted = np.zeros_like(s)
    inverted[keep] = 1.0 / s[keep]
    return (vt.T * inverted) @ u.T


def orthonormal_basis(vectors, tol: Tolerance = DEFAULT_TOLERANCE) -> Subspace:
    """Orthonormal basis of the column span of `vectors` (n x k, k may be 0).

    Implemented by SVD, so the result is numerically orthonormal to machine
    precision and the retained dimension follows the rank_rel cutoff.
    """
    mat = as_matrix(vectors, name="spanning vectors")
    n = mat.shape[0]
    if n < 1:
        raise ValueError("spanning vectors need a positive ambient dimension")
    if mat.shape[1] == 0:
        return Subspace.trivial(n)
    u, s, _ = np.linalg.svd(mat, full_matrices=False)
    if s.size == 0 or s[0] == 0.0:
        return Subspace.trivial(n)
    keep = int(np.count_nonzero(s > tol.rank_rel * s[0]))
    return Subspace(n, u[:, :keep].copy())


def projection(subspace: Subspace) -> np.ndarray:
    """Orthogonal projection matrix onto the subspace (zero matrix if trivial)."""
    if subspace.is_trivial:
        return np.zeros((subspace.ambient_dim, subspace.ambient_dim))
    return subspace.basis @ subspace.basis.T


def subspace_intersection(first: Subspace, second: Subspace, tol: Tolerance = DEFAULT_TOLERANCE) -> Subspace:
    """Orthonormal basis of the intersection of two subspaces.

    The intersection is read off the spectrum of P1 P2 P1: eigenvectors whose
    eigenvalue sits within rank_rel of 1 lie in both subspaces.
    """
    if first.ambient_dim != second.ambient_dim:
        raise DimensionMismatch(
            f"ambient dimensions differ: {first.ambient_dim} vs {second.ambient_dim}"
        )
    n = first.ambient_dim
    if first.is_trivial or second.is_trivial:
        return Subspace.trivial(n)
    sandwich = projection(first) @ projection(second) @ projection(first)
    sandwich = 0.5 * (sandwich + sandwich.T)
    eigvals, eigvecs = np.linalg.eigh(sandwich)
    near_one = eigvals >= 1.0 - tol.rank_rel
    if not near_one.any():
        return Subspace.trivial(n)
    return Subspace(n, eigvecs[:, near_one].copy())
