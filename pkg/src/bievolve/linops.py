"""Dense complex linear algebra for small Hilbert spaces.

Matrices and state vectors are plain :class:`numpy.ndarray` objects of
``complex128``. The helpers here validate shapes, finiteness and the dimension
cap, and provide the handful of operations the path-sum engine needs: matrix
exponentials, commutators, Hermitian spectral decompositions and kernel
projectors.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .exceptions import DimensionMismatchError, InvalidInputError

MAX_DIM = 64
HERMITIAN_RTOL = 1e-12
DEGENERACY_RTOL = 1e-9
ZERO_RTOL = 1e-9


def as_matrix(a, *, hermitian: bool = False, name: str = "matrix") -> np.ndarray:
    """Validate and convert ``a`` to a square complex matrix.

    Parameters
    ----------
    a : array_like
        Candidate matrix.
    hermitian : bool, default=False
        If True, require ``max|A - A^H| <= 1e-12 * max|A|``.
    name : str
        Used in error messages.

    Returns
    -------
    ndarray of shape (d, d), complex128
    """
    arr = np.asarray(a, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
        raise InvalidInputError(f"{name} must be a non-empty square matrix, got shape {arr.shape}")
    if arr.shape[0] > MAX_DIM:
        raise InvalidInputError(f"{name} dimension {arr.shape[0]} exceeds cap {MAX_DIM}")
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError(f"{name} has non-finite entries")
    if hermitian and not is_hermitian(arr):
        raise InvalidInputError(f"{name} is not Hermitian within tolerance")
    return arr


def as_state(v, *, dim: int | None = None, name: str = "state") -> np.ndarray:
    """Validate and convert ``v`` to a finite complex vector."""
    arr = np.asarray(v, dtype=complex)
    if arr.ndim != 1 or arr.size == 0:
        raise InvalidInputError(f"{name} must be a non-empty 1-d vector, got shape {arr.shape}")
    if arr.size > MAX_DIM:
        raise InvalidInputError(f"{name} dimension {arr.size} exceeds cap {MAX_DIM}")
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError(f"{name} has non-finite entries")
    if dim is not None and arr.size != dim:
        raise DimensionMismatchError(f"{name} has dimension {arr.size}, expected {dim}")
    return arr


def is_hermitian(a: np.ndarray, rtol: float = HERMITIAN_RTOL) -> bool:
    a = np.asarray(a)
    scale = np.max(np.abs(a)) if a.size else 0.0
    return bool(np.max(np.abs(a - a.conj().T), initial=0.0) <= rtol * scale)


def mat_exp(a, s: complex = 1.0) -> np.ndarray:
    """Return ``exp(s * A)`` by scaling and squaring with a Pade core."""
    a = as_matrix(a)
    if not np.isfinite(s):
        raise InvalidInputError("exponent scale must be finite")
    return scipy.linalg.expm(complex(s) * a)


def mat_exp_eigh(h, s: complex = 1.0) -> np.ndarray:
    """Return ``exp(s * H)`` for Hermitian ``H`` via its eigendecomposition.

    Independent of :func:`mat_exp`; used to cross-check it.
    """
    h = as_matrix(h, hermitian=True)
    w, v = np.linalg.eigh(0.5 * (h + h.conj().T))
    return (v * np.exp(complex(s) * w)) @ v.conj().T


def commutator(a, b) -> np.ndarray:
    """Return ``AB - BA``."""
    a = as_matrix(a, name="A")
    b = as_matrix(b, name="B")
    if a.shape != b.shape:
        raise DimensionMismatchError(f"commutator of {a.shape} and {b.shape} matrices")
    return a @ b - b @ a


@dataclass(frozen=True)
class SpectralDecomposition:
    """Distinct eigenvalues of a Hermitian operator with their eigenprojectors.

    Attributes
    ----------
    eigenvalues : ndarray of shape (k,)
        Distinct eigenvalues, ascending.
    projectors : tuple of ndarray
        Orthogonal projector onto each eigenspace.
    multiplicities : tuple of int
        Rank of each projector.
    """

    eigenvalues: np.ndarray
    projectors: tuple
    multiplicities: tuple

    @property
    def dim(self) -> int:
        return self.projectors[0].shape[0]

    def reconstruct(self) -> np.ndarray:
        return sum(lam * p for lam, p in zip(self.eigenvalues, self.projectors))

    def apply_function(self, values) -> np.ndarray:
        """Return ``sum_j values[j] * P_j``."""
        out = np.zeros((self.dim, self.dim), dtype=complex)
        for val, p in zip(values, self.projectors):
            out += val * p
        return out


def hermitian_eigendecomposition(a, degeneracy_tol: float | None = None) -> SpectralDecomposition:
    """Decompose a Hermitian matrix into distinct eigenvalues and projectors.

    Eigenvalues closer than ``degeneracy_tol`` (default ``1e-9 * max|lambda|``)
    to the first member of their cluster are merged into one eigenspace, whose
    eigenvalue is the cluster mean.
    """
    a = as_matrix(a, hermitian=True)
    w, v = np.linalg.eigh(0.5 * (a + a.conj().T))
    if degeneracy_tol is None:
        degeneracy_tol = DEGENERACY_RTOL * float(np.max(np.abs(w)))

    groups = [[0]]
    for i in range(1, len(w)):
        if w[i] - w[groups[-1][0]] <= degeneracy_tol:
            groups[-1].append(i)
        else:
            groups.append([i])

    eigenvalues = np.array([w[g].mean() for g in groups])
    projectors = tuple(v[:, g] @ v[:, g].conj().T for g in groups)
    multiplicities = tuple(len(g) for g in groups)
    return SpectralDecomposition(eigenvalues, projectors, multiplicities)


def kernel_projector(decomp: SpectralDecomposition, zero_tol: float | None = None) -> np.ndarray:
    """Sum of the projectors whose eigenvalue satisfies ``|lambda| <= zero_tol``.

    ``zero_tol`` defaults to ``1e-9 * max|lambda|``. Returns the zero matrix
    when the kernel is trivial.
    """
    if zero_tol is None:
        zero_tol = ZERO_RTOL * float(np.max(np.abs(decomp.eigenvalues)))
    out = np.zeros((decomp.dim, decomp.dim), dtype=complex)
    for lam, p in zip(decomp.eigenvalues, decomp.projectors):
        if abs(lam) <= zero_tol:
            out += p
    return out
