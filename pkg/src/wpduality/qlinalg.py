"""
Dense complex Hermitian linear algebra.

Everything here is a pure function of immutable inputs. Matrices are stored
as read-only complex128 numpy arrays; target dimensions are small (<= 64), so
there is no sparse path.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterable

import numpy as np
import numpy.typing as npt
import scipy.linalg

from .config.settings import settings
from .exceptions import DimensionMismatchError, EigenConvergenceError, HermiticityError
from .profile import DimensionProfile

__all__ = [
    "ComplexMatrix",
    "HermitianOperator",
    "EigenDecomposition",
    "tensor_product",
    "partial_trace",
    "hermitian_eig",
    "eigenvalues",
    "trace_norm",
    "hs_norm",
    "numerical_rank",
]

logger = logging.getLogger(__name__)

ComplexMatrix = npt.NDArray[np.complex128]


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.array(array, dtype=np.complex128, copy=True)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class HermitianOperator:
    """A dense Hermitian matrix, symmetrized at construction."""

    matrix: ComplexMatrix
    hermiticity_tol: float = settings.HERMITICITY_TOL

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=np.complex128)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
            raise DimensionMismatchError("a nonempty square matrix", m.shape, what="shape")
        if not np.all(np.isfinite(m)):
            raise HermiticityError(float("inf"), self.hermiticity_tol)
        deviation = float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0
        if deviation > self.hermiticity_tol:
            raise HermiticityError(deviation, self.hermiticity_tol)
        object.__setattr__(self, "matrix", _frozen((m + m.conj().T) / 2))

    @classmethod
    def identity(cls, dim: int) -> "HermitianOperator":
        return cls(np.eye(dim, dtype=np.complex128))

    @classmethod
    def zeros(cls, dim: int) -> "HermitianOperator":
        return cls(np.zeros((dim, dim), dtype=np.complex128))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def trace(self) -> float:
        return float(np.real(np.trace(self.matrix)))

    def entry(self, j: int, k: int) -> complex:
        return complex(self.matrix[j, k])

    def scaled(self, factor: float) -> "HermitianOperator":
        return HermitianOperator(self.matrix * float(factor), self.hermiticity_tol)

    def _check_same_dim(self, other: "HermitianOperator") -> None:
        if other.dim != self.dim:
            raise DimensionMismatchError(self.dim, other.dim)

    def __add__(self, other: "HermitianOperator") -> "HermitianOperator":
        self._check_same_dim(other)
        return HermitianOperator(self.matrix + other.matrix, self.hermiticity_tol)

    def __sub__(self, other: "HermitianOperator") -> "HermitianOperator":
        self._check_same_dim(other)
        return HermitianOperator(self.matrix - other.matrix, self.hermiticity_tol)

    def allclose(self, other: "HermitianOperator", atol: float = 1e-10) -> bool:
        return self.dim == other.dim and bool(np.allclose(self.matrix, other.matrix, rtol=0.0, atol=atol))


@dataclass(frozen=True, eq=False)
class EigenDecomposition:
    """Eigenvalues in descending order with matching orthonormal columns."""

    eigenvalues: npt.NDArray[np.float64]
    eigenvectors: ComplexMatrix

    def reconstruct(self) -> ComplexMatrix:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T

    @property
    def dim(self) -> int:
        return len(self.eigenvalues)


def tensor_product(a: HermitianOperator, b: HermitianOperator) -> HermitianOperator:
    """Kronecker product; entry((i,k),(j,l)) = a(i,j) * b(k,l)."""
    return HermitianOperator(np.kron(a.matrix, b.matrix), max(a.hermiticity_tol, b.hermiticity_tol))


def partial_trace(op: HermitianOperator, profile: DimensionProfile, keep: Iterable[int]) -> HermitianOperator:
    """
    Trace out every party not in `keep`.

    Args:
        op: Operator on the full space described by `profile`.
        profile: Tensor factorization of op's space.
        keep: Indices of the parties to keep; the result is ordered as in
            the profile regardless of the order given here.

    Returns:
        HermitianOperator: The reduced operator on the kept parties.
    """
    if profile.total_dim != op.dim:
        raise DimensionMismatchError(op.dim, profile.total_dim, what="profile dimension")
    kept = profile.normalize_keep(keep)
    n = profile.n_parties
    if len(kept) == n:
        return op

    tensor = op.matrix.reshape(profile.dims * 2)
    remaining = n
    for axis in sorted(set(range(n)) - set(kept), reverse=True):
        tensor = np.trace(tensor, axis1=axis, axis2=axis + remaining)
        remaining -= 1
    kept_dim = profile.dim_of(kept)
    return HermitianOperator(tensor.reshape(kept_dim, kept_dim), op.hermiticity_tol)


def hermitian_eig(op: HermitianOperator) -> EigenDecomposition:
    """Full eigendecomposition, eigenvalues descending (ties keep solver order)."""
    try:
        w, v = scipy.linalg.eigh(op.matrix, check_finite=False)
    except (scipy.linalg.LinAlgError, ValueError) as e:
        logger.error(f"Eigensolver failed on a {op.dim}x{op.dim} operator: {e}")
        raise EigenConvergenceError(f"Hermitian eigensolver did not converge: {e}") from e
    order = np.argsort(-w, kind="stable")
    values = np.asarray(w[order], dtype=np.float64)
    vectors = np.asarray(v[:, order], dtype=np.complex128)
    values.setflags(write=False)
    vectors.setflags(write=False)
    return EigenDecomposition(values, vectors)


def eigenvalues(op: HermitianOperator) -> npt.NDArray[np.float64]:
    """Eigenvalues only, descending."""
    try:
        w = scipy.linalg.eigh(op.matrix, eigvals_only=True, check_finite=False)
    except (scipy.linalg.LinAlgError, ValueError) as e:
        logger.error(f"Eigensolver failed on a {op.dim}x{op.dim} operator: {e}")
        raise EigenConvergenceError(f"Hermitian eigensolver did not converge: {e}") from e
    return np.sort(np.asarray(w, dtype=np.float64))[::-1]


def trace_norm(op: HermitianOperator) -> float:
    """||A||_1 = sum of |eigenvalues| for Hermitian A."""
    return float(np.sum(np.abs(eigenvalues(op))))


def hs_norm(op: HermitianOperator) -> float:
    """||A||_2 = sqrt(sum_jk |A_jk|^2)."""
    return float(np.sqrt(np.sum(np.abs(op.matrix) ** 2)))


def numerical_rank(op: HermitianOperator, rel_tol: float = settings.RANK_TOL) -> int:
    """Number of eigenvalues with |lambda| > rel_tol * max |lambda|; 0 for the zero matrix."""
    if not 0.0 < rel_tol < 1.0:
        raise ValueError(f"rel_tol must lie in (0, 1), got {rel_tol}")
    magnitudes = np.abs(eigenvalues(op))
    top = float(magnitudes.max()) if magnitudes.size else 0.0
    if top == 0.0:
        return 0
    return int(np.count_nonzero(magnitudes > rel_tol * top))
