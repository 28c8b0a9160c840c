"""
Scalar wave-particle duality measures.

Predictability and visibility are taken in the computational basis of the
stored matrix; rotate the state first for any other basis. Every
entropy-family quantity takes an explicit LogBase (default base two, under
which the Pinsker constant 1/(2 ln 2) is unit-consistent).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple, Union

import numpy as np
import scipy.linalg
from pydantic import BaseModel, ConfigDict, model_validator

from .config.settings import settings
from .exceptions import DimensionMismatchError, NumericalInconsistencyError
from .profile import Cut
from .qlinalg import HermitianOperator, hermitian_eig, hs_norm, numerical_rank, trace_norm
from .states import DensityMatrix, PureState, TwoQubitAmplitudes

__all__ = [
    "LogBase",
    "MeasureSet",
    "TwoQubitMeasures",
    "purity",
    "linear_entropy",
    "predictability",
    "visibility",
    "qubit_predictability",
    "qubit_visibility",
    "info_content_S",
    "info_content_I",
    "von_neumann_entropy",
    "relative_entropy",
    "entanglement_entropy",
    "generalized_concurrence",
    "two_qubit_pure_measures",
    "pinsker_lower_bound",
    "reverse_pinsker_M",
    "rank_factor_R",
    "norm_sandwich_factor",
    "measure_set",
]

logger = logging.getLogger(__name__)

DIVERGENCE_CLAMP = 1e-12


class LogBase(str, Enum):
    """Logarithm base for entropies: bits (two) or nats (e)."""

    TWO = "2"
    E = "e"

    @classmethod
    def parse(cls, value: Union["LogBase", str, int, float]) -> "LogBase":
        if isinstance(value, LogBase):
            return value
        text = str(value).strip().lower()
        if text in ("2", "2.0", "two", "bits"):
            return cls.TWO
        if text in ("e", "ln", "nats", "natural"):
            return cls.E
        raise ValueError(f"Unknown log base '{value}', expected 2 or e")

    @property
    def ln_base(self) -> float:
        return math.log(2.0) if self is LogBase.TWO else 1.0

    def log(self, x):
        return np.log(x) / self.ln_base

    @property
    def pinsker_constant(self) -> float:
        """1/(2 ln 2) in bits, 1/2 in nats."""
        return 1.0 / (2.0 * self.ln_base)


def _check_same_dim(rho: DensityMatrix, sigma: DensityMatrix) -> None:
    if rho.dim != sigma.dim:
        raise DimensionMismatchError(rho.dim, sigma.dim)


def _minus_max_mixed(rho: DensityMatrix) -> HermitianOperator:
    n = rho.dim
    return HermitianOperator(rho.matrix - np.eye(n) / n)


def purity(rho: DensityMatrix) -> float:
    """tr(rho^2)."""
    return rho.purity()


def linear_entropy(rho: DensityMatrix) -> float:
    """1 - tr(rho^2)."""
    return 1.0 - rho.purity()


def predictability(rho: DensityMatrix) -> float:
    """P = sqrt(2 (sum_j rho_jj^2 - 1/n)), summed as 2 sum_j (rho_jj - 1/n)^2."""
    bias = np.real(np.diagonal(rho.matrix)) - 1.0 / rho.dim
    return math.sqrt(2.0 * float(np.sum(bias**2)))


def visibility(rho: DensityMatrix) -> float:
    """V = sqrt(2 sum_{j != k} |rho_jk|^2)."""
    off = rho.matrix[~np.eye(rho.dim, dtype=bool)]
    return math.sqrt(2.0 * float(np.sum(np.abs(off) ** 2)))


def qubit_predictability(rho: DensityMatrix) -> float:
    """|rho_11 - rho_22| for a qubit."""
    if rho.dim != 2:
        raise DimensionMismatchError(2, rho.dim)
    return abs(float(np.real(rho.matrix[0, 0] - rho.matrix[1, 1])))


def qubit_visibility(rho: DensityMatrix) -> float:
    """2 |rho_12| for a qubit."""
    if rho.dim != 2:
        raise DimensionMismatchError(2, rho.dim)
    return 2.0 * abs(complex(rho.matrix[0, 1]))


def info_content_S(rho: DensityMatrix) -> float:
    """Hilbert-Schmidt information content sqrt(2 (tr rho^2 - 1/n)) = sqrt(2) ||rho - I/n||_2."""
    return math.sqrt(2.0) * hs_norm(_minus_max_mixed(rho))


def info_content_I(rho: DensityMatrix) -> float:
    """Trace-distance information content ||rho - I/n||_1."""
    return trace_norm(_minus_max_mixed(rho))


def _entropy_of_spectrum(values: np.ndarray, base: LogBase) -> float:
    p = np.clip(np.asarray(values, dtype=np.float64), 0.0, None)
    p = p[p > 0.0]
    h = float(-np.sum(p * np.log(p))) / base.ln_base
    return max(h, 0.0)


def von_neumann_entropy(rho: DensityMatrix, base: Union[LogBase, str] = LogBase.TWO) -> float:
    """H(rho) = -sum lambda log lambda with 0 log 0 = 0."""
    return _entropy_of_spectrum(rho.eigenvalues, LogBase.parse(base))


def relative_entropy(
    rho: DensityMatrix,
    sigma: DensityMatrix,
    base: Union[LogBase, str] = LogBase.TWO,
    rank_tol: float = settings.RANK_TOL,
) -> float:
    """
    Quantum relative entropy D(rho || sigma).

    Computed from both eigendecompositions on sigma's support. Returns
    +inf when rho has weight outside supp(sigma), support membership being
    decided with the same relative tolerance as numerical_rank.
    """
    _check_same_dim(rho, sigma)
    base = LogBase.parse(base)
    dr = hermitian_eig(rho.op)
    ds = hermitian_eig(sigma.op)
    lam = np.clip(dr.eigenvalues, 0.0, None)
    mu = np.clip(ds.eigenvalues, 0.0, None)
    rho_supp = lam > rank_tol * lam.max()
    sigma_supp = mu > rank_tol * mu.max()

    overlap = np.abs(dr.eigenvectors.conj().T @ ds.eigenvectors) ** 2
    leak = float(lam @ overlap[:, ~sigma_supp].sum(axis=1))
    if leak > rank_tol:
        logger.debug(f"rho leaks weight {leak:.3e} outside supp(sigma); D is infinite")
        return math.inf

    lam_s = lam[rho_supp]
    term_rho = float(np.sum(lam_s * np.log(lam_s)))
    weights = lam_s @ overlap[np.ix_(rho_supp, sigma_supp)]
    term_sigma = float(np.sum(weights * np.log(mu[sigma_supp])))
    d = (term_rho - term_sigma) / base.ln_base
    return 0.0 if -DIVERGENCE_CLAMP < d < 0.0 else d


def _cut_marginals(psi: PureState, cut: Optional[Cut]) -> Tuple[DensityMatrix, DensityMatrix]:
    cut = cut or Cut.default(psi.profile)
    Cut.from_groups(cut.left, cut.right, psi.profile)
    rho = psi.density()
    return rho.reduced(cut.left), rho.reduced(cut.right)


def entanglement_entropy(
    psi: PureState,
    cut: Optional[Cut] = None,
    base: Union[LogBase, str] = LogBase.TWO,
) -> float:
    """E(psi) = H(rho_k); both sides are computed and must agree."""
    base = LogBase.parse(base)
    left, right = _cut_marginals(psi, cut)
    h_left = von_neumann_entropy(left, base)
    h_right = von_neumann_entropy(right, base)
    if abs(h_left - h_right) > 1e-9:
        logger.error(f"Cut marginal entropies disagree for a state on {psi.profile.spec}")
        raise NumericalInconsistencyError(
            f"Reduced entropies disagree across the cut: {h_left:.12g} vs {h_right:.12g}"
        )
    return h_left


def _schmidt_weights(psi: PureState, cut: Cut) -> np.ndarray:
    """Squared Schmidt coefficients across the cut."""
    tensor = np.transpose(psi.amplitudes.reshape(psi.profile.dims), cut.left + cut.right)
    block = tensor.reshape(psi.profile.dim_of(cut.left), -1)
    return scipy.linalg.svdvals(block, check_finite=False) ** 2


def generalized_concurrence(psi: PureState, cut: Optional[Cut] = None) -> float:
    """
    C^n = sqrt(2 (1 - tr rho_k^2)); both sides are computed and must agree.

    The square is taken as 4 sum_{i<j} lambda_i lambda_j over the Schmidt
    weights, so product states give exactly zero.
    """
    cut = cut or Cut.default(psi.profile)
    left, right = _cut_marginals(psi, cut)
    p_left, p_right = left.purity(), right.purity()
    if abs(p_left - p_right) > 1e-10:
        raise NumericalInconsistencyError(
            f"Reduced purities disagree across the cut: {p_left:.12g} vs {p_right:.12g}"
        )
    weights = _schmidt_weights(psi, cut)
    return math.sqrt(4.0 * float(np.sum(np.triu(np.outer(weights, weights), 1))))


@dataclass(frozen=True)
class TwoQubitMeasures:
    """Concurrence and per-qubit predictability/visibility of a two-qubit pure state."""

    C: float
    P1: float
    P2: float
    V1: float
    V2: float

    def complementarity_sums(self) -> Tuple[float, float]:
        return (self.C**2 + self.P1**2 + self.V1**2, self.C**2 + self.P2**2 + self.V2**2)


def two_qubit_pure_measures(amp: TwoQubitAmplitudes) -> TwoQubitMeasures:
    """C = 2|ad - bc|, P_k and V_k from the amplitudes (qubit 1 = A, qubit 2 = B)."""
    a, b, c, d = (complex(x) for x in (amp.a, amp.b, amp.c, amp.d))
    pa, pb, pc, pd = (abs(x) ** 2 for x in (a, b, c, d))
    return TwoQubitMeasures(
        C=2.0 * abs(a * d - b * c),
        P1=abs((pc + pd) - (pa + pb)),
        P2=abs((pb + pd) - (pa + pc)),
        V1=2.0 * abs(a * c.conjugate() + b * d.conjugate()),
        V2=2.0 * abs(a * b.conjugate() + c * d.conjugate()),
    )


def pinsker_lower_bound(
    rho: DensityMatrix,
    sigma: DensityMatrix,
    base: Union[LogBase, str] = LogBase.TWO,
) -> float:
    """Pinsker bound c ||rho - sigma||_1^2 with c = 1/(2 ln 2) in bits, 1/2 in nats."""
    _check_same_dim(rho, sigma)
    return LogBase.parse(base).pinsker_constant * trace_norm(rho.op - sigma.op) ** 2


def _min_nonzero_eigenvalue(rho: DensityMatrix, rank_tol: float) -> float:
    values = rho.eigenvalues
    return float(values[values > rank_tol * values[0]].min())


def reverse_pinsker_M(
    rho: DensityMatrix,
    sigma: DensityMatrix,
    base: Union[LogBase, str] = LogBase.TWO,
    rank_tol: float = settings.RANK_TOL,
) -> float:
    """
    Reverse-Pinsker coefficient M(rho, sigma).

    M = lambda_max(rho) (log a_rho - log a_sigma) / (a_rho - a_sigma), where
    a_x is the smallest nonzero eigenvalue of x. When the two minima agree to
    1e-12 the difference quotient is replaced by its limit 1/(a ln b).
    """
    _check_same_dim(rho, sigma)
    base = LogBase.parse(base)
    lam_max = float(rho.eigenvalues[0])
    a_rho = _min_nonzero_eigenvalue(rho, rank_tol)
    a_sigma = _min_nonzero_eigenvalue(sigma, rank_tol)
    if abs(a_rho - a_sigma) < 1e-12:
        return lam_max / (a_rho * base.ln_base)
    return lam_max * float(base.log(a_rho) - base.log(a_sigma)) / (a_rho - a_sigma)


def rank_factor_R(rho: DensityMatrix, sigma: DensityMatrix, rank_tol: float = settings.RANK_TOL) -> float:
    """R = (rank rho + rank sigma) / (rank rho * rank sigma)."""
    _check_same_dim(rho, sigma)
    r1 = numerical_rank(rho.op, rank_tol)
    r2 = numerical_rank(sigma.op, rank_tol)
    return (r1 + r2) / (r1 * r2)


def norm_sandwich_factor(rho: DensityMatrix, sigma: DensityMatrix, rank_tol: float = settings.RANK_TOL) -> float:
    """rank rho * rank sigma / (rank rho + rank sigma).

    The factor for which ||rho - sigma||_1 <= 2 sqrt(factor) ||rho - sigma||_2 holds.
    """
    _check_same_dim(rho, sigma)
    r1 = numerical_rank(rho.op, rank_tol)
    r2 = numerical_rank(sigma.op, rank_tol)
    return (r1 * r2) / (r1 + r2)


class MeasureSet(BaseModel):
    """All single-state measures of one density matrix."""

    model_config = ConfigDict(frozen=True)

    dim: int
    predictability: float
    visibility: float
    info_S: float
    info_I: float
    purity: float
    entropy: float
    log_base: LogBase

    @model_validator(mode="after")
    def _check_identities(self) -> "MeasureSet":
        if abs(self.info_S**2 - (self.predictability**2 + self.visibility**2)) > 1e-10:
            raise ValueError("info_S^2 must equal predictability^2 + visibility^2")
        if not -1e-10 <= self.info_I <= 2.0 * (1.0 - 1.0 / self.dim) + 1e-10:
            raise ValueError(f"info_I={self.info_I} outside [0, 2(1 - 1/n)]")
        return self


def measure_set(rho: DensityMatrix, base: Union[LogBase, str] = LogBase.TWO) -> MeasureSet:
    base = LogBase.parse(base)
    return MeasureSet(
        dim=rho.dim,
        predictability=predictability(rho),
        visibility=visibility(rho),
        info_S=info_content_S(rho),
        info_I=info_content_I(rho),
        purity=rho.purity(),
        entropy=von_neumann_entropy(rho, base),
        log_base=base,
    )
