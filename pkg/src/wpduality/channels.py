"""
CPTP maps in Kraus form.

Kraus sets are validated when the channel is built; an invalid set is
rejected, never repaired.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterable, Optional, Tuple

import numpy as np
import numpy.typing as npt

from .config.settings import settings
from .exceptions import ChannelError, DimensionMismatchError
from .profile import DimensionProfile
from .qlinalg import ComplexMatrix, HermitianOperator, trace_norm
from .states import DensityMatrix, haar_unitary, make_rng

__all__ = [
    "KrausChannel",
    "apply",
    "is_unital",
    "random_unital",
    "identity_channel",
    "unitary_channel",
    "depolarizing_channel",
    "amplitude_damping_channel",
    "partial_trace_channel",
    "trace_distance_contracts",
]

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class KrausChannel:
    """Phi(rho) = sum_i K_i rho K_i^H with sum_i K_i^H K_i = I."""

    kraus_ops: Tuple[ComplexMatrix, ...]
    cptp_tol: float = settings.CPTP_TOL
    out_profile: Optional[DimensionProfile] = None
    name: str = "kraus"

    def __post_init__(self):
        ops = tuple(np.array(k, dtype=np.complex128, copy=True) for k in self.kraus_ops)
        if not ops:
            raise ChannelError("A channel needs at least one Kraus operator")
        if any(k.ndim != 2 for k in ops):
            raise ChannelError("Kraus operators must be matrices")
        shape = ops[0].shape
        if any(k.shape != shape for k in ops):
            raise ChannelError(f"Kraus operators disagree in shape: {sorted({k.shape for k in ops})}")
        gram = sum(k.conj().T @ k for k in ops)
        deviation = float(np.max(np.abs(gram - np.eye(shape[1]))))
        if deviation > self.cptp_tol:
            raise ChannelError(
                f"Kraus set is not trace preserving: max |sum K^H K - I| = {deviation:.3e} > {self.cptp_tol:.1e}"
            )
        if self.out_profile is not None and self.out_profile.total_dim != shape[0]:
            raise DimensionMismatchError(shape[0], self.out_profile.total_dim, what="output profile dimension")
        for k in ops:
            k.setflags(write=False)
        object.__setattr__(self, "kraus_ops", ops)

    @property
    def in_dim(self) -> int:
        return self.kraus_ops[0].shape[1]

    @property
    def out_dim(self) -> int:
        return self.kraus_ops[0].shape[0]

    def apply_matrix(self, matrix: npt.ArrayLike) -> ComplexMatrix:
        m = np.asarray(matrix, dtype=np.complex128)
        if m.shape != (self.in_dim, self.in_dim):
            raise DimensionMismatchError(self.in_dim, m.shape[0], what="channel input dimension")
        return sum(k @ m @ k.conj().T for k in self.kraus_ops)

    def __call__(self, rho: DensityMatrix) -> DensityMatrix:
        return apply(self, rho)


def apply(channel: KrausChannel, rho: DensityMatrix) -> DensityMatrix:
    """Apply a channel to a state; the output is validated as a density matrix."""
    if rho.dim != channel.in_dim:
        raise DimensionMismatchError(channel.in_dim, rho.dim, what="channel input dimension")
    profile = channel.out_profile
    if profile is None:
        profile = rho.profile if channel.out_dim == rho.dim else DimensionProfile.single(channel.out_dim)
    return DensityMatrix.from_array(channel.apply_matrix(rho.matrix), profile, rho.psd_tol, clamp=True)


def is_unital(channel: KrausChannel, tol: float = 1e-10) -> bool:
    """True iff ||Phi(I/n_in) - I/n_out||_1 <= tol."""
    image = channel.apply_matrix(np.eye(channel.in_dim) / channel.in_dim)
    return trace_norm(HermitianOperator(image - np.eye(channel.out_dim) / channel.out_dim)) <= tol


def unitary_channel(unitary: npt.ArrayLike, name: str = "unitary") -> KrausChannel:
    return KrausChannel((np.asarray(unitary, dtype=np.complex128),), name=name)


def identity_channel(dim: int) -> KrausChannel:
    return unitary_channel(np.eye(dim), name="identity")


def depolarizing_channel(dim: int, p: float = 1.0) -> KrausChannel:
    """(1 - p) rho + p I/n; p = 1 is the fully depolarizing channel."""
    if not 0.0 <= p <= 1.0:
        raise ChannelError(f"Depolarizing probability must lie in [0, 1], got {p}")
    ops = []
    if p < 1.0:
        ops.append(np.sqrt(1.0 - p) * np.eye(dim, dtype=np.complex128))
    for i in range(dim):
        for j in range(dim):
            k = np.zeros((dim, dim), dtype=np.complex128)
            k[i, j] = np.sqrt(p / dim)
            ops.append(k)
    return KrausChannel(tuple(ops), name="depolarizing")


def amplitude_damping_channel(gamma: float) -> KrausChannel:
    """Qubit amplitude damping: K0 = diag(1, sqrt(1-gamma)), K1 = sqrt(gamma)|0><1|."""
    if not 0.0 <= gamma <= 1.0:
        raise ChannelError(f"gamma must lie in [0, 1], got {gamma}")
    k0 = np.array([[1.0, 0.0], [0.0, np.sqrt(1.0 - gamma)]], dtype=np.complex128)
    k1 = np.array([[0.0, np.sqrt(gamma)], [0.0, 0.0]], dtype=np.complex128)
    return KrausChannel((k0, k1), name="amplitude_damping")


def partial_trace_channel(profile: DimensionProfile, keep: Iterable[int]) -> KrausChannel:
    """
    The partial trace over every party not in `keep`, as a Kraus channel.

    One Kraus operator per basis state e of the traced parties, mapping
    |kept, e> to |kept>.
    """
    kept = profile.normalize_keep(keep)
    traced = tuple(i for i in range(profile.n_parties) if i not in kept)
    out_profile = profile.subprofile(kept)
    kept_dims = tuple(profile.dims[i] for i in kept)
    traced_dims = tuple(profile.dims[i] for i in traced)
    ops = []
    for env in np.ndindex(*traced_dims) if traced else [()]:
        k = np.zeros((out_profile.total_dim, profile.total_dim), dtype=np.complex128)
        for local in np.ndindex(*kept_dims):
            index = [0] * profile.n_parties
            for party, value in zip(kept, local):
                index[party] = value
            for party, value in zip(traced, env):
                index[party] = value
            row = int(np.ravel_multi_index(local, kept_dims))
            col = int(np.ravel_multi_index(tuple(index), profile.dims))
            k[row, col] = 1.0
        ops.append(k)
    return KrausChannel(tuple(ops), out_profile=out_profile, name="partial_trace")


def random_unital(dim: int, num_unitaries: int, seed: int) -> KrausChannel:
    """
    Random mixed-unitary channel sum_i p_i U_i rho U_i^H.

    Args:
        dim: Hilbert space dimension.
        num_unitaries: Number of Haar unitaries mixed together (>= 1).
        seed: 64-bit seed.

    Returns:
        KrausChannel: A unital channel with Kraus operators sqrt(p_i) U_i.
    """
    if num_unitaries < 1:
        raise ChannelError(f"num_unitaries must be >= 1, got {num_unitaries}")
    rng = make_rng(seed)
    weights = rng.dirichlet(np.ones(num_unitaries)) if num_unitaries > 1 else np.ones(1)
    ops = tuple(np.sqrt(w) * haar_unitary(dim, rng) for w in weights)
    logger.debug(f"random_unital: dim {dim}, weights {np.round(weights, 4).tolist()}")
    return KrausChannel(ops, name=f"random_unital({num_unitaries})")


def trace_distance_contracts(channel: KrausChannel, rho: DensityMatrix, sigma: DensityMatrix) -> Tuple[float, float]:
    """(||rho - sigma||_1, ||Phi(rho) - Phi(sigma)||_1)."""
    before = trace_norm(rho.op - sigma.op)
    after = trace_norm(apply(channel, rho).op - apply(channel, sigma).op)
    return before, after
