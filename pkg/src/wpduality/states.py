"""
Quantum states: validated density matrices and pure states, seeded random
ensembles, Schmidt-form states, and named reference states.

Randomness comes from numpy's counter-based Philox generator keyed by a
64-bit seed, so a given (dim, rank, seed) produces the same state on every
platform and independently of how samples are spread over workers.
"""

from __future__ import annotations

import logging
import math
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Optional, Sequence, Tuple, Union

import numpy as np
import numpy.typing as npt

from .config.settings import settings
from .exceptions import DimensionMismatchError, InvalidProfileError, InvalidStateError, UnknownStateError
from .profile import DimensionProfile
from .qlinalg import ComplexMatrix, HermitianOperator, eigenvalues, hermitian_eig, partial_trace

__all__ = [
    "DensityMatrix",
    "PureState",
    "TwoQubitAmplitudes",
    "SEED_MASK",
    "make_rng",
    "derive_seed",
    "density_from_pure",
    "maximally_mixed",
    "haar_unitary",
    "haar_pure",
    "ginibre_mixed",
    "schmidt_pure",
    "named_pure",
    "named_state",
    "NAMED_STATES",
]

logger = logging.getLogger(__name__)

SEED_MASK = (1 << 64) - 1

ProfileLike = Union[DimensionProfile, int, None]


def _resolve_profile(dim: Optional[int], profile: ProfileLike) -> DimensionProfile:
    if isinstance(profile, DimensionProfile):
        if dim is not None and profile.total_dim != dim:
            raise DimensionMismatchError(dim, profile.total_dim, what="profile dimension")
        return profile
    if isinstance(profile, int):
        dim = profile
    if dim is None:
        raise InvalidProfileError("Either a dimension or a profile is required")
    return DimensionProfile.single(int(dim))


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A unit-trace positive semidefinite operator on a factorized space."""

    op: HermitianOperator
    profile: DimensionProfile
    psd_tol: float = settings.PSD_TOL

    def __post_init__(self):
        if self.profile.total_dim != self.op.dim:
            raise DimensionMismatchError(self.op.dim, self.profile.total_dim, what="profile dimension")
        tr = self.op.trace()
        if abs(tr - 1.0) > settings.TRACE_TOL:
            raise InvalidStateError(f"Density matrix trace is {tr:.15g}, expected 1")
        lowest = float(self.eigenvalues[-1])
        if lowest < -self.psd_tol:
            raise InvalidStateError(
                f"Density matrix has eigenvalue {lowest:.3e} below -psd_tol ({self.psd_tol:.1e})"
            )

    @classmethod
    def from_array(
        cls,
        matrix: npt.ArrayLike,
        profile: ProfileLike = None,
        psd_tol: float = settings.PSD_TOL,
        clamp: bool = False,
    ) -> "DensityMatrix":
        """
        Build a validated density matrix from a raw array.

        Args:
            matrix: Square complex array.
            profile: Tensor factorization (defaults to a single party).
            psd_tol: Tolerance on negative eigenvalues.
            clamp: Clip eigenvalues in [-psd_tol, 0) to zero and renormalize,
                absorbing floating-point drift in sampled states.

        Returns:
            DensityMatrix: The validated state.
        """
        op = HermitianOperator(np.asarray(matrix, dtype=np.complex128))
        resolved = _resolve_profile(op.dim, profile)
        if clamp:
            op = _clamp_psd(op, psd_tol)
        return cls(op, resolved, psd_tol)

    @property
    def dim(self) -> int:
        return self.op.dim

    @property
    def matrix(self) -> ComplexMatrix:
        return self.op.matrix

    @cached_property
    def eigenvalues(self) -> npt.NDArray[np.float64]:
        return eigenvalues(self.op)

    def purity(self) -> float:
        m = self.op.matrix
        return float(np.real(np.sum(m * m.conj())))

    def is_pure(self, tol: float = 1e-10) -> bool:
        return abs(self.purity() - 1.0) <= tol

    def reduced(self, keep: Iterable[int]) -> "DensityMatrix":
        """Reduced state on the kept parties."""
        kept = self.profile.normalize_keep(keep)
        return DensityMatrix(partial_trace(self.op, self.profile, kept), self.profile.subprofile(kept), self.psd_tol)

    def with_profile(self, profile: DimensionProfile) -> "DensityMatrix":
        return DensityMatrix(self.op, profile, self.psd_tol)


def _clamp_psd(op: HermitianOperator, psd_tol: float) -> HermitianOperator:
    decomposition = hermitian_eig(op)
    values = np.array(decomposition.eigenvalues)
    lowest = float(values[-1])
    if lowest >= 0.0:
        return op
    if lowest < -psd_tol:
        raise InvalidStateError(f"Eigenvalue {lowest:.3e} is below -psd_tol ({psd_tol:.1e}); refusing to clamp")
    if lowest < -1e-12:
        logger.warning(f"Clamping PSD drift of {lowest:.3e} in a {op.dim}-dimensional state")
    values = np.clip(values, 0.0, None)
    values /= values.sum()
    v = decomposition.eigenvectors
    return HermitianOperator((v * values) @ v.conj().T, op.hermiticity_tol)


@dataclass(frozen=True, eq=False)
class PureState:
    """A normalized state vector on a factorized space."""

    amplitudes: npt.NDArray[np.complex128]
    profile: DimensionProfile

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=np.complex128, copy=True).reshape(-1)
        if amps.size != self.profile.total_dim:
            raise DimensionMismatchError(self.profile.total_dim, amps.size, what="amplitude count")
        norm = float(np.linalg.norm(amps))
        if abs(norm - 1.0) > settings.NORM_TOL:
            raise InvalidStateError(f"State vector norm is {norm:.17g}, expected 1 within {settings.NORM_TOL:.0e}")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def from_vector(cls, vector: npt.ArrayLike, profile: ProfileLike = None, normalize: bool = False) -> "PureState":
        amps = np.asarray(vector, dtype=np.complex128).reshape(-1)
        if normalize:
            norm = np.linalg.norm(amps)
            if norm == 0:
                raise InvalidStateError("Cannot normalize the zero vector")
            amps = amps / norm
        return cls(amps, _resolve_profile(amps.size, profile))

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def density(self) -> DensityMatrix:
        return density_from_pure(self)

    def reduced(self, keep: Iterable[int]) -> DensityMatrix:
        return self.density().reduced(keep)


@dataclass(frozen=True)
class TwoQubitAmplitudes:
    """|psi> = a|00> + b|01> + c|10> + d|11>."""

    a: complex
    b: complex
    c: complex
    d: complex

    def __post_init__(self):
        total = sum(abs(complex(x)) ** 2 for x in (self.a, self.b, self.c, self.d))
        if abs(total - 1.0) > settings.NORM_TOL:
            raise InvalidStateError(f"|a|^2+|b|^2+|c|^2+|d|^2 = {total:.17g}, expected 1")

    @classmethod
    def from_pure(cls, psi: PureState) -> "TwoQubitAmplitudes":
        if psi.profile.dims != (2, 2):
            raise DimensionMismatchError((2, 2), psi.profile.dims, what="two-qubit profile")
        a, b, c, d = (complex(x) for x in psi.amplitudes)
        return cls(a, b, c, d)

    def to_pure(self) -> PureState:
        return PureState(np.array([self.a, self.b, self.c, self.d]), DimensionProfile((2, 2)))


def make_rng(seed: int, *spawn_key: int) -> np.random.Generator:
    """Philox generator for a 64-bit seed and an optional stream key."""
    sequence = np.random.SeedSequence(int(seed) & SEED_MASK, spawn_key=tuple(int(k) for k in spawn_key))
    return np.random.Generator(np.random.Philox(sequence))


def derive_seed(run_seed: int, sample_index: int, stream: int = 0) -> int:
    """Per-sample 64-bit seed from (run seed, sample index, stream)."""
    sequence = np.random.SeedSequence(int(run_seed) & SEED_MASK, spawn_key=(int(sample_index), int(stream)))
    return int(sequence.generate_state(1, dtype=np.uint64)[0])


def _complex_gaussian(rng: np.random.Generator, shape) -> np.ndarray:
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def density_from_pure(psi: PureState) -> DensityMatrix:
    """Rank-one projector |psi><psi|."""
    amps = psi.amplitudes
    return DensityMatrix(HermitianOperator(np.outer(amps, amps.conj())), psi.profile)


def maximally_mixed(profile: ProfileLike) -> DensityMatrix:
    resolved = _resolve_profile(None, profile)
    n = resolved.total_dim
    return DensityMatrix(HermitianOperator(np.eye(n, dtype=np.complex128) / n), resolved)


def haar_unitary(dim: int, rng: np.random.Generator) -> ComplexMatrix:
    """Haar unitary from the QR decomposition of a Ginibre matrix with phase-fixed R diagonal."""
    q, r = np.linalg.qr(_complex_gaussian(rng, (dim, dim)))
    phases = np.diagonal(r) / np.abs(np.diagonal(r))
    return q * phases


def haar_pure(dim: Optional[int], seed: int, profile: ProfileLike = None) -> PureState:
    """
    Haar-random pure state: complex standard normals, normalized.

    Args:
        dim: Hilbert space dimension (may be None when a profile is given).
        seed: 64-bit seed; identical seeds give identical amplitudes.
        profile: Optional tensor factorization.

    Returns:
        PureState: The sampled state.
    """
    resolved = _resolve_profile(dim, profile)
    if resolved.total_dim < 2:
        raise InvalidStateError("Haar sampling needs dim >= 2")
    vector = _complex_gaussian(make_rng(seed), resolved.total_dim)
    return PureState(vector / np.linalg.norm(vector), resolved)


def ginibre_mixed(dim: Optional[int], rank: Optional[int], seed: int, profile: ProfileLike = None) -> DensityMatrix:
    """rho = G G^H / tr(G G^H) with G a dim x rank complex Gaussian array."""
    resolved = _resolve_profile(dim, profile)
    n = resolved.total_dim
    rank = n if rank is None else int(rank)
    if not 1 <= rank <= n:
        raise InvalidStateError(f"Ginibre rank must lie in [1, {n}], got {rank}")
    g = _complex_gaussian(make_rng(seed), (n, rank))
    gram = g @ g.conj().T
    return DensityMatrix.from_array(gram / np.real(np.trace(gram)), resolved, clamp=True)


def schmidt_pure(coeffs: Sequence[float], profile: DimensionProfile) -> PureState:
    """sum_i c_i |ii> on a bipartite profile."""
    if profile.n_parties != 2:
        raise InvalidProfileError(f"Schmidt states need a bipartite profile, got {profile.spec}")
    c = np.asarray(coeffs, dtype=np.float64).reshape(-1)
    n_a, n_b = profile.dims
    if c.size == 0 or c.size > min(n_a, n_b):
        raise InvalidStateError(f"{c.size} Schmidt coefficients do not fit profile {profile.spec}")
    if np.any(c < 0):
        raise InvalidStateError("Schmidt coefficients must be nonnegative")
    total = float(np.sum(c**2))
    if abs(total - 1.0) > settings.NORM_TOL:
        raise InvalidStateError(f"Schmidt coefficients square-sum to {total:.17g}, expected 1")
    amps = np.zeros((n_a, n_b), dtype=np.complex128)
    for i, ci in enumerate(c):
        amps[i, i] = ci
    return PureState(amps.reshape(-1), profile)


# Named reference states ----------------------------------------------------

_NAME_RE = re.compile(r"^\s*([a-z_]+)\s*(?:\(([^)]*)\))?\s*$")


def _parse_name(name: str) -> Tuple[str, Tuple[int, ...]]:
    match = _NAME_RE.match(name or "")
    if not match:
        raise UnknownStateError(name)
    args = match.group(2)
    try:
        params = tuple(int(a) for a in args.split(",")) if args and args.strip() else ()
    except ValueError:
        raise UnknownStateError(name)
    return match.group(1), params


def _bell(params, profile: Optional[DimensionProfile]) -> PureState:
    profile = profile or DimensionProfile((2, 2))
    if profile.n_parties != 2 or profile.dims[0] != profile.dims[1]:
        raise InvalidProfileError(f"bell needs a bipartite profile with equal dims, got {profile.spec}")
    d = profile.dims[0]
    return schmidt_pure([1 / math.sqrt(d)] * d, profile)


def _ghz(params, profile: Optional[DimensionProfile]) -> PureState:
    profile = profile or DimensionProfile((2, 2, 2))
    if len(set(profile.dims)) != 1:
        raise InvalidProfileError(f"ghz needs equal local dims, got {profile.spec}")
    d, k = profile.dims[0], profile.n_parties
    amps = np.zeros(profile.total_dim, dtype=np.complex128)
    for i in range(d):
        amps[sum(i * d**p for p in range(k))] = 1 / math.sqrt(d)
    return PureState(amps, profile)


def _w(params, profile: Optional[DimensionProfile]) -> PureState:
    profile = profile or DimensionProfile((2, 2, 2))
    if any(d != 2 for d in profile.dims) or profile.n_parties < 2:
        raise InvalidProfileError(f"w needs two or more qubits, got {profile.spec}")
    k = profile.n_parties
    amps = np.zeros(profile.total_dim, dtype=np.complex128)
    for p in range(k):
        amps[1 << p] = 1 / math.sqrt(k)
    return PureState(amps, profile)


def _basis(params, profile: Optional[DimensionProfile]) -> PureState:
    if len(params) == 2:
        k, n = params
        profile = _resolve_profile(n, profile)
    elif len(params) == 1 and profile is not None:
        (k,) = params
    else:
        raise UnknownStateError(f"basis{params}: expected basis(k, n)")
    n = profile.total_dim
    if not 0 <= k < n:
        raise InvalidStateError(f"basis index {k} out of range for dim {n}")
    amps = np.zeros(n, dtype=np.complex128)
    amps[k] = 1.0
    return PureState(amps, profile)


def _plus(params, profile: Optional[DimensionProfile]) -> PureState:
    if params:
        profile = _resolve_profile(params[0], profile)
    elif profile is None:
        profile = DimensionProfile.single(2)
    n = profile.total_dim
    return PureState(np.full(n, 1 / math.sqrt(n), dtype=np.complex128), profile)


_PURE_BUILDERS = {
    "bell": _bell,
    "ghz": _ghz,
    "w": _w,
    "basis": _basis,
    "plus": _plus,
}

NAMED_STATES = ("max_mixed(n)", "bell", "ghz", "w", "basis(k, n)", "plus(n)")


def named_pure(name: str, profile: Optional[DimensionProfile] = None) -> PureState:
    """Pure named state (everything except max_mixed)."""
    key, params = _parse_name(name)
    builder = _PURE_BUILDERS.get(key)
    if builder is None:
        raise UnknownStateError(name)
    return builder(params, profile)


def named_state(name: str, profile: Optional[DimensionProfile] = None) -> DensityMatrix:
    """
    Canonical reference state by name.

    Known names: max_mixed(n), bell, ghz, w, basis(k, n), plus(n). A profile
    generalizes bell/ghz/w to other local dimensions or party counts.
    """
    key, params = _parse_name(name)
    if key == "max_mixed":
        if params:
            return maximally_mixed(_resolve_profile(params[0], profile))
        if profile is None:
            raise UnknownStateError(f"{name}: expected max_mixed(n) or a profile")
        return maximally_mixed(profile)
    return density_from_pure(named_pure(name, profile))
