import math

import numpy as np
import pytest
from hypothesis import given, settings as hsettings
from hypothesis import strategies as st

from wpduality.exceptions import DimensionMismatchError, HermiticityError, InvalidProfileError
from wpduality.profile import DimensionProfile
from wpduality.qlinalg import (
    HermitianOperator,
    hermitian_eig,
    hs_norm,
    numerical_rank,
    partial_trace,
    tensor_product,
    trace_norm,
)
from wpduality.states import ginibre_mixed, make_rng


def random_hermitian(dim, seed):
    rng = make_rng(seed)
    a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return HermitianOperator((a + a.conj().T) / 2)


def ket_projector(vector):
    v = np.asarray(vector, dtype=np.complex128)
    return HermitianOperator(np.outer(v, v.conj()))


class TestHermitianOperator:
    """Test cases for HermitianOperator construction."""

    def test_rejects_non_hermitian(self):
        """Test that a clearly non-Hermitian matrix is rejected."""
        with pytest.raises(HermiticityError):
            HermitianOperator(np.array([[0, 1], [0, 0]], dtype=complex))

    def test_rejects_non_square(self):
        """Test that a non-square matrix is rejected."""
        with pytest.raises(DimensionMismatchError):
            HermitianOperator(np.zeros((2, 3)))

    def test_symmetrizes_small_drift(self):
        """Test that drift below tolerance is symmetrized away."""
        m = np.array([[1.0, 0.5 + 1e-12j], [0.5, 0.0]], dtype=complex)
        op = HermitianOperator(m)
        assert np.array_equal(op.matrix, op.matrix.conj().T)

    def test_matrix_is_read_only(self):
        """Test that the stored matrix cannot be mutated."""
        op = HermitianOperator.identity(2)
        with pytest.raises(ValueError):
            op.matrix[0, 0] = 5.0

    def test_arithmetic(self):
        """Test addition, subtraction and scaling."""
        a = HermitianOperator.identity(3)
        diff = a - a.scaled(0.5)
        assert diff.allclose(a.scaled(0.5))
        assert (a + a).trace() == pytest.approx(6.0)


class TestTensorProduct:
    """Test cases for tensor_product."""

    def test_identity(self):
        """Test I2 (x) I2 = I4."""
        result = tensor_product(HermitianOperator.identity(2), HermitianOperator.identity(2))
        assert result.allclose(HermitianOperator.identity(4))

    def test_diagonal_product(self):
        """Test |0><0| (x) I/2 = diag(1/2, 1/2, 0, 0)."""
        result = tensor_product(ket_projector([1, 0]), HermitianOperator.identity(2).scaled(0.5))
        assert np.allclose(result.matrix, np.diag([0.5, 0.5, 0.0, 0.0]))

    def test_index_pairing(self):
        """Test sigma_z (x) sigma_x against a double loop over index pairs."""
        z = HermitianOperator(np.array([[1, 0], [0, -1]], dtype=complex))
        x = HermitianOperator(np.array([[0, 1], [1, 0]], dtype=complex))
        result = tensor_product(z, x)
        for i in range(2):
            for k in range(2):
                for j in range(2):
                    for l_ in range(2):
                        assert result.entry(2 * i + k, 2 * j + l_) == z.entry(i, j) * x.entry(k, l_)


class TestPartialTrace:
    """Test cases for partial_trace."""

    def setup_method(self):
        """Set up test fixtures."""
        self.bell = ket_projector(np.array([1, 0, 0, 1]) / math.sqrt(2))
        ghz = np.zeros(8)
        ghz[0] = ghz[7] = 1 / math.sqrt(2)
        self.ghz = ket_projector(ghz)

    def test_bell_marginal_is_maximally_mixed(self):
        """Test tr_B of a Bell state is I/2."""
        result = partial_trace(self.bell, DimensionProfile((2, 2)), [0])
        assert np.allclose(result.matrix, np.eye(2) / 2)

    def test_ghz_trace_c(self):
        """Test tr_C of GHZ against a contraction over the environment basis."""
        profile = DimensionProfile((2, 2, 2))
        result = partial_trace(self.ghz, profile, [0, 1])
        full = self.ghz.matrix.reshape(2, 2, 2, 2, 2, 2)
        oracle = np.zeros((4, 4), dtype=complex)
        for a in range(2):
            for b in range(2):
                for a2 in range(2):
                    for b2 in range(2):
                        oracle[2 * a + b, 2 * a2 + b2] = sum(full[a, b, c, a2, b2, c] for c in range(2))
        assert np.allclose(result.matrix, oracle)
        assert np.allclose(result.matrix, np.diag([0.5, 0, 0, 0.5]))

    def test_product_state_identity(self):
        """Test tr_B(rho_A (x) rho_B) = rho_A."""
        rho_a = ginibre_mixed(3, None, 11).op
        rho_b = ginibre_mixed(2, None, 12).op
        result = partial_trace(tensor_product(rho_a, rho_b), DimensionProfile((3, 2)), [0])
        assert result.allclose(rho_a)

    def test_keep_order_is_normalized(self):
        """Test that keep indices are sorted before tracing."""
        profile = DimensionProfile((2, 2, 2))
        rho = ginibre_mixed(None, None, 3, profile).op
        assert partial_trace(rho, profile, [2, 0]).allclose(partial_trace(rho, profile, [0, 2]))

    def test_keep_all_returns_input(self):
        """Test that keeping every party is the identity."""
        profile = DimensionProfile((2, 3))
        rho = ginibre_mixed(None, None, 5, profile).op
        assert partial_trace(rho, profile, [0, 1]) is rho

    def test_invalid_keep(self):
        """Test empty and out-of-range keep sets."""
        profile = DimensionProfile((2, 2))
        with pytest.raises(InvalidProfileError):
            partial_trace(self.bell, profile, [])
        with pytest.raises(InvalidProfileError):
            partial_trace(self.bell, profile, [2])

    def test_profile_dimension_mismatch(self):
        """Test that a profile of the wrong size is rejected."""
        with pytest.raises(DimensionMismatchError):
            partial_trace(self.bell, DimensionProfile((2, 3)), [0])


class TestEigenAndNorms:
    """Test cases for eigendecomposition and norms."""

    def test_identity_eigenvalues(self):
        """Test eigenvalues of I_n are all one."""
        decomposition = hermitian_eig(HermitianOperator.identity(5))
        assert np.allclose(decomposition.eigenvalues, 1.0)

    def test_diagonal_eigenvalues_descending(self):
        """Test diag(0.25, 0.75) gives (0.75, 0.25)."""
        decomposition = hermitian_eig(HermitianOperator(np.diag([0.25, 0.75]).astype(complex)))
        assert np.allclose(decomposition.eigenvalues, [0.75, 0.25])

    def test_reconstruction(self):
        """Test sum lambda v v^H rebuilds a random 6x6 Hermitian matrix."""
        op = random_hermitian(6, 42)
        decomposition = hermitian_eig(op)
        assert np.max(np.abs(decomposition.reconstruct() - op.matrix)) < 1e-9

    def test_trace_norm_values(self):
        """Test trace norm of zero and of |0><0| - I/n."""
        assert trace_norm(HermitianOperator.zeros(3)) == 0.0
        for n in (2, 3, 5):
            basis = np.zeros(n)
            basis[0] = 1.0
            op = ket_projector(basis) - HermitianOperator.identity(n).scaled(1.0 / n)
            assert trace_norm(op) == pytest.approx(2 * (1 - 1 / n), abs=1e-12)

    def test_hs_norm_values(self):
        """Test Hilbert-Schmidt norm special cases."""
        half = HermitianOperator.identity(2).scaled(0.5)
        assert hs_norm(HermitianOperator.zeros(2)) == 0.0
        assert hs_norm(half - half) == 0.0
        assert hs_norm(ket_projector([1, 0]) - half) == pytest.approx(math.sqrt(0.5))

    def test_numerical_rank(self):
        """Test rank of I/n, a projector and a rank-2 Ginibre state."""
        assert numerical_rank(HermitianOperator.identity(4).scaled(0.25)) == 4
        assert numerical_rank(ket_projector([0, 1, 0])) == 1
        assert numerical_rank(ginibre_mixed(4, 2, 99).op) == 2
        assert numerical_rank(HermitianOperator.zeros(3)) == 0

    def test_numerical_rank_rejects_bad_tolerance(self):
        """Test that rel_tol outside (0, 1) is rejected."""
        with pytest.raises(ValueError):
            numerical_rank(HermitianOperator.identity(2), 1.5)

    @hsettings(max_examples=50, deadline=None)
    @given(dim=st.integers(min_value=1, max_value=12), seed=st.integers(min_value=0, max_value=2**32))
    def test_norms_match_oracles(self, dim, seed):
        """Test trace norm against singular values and HS norm against the entrywise sum."""
        op = random_hermitian(dim, seed)
        singular = np.linalg.svd(op.matrix, compute_uv=False)
        assert abs(trace_norm(op) - float(np.sum(singular))) < 1e-10 * max(1.0, float(np.sum(singular)))
        entrywise = math.sqrt(sum(abs(z) ** 2 for z in op.matrix.ravel()))
        assert abs(hs_norm(op) - entrywise) < 1e-10 * max(1.0, entrywise)
