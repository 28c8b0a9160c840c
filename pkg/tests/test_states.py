import math

import numpy as np
import pytest

from wpduality.exceptions import (
    InvalidCutError,
    InvalidProfileError,
    InvalidStateError,
    UnknownStateError,
)
from wpduality.profile import Cut, DimensionProfile
from wpduality.states import (
    DensityMatrix,
    PureState,
    TwoQubitAmplitudes,
    density_from_pure,
    derive_seed,
    ginibre_mixed,
    haar_pure,
    haar_unitary,
    make_rng,
    maximally_mixed,
    named_pure,
    named_state,
    schmidt_pure,
)


class TestDimensionProfile:
    """Test cases for profile and cut grammar."""

    def test_parse(self):
        """Test parsing of profile specs and default labels."""
        profile = DimensionProfile.parse("2x3x4")
        assert profile.dims == (2, 3, 4)
        assert profile.labels == ("A", "B", "C")
        assert profile.total_dim == 24
        assert profile.spec == "2x3x4"

    @pytest.mark.parametrize("spec", ["", "2x", "x2", "2,3", "1x2", "axb"])
    def test_parse_rejects_malformed(self, spec):
        """Test malformed or degenerate profile specs."""
        with pytest.raises(InvalidProfileError):
            DimensionProfile.parse(spec)

    def test_duplicate_labels(self):
        """Test that party labels must be distinct."""
        with pytest.raises(InvalidProfileError):
            DimensionProfile((2, 2), ("A", "A"))

    def test_cut_parse(self):
        """Test cut grammar with run-together single-letter labels."""
        profile = DimensionProfile.parse("2x2x3")
        cut = Cut.parse("A|BC", profile)
        assert cut.left == (0,)
        assert cut.right == (1, 2)
        assert cut.label(profile) == "A|BC"
        assert Cut.parse("AC|B", profile).left == (0, 2)

    def test_cut_long_labels(self):
        """Test comma-separated multi-character labels."""
        profile = DimensionProfile((2, 2, 2), ("Alice", "Bob", "Carol"))
        cut = Cut.parse("Alice|Bob,Carol", profile)
        assert cut.right == (1, 2)

    @pytest.mark.parametrize("spec", ["AB", "A|B|C", "A|B", "AB|BC", "|ABC"])
    def test_cut_rejects_invalid(self, spec):
        """Test malformed, overlapping and incomplete cuts."""
        with pytest.raises(InvalidCutError):
            Cut.parse(spec, DimensionProfile.parse("2x2x2"))

    def test_default_cut(self):
        """Test the first-party-versus-rest default."""
        cut = Cut.default(DimensionProfile.parse("2x2x2"))
        assert (cut.left, cut.right) == ((0,), (1, 2))
        with pytest.raises(InvalidCutError):
            Cut.default(DimensionProfile.single(3))


class TestDensityMatrix:
    """Test cases for DensityMatrix validation."""

    def test_rejects_bad_trace(self):
        """Test that a trace far from one is rejected."""
        with pytest.raises(InvalidStateError):
            DensityMatrix.from_array(np.eye(2))

    def test_rejects_negative_eigenvalue(self):
        """Test that a clearly non-PSD matrix is rejected."""
        with pytest.raises(InvalidStateError):
            DensityMatrix.from_array(np.diag([1.5, -0.5]))

    def test_clamp_absorbs_drift(self):
        """Test that clamping removes tiny negative eigenvalues."""
        rho = DensityMatrix.from_array(np.diag([1.0 + 1e-12, -1e-12]), clamp=True)
        assert rho.eigenvalues[-1] >= 0.0
        assert rho.op.trace() == pytest.approx(1.0, abs=1e-14)

    def test_reduced_profile(self):
        """Test that reduced states carry the kept parties' labels."""
        rho = ginibre_mixed(None, None, 1, DimensionProfile.parse("2x3x2"))
        reduced = rho.reduced([2, 1])
        assert reduced.profile.dims == (3, 2)
        assert reduced.profile.labels == ("B", "C")


class TestPureStates:
    """Test cases for pure-state constructors."""

    def test_density_from_pure(self):
        """Test projectors of |0>, |+> and a Bell state."""
        assert np.allclose(density_from_pure(PureState.from_vector([1, 0])).matrix, np.diag([1, 0]))
        plus = PureState.from_vector(np.array([1, 1]) / math.sqrt(2))
        assert np.allclose(density_from_pure(plus).matrix, 0.5)
        amps = np.array([1, 0, 0, 1]) / math.sqrt(2)
        bell = density_from_pure(PureState.from_vector(amps, DimensionProfile((2, 2))))
        assert np.allclose(bell.matrix, np.outer(amps, amps.conj()))

    def test_pure_state_norm(self):
        """Test that unnormalized vectors are rejected unless asked to normalize."""
        with pytest.raises(InvalidStateError):
            PureState.from_vector([1, 1])
        psi = PureState.from_vector([3, 4], normalize=True)
        assert np.linalg.norm(psi.amplitudes) == pytest.approx(1.0)

    def test_two_qubit_amplitudes(self):
        """Test the amplitude record round trip through a pure state."""
        amp = TwoQubitAmplitudes(math.sqrt(0.5), math.sqrt(0.3), math.sqrt(0.2), 0.0)
        back = TwoQubitAmplitudes.from_pure(amp.to_pure())
        assert complex(back.b) == pytest.approx(math.sqrt(0.3))
        with pytest.raises(InvalidStateError):
            TwoQubitAmplitudes(1.0, 1.0, 0.0, 0.0)

    def test_schmidt_states(self):
        """Test product, Bell and partially entangled Schmidt states."""
        profile = DimensionProfile((2, 2))
        assert np.allclose(schmidt_pure([1.0], profile).amplitudes, [1, 0, 0, 0])
        bell = schmidt_pure([1 / math.sqrt(2)] * 2, profile)
        assert np.allclose(bell.amplitudes, np.array([1, 0, 0, 1]) / math.sqrt(2))
        partial = schmidt_pure([math.sqrt(0.9), math.sqrt(0.1)], profile)
        assert partial.reduced([0]).purity() == pytest.approx(0.82)

    def test_schmidt_rejects_bad_input(self):
        """Test Schmidt coefficient validation."""
        with pytest.raises(InvalidStateError):
            schmidt_pure([0.5, 0.5], DimensionProfile((2, 2)))
        with pytest.raises(InvalidStateError):
            schmidt_pure([0.5] * 4, DimensionProfile((2, 3)))
        with pytest.raises(InvalidProfileError):
            schmidt_pure([1.0], DimensionProfile((2, 2, 2)))


class TestRandomStates:
    """Test cases for seeded random sampling."""

    def test_haar_norm_and_determinism(self):
        """Test unit norm and identical output for identical seeds."""
        a = haar_pure(7, 1234)
        b = haar_pure(7, 1234)
        assert abs(np.linalg.norm(a.amplitudes) - 1.0) < 1e-12
        assert np.array_equal(a.amplitudes, b.amplitudes)
        assert not np.array_equal(a.amplitudes, haar_pure(7, 1235).amplitudes)

    def test_derive_seed_streams(self):
        """Test that sample index and stream both change the derived seed."""
        seeds = {derive_seed(42, i, s) for i in range(20) for s in range(3)}
        assert len(seeds) == 60
        assert derive_seed(42, 3, 1) == derive_seed(42, 3, 1)

    def test_haar_unitary(self):
        """Test that sampled unitaries are unitary."""
        u = haar_unitary(5, make_rng(7))
        assert np.allclose(u.conj().T @ u, np.eye(5), atol=1e-12)

    def test_ginibre_rank_one_is_pure(self):
        """Test that rank-1 Ginibre states are pure."""
        assert abs(ginibre_mixed(5, 1, 8).purity() - 1.0) < 1e-10

    def test_ginibre_full_rank(self):
        """Test full-rank Ginibre states are positive definite and reproducible."""
        rho = ginibre_mixed(4, 4, 2024)
        assert np.all(rho.eigenvalues > 0)
        assert np.array_equal(rho.matrix, ginibre_mixed(4, 4, 2024).matrix)

    def test_ginibre_rejects_bad_rank(self):
        """Test rank outside [1, dim]."""
        with pytest.raises(InvalidStateError):
            ginibre_mixed(3, 4, 1)

    @pytest.mark.slow
    def test_haar_mean_reduced_purity(self):
        """Test the Haar average reduced purity (n_A + n_B)/(n_A n_B + 1) = 4/5 on 2x2."""
        profile = DimensionProfile((2, 2))
        purities = [haar_pure(None, derive_seed(5, i), profile).reduced([0]).purity() for i in range(100000)]
        assert np.mean(purities) == pytest.approx(0.8, abs=0.01)

    def test_haar_mean_reduced_purity_small(self):
        """Test the Haar average reduced purity on a reduced sample."""
        profile = DimensionProfile((2, 2))
        purities = [haar_pure(None, derive_seed(5, i), profile).reduced([0]).purity() for i in range(4000)]
        assert np.mean(purities) == pytest.approx(0.8, abs=0.02)


class TestNamedStates:
    """Test cases for the named-state registry."""

    def test_max_mixed(self):
        """Test max_mixed(3)."""
        assert np.allclose(named_state("max_mixed(3)").matrix, np.eye(3) / 3)
        assert np.allclose(maximally_mixed(DimensionProfile((2, 2))).matrix, np.eye(4) / 4)

    def test_ghz(self):
        """Test the GHZ projector."""
        rho = named_state("ghz")
        expected = np.zeros((8, 8))
        expected[0, 0] = expected[0, 7] = expected[7, 0] = expected[7, 7] = 0.5
        assert np.allclose(rho.matrix, expected)

    def test_w_reduced_purity(self):
        """Test W state two-party marginal purity 5/9."""
        assert named_state("w").reduced([0, 1]).purity() == pytest.approx(5 / 9)

    def test_generalized_bell(self):
        """Test bell on a 3x3 profile is maximally entangled."""
        psi = named_pure("bell", DimensionProfile((3, 3)))
        assert np.allclose(psi.reduced([0]).matrix, np.eye(3) / 3)

    def test_basis_and_plus(self):
        """Test basis(k, n) and plus(n)."""
        assert np.allclose(named_state("basis(2, 3)").matrix, np.diag([0, 0, 1]))
        assert np.allclose(named_state("plus(3)").matrix, np.full((3, 3), 1 / 3))

    @pytest.mark.parametrize("name", ["nosuch", "bell(", "basis(x, 2)"])
    def test_unknown_names(self, name):
        """Test unknown or malformed names."""
        with pytest.raises(UnknownStateError):
            named_state(name)
