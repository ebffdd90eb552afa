import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.stats import unitary_group

from graphsteer.errors import DomainError, NumericalDegeneracyError, ValidationError
from graphsteer.policy import NumericPolicy
from graphsteer.states import (
    SqueezedInput,
    Orientation,
    closed_form_tripartite_cov,
    tripartite_network_unitary,
)
from graphsteer.symplectic import (
    Bipartition,
    apply_symplectic,
    bona_fide_margin,
    is_physical,
    is_symplectic,
    partial_transpose,
    schur_complement,
    symplectic_eigenvalues,
    symplectic_form,
    unitary_to_symplectic,
)

from conftest import random_covariance, random_symplectic, two_mode_squeezed

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def test_symplectic_form_single_mode():
    np.testing.assert_array_equal(symplectic_form(1), [[0, 1], [-1, 0]])


def test_symplectic_form_two_modes_is_direct_sum():
    j = np.array([[0, 1], [-1, 0]])
    expected = np.zeros((4, 4))
    expected[:2, :2] = j
    expected[2:, 2:] = j
    np.testing.assert_array_equal(symplectic_form(2), expected)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 7])
def test_symplectic_form_identities(n):
    om = symplectic_form(n)
    np.testing.assert_array_equal(om @ om, -np.eye(2 * n))
    np.testing.assert_array_equal(om.T, -om)


@pytest.mark.parametrize("n", [0, -1, 1.5])
def test_symplectic_form_rejects_bad_size(n):
    with pytest.raises(DomainError):
        symplectic_form(n)


class TestSymplecticEigenvalues:
    @pytest.mark.parametrize("n", [1, 2, 4])
    def test_vacuum(self, n):
        np.testing.assert_allclose(symplectic_eigenvalues(np.eye(2 * n)), np.ones(n))

    def test_squeezed_vacuum_is_pure(self):
        cov = SqueezedInput(0.7, Orientation.AMPLITUDE).cov()
        np.testing.assert_allclose(symplectic_eigenvalues(cov), [1.0], atol=1e-12)

    def test_thermal(self):
        np.testing.assert_allclose(symplectic_eigenvalues(np.diag([3.0, 3.0])), [3.0])

    def test_rejects_non_symmetric(self):
        with pytest.raises(ValidationError):
            symplectic_eigenvalues(np.array([[1.0, 0.5], [0.0, 1.0]]))

    def test_rejects_indefinite(self):
        with pytest.raises(ValidationError):
            symplectic_eigenvalues(np.diag([1.0, -1.0]))

    def test_unpaired_spectrum_raises(self):
        with pytest.raises(NumericalDegeneracyError):
            symplectic_eigenvalues(np.diag([2.0, 3.0, 1.0, 1.0]), NumericPolicy(pairing_tol=-1.0))

    @settings(max_examples=40, deadline=None)
    @given(seeds)
    def test_two_mode_closed_form(self, seed):
        # nu_pm^2 = (D +- sqrt(D^2 - 4 det sigma)) / 2, D = det A + det B + 2 det C
        sigma, _ = random_covariance(2, np.random.default_rng(seed))
        a, b, c = sigma[:2, :2], sigma[2:, 2:], sigma[:2, 2:]
        d = np.linalg.det(a) + np.linalg.det(b) + 2 * np.linalg.det(c)
        disc = np.sqrt(d**2 - 4 * np.linalg.det(sigma))
        expected = np.sqrt([(d + disc) / 2, (d - disc) / 2])
        np.testing.assert_allclose(symplectic_eigenvalues(sigma), expected, rtol=1e-8)

    @settings(max_examples=40, deadline=None)
    @given(seeds, st.integers(min_value=1, max_value=4))
    def test_williamson_construction_recovered(self, seed, n):
        sigma, nus = random_covariance(n, np.random.default_rng(seed))
        np.testing.assert_allclose(symplectic_eigenvalues(sigma), nus, rtol=1e-8)

    @settings(max_examples=40, deadline=None)
    @given(seeds, st.integers(min_value=1, max_value=4))
    def test_invariant_under_symplectic_congruence(self, seed, n):
        rng = np.random.default_rng(seed)
        sigma, _ = random_covariance(n, rng)
        s = random_symplectic(n, rng)
        np.testing.assert_allclose(
            symplectic_eigenvalues(apply_symplectic(s, sigma)),
            symplectic_eigenvalues(sigma),
            atol=1e-8,
        )


class TestSchurComplement:
    def test_product_state_returns_steered_block(self):
        sigma = np.diag([2.0, 0.5, 3.0, 1 / 3])
        res = schur_complement(sigma, Bipartition((0,), (1,)))
        np.testing.assert_array_equal(res.matrix, np.diag([3.0, 1 / 3]))
        assert not res.regularized

    def test_two_mode_vacuum(self):
        res = schur_complement(np.eye(4), Bipartition((0,), (1,)))
        np.testing.assert_allclose(res.matrix, np.eye(2))

    def test_tripartite_block_arithmetic_oracle(self):
        sigma = closed_form_tripartite_cov(0.5, 0.345)
        a = sigma[0:2, 0:2]
        b = sigma[2:4, 2:4]
        c = sigma[0:2, 2:4]
        expected = b - c.T @ np.linalg.inv(a) @ c
        res = schur_complement(sigma, Bipartition((0,), (1,)))
        np.testing.assert_allclose(res.matrix, expected, atol=1e-14)
        np.testing.assert_array_equal(res.matrix, res.matrix.T)

    def test_steering_party_is_permuted_to_front(self):
        sigma = closed_form_tripartite_cov(0.3, 0.345)
        # party C steering A: blocks taken directly from rows (4, 5) and (0, 1)
        a = sigma[4:6, 4:6]
        b = sigma[0:2, 0:2]
        c = sigma[4:6, 0:2]
        res = schur_complement(sigma, Bipartition((2,), (0,)))
        np.testing.assert_allclose(res.matrix, b - c.T @ np.linalg.solve(a, c), atol=1e-14)

    def test_near_singular_steering_block_is_regularized(self):
        sigma = np.diag([1e-14, 1.0, 1.0, 1.0])
        res = schur_complement(sigma, Bipartition((0,), (1,)))
        assert res.regularized
        np.testing.assert_allclose(res.matrix, np.eye(2))

    @settings(max_examples=25, deadline=None)
    @given(seeds)
    def test_block_diagonal_returns_steered_block_exactly(self, seed):
        rng = np.random.default_rng(seed)
        sa, _ = random_covariance(1, rng)
        sb, _ = random_covariance(2, rng)
        sigma = np.zeros((6, 6))
        sigma[:2, :2] = sa
        sigma[2:, 2:] = sb
        res = schur_complement(sigma, Bipartition((0,), (1, 2)))
        np.testing.assert_array_equal(res.matrix, 0.5 * (sb + sb.T))

    def test_out_of_range_party(self):
        with pytest.raises(ValidationError):
            schur_complement(np.eye(4), Bipartition((0,), (2,)))


class TestUnitaryToSymplectic:
    def test_identity(self):
        np.testing.assert_array_equal(unitary_to_symplectic(np.eye(3)), np.eye(6))

    def test_phase_rotation(self):
        np.testing.assert_array_equal(unitary_to_symplectic(np.array([[1j]])), [[0, -1], [1, 0]])

    def test_network_matrix_is_symplectic(self):
        s = unitary_to_symplectic(tripartite_network_unitary(0.5, t1=1 / 3))
        om = symplectic_form(3)
        assert np.max(np.abs(s @ om @ s.T - om)) <= 1e-12
        assert is_symplectic(s)

    def test_rejects_non_unitary(self):
        with pytest.raises(ValidationError):
            unitary_to_symplectic(np.array([[1.0, 0.1], [0.0, 1.0]]))

    @settings(max_examples=30, deadline=None)
    @given(seeds, st.integers(min_value=1, max_value=5))
    def test_homomorphism(self, seed, n):
        rng = np.random.default_rng(seed)
        u = unitary_group.rvs(n, random_state=rng) if n > 1 else np.exp(1j * rng.uniform(0, 6, (1, 1)))
        v = unitary_group.rvs(n, random_state=rng) if n > 1 else np.exp(1j * rng.uniform(0, 6, (1, 1)))
        np.testing.assert_allclose(
            unitary_to_symplectic(u @ v),
            unitary_to_symplectic(u) @ unitary_to_symplectic(v),
            atol=1e-10,
        )

    @settings(max_examples=20, deadline=None)
    @given(seeds)
    def test_passive_network_preserves_vacuum(self, seed):
        u = unitary_group.rvs(4, random_state=np.random.default_rng(seed))
        np.testing.assert_allclose(apply_symplectic(unitary_to_symplectic(u), np.eye(8)), np.eye(8), atol=1e-12)


class TestApplySymplectic:
    def test_identity(self):
        sigma = closed_form_tripartite_cov(0.4, 0.2)
        np.testing.assert_allclose(apply_symplectic(np.eye(6), sigma), sigma)

    def test_network_on_squeezed_inputs_matches_closed_form(self):
        from scipy.linalg import block_diag

        r = 0.345
        amp = np.diag([np.exp(-2 * r), np.exp(2 * r)])
        ph = np.diag([np.exp(2 * r), np.exp(-2 * r)])
        sigma_in = block_diag(amp, ph, amp)
        s = unitary_to_symplectic(tripartite_network_unitary(0.3))
        np.testing.assert_allclose(
            apply_symplectic(s, sigma_in), closed_form_tripartite_cov(0.3, r), atol=1e-10
        )

    def test_dimension_mismatch(self):
        with pytest.raises(ValidationError):
            apply_symplectic(np.eye(4), np.eye(6))


class TestPartialTranspose:
    def test_vacuum_unchanged(self):
        np.testing.assert_array_equal(partial_transpose(np.eye(6), [0, 2]), np.eye(6))

    def test_involution_and_symmetry(self):
        sigma = closed_form_tripartite_cov(0.3, 0.345)
        once = partial_transpose(sigma, [1])
        np.testing.assert_array_equal(once, once.T)
        np.testing.assert_array_equal(partial_transpose(once, [1]), sigma)

    def test_only_momentum_entries_of_listed_modes_flip(self):
        sigma = closed_form_tripartite_cov(0.3, 0.345)
        out = partial_transpose(sigma, [1])
        assert out[3, 0] == -sigma[3, 0]
        assert out[3, 3] == sigma[3, 3]
        assert out[2, 0] == sigma[2, 0]

    @pytest.mark.parametrize("r", [0.1, 0.345, 1.0])
    def test_two_mode_squeezed_state(self, r):
        flipped = partial_transpose(two_mode_squeezed(r), [1])
        # brute force: moduli of the eigenvalues of Omega sigma~
        moduli = np.abs(np.linalg.eigvals(symplectic_form(2) @ flipped))
        assert moduli.min() == pytest.approx(np.exp(-2 * r), rel=1e-10)
        assert symplectic_eigenvalues(flipped).min() == pytest.approx(np.exp(-2 * r), rel=1e-10)

    def test_out_of_range(self):
        with pytest.raises(ValidationError):
            partial_transpose(np.eye(4), [2])


def test_physicality_checks():
    assert is_physical(np.eye(4))
    assert bona_fide_margin(two_mode_squeezed(0.5)) == pytest.approx(0.0, abs=1e-12)
    assert not is_physical(np.diag([0.5, 0.5]))
