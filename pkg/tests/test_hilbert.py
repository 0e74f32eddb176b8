"""Register, state and operator algebra tests.

Direct-computation oracles (explicit Kronecker products, scipy expm)
live inside the tests and never call the code paths they check.
"""

import numpy as np
import pytest
import scipy.linalg as sla

from triphoton.errors import LayoutMismatchError
from triphoton.hilbert import (
    OperatorMatrix,
    QuantumState,
    RegisterLayout,
    build_operator,
    covariance_matrix,
    expect_monomial,
    expectation,
    fock_state,
    ghz_state,
    partial_trace,
    terms_to_matrix,
    von_neumann_entropy,
    w_state,
)
from triphoton.rwa import (
    ANNIHILATE,
    CREATE,
    NUMBER,
    PAULI_MINUS,
    PAULI_PLUS,
    LadderMonomial,
)


def mono(factors, coeff=1.0, drive=0):
    return LadderMonomial(tuple(factors), coeff, drive)


THREE_QUBITS = RegisterLayout.qubits(3)
SM = np.array([[0, 1], [0, 0]], dtype=complex)  # direct sigma_minus


class TestLayout:
    def test_dims_and_strides(self):
        lay = RegisterLayout((("boson", 3), ("qubit", 2), ("boson", 4)))
        assert lay.dims == (3, 2, 4)
        assert lay.total_dim == 24
        assert lay.boson_indices() == [0, 2]
        assert lay.qubit_indices() == [1]

    def test_big_endian_indexing(self):
        lay = RegisterLayout((("boson", 3), ("boson", 2)))
        psi = fock_state(lay, (2, 1))
        assert psi.data[2 * 2 + 1] == 1.0

    def test_invalid_layouts(self):
        with pytest.raises(ValueError):
            RegisterLayout((("qubit", 3),))
        with pytest.raises(ValueError):
            RegisterLayout((("spin", 2),))
        with pytest.raises(ValueError):
            RegisterLayout((("boson", 1),))


class TestBuildOperator:
    def test_annihilator_entries_cutoff_two(self):
        lay = RegisterLayout.bosons(1, 2)
        a = build_operator(mono([(0, ANNIHILATE)]), lay).matrix
        expected = np.zeros((3, 3), dtype=complex)
        expected[0, 1] = 1.0
        expected[1, 2] = np.sqrt(2.0)
        assert np.array_equal(a, expected)

    def test_commutator_below_cutoff(self):
        lay = RegisterLayout.bosons(1, 5)
        a = build_operator(mono([(0, ANNIHILATE)]), lay).matrix
        ad = build_operator(mono([(0, CREATE)]), lay).matrix
        comm = a @ ad - ad @ a
        # identity except on the top Fock level
        assert np.allclose(comm[:5, :5], np.eye(5))
        assert comm[5, 5] == pytest.approx(-5.0)  # truncation artifact

    def test_qubit_completeness(self):
        lay = RegisterLayout.qubits(1)
        pm = build_operator(mono([(0, PAULI_PLUS), (0, PAULI_MINUS)]), lay).matrix
        mp = build_operator(mono([(0, PAULI_MINUS), (0, PAULI_PLUS)]), lay).matrix
        assert np.array_equal(pm + mp, np.eye(2))

    def test_dagger_equals_conjugate_build(self):
        lay = RegisterLayout((("boson", 4), ("qubit", 2)))
        term = mono([(0, CREATE), (0, ANNIHILATE), (1, PAULI_PLUS)],
                    coeff=0.3 - 0.7j)
        left = build_operator(term, lay).dagger().matrix
        right = build_operator(term.conjugate(), lay).matrix
        assert np.array_equal(left, right)

    def test_kind_subsystem_mismatch(self):
        lay = RegisterLayout((("boson", 3), ("qubit", 2)))
        with pytest.raises(LayoutMismatchError):
            build_operator(mono([(1, CREATE)]), lay)
        with pytest.raises(LayoutMismatchError):
            build_operator(mono([(0, PAULI_PLUS)]), lay)

    def test_number_kind(self):
        lay = RegisterLayout.bosons(1, 3)
        n = build_operator(mono([(0, NUMBER)]), lay).matrix
        assert np.array_equal(n, np.diag([0, 1, 2, 3]).astype(complex))

    def test_terms_to_matrix_includes_identity(self):
        lay = RegisterLayout.bosons(1, 2)
        terms = [mono([(0, NUMBER)], 2.0), mono((), 1.5)]
        total = terms_to_matrix(terms, lay)
        assert np.allclose(total, np.diag([1.5, 3.5, 5.5]))


class TestExpectation:
    def test_vacuum_antinormal_pair(self):
        lay = RegisterLayout.bosons(1, 4)
        vac = fock_state(lay, (0,))
        op = build_operator(mono([(0, ANNIHILATE), (0, CREATE)]), lay)
        assert expectation(vac, op) == pytest.approx(1.0)

    def test_unnormalized_perturbative_state(self):
        g0t = 0.07
        lay = RegisterLayout.bosons(3, 3)
        psi = fock_state(lay, (0, 0, 0)).data + \
            g0t * fock_state(lay, (1, 1, 1)).data
        state = QuantumState(lay, psi, validate=False)
        val = expect_monomial(
            state, ((0, ANNIHILATE), (1, ANNIHILATE), (2, ANNIHILATE)))
        assert val == pytest.approx(g0t, rel=1e-14)

    def test_ghz_triple_lowering_modulus(self):
        # oracle: explicit 8-dimensional matrix-vector computation
        ghz_vec = np.zeros(8, dtype=complex)
        ghz_vec[0] = ghz_vec[7] = 1 / np.sqrt(2)
        op = np.kron(np.kron(SM, SM), SM)
        oracle = abs(ghz_vec.conj() @ op @ ghz_vec)
        state = ghz_state(THREE_QUBITS)
        val = expect_monomial(
            state, ((0, PAULI_MINUS), (1, PAULI_MINUS), (2, PAULI_MINUS)))
        assert oracle == pytest.approx(0.5, abs=1e-15)
        assert abs(val) == pytest.approx(oracle, abs=1e-14)

    def test_hermitian_operator_real_expectation(self):
        rng = np.random.default_rng(11)
        lay = RegisterLayout.bosons(2, 3)
        vec = rng.normal(size=16) + 1j * rng.normal(size=16)
        vec /= np.linalg.norm(vec)
        state = QuantumState(lay, vec)
        terms = [mono([(0, CREATE), (1, ANNIHILATE)], 0.4 + 0.2j)]
        terms.append(terms[0].conjugate())
        op = OperatorMatrix(lay, terms_to_matrix(terms, lay))
        assert abs(expectation(state, op).imag) < 1e-12

    def test_layout_mismatch(self):
        lay_a = RegisterLayout.bosons(1, 2)
        lay_b = RegisterLayout.bosons(1, 3)
        op = build_operator(mono([(0, NUMBER)]), lay_b)
        with pytest.raises(LayoutMismatchError):
            expectation(fock_state(lay_a, (0,)), op)

    def test_density_expectation_matches_pure(self):
        lay = RegisterLayout.bosons(2, 3)
        rng = np.random.default_rng(5)
        vec = rng.normal(size=16) + 1j * rng.normal(size=16)
        vec /= np.linalg.norm(vec)
        state = QuantumState(lay, vec)
        rho = state.to_density()
        factors = ((0, CREATE), (1, ANNIHILATE))
        assert expect_monomial(rho, factors) == pytest.approx(
            expect_monomial(state, factors), abs=1e-13)


class TestPartialTrace:
    def test_product_state(self):
        lay = RegisterLayout.qubits(2)
        psi = fock_state(lay, (0, 1))
        reduced = partial_trace(psi, {0})
        assert np.allclose(reduced.data, [[1, 0], [0, 0]])

    def test_ghz_pair_marginal(self):
        reduced = partial_trace(ghz_state(THREE_QUBITS), {0, 1})
        expected = np.zeros((4, 4))
        expected[0, 0] = expected[3, 3] = 0.5
        assert np.allclose(reduced.data, expected, atol=1e-14)

    def test_bell_marginal_is_maximally_mixed(self):
        lay = RegisterLayout.qubits(2)
        bell = QuantumState(lay, np.array([1, 0, 0, 1]) / np.sqrt(2))
        reduced = partial_trace(bell, {0})
        assert reduced.purity() == pytest.approx(0.5, abs=1e-12)
        assert np.trace(reduced.data).real == pytest.approx(1.0, abs=1e-12)

    def test_keep_all_returns_density(self):
        lay = RegisterLayout.bosons(2, 2)
        rng = np.random.default_rng(3)
        vec = rng.normal(size=9) + 1j * rng.normal(size=9)
        vec /= np.linalg.norm(vec)
        state = QuantumState(lay, vec)
        rho = partial_trace(state, {0, 1})
        assert np.allclose(rho.data, state.to_density().data, atol=1e-14)

    def test_consistent_under_reordering(self):
        # tracing to {0} from (A, B, C) equals tracing the permuted
        # register (A, C, B) to {0}
        dims = (("boson", 2), ("boson", 3), ("qubit", 2))
        lay = RegisterLayout(dims)
        rng = np.random.default_rng(17)
        vec = rng.normal(size=12) + 1j * rng.normal(size=12)
        vec /= np.linalg.norm(vec)
        state = QuantumState(lay, vec)
        swapped = RegisterLayout((dims[0], dims[2], dims[1]))
        perm_vec = state.data.reshape(2, 3, 2).transpose(0, 2, 1).reshape(-1)
        state_swapped = QuantumState(swapped, perm_vec)
        r1 = partial_trace(state, {0})
        r2 = partial_trace(state_swapped, {0})
        assert np.allclose(r1.data, r2.data, atol=1e-13)

    def test_density_input(self):
        reduced = partial_trace(ghz_state(THREE_QUBITS).to_density(), {2})
        assert np.allclose(reduced.data, np.eye(2) / 2, atol=1e-14)

    def test_empty_keep_rejected(self):
        with pytest.raises(LayoutMismatchError):
            partial_trace(ghz_state(THREE_QUBITS), set())


class TestCovariance:
    def test_vacuum(self):
        lay = RegisterLayout.bosons(3, 3)
        cov = covariance_matrix(fock_state(lay, (0, 0, 0)))
        assert np.allclose(cov, np.eye(6) / 2, atol=1e-14)

    def test_triple_superposition_has_no_cross_covariances(self):
        lay = RegisterLayout.bosons(3, 3)
        for eps in [0.05, 0.3, 0.9]:
            vec = fock_state(lay, (0, 0, 0)).data + \
                eps * fock_state(lay, (1, 1, 1)).data
            vec /= np.linalg.norm(vec)
            cov = covariance_matrix(QuantumState(lay, vec))
            for i in range(3):
                for j in range(3):
                    if i != j:
                        assert abs(cov[i, j]) < 1e-14          # x_i x_j
                        assert abs(cov[3 + i, 3 + j]) < 1e-14  # p_i p_j

    def test_two_mode_squeezing_moments(self):
        # oracle: dense expm evolution under ig(a+b+ - ab) at cutoff 10,
        # compared with the analytic squeezing covariances
        gt = 0.1
        lay = RegisterLayout.bosons(2, 10)
        up = build_operator(mono([(0, CREATE), (1, CREATE)], 1j), lay).matrix
        h = up + up.conj().T
        psi = sla.expm(-1j * h * gt) @ fock_state(lay, (0, 0)).data
        cov = covariance_matrix(QuantumState(lay, psi))
        ch, sh = np.cosh(2 * gt), np.sinh(2 * gt)
        assert cov[0, 0] == pytest.approx(ch / 2, abs=1e-8)
        assert cov[1, 1] == pytest.approx(ch / 2, abs=1e-8)
        assert cov[0, 1] == pytest.approx(sh / 2, abs=1e-8)
        assert cov[2, 2] == pytest.approx(ch / 2, abs=1e-8)
        assert cov[2, 3] == pytest.approx(-sh / 2, abs=1e-8)
        assert abs(cov[0, 2]) < 1e-10  # no x-p self correlation

    def test_qubit_index_rejected(self):
        lay = RegisterLayout((("boson", 3), ("qubit", 2)))
        state = fock_state(lay, (0, 0))
        with pytest.raises(LayoutMismatchError):
            covariance_matrix(state, [0, 1])

    @pytest.mark.parametrize("seed", [0, 1, 2, 3])
    def test_uncertainty_relation(self, seed):
        # C + (i/2) Omega must be positive semidefinite
        rng = np.random.default_rng(seed)
        lay = RegisterLayout.bosons(2, 4)
        vec = rng.normal(size=25) + 1j * rng.normal(size=25)
        vec /= np.linalg.norm(vec)
        cov = covariance_matrix(QuantumState(lay, vec))
        m = 2
        omega = np.block([[np.zeros((m, m)), np.eye(m)],
                          [-np.eye(m), np.zeros((m, m))]])
        eigs = np.linalg.eigvalsh(cov + 0.5j * omega)
        assert eigs.min() > -1e-9

    def test_density_covariance_matches_pure(self):
        lay = RegisterLayout.bosons(2, 3)
        rng = np.random.default_rng(23)
        vec = rng.normal(size=16) + 1j * rng.normal(size=16)
        vec /= np.linalg.norm(vec)
        state = QuantumState(lay, vec)
        assert np.allclose(covariance_matrix(state),
                           covariance_matrix(state.to_density()),
                           atol=1e-12)


class TestNamedStates:
    def test_ghz_amplitudes(self):
        state = ghz_state(THREE_QUBITS)
        assert np.linalg.norm(state.data) == pytest.approx(1.0, abs=1e-15)
        assert state.data[0] == pytest.approx(1 / np.sqrt(2))
        assert state.data[7] == pytest.approx(1 / np.sqrt(2))
        assert np.count_nonzero(state.data) == 2

    def test_w_amplitudes(self):
        state = w_state(THREE_QUBITS)
        for idx in (1, 2, 4):
            assert state.data[idx] == pytest.approx(1 / np.sqrt(3))
        assert np.count_nonzero(state.data) == 3

    def test_fock_triple_target(self):
        lay = RegisterLayout.bosons(3, 3)
        psi = fock_state(lay, (1, 1, 1))
        assert psi.data[1 * 16 + 1 * 4 + 1] == 1.0

    def test_occupation_beyond_cutoff(self):
        lay = RegisterLayout.bosons(1, 2)
        with pytest.raises(ValueError):
            fock_state(lay, (3,))

    def test_ghz_needs_three_qubits(self):
        with pytest.raises(LayoutMismatchError):
            ghz_state(RegisterLayout.qubits(2))
        with pytest.raises(LayoutMismatchError):
            ghz_state(RegisterLayout.bosons(3, 1))


class TestStateValidation:
    def test_norm_enforced(self):
        lay = RegisterLayout.qubits(1)
        with pytest.raises(ValueError):
            QuantumState(lay, np.array([1.0, 1.0]))

    def test_density_checks(self):
        lay = RegisterLayout.qubits(1)
        with pytest.raises(ValueError):
            QuantumState(lay, np.array([[0.5, 0.3], [0.2, 0.5]]))  # not herm
        with pytest.raises(ValueError):
            QuantumState(lay, np.array([[0.9, 0.0], [0.0, 0.3]]))  # trace
        with pytest.raises(ValueError):
            QuantumState(lay, np.array([[1.5, 0.0], [0.0, -0.5]]))  # negative

    def test_validate_false_skips(self):
        lay = RegisterLayout.qubits(1)
        state = QuantumState(lay, np.array([2.0, 0.0]), validate=False)
        assert state.norm == pytest.approx(2.0)


class TestTruncationConsistency:
    def test_moments_stable_under_cutoff_growth(self):
        # support bounded at Fock level 2, cutoffs 4 and 6
        rng = np.random.default_rng(41)
        amps = rng.normal(size=(3, 3, 3)) + 1j * rng.normal(size=(3, 3, 3))
        amps /= np.linalg.norm(amps)

        def embed(cutoff):
            lay = RegisterLayout.bosons(3, cutoff)
            vec = np.zeros(lay.total_dim, dtype=complex)
            d = cutoff + 1
            for (i, j, k), val in np.ndenumerate(amps):
                vec[(i * d + j) * d + k] = val
            return QuantumState(lay, vec)

        small, large = embed(4), embed(6)
        for state in (small, large):
            top = 0.0
            d = state.layout.dims[0]
            occ = state.data.reshape(d, d, d)
            for lvl in (d - 2, d - 1):
                top += np.abs(occ[lvl]).sum() + np.abs(occ[:, lvl]).sum() \
                    + np.abs(occ[:, :, lvl]).sum()
            assert top < 1e-8
        cov_small = covariance_matrix(small)
        cov_large = covariance_matrix(large)
        assert np.abs(cov_small - cov_large).max() < 1e-7
        triple = ((0, ANNIHILATE), (1, ANNIHILATE), (2, ANNIHILATE))
        assert abs(expect_monomial(small, triple)
                   - expect_monomial(large, triple)) < 1e-7


class TestEntropy:
    def test_pure_state(self):
        assert von_neumann_entropy(ghz_state(THREE_QUBITS)) == 0.0

    def test_maximally_mixed_qubit(self):
        reduced = partial_trace(ghz_state(THREE_QUBITS), {0})
        assert von_neumann_entropy(reduced) == pytest.approx(np.log(2),
                                                             abs=1e-12)
