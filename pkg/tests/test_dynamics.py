"""Integrator tests against closed-form and eigendecomposition oracles."""

import numpy as np
import pytest

from triphoton.dynamics import (
    Constant,
    Cosine,
    HamiltonianSpec,
    Motional,
    TwoTone,
    cutoff_sweep,
    evolve,
    evolve_static_expm,
    split_drive_branches,
)
from triphoton.hilbert import QuantumState, RegisterLayout, fock_state
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


def triple_spdc_terms(g0=1.0):
    """-g0 (a1+ a2+ a3+ + a1 a2 a3), the reduced down-conversion form."""
    up = mono([(0, CREATE), (1, CREATE), (2, CREATE)], -g0)
    return [up, up.conjugate()]


def spec_of(terms):
    return HamiltonianSpec(static_terms=list(terms))


class TestEigenstatePhase:
    def test_number_eigenstate(self):
        omega = 2.31
        lay = RegisterLayout.bosons(1, 5)
        h = spec_of([mono([(0, CREATE), (0, ANNIHILATE)], omega)])
        psi0 = fock_state(lay, (1,))
        grid = np.linspace(0.0, 3.0, 16)
        traj = evolve(h, psi0, grid,
                      observables={"n": mono([(0, NUMBER)])})
        for i, t in enumerate(grid):
            expected = np.exp(-1j * omega * t) * psi0.data
            assert np.abs(traj.states[i].data - expected).max() < 1e-8
        assert np.abs(traj.observables["n"] - 1.0).max() < 2e-8


class TestTripleDownconversion:
    def test_short_time_population(self):
        lay = RegisterLayout.bosons(3, 4)
        h = spec_of(triple_spdc_terms())
        psi0 = fock_state(lay, (0, 0, 0))
        grid = np.array([0.0, 0.02, 0.05, 0.1])
        traj = evolve(h, psi0, grid)
        idx_111 = np.flatnonzero(fock_state(lay, (1, 1, 1)).data.real)[0]
        for i, gt in enumerate(grid[1:], start=1):
            pop = abs(traj.states[i].data[idx_111]) ** 2
            assert pop == pytest.approx(gt**2, abs=3 * gt**4)

    def test_agreement_with_expm_oracle(self):
        lay = RegisterLayout.bosons(3, 8)
        terms = triple_spdc_terms()
        psi0 = fock_state(lay, (0, 0, 0))
        grid = np.linspace(0.0, 0.3, 7)
        traj = evolve(spec_of(terms), psi0, grid)
        for i, t in enumerate(grid):
            oracle = evolve_static_expm(terms, psi0, t)
            assert np.linalg.norm(traj.states[i].data - oracle.data) < 1e-7


class TestJaynesCummings:
    def test_vacuum_rabi_swap_period(self):
        # resonant exchange coupling; |g,1> <-> |e,0> swaps with period
        # pi/g (closed-form oscillation P_e = sin^2(g t))
        g = 0.37
        omega = 1.9
        lay = RegisterLayout((("boson", 4), ("qubit", 2)))
        terms = [
            mono([(0, CREATE), (0, ANNIHILATE)], omega),
            mono([(1, PAULI_PLUS), (1, PAULI_MINUS)], omega),
            mono([(1, PAULI_PLUS), (0, ANNIHILATE)], g),
            mono([(1, PAULI_MINUS), (0, CREATE)], g),
        ]
        psi0 = fock_state(lay, (1, 0))  # one photon, qubit ground
        grid = np.linspace(0.0, np.pi / g, 41)
        traj = evolve(spec_of(terms), psi0, grid, observables={
            "pe": mono([(1, PAULI_PLUS), (1, PAULI_MINUS)]),
            "n": mono([(0, NUMBER)]),
        })
        pe = traj.observables["pe"].real
        assert np.abs(pe - np.sin(g * grid) ** 2).max() < 1e-7
        # after a full period the excitation is back on the field
        assert pe[-1] == pytest.approx(0.0, abs=1e-7)
        assert traj.observables["n"][-1].real == pytest.approx(1.0, abs=1e-7)


class TestExpmPath:
    def test_time_zero_is_identity(self):
        lay = RegisterLayout.bosons(2, 3)
        rng = np.random.default_rng(2)
        vec = rng.normal(size=16) + 1j * rng.normal(size=16)
        vec /= np.linalg.norm(vec)
        psi0 = QuantumState(lay, vec)
        out = evolve_static_expm([mono([(0, NUMBER)], 1.3)], psi0, 0.0)
        assert np.allclose(out.data, psi0.data, atol=1e-14)

    def test_unitarity(self):
        lay = RegisterLayout.bosons(3, 5)
        out = evolve_static_expm(triple_spdc_terms(), fock_state(lay, (0, 0, 0)),
                                 7.3)
        assert abs(np.linalg.norm(out.data) - 1.0) < 1e-12

    def test_rejects_driven_spec(self):
        spec = HamiltonianSpec(
            static_terms=[],
            driven_terms=[(mono([(0, NUMBER)]), Cosine(1.0, 2.0))])
        lay = RegisterLayout.bosons(1, 2)
        with pytest.raises(ValueError):
            evolve_static_expm(spec, fock_state(lay, (0,)), 1.0)

    def test_rejects_oversized_register(self):
        lay = RegisterLayout.bosons(1, 8191)  # 8192 > dense limit
        psi0 = fock_state(lay, (0,))
        with pytest.raises(ValueError, match="too large"):
            evolve_static_expm([mono([(0, NUMBER)], 1.0)], psi0, 1.0)


class TestHygiene:
    def test_norm_drift_and_energy_conservation(self):
        lay = RegisterLayout.bosons(3, 8)
        terms = triple_spdc_terms()
        psi0 = fock_state(lay, (0, 0, 0))
        grid = np.linspace(0.0, 0.3, 31)
        traj = evolve(spec_of(terms), psi0, grid, observables={"h": terms})
        assert np.abs(traj.observables["norm"] - 1.0).max() < 1e-8
        energy = traj.observables["h"].real
        scale = np.abs(energy).max()
        assert np.abs(energy - energy[0]).max() < 1e-8 * max(1.0, scale)

    def test_tighter_control_reduces_drift(self):
        lay = RegisterLayout.bosons(3, 6)
        terms = triple_spdc_terms()
        psi0 = fock_state(lay, (0, 0, 0))
        grid = np.linspace(0.0, 0.3, 4)
        loose = evolve(spec_of(terms), psi0, grid, rtol=1e-6, atol=1e-8)
        tight = evolve(spec_of(terms), psi0, grid, rtol=1e-11, atol=1e-13)
        drift_loose = np.abs(loose.observables["norm"] - 1.0).max()
        drift_tight = np.abs(tight.observables["norm"] - 1.0).max()
        assert drift_tight < drift_loose

    def test_time_reversal(self):
        lay = RegisterLayout.bosons(3, 6)
        terms = triple_spdc_terms()
        psi0 = fock_state(lay, (0, 0, 0))
        grid = np.linspace(0.0, 0.25, 6)
        forward = evolve(spec_of(terms), psi0, grid)
        reversed_terms = [t.scaled(-1.0) for t in terms]
        back = evolve(spec_of(reversed_terms), forward.states[-1], grid)
        overlap = abs(np.vdot(psi0.data, back.states[-1].data))
        assert 1.0 - overlap < 1e-6


class TestDrivenEvolution:
    def test_driven_matches_tight_reference(self):
        # cos-driven displacement of one mode, checked against the same
        # integrator at much tighter tolerance
        lay = RegisterLayout.bosons(1, 10)
        omega, amp, wd = 1.0, 0.2, 3.0
        static = [mono([(0, CREATE), (0, ANNIHILATE)], omega)]
        drive_up = mono([(0, CREATE)], amp)
        driven = [(drive_up, Cosine(1.0, wd)),
                  (drive_up.conjugate(), Cosine(1.0, wd))]
        h = HamiltonianSpec(static, driven)
        psi0 = fock_state(lay, (0,))
        grid = np.linspace(0.0, 15.0, 11)
        obs = {"n": mono([(0, NUMBER)])}
        a = evolve(h, psi0, grid, observables=obs)
        b = evolve(h, psi0, grid, rtol=1e-12, atol=1e-13, observables=obs)
        assert np.abs(a.observables["n"] - b.observables["n"]).max() < 1e-6

    def test_hermiticity_validation(self):
        h = HamiltonianSpec(static_terms=[mono([(0, CREATE)], 1.0)])
        lay = RegisterLayout.bosons(1, 3)
        with pytest.raises(ValueError):
            evolve(h, fock_state(lay, (0,)), [0.0, 1.0])

    def test_grid_validation(self):
        lay = RegisterLayout.bosons(1, 3)
        h = spec_of([mono([(0, NUMBER)], 1.0)])
        with pytest.raises(ValueError):
            evolve(h, fock_state(lay, (0,)), [0.0, 0.0, 1.0])


class TestEnvelopes:
    def test_motional_is_sampled_mode_function(self):
        env = Motional(v=2.0, k=1.5, x0=0.3)
        ts = np.linspace(0, 4, 9)
        assert np.allclose(env(ts), np.cos(1.5 * (0.3 + 2.0 * ts)))

    def test_two_tone_sum(self):
        env = TwoTone(0.3, 1.0, 0.5, 2.0, phase2=0.7)
        ts = np.linspace(0, 4, 9)
        assert np.allclose(env(ts),
                           0.3 * np.cos(ts) + 0.5 * np.cos(2 * ts + 0.7))

    def test_constant(self):
        assert np.allclose(Constant(2.5)(np.arange(4.0)), 2.5)


class TestSplitDriveBranches:
    def test_pairs_collapse_to_cosine(self):
        plus = mono([(0, CREATE), (1, CREATE)], 0.4, drive=+1)
        minus = mono([(0, CREATE), (1, CREATE)], 0.4, drive=-1)
        static = mono([(0, NUMBER)], 1.0)
        spec = split_drive_branches([plus, minus, static], 2.2)
        assert spec.static_terms == [static]
        assert len(spec.driven_terms) == 1
        term, env = spec.driven_terms[0]
        assert term.drive_sign == 0
        assert term.coefficient == 0.4
        assert env == Cosine(1.0, 2.2)

    def test_unpaired_branches_rejected(self):
        lone = mono([(0, CREATE)], 1.0, drive=+1)
        with pytest.raises(ValueError):
            split_drive_branches([lone], 1.0)


class TestCutoffSweep:
    @staticmethod
    def run_triple(cutoff, horizon=0.25):
        lay = RegisterLayout.bosons(3, cutoff)
        grid = np.linspace(0.0, horizon, 6)
        traj = evolve(spec_of(triple_spdc_terms()), fock_state(lay, (0, 0, 0)),
                      grid, observables={
                          "n1": mono([(0, NUMBER)]),
                          "triple": mono([(0, ANNIHILATE), (1, ANNIHILATE),
                                          (2, ANNIHILATE)])})
        return {k: v for k, v in traj.observables.items() if k != "norm"}

    def test_changes_decrease_with_cutoff(self):
        report = cutoff_sweep(self.run_triple, [6, 8, 10])
        for name, deltas in report.deltas.items():
            assert deltas[1] < deltas[0]

    def test_linear_hamiltonian_converges_immediately(self):
        def run(cutoff):
            lay = RegisterLayout.bosons(1, cutoff)
            grid = np.linspace(0.0, 1.0, 5)
            traj = evolve(spec_of([mono([(0, NUMBER)], 1.7)]),
                          fock_state(lay, (0,)), grid,
                          observables={"n": mono([(0, NUMBER)])})
            return {"n": traj.observables["n"]}

        report = cutoff_sweep(run, [2, 4, 6], threshold=1e-6)
        assert report.converged
        assert max(report.final_change.values()) < 1e-10

    def test_overdriven_scenario_flagged(self):
        report = cutoff_sweep(
            lambda c: self.run_triple(c, horizon=1.5), [4, 6],
            threshold=1e-6)
        assert not report.converged

    def test_requires_two_cutoffs(self):
        with pytest.raises(ValueError):
            cutoff_sweep(self.run_triple, [8])
