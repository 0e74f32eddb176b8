"""Time evolution under static and driven ladder-operator Hamiltonians.

Driven terms carry named real envelopes evaluated exactly at each step;
no pre-rotation into an interaction picture happens here. The adaptive
integrator is cross-checked by ``evolve_static_expm``, a dense
eigendecomposition path that serves as the independent oracle for static
Hamiltonians.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

import numpy as np
from scipy.integrate import solve_ivp

from .errors import IntegrationError
from .hilbert import (
    DENSE_LIMIT,
    OperatorMatrix,
    QuantumState,
    RegisterLayout,
    terms_to_matrix,
)
from .rwa import LadderMonomial, hermitian_closure_holds


@dataclass(frozen=True)
class Constant:
    value: float = 1.0

    def __call__(self, t):
        return self.value * np.ones_like(np.asarray(t, dtype=float))


@dataclass(frozen=True)
class Cosine:
    amplitude: float
    frequency: float
    phase: float = 0.0

    def __call__(self, t):
        return self.amplitude * np.cos(self.frequency * np.asarray(t) + self.phase)


@dataclass(frozen=True)
class TwoTone:
    amp1: float
    freq1: float
    amp2: float
    freq2: float
    phase1: float = 0.0
    phase2: float = 0.0

    def __call__(self, t):
        t = np.asarray(t)
        return self.amp1 * np.cos(self.freq1 * t + self.phase1) \
            + self.amp2 * np.cos(self.freq2 * t + self.phase2)


@dataclass(frozen=True)
class Motional:
    """Coupling sampled by a probe crossing the mode function:
    cos(k (x0 + v t))."""

    v: float
    k: float
    x0: float = 0.0

    def __call__(self, t):
        return np.cos(self.k * (self.x0 + self.v * np.asarray(t)))


Envelope = Constant | Cosine | TwoTone | Motional


@dataclass
class HamiltonianSpec:
    """Static terms plus (term, envelope) driven pairs.

    The static list and each equal-envelope group must be closed under
    Hermitian conjugation so H(t) stays Hermitian for every t (envelope
    values are real).
    """

    static_terms: list[LadderMonomial] = field(default_factory=list)
    driven_terms: list[tuple[LadderMonomial, Envelope]] = field(
        default_factory=list)

    def validate(self):
        if self.static_terms and not hermitian_closure_holds(self.static_terms):
            raise ValueError("static term list is not Hermitian")
        groups: dict[Envelope, list[LadderMonomial]] = {}
        for term, env in self.driven_terms:
            groups.setdefault(env, []).append(term)
        for env, terms in groups.items():
            if not hermitian_closure_holds(terms):
                raise ValueError(f"driven group {env} is not Hermitian")
        return self


def split_drive_branches(terms: Sequence[LadderMonomial],
                         drive_frequency: float,
                         phase: float = 0.0) -> HamiltonianSpec:
    """Convert a +/- drive-branch term list (as produced by the cavity
    expansion) into envelope form: undriven entries become static terms,
    each +1/-1 branch pair becomes one cos(w_d t) driven term."""
    static = [t for t in terms if t.drive_sign == 0]
    plus = [t for t in terms if t.drive_sign == +1]
    minus_keys = {t.operator_key()[0] for t in terms if t.drive_sign == -1}
    if {t.operator_key()[0] for t in plus} != minus_keys:
        raise ValueError("unpaired drive branches in term list")
    env = Cosine(1.0, drive_frequency, phase)
    driven = [(LadderMonomial(t.factors, t.coefficient, 0), env)
              for t in plus]
    return HamiltonianSpec(static, driven)


@dataclass
class Trajectory:
    """Time grid, states and recorded observable series."""

    times: np.ndarray
    states: list[QuantumState]
    observables: dict[str, np.ndarray]


SPARSE_EVOLVE_LIMIT = 512  # above this, evolution matrices go sparse


def _as_matrix(op, layout: RegisterLayout, sparse: bool):
    if isinstance(op, OperatorMatrix):
        return op.matrix
    if isinstance(op, LadderMonomial):
        return terms_to_matrix([op], layout, sparse=sparse)
    if isinstance(op, (list, tuple)):
        return terms_to_matrix(op, layout, sparse=sparse)
    return op  # already a matrix


def _record(observables, layout, psi_columns, sparse):
    out = {}
    for name, op in observables.items():
        mat = _as_matrix(op, layout, sparse)
        vals = np.array([np.vdot(col, mat @ col) for col in psi_columns.T])
        out[name] = vals
    out["norm"] = np.array([np.linalg.norm(col) for col in psi_columns.T])
    return out


def evolve(h: HamiltonianSpec,
           psi0: QuantumState,
           t_grid: Sequence[float],
           rtol: float = 1e-9,
           atol: float = 1e-10,
           observables: Mapping[str, object] | None = None,
           max_step: float = np.inf) -> Trajectory:
    """Integrate i d psi/dt = H(t) psi with an adaptive embedded 4(5)
    Runge-Kutta pair, sampling states at the grid points.

    The norm is never renormalized; its drift is recorded as the
    ``norm`` observable and serves as an accuracy diagnostic.
    """
    if not psi0.is_pure:
        raise ValueError("evolve propagates pure states")
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid.ndim != 1 or len(t_grid) < 1 or np.any(np.diff(t_grid) <= 0):
        raise ValueError("t_grid must be strictly increasing")
    h.validate()
    layout = psi0.layout
    sparse = layout.total_dim > SPARSE_EVOLVE_LIMIT
    h_static = terms_to_matrix(h.static_terms, layout, sparse=sparse)
    groups: dict[Envelope, list[LadderMonomial]] = {}
    for term, env in h.driven_terms:
        groups.setdefault(env, []).append(term)
    h_driven = [(env, terms_to_matrix(terms, layout, sparse=sparse))
                for env, terms in groups.items()]

    def rhs(t, y):
        hy = h_static @ y
        for env, mat in h_driven:
            hy = hy + float(env(t)) * (mat @ y)
        return -1j * hy

    t0 = float(t_grid[0])
    sol = solve_ivp(rhs, (t0, float(t_grid[-1])), psi0.data, method="RK45",
                    t_eval=t_grid, rtol=rtol, atol=atol, max_step=max_step,
                    first_step=None)
    if not sol.success:
        failed_at = float(sol.t[-1]) if len(sol.t) else t0
        raise IntegrationError(
            f"integration stalled at t = {failed_at:.6g}: {sol.message}",
            time=failed_at)
    states = [QuantumState(layout, sol.y[:, i], validate=False)
              for i in range(sol.y.shape[1])]
    recorded = _record(observables or {}, layout, sol.y, sparse)
    return Trajectory(times=t_grid, states=states, observables=recorded)


def evolve_static_expm(h_static: Sequence[LadderMonomial] | HamiltonianSpec,
                       psi0: QuantumState,
                       t: float) -> QuantumState:
    """psi(t) = exp(-i H t) psi0 by dense eigendecomposition.

    Static Hamiltonians only; this is the oracle the adaptive integrator
    is checked against.
    """
    if isinstance(h_static, HamiltonianSpec):
        if h_static.driven_terms:
            raise ValueError("expm path takes static Hamiltonians only")
        terms = h_static.static_terms
    else:
        terms = list(h_static)
    layout = psi0.layout
    if layout.total_dim > DENSE_LIMIT:
        raise ValueError(
            f"dimension {layout.total_dim} too large for the dense path")
    if not psi0.is_pure:
        raise ValueError("expm path propagates pure states")
    mat = terms_to_matrix(terms, layout, sparse=False)
    if not np.allclose(mat, mat.conj().T, atol=1e-12):
        raise ValueError("static Hamiltonian is not Hermitian")
    w, v = np.linalg.eigh(mat)
    psi = v @ (np.exp(-1j * w * t) * (v.conj().T @ psi0.data))
    return QuantumState(layout, psi, validate=False)


@dataclass
class ConvergenceReport:
    """Per-observable max absolute change between successive cutoffs."""

    cutoffs: list[int]
    deltas: dict[str, list[float]]
    threshold: float

    @property
    def final_change(self) -> dict[str, float]:
        return {name: d[-1] for name, d in self.deltas.items()}

    @property
    def converged(self) -> bool:
        return all(d[-1] < self.threshold for d in self.deltas.values())


def cutoff_sweep(run: Callable[[int], Mapping[str, np.ndarray]],
                 cutoffs: Sequence[int],
                 threshold: float = 1e-6) -> ConvergenceReport:
    """Run a scenario at each cutoff and report observable drift.

    ``run(cutoff)`` must return named observable arrays on a common time
    grid. The report flags non-convergence when the change between the
    two largest cutoffs still exceeds the threshold.
    """
    cutoffs = list(cutoffs)
    if len(cutoffs) < 2:
        raise ValueError("need at least two cutoffs")
    if sorted(cutoffs) != cutoffs:
        raise ValueError("cutoffs must be increasing")
    results = [run(c) for c in cutoffs]
    names = list(results[0].keys())
    deltas: dict[str, list[float]] = {n: [] for n in names}
    for prev, curr in zip(results, results[1:]):
        for n in names:
            deltas[n].append(float(np.max(np.abs(
                np.asarray(curr[n]) - np.asarray(prev[n])))))
    return ConvergenceReport(cutoffs=cutoffs, deltas=deltas,
                             threshold=threshold)
