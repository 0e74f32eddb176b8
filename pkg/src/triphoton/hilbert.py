"""Truncated hybrid-register state and operator algebra.

A register is an ordered list of subsystems, each a Fock-truncated
bosonic mode or a qubit. Basis ordering is big-endian: subsystem 0 is
the slowest-varying index, so |n0 n1 n2> sits at n0*d1*d2 + n1*d2 + n2.
Every module that touches composite indices relies on this convention.

Qubit basis: index 0 is the ground state, index 1 the excited state;
pauli_plus = |1><0| raises, sigma_z = diag(-1, +1).

Quadratures are x = (a + a^dag)/sqrt(2), p = i(a^dag - a)/sqrt(2), so
the vacuum variance is 1/2. Covariance matrices are ordered as
(x_1 .. x_m, p_1 .. p_m).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp

from .errors import LayoutMismatchError
from .rwa import (
    ANNIHILATE,
    CREATE,
    PAULI_MINUS,
    PAULI_PLUS,
    PAULI_Z,
    BOSON_KINDS,
    LadderMonomial,
)

BOSON = "boson"
QUBIT = "qubit"

DENSE_LIMIT = 4096  # largest total dimension held as a dense operator

_NORM_TOL = 1e-9
_HERM_TOL = 1e-12
_EIG_TOL = 1e-9


@dataclass(frozen=True)
class RegisterLayout:
    """Ordered subsystem list; each entry is (kind, dimension)."""

    subsystems: tuple[tuple[str, int], ...]

    def __post_init__(self):
        object.__setattr__(
            self, "subsystems",
            tuple((str(k), int(d)) for k, d in self.subsystems))
        for kind, dim in self.subsystems:
            if kind not in (BOSON, QUBIT):
                raise ValueError(f"unknown subsystem kind {kind!r}")
            if kind == QUBIT and dim != 2:
                raise ValueError("qubits have dimension 2")
            if dim < 2:
                raise ValueError("subsystem dimensions must be >= 2")

    @classmethod
    def bosons(cls, n: int, cutoff: int) -> "RegisterLayout":
        """n modes, each truncated at Fock level ``cutoff``."""
        return cls(((BOSON, cutoff + 1),) * n)

    @classmethod
    def qubits(cls, n: int) -> "RegisterLayout":
        return cls(((QUBIT, 2),) * n)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(d for _, d in self.subsystems)

    @property
    def total_dim(self) -> int:
        return int(np.prod(self.dims))

    @property
    def n_subsystems(self) -> int:
        return len(self.subsystems)

    def kind(self, index: int) -> str:
        return self.subsystems[index][0]

    def boson_indices(self) -> list[int]:
        return [i for i, (k, _) in enumerate(self.subsystems) if k == BOSON]

    def qubit_indices(self) -> list[int]:
        return [i for i, (k, _) in enumerate(self.subsystems) if k == QUBIT]

    def check_index(self, index: int):
        if not 0 <= index < len(self.subsystems):
            raise LayoutMismatchError(
                f"subsystem {index} outside register of size "
                f"{len(self.subsystems)}")


def _single_matrix(kind: str, dim: int) -> np.ndarray:
    if kind in BOSON_KINDS:
        n = np.arange(1, dim)
        if kind == CREATE:
            return np.diag(np.sqrt(n), -1).astype(complex)
        if kind == ANNIHILATE:
            return np.diag(np.sqrt(n), +1).astype(complex)
        return np.diag(np.arange(dim)).astype(complex)
    if kind == PAULI_PLUS:
        return np.array([[0, 0], [1, 0]], dtype=complex)
    if kind == PAULI_MINUS:
        return np.array([[0, 1], [0, 0]], dtype=complex)
    if kind == PAULI_Z:
        return np.array([[-1, 0], [0, 1]], dtype=complex)
    raise ValueError(f"unknown kind {kind!r}")


def _factor_matrix(layout: RegisterLayout, index: int, kind: str) -> np.ndarray:
    layout.check_index(index)
    skind, dim = layout.subsystems[index]
    if kind in BOSON_KINDS and skind != BOSON:
        raise LayoutMismatchError(
            f"ladder factor {kind!r} on non-bosonic subsystem {index}")
    if kind in (PAULI_PLUS, PAULI_MINUS, PAULI_Z) and skind != QUBIT:
        raise LayoutMismatchError(
            f"Pauli factor {kind!r} on non-qubit subsystem {index}")
    return _single_matrix(kind, dim)


class QuantumState:
    """Pure state vector or density operator over a register.

    ``validate=False`` skips the normalization/positivity checks; it is
    meant for deliberately unnormalized constructions such as truncated
    perturbative expansions.
    """

    def __init__(self, layout: RegisterLayout, data: np.ndarray,
                 validate: bool = True):
        self.layout = layout
        data = np.asarray(data, dtype=complex)
        n = layout.total_dim
        if data.ndim == 1:
            if data.shape != (n,):
                raise LayoutMismatchError(
                    f"vector length {data.shape} does not match register "
                    f"dimension {n}")
        elif data.ndim == 2:
            if data.shape != (n, n):
                raise LayoutMismatchError(
                    f"density shape {data.shape} does not match register "
                    f"dimension {n}")
        else:
            raise ValueError("state data must be a vector or a square matrix")
        self.data = data
        if validate:
            self._validate()

    def _validate(self):
        if self.is_pure:
            norm = np.linalg.norm(self.data)
            if abs(norm - 1.0) > _NORM_TOL:
                raise ValueError(f"pure state norm {norm} is not 1")
        else:
            if not np.allclose(self.data, self.data.conj().T,
                               atol=_HERM_TOL):
                raise ValueError("density operator is not Hermitian")
            tr = np.trace(self.data).real
            if abs(tr - 1.0) > _NORM_TOL:
                raise ValueError(f"density trace {tr} is not 1")
            if np.linalg.eigvalsh(self.data).min() < -_EIG_TOL:
                raise ValueError("density operator has negative eigenvalues")

    @property
    def is_pure(self) -> bool:
        return self.data.ndim == 1

    @property
    def norm(self) -> float:
        if self.is_pure:
            return float(np.linalg.norm(self.data))
        return float(np.trace(self.data).real)

    def to_density(self) -> "QuantumState":
        if self.is_pure:
            rho = np.outer(self.data, self.data.conj())
            return QuantumState(self.layout, rho, validate=False)
        return self

    def purity(self) -> float:
        rho = self.to_density().data
        return float(np.trace(rho @ rho).real)


def _apply_factor_vec(psi: np.ndarray, dims: Sequence[int], index: int,
                      mat: np.ndarray) -> np.ndarray:
    """Apply a single-subsystem matrix to a state vector."""
    pre = int(np.prod(dims[:index])) if index else 1
    d = dims[index]
    post = int(np.prod(dims[index + 1:])) if index + 1 < len(dims) else 1
    block = psi.reshape(pre, d, post)
    return np.einsum("ab,xbz->xaz", mat, block).reshape(-1)


def _apply_monomial_vec(psi: np.ndarray, layout: RegisterLayout,
                        term_factors, coefficient=1.0) -> np.ndarray:
    out = psi
    for index, kind in reversed(tuple(term_factors)):
        out = _apply_factor_vec(out, layout.dims, index,
                                _factor_matrix(layout, index, kind))
    if coefficient != 1.0:
        out = coefficient * out
    return out


def _apply_monomial_left(rho: np.ndarray, layout: RegisterLayout,
                         term_factors, coefficient=1.0) -> np.ndarray:
    """Left-multiply a density matrix by the monomial's operator."""
    n = rho.shape[0]
    out = rho
    dims = layout.dims
    for index, kind in reversed(tuple(term_factors)):
        mat = _factor_matrix(layout, index, kind)
        pre = int(np.prod(dims[:index])) if index else 1
        d = dims[index]
        post = n // (pre * d)
        block = out.reshape(pre, d, post, n)
        out = np.einsum("ab,xbzc->xazc", mat, block).reshape(n, n)
    if coefficient != 1.0:
        out = coefficient * out
    return out


def expect_monomial(state: QuantumState, factors,
                    coefficient: complex = 1.0) -> complex:
    """<product of factors> on the state (no normalization applied)."""
    if state.is_pure:
        vec = _apply_monomial_vec(state.data, state.layout, factors)
        return coefficient * complex(np.vdot(state.data, vec))
    prod = _apply_monomial_left(state.data, state.layout, factors)
    return coefficient * complex(np.trace(prod))


@dataclass
class OperatorMatrix:
    """Explicit matrix of an operator on a register; dense below
    DENSE_LIMIT, sparse CSR above."""

    layout: RegisterLayout
    matrix: np.ndarray | sp.spmatrix

    @property
    def is_sparse(self) -> bool:
        return sp.issparse(self.matrix)

    def dagger(self) -> "OperatorMatrix":
        if self.is_sparse:
            return OperatorMatrix(self.layout, self.matrix.conj().T.tocsr())
        return OperatorMatrix(self.layout, self.matrix.conj().T)


def build_operator(term: LadderMonomial, layout: RegisterLayout,
                   sparse: bool | None = None) -> OperatorMatrix:
    """Matrix of coefficient times the Kronecker-extended factor product.

    Same-subsystem factors multiply in the order written; factors on
    distinct subsystems commute. An empty factor tuple is the identity.
    """
    if sparse is None:
        sparse = layout.total_dim > DENSE_LIMIT
    locals_: dict[int, np.ndarray] = {}
    for index, kind in term.factors:
        mat = _factor_matrix(layout, index, kind)
        locals_[index] = locals_[index] @ mat if index in locals_ else mat
    blocks = []
    for i, (_, dim) in enumerate(layout.subsystems):
        blocks.append(locals_.get(i, np.eye(dim, dtype=complex)))
    if sparse:
        out = sp.csr_matrix(blocks[0])
        for b in blocks[1:]:
            out = sp.kron(out, sp.csr_matrix(b), format="csr")
        return OperatorMatrix(layout, term.coefficient * out)
    out = blocks[0]
    for b in blocks[1:]:
        out = np.kron(out, b)
    return OperatorMatrix(layout, term.coefficient * out)


def terms_to_matrix(terms: Iterable[LadderMonomial], layout: RegisterLayout,
                    sparse: bool | None = None):
    """Sum of monomial matrices; identity terms contribute a scalar."""
    if sparse is None:
        sparse = layout.total_dim > DENSE_LIMIT
    n = layout.total_dim
    total = sp.csr_matrix((n, n), dtype=complex) if sparse else \
        np.zeros((n, n), dtype=complex)
    for term in terms:
        if term.factors == ():
            eye = sp.identity(n, dtype=complex, format="csr") if sparse \
                else np.eye(n, dtype=complex)
            total = total + term.coefficient * eye
        else:
            total = total + build_operator(term, layout, sparse=sparse).matrix
    return total


def expectation(state: QuantumState, op: OperatorMatrix) -> complex:
    """<psi|O|psi> or Tr(rho O); layouts must match."""
    if op.layout != state.layout:
        raise LayoutMismatchError("operator and state layouts differ")
    if state.is_pure:
        return complex(np.vdot(state.data, op.matrix @ state.data))
    prod = op.matrix @ state.data if op.is_sparse else state.data @ op.matrix
    return complex(np.trace(prod))


def partial_trace(state: QuantumState, keep: Iterable[int]) -> QuantumState:
    """Reduced density operator over the kept subsystems (in ascending
    register order)."""
    keep = sorted(set(keep))
    if not keep:
        raise LayoutMismatchError("keep set must be nonempty")
    for i in keep:
        state.layout.check_index(i)
    dims = state.layout.dims
    n_sub = len(dims)
    traced = [i for i in range(n_sub) if i not in keep]
    keep_dim = int(np.prod([dims[i] for i in keep]))
    traced_dim = int(np.prod([dims[i] for i in traced])) if traced else 1
    new_layout = RegisterLayout(
        tuple(state.layout.subsystems[i] for i in keep))
    if state.is_pure:
        block = state.data.reshape(dims).transpose(keep + traced)
        m = block.reshape(keep_dim, traced_dim)
        rho = m @ m.conj().T
    else:
        tensor = state.data.reshape(dims + dims)
        perm = keep + traced + [n_sub + i for i in keep] + \
            [n_sub + i for i in traced]
        block = tensor.transpose(perm).reshape(
            keep_dim, traced_dim, keep_dim, traced_dim)
        rho = np.einsum("atbt->ab", block)
    return QuantumState(new_layout, rho, validate=False)


def _ladder_pair_moments(state: QuantumState, modes: Sequence[int]):
    """All first and second ladder moments over the listed modes.

    Returns (single, pair) with single[i] = <a_i> and
    pair[(i, j, si, sj)] = <a_i^{si} a_j^{sj}> where s = 0 means
    annihilate and s = 1 means create.
    """
    m = len(modes)
    single = np.zeros((m, 2), dtype=complex)
    pair = np.zeros((m, m, 2, 2), dtype=complex)
    kinds = (ANNIHILATE, CREATE)
    if state.is_pure:
        psi = state.data
        branch = np.empty((m, 2, psi.size), dtype=complex)
        for a, mode in enumerate(modes):
            for s, kind in enumerate(kinds):
                branch[a, s] = _apply_monomial_vec(psi, state.layout,
                                                   ((mode, kind),))
        for a in range(m):
            for s in range(2):
                single[a, s] = np.vdot(psi, branch[a, s])
        for a in range(m):
            for b in range(m):
                for sa in range(2):
                    for sb in range(2):
                        # <a^sa a^sb> = ((a^sa)^dag psi)^dag (a^sb psi)
                        pair[a, b, sa, sb] = np.vdot(branch[a, 1 - sa],
                                                     branch[b, sb])
    else:
        for a, mode_a in enumerate(modes):
            for sa, kind_a in enumerate(kinds):
                single[a, sa] = expect_monomial(state, ((mode_a, kind_a),))
                for b, mode_b in enumerate(modes):
                    for sb, kind_b in enumerate(kinds):
                        pair[a, b, sa, sb] = expect_monomial(
                            state, ((mode_a, kind_a), (mode_b, kind_b)))
    return single, pair


def covariance_matrix(state: QuantumState,
                      modes: Sequence[int] | None = None) -> np.ndarray:
    """Symmetrized quadrature covariance matrix over the listed bosonic
    modes, ordered (x_1..x_m, p_1..p_m):

        C[A, B] = <AB + BA>/2 - <A><B>

    Vacuum gives diag(1/2, ..., 1/2) in this convention.
    """
    layout = state.layout
    if modes is None:
        modes = layout.boson_indices()
    modes = list(modes)
    for i in modes:
        layout.check_index(i)
        if layout.kind(i) != BOSON:
            raise LayoutMismatchError(
                f"covariance requested on non-bosonic subsystem {i}")
    m = len(modes)
    single, pair = _ladder_pair_moments(state, modes)

    inv_sqrt2 = 1.0 / np.sqrt(2.0)
    mean = np.empty(2 * m)
    for a in range(m):
        av_a, av_ad = single[a, 0], single[a, 1]
        mean[a] = ((av_a + av_ad) * inv_sqrt2).real
        mean[m + a] = (1j * (av_ad - av_a) * inv_sqrt2).real

    cov = np.empty((2 * m, 2 * m))
    for a in range(m):
        for b in range(m):
            aa = pair[a, b, 0, 0]      # <a_a a_b>
            ac = pair[a, b, 0, 1]      # <a_a a_b^dag>
            ca = pair[a, b, 1, 0]      # <a_a^dag a_b>
            cc = pair[a, b, 1, 1]      # <a_a^dag a_b^dag>
            xx = 0.5 * (aa + ac + ca + cc)
            pp = -0.5 * (cc - ca - ac + aa)
            xp = 0.5j * (ac - aa + cc - ca)
            # symmetrize using the transposed pair moments
            aa_t = pair[b, a, 0, 0]
            ac_t = pair[b, a, 0, 1]
            ca_t = pair[b, a, 1, 0]
            cc_t = pair[b, a, 1, 1]
            xx_t = 0.5 * (aa_t + ac_t + ca_t + cc_t)
            pp_t = -0.5 * (cc_t - ca_t - ac_t + aa_t)
            # <p_b x_a> from the transposed pair moments
            px_t = 0.5j * (ca_t + cc_t - aa_t - ac_t)
            cov[a, b] = (0.5 * (xx + xx_t)).real - mean[a] * mean[b]
            cov[m + a, m + b] = (0.5 * (pp + pp_t)).real \
                - mean[m + a] * mean[m + b]
            cov[a, m + b] = (0.5 * (xp + px_t)).real \
                - mean[a] * mean[m + b]
    for a in range(m):
        for b in range(m):
            cov[m + b, a] = cov[a, m + b]
    return cov


def fock_state(layout: RegisterLayout,
               occupations: Sequence[int]) -> QuantumState:
    """Product basis state |n_0 n_1 ...>; qubit entries are 0 or 1."""
    dims = layout.dims
    if len(occupations) != len(dims):
        raise LayoutMismatchError("one occupation per subsystem required")
    index = 0
    for occ, dim in zip(occupations, dims):
        if not 0 <= occ < dim:
            raise ValueError(
                f"occupation {occ} exceeds subsystem cutoff {dim - 1}")
        index = index * dim + occ
    vec = np.zeros(layout.total_dim, dtype=complex)
    vec[index] = 1.0
    return QuantumState(layout, vec)


def _require_three_qubits(layout: RegisterLayout):
    if layout.subsystems != ((QUBIT, 2),) * 3:
        raise LayoutMismatchError("this state needs a register of 3 qubits")


def ghz_state(layout: RegisterLayout) -> QuantumState:
    """(|000> + |111>)/sqrt(2) on three qubits."""
    _require_three_qubits(layout)
    vec = np.zeros(8, dtype=complex)
    vec[0] = vec[7] = 1.0 / np.sqrt(2.0)
    return QuantumState(layout, vec)


def w_state(layout: RegisterLayout) -> QuantumState:
    """(|001> + |010> + |100>)/sqrt(3) on three qubits."""
    _require_three_qubits(layout)
    vec = np.zeros(8, dtype=complex)
    vec[1] = vec[2] = vec[4] = 1.0 / np.sqrt(3.0)
    return QuantumState(layout, vec)


def von_neumann_entropy(state: QuantumState) -> float:
    """Entropy in nats of the state (0 for any pure state)."""
    if state.is_pure:
        return 0.0
    eigs = np.linalg.eigvalsh(state.data)
    eigs = eigs[eigs > 1e-15]
    return float(-np.sum(eigs * np.log(eigs)))
