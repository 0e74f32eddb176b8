"""Entanglement witnesses for three-mode and three-qubit registers.

Two families are implemented. The covariance-based family (the van
Loock-Furusawa combination S) sees entanglement written into second
quadrature moments. The moment-based family (pairwise inseparability
I_alpha, the genuine witnesses built from |<a1 a2 a3>| and the qubit
analog) sees entanglement written into third and fourth moments, which
covariances miss entirely. A positive value always means "detected";
non-positive values are inconclusive.

The partial-transpose negativity is included as the independent
necessary-condition oracle for cross-checks: a sound witness may only
fire on states with nonzero negativity across some bipartition.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .errors import LayoutMismatchError
from .hilbert import (
    BOSON,
    QUBIT,
    QuantumState,
    RegisterLayout,
    covariance_matrix,
    expect_monomial,
    fock_state,
)
from .rwa import ANNIHILATE, CREATE, PAULI_MINUS, PAULI_PLUS


@dataclass(frozen=True)
class VlfParams:
    """Free real weights of the covariance witness."""

    g: tuple[float, float, float]
    h: tuple[float, float, float]

    def __post_init__(self):
        if len(self.g) != 3 or len(self.h) != 3:
            raise ValueError("g and h are 3-vectors")
        if not (np.all(np.isfinite(self.g)) and np.all(np.isfinite(self.h))):
            raise ValueError("witness parameters must be finite")


@dataclass
class WitnessReport:
    name: str
    value: float
    detects: bool
    components: dict
    parameters: VlfParams | None = None

    def argmax_bipartition(self) -> int | None:
        """1-based index of the singled subsystem attaining the largest
        bound term, where the formula has per-bipartition terms."""
        terms = [(k, v) for k, v in self.components.items()
                 if k.startswith("term_")]
        if not terms:
            return None
        key, _ = max(terms, key=lambda kv: kv[1])
        return int(key.split("_")[1])

    def to_dict(self) -> dict:
        def clean(value):
            if isinstance(value, complex):
                return [value.real, value.imag]
            if isinstance(value, np.ndarray):
                return value.tolist()
            return value

        doc = {
            "name": self.name,
            "value": self.value,
            "detects": self.detects,
            "components": {k: clean(v) for k, v in self.components.items()},
        }
        if self.parameters is not None:
            doc["parameters"] = {"g": list(self.parameters.g),
                                 "h": list(self.parameters.h)}
        bipartition = self.argmax_bipartition()
        if bipartition is not None:
            doc["argmax_bipartition"] = bipartition
        return doc


def _report(name, value, components, parameters=None) -> WitnessReport:
    value = float(value)
    return WitnessReport(name=name, value=value, detects=value > 0.0,
                         components=components, parameters=parameters)


def _three_modes(state: QuantumState, modes) -> list[int]:
    layout = state.layout
    modes = list(modes) if modes is not None else layout.boson_indices()
    if len(modes) != 3:
        raise LayoutMismatchError("witness needs exactly three bosonic modes")
    for i in modes:
        layout.check_index(i)
        if layout.kind(i) != BOSON:
            raise LayoutMismatchError(f"subsystem {i} is not bosonic")
    return modes


def _three_qubits(state: QuantumState, qubits) -> list[int]:
    layout = state.layout
    qubits = list(qubits) if qubits is not None else layout.qubit_indices()
    if len(qubits) != 3:
        raise LayoutMismatchError("witness needs exactly three qubits")
    for i in qubits:
        layout.check_index(i)
        if layout.kind(i) != QUBIT:
            raise LayoutMismatchError(f"subsystem {i} is not a qubit")
    return qubits


def vlf_value(cov: np.ndarray, g, h) -> float:
    """Covariance witness from a precomputed 6x6 (x..., p...) matrix:

        S = min over singled mode i of |h_i g_i| + |h_j g_j + h_k g_k|
            - sum_ij g_i g_j C_x[i,j] - sum_ij h_i h_j C_p[i,j]
    """
    g = np.asarray(g, dtype=float)
    h = np.asarray(h, dtype=float)
    cx = cov[:3, :3]
    cp = cov[3:, 3:]
    bound = min(
        abs(h[i] * g[i]) + abs(h[j] * g[j] + h[k] * g[k])
        for i, j, k in ((0, 1, 2), (1, 0, 2), (2, 0, 1))
    )
    return float(bound - g @ cx @ g - h @ cp @ h)


def vlf_witness(state: QuantumState, params: VlfParams,
                modes=None) -> WitnessReport:
    """Covariance (Gaussian) genuine-entanglement witness at fixed
    weights; positive S certifies genuine tripartite entanglement."""
    modes = _three_modes(state, modes)
    cov = covariance_matrix(state, modes)
    value = vlf_value(cov, params.g, params.h)
    return _report("vlf_s", value,
                   {"cov_x": cov[:3, :3], "cov_p": cov[3:, 3:]},
                   parameters=params)


def optimize_vlf(state: QuantumState, restarts: int = 20, seed: int = 0,
                 modes=None, max_iter: int = 300) -> WitnessReport:
    """Best covariance witness over the free weights.

    Simplex (Nelder-Mead) local searches from ``restarts`` random points
    in the box [-2, 2]^6; deterministic for a fixed seed. S is
    homogeneous of degree 2 in (g, h), so its sign cannot depend on the
    overall scale and the search stays confined to the box (a quadratic
    penalty pulls excursions back); an unconstrained maximum would be
    unbounded for any detected state. The covariance matrix is computed
    once per state.
    """
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    modes = _three_modes(state, modes)
    cov = covariance_matrix(state, modes)
    rng = np.random.default_rng(seed)

    def objective(x):
        xc = np.clip(x, -2.0, 2.0)
        penalty = 100.0 * float(np.sum((x - xc) ** 2))
        return -vlf_value(cov, xc[:3], xc[3:]) + penalty

    best_x = np.zeros(6)
    best = -objective(best_x)
    for _ in range(restarts):
        x0 = rng.uniform(-2.0, 2.0, size=6)
        res = minimize(objective, x0, method="Nelder-Mead",
                       options={"maxiter": max_iter, "xatol": 1e-10,
                                "fatol": 1e-10})
        if -res.fun > best:
            best = -res.fun
            best_x = np.clip(res.x, -2.0, 2.0)
    params = VlfParams(g=tuple(best_x[:3]), h=tuple(best_x[3:]))
    return _report("vlf_s_opt", best,
                   {"cov_x": cov[:3, :3], "cov_p": cov[3:, 3:],
                    "restarts": restarts},
                   parameters=params)


def _triple_moment(state: QuantumState, modes) -> complex:
    i, j, k = modes
    return expect_monomial(
        state, ((i, ANNIHILATE), (j, ANNIHILATE), (k, ANNIHILATE)))


def hz_witness(state: QuantumState, singled: int = 0,
               modes=None) -> WitnessReport:
    """Pairwise inseparability of one mode from the other two:

        I_alpha = |<a1 a2 a3>| - sqrt(<N_alpha> <N_beta N_gamma>)

    Positive values rule out separability across the alpha | beta gamma
    split only; this is not yet a genuine-entanglement statement.
    """
    modes = _three_modes(state, modes)
    if singled not in (0, 1, 2):
        raise LayoutMismatchError("singled mode index must be 0, 1 or 2")
    alpha = modes[singled]
    beta, gamma = [m for p, m in enumerate(modes) if p != singled]
    triple = _triple_moment(state, modes)
    n_alpha = expect_monomial(state, ((alpha, CREATE), (alpha, ANNIHILATE)))
    n_pair = expect_monomial(
        state, ((beta, CREATE), (beta, ANNIHILATE),
                (gamma, CREATE), (gamma, ANNIHILATE)))
    value = abs(triple) - np.sqrt(max(n_alpha.real, 0.0)
                                  * max(n_pair.real, 0.0))
    return _report(f"hz_i{singled + 1}", value, {
        "triple": triple, "n_singled": n_alpha.real, "n_pair": n_pair.real})


def genuine_witness_sum(state: QuantumState, modes=None) -> WitnessReport:
    """Genuine tripartite witness with the triangle-inequality bound and
    anti-normally ordered moments:

        |<a1 a2 a3>| - sum over singled alpha of
            sqrt(<a_alpha a_alpha+> <a_beta a_beta+ a_gamma a_gamma+>)
    """
    modes = _three_modes(state, modes)
    triple = _triple_moment(state, modes)
    bound = 0.0
    comps = {"triple": triple}
    for p in range(3):
        alpha = modes[p]
        beta, gamma = [m for q, m in enumerate(modes) if q != p]
        single = expect_monomial(state, ((alpha, ANNIHILATE), (alpha, CREATE)))
        pair = expect_monomial(
            state, ((beta, ANNIHILATE), (beta, CREATE),
                    (gamma, ANNIHILATE), (gamma, CREATE)))
        term = np.sqrt(max(single.real, 0.0) * max(pair.real, 0.0))
        comps[f"term_{p + 1}"] = term
        bound += term
    return _report("genuine_sum", abs(triple) - bound, comps)


def genuine_witness_max(state: QuantumState, modes=None) -> WitnessReport:
    """Sharper genuine tripartite witness: a convex mixture is bounded by
    its largest branch, so the sum collapses to a max and the moments
    are photon-number ones:

        |<a1 a2 a3>| - max over singled alpha of
            sqrt(<N_alpha> <N_beta N_gamma>)
    """
    modes = _three_modes(state, modes)
    triple = _triple_moment(state, modes)
    terms = []
    comps = {"triple": triple}
    for p in range(3):
        alpha = modes[p]
        beta, gamma = [m for q, m in enumerate(modes) if q != p]
        n_single = expect_monomial(state, ((alpha, CREATE), (alpha, ANNIHILATE)))
        n_pair = expect_monomial(
            state, ((beta, CREATE), (beta, ANNIHILATE),
                    (gamma, CREATE), (gamma, ANNIHILATE)))
        term = np.sqrt(max(n_single.real, 0.0) * max(n_pair.real, 0.0))
        comps[f"term_{p + 1}"] = term
        terms.append(term)
    return _report("genuine_max", abs(triple) - max(terms), comps)


def dv_genuine_witness(state: QuantumState, ordering: str = "normal",
                       combine: str = "max", qubits=None) -> WitnessReport:
    """Qubit analog of the genuine witnesses with sigma- replacing a:

        |<s1- s2- s3->| - combine over alpha of
            sqrt(<m_alpha> <m_beta m_gamma>)

    where m = sigma+ sigma- for normal ordering (excited population) or
    sigma- sigma+ for antinormal (ground population); ``combine`` is
    "max" or "sum".
    """
    if ordering not in ("normal", "antinormal"):
        raise ValueError("ordering must be 'normal' or 'antinormal'")
    if combine not in ("max", "sum"):
        raise ValueError("combine must be 'max' or 'sum'")
    qubits = _three_qubits(state, qubits)
    numerator = expect_monomial(
        state, tuple((q, PAULI_MINUS) for q in qubits))
    if ordering == "normal":
        m_factors = (PAULI_PLUS, PAULI_MINUS)
    else:
        m_factors = (PAULI_MINUS, PAULI_PLUS)
    terms = []
    comps = {"triple": numerator}
    for p in range(3):
        alpha = qubits[p]
        beta, gamma = [q for i, q in enumerate(qubits) if i != p]
        single = expect_monomial(
            state, ((alpha, m_factors[0]), (alpha, m_factors[1])))
        pair = expect_monomial(
            state, ((beta, m_factors[0]), (beta, m_factors[1]),
                    (gamma, m_factors[0]), (gamma, m_factors[1])))
        term = np.sqrt(max(single.real, 0.0) * max(pair.real, 0.0))
        comps[f"term_{p + 1}"] = term
        terms.append(term)
    bound = max(terms) if combine == "max" else sum(terms)
    return _report("dv_genuine", abs(numerator) - bound, comps)


def negativity(state: QuantumState, bipartition) -> float:
    """Entanglement negativity (|rho^T_A|_1 - 1)/2 across the given
    subsystem subset; strictly positive negativity certifies
    inseparability of that bipartition (PPT criterion)."""
    layout = state.layout
    part = sorted(set(bipartition))
    n_sub = layout.n_subsystems
    if not part or len(part) >= n_sub:
        raise LayoutMismatchError("bipartition must be a proper nonempty "
                                  "subset of the register")
    for i in part:
        layout.check_index(i)
    rho = state.to_density().data
    dims = layout.dims
    tensor = rho.reshape(dims + dims)
    perm = list(range(2 * n_sub))
    for i in part:
        perm[i], perm[n_sub + i] = perm[n_sub + i], perm[i]
    transposed = tensor.transpose(perm).reshape(rho.shape)
    eigs = np.linalg.eigvalsh(transposed)
    return float(-eigs[eigs < 0.0].sum())


def qubit_bipartition_negativities(state: QuantumState) -> dict[str, float]:
    """Negativity across each single-vs-pair split of a 3-qubit state."""
    out = {}
    for i in range(3):
        out[f"{i}|rest"] = negativity(state, {i})
    return out


def triple_superposition(layout: RegisterLayout, eps: float,
                         modes=None) -> QuantumState:
    """Normalized (|000> + eps |111>)/sqrt(1 + eps^2) on three modes."""
    modes = modes if modes is not None else layout.boson_indices()
    occ_zero = [0] * layout.n_subsystems
    occ_one = list(occ_zero)
    for m in modes:
        occ_one[m] = 1
    vec = fock_state(layout, occ_zero).data + \
        eps * fock_state(layout, occ_one).data
    vec = vec / np.linalg.norm(vec)
    return QuantumState(layout, vec)


def random_separable_mixture(layout: RegisterLayout,
                             rng: np.random.Generator,
                             max_components: int = 4,
                             margin: int = 2) -> QuantumState:
    """Random convex mixture of random product pure states.

    Per-subsystem amplitudes leave the top ``margin`` levels of each
    bosonic mode empty: right at the cutoff the truncated a a^dagger
    loses its <N> + 1 form and moment inequalities that rely on it stop
    holding, which would say nothing about the physics being modeled.
    """
    n_components = int(rng.integers(1, max_components + 1))
    weights = rng.dirichlet(np.ones(n_components))
    dim = layout.total_dim
    rho = np.zeros((dim, dim), dtype=complex)
    for w in weights:
        vec = np.ones(1, dtype=complex)
        for kind, d in layout.subsystems:
            live = d - margin if (kind == BOSON and d > margin + 1) else d
            local = rng.normal(size=d) + 1j * rng.normal(size=d)
            local[live:] = 0.0
            local /= np.linalg.norm(local)
            vec = np.kron(vec, local)
        rho += w * np.outer(vec, vec.conj())
    return QuantumState(layout, rho)
