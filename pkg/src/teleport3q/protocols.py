"""Measurement-basis builders and exact plus sampled teleportation runs.

A protocol pairs a shared resource state (sender holds every qubit but the
last, receiver the last) with an orthonormal measurement basis on the
(message + sender) register. Every outcome induces a 2x2 branch operator
mapping the message qubit onto the receiver's qubit; the stored correction
is the unitary the receiver inverts to recover the message.

The Pauli index map used by the twirl and the S-parameterized builder is
fixed as 00 -> I, 01 -> X, 10 -> Y, 11 -> Z.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import (
    ATOL,
    IDENTITY,
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    closest_unitary,
    complete_orthonormal,
    dagger,
    is_unitary,
    max_abs,
)
from .states import PureState, WLikeParams, fidelity, make_named_state, w_like_from_params

SIGMA_BY_INDEX = (IDENTITY, PAULI_X, PAULI_Y, PAULI_Z)

# Branch probabilities below this are treated as unreachable: their fidelity
# is reported as None so averages are never polluted by dead branches.
PROB_FLOOR = 1e-24


def outcome_bits(index: int, n_bits: int) -> tuple[int, ...]:
    return tuple((index >> (n_bits - 1 - k)) & 1 for k in range(n_bits))


def _apply_to_last_qubit(amplitudes: np.ndarray, op: np.ndarray) -> np.ndarray:
    return (amplitudes.reshape(-1, 2) @ op.T).reshape(-1)


@dataclass(frozen=True)
class MeasurementBasis:
    """Full orthonormal basis on the measured register, one element per outcome.

    Element k corresponds to the outcome whose bits are the big-endian binary
    digits of k.
    """

    elements: tuple[PureState, ...]

    def __post_init__(self) -> None:
        if not self.elements:
            raise ValueError("basis needs at least one element")
        n = self.elements[0].n_qubits
        if any(e.n_qubits != n for e in self.elements):
            raise ValueError("basis elements must share a qubit count")
        if len(self.elements) != 2**n:
            raise ValueError(f"expected {2 ** n} elements on {n} qubits, got {len(self.elements)}")
        rows = self.as_matrix()
        deviation = max_abs(rows.conj() @ rows.T - np.eye(len(self.elements)))
        if deviation > ATOL:
            raise ValueError(f"basis is not orthonormal: Gram deviation {deviation:.3e}")

    @property
    def n_qubits(self) -> int:
        return self.elements[0].n_qubits

    def as_matrix(self) -> np.ndarray:
        """Row k holds element k's amplitudes."""
        return np.stack([e.amplitudes for e in self.elements])

    @classmethod
    def from_unitary_columns(cls, u: np.ndarray) -> "MeasurementBasis":
        u = np.asarray(u, dtype=complex)
        return cls(tuple(PureState.from_array(u[:, k]) for k in range(u.shape[1])))


@dataclass(frozen=True)
class BranchOperatorFamily:
    """The per-outcome 2x2 operators induced by a basis and a shared state.

    For any orthonormal basis and normalized shared state the family is
    complete: sum of T†T equals the identity.
    """

    ops: tuple[np.ndarray, ...]

    def __post_init__(self) -> None:
        total = sum(dagger(t) @ t for t in self.ops)
        deviation = max_abs(total - np.eye(2))
        if deviation > ATOL:
            raise ValueError(f"branch operators are not complete: deviation {deviation:.3e}")


@dataclass(frozen=True)
class TeleportProtocol:
    """Shared state, measurement basis, per-outcome corrections and branch magnitudes."""

    shared: PureState
    basis: MeasurementBasis
    corrections: tuple[np.ndarray, ...]
    coefficients: np.ndarray

    def __post_init__(self) -> None:
        if self.basis.n_qubits != self.shared.n_qubits:
            raise ValueError("basis must act on as many qubits as the shared state")
        n_out = len(self.basis.elements)
        if len(self.corrections) != n_out:
            raise ValueError(f"expected {n_out} corrections, got {len(self.corrections)}")
        coeffs = np.array(self.coefficients, dtype=float).reshape(-1)
        if coeffs.size != n_out:
            raise ValueError(f"expected {n_out} coefficients, got {coeffs.size}")
        if np.any(coeffs < 0):
            raise ValueError("coefficients must be non-negative")
        if abs(float(np.sum(coeffs**2)) - 1.0) > ATOL:
            raise ValueError("squared coefficients must sum to 1")
        frozen = []
        for k, u in enumerate(self.corrections):
            u = np.array(u, dtype=complex)
            if u.shape != (2, 2) or not is_unitary(u, ATOL):
                raise ValueError(f"correction {k} is not a 2x2 unitary")
            u.setflags(write=False)
            frozen.append(u)
        coeffs.setflags(write=False)
        object.__setattr__(self, "corrections", tuple(frozen))
        object.__setattr__(self, "coefficients", coeffs)

    @property
    def n_outcomes(self) -> int:
        return len(self.basis.elements)


@dataclass(frozen=True)
class BranchOutcome:
    index: tuple[int, ...]
    probability: float
    bob_state: PureState | None
    branch_fidelity: float | None


@dataclass(frozen=True)
class TeleportResult:
    outcomes: tuple[BranchOutcome, ...]
    total_fidelity: float


@dataclass(frozen=True)
class SampleResult:
    counts: np.ndarray
    empirical_fidelity: float
    trials: int


def branch_operators(basis: MeasurementBasis, shared: PureState) -> BranchOperatorFamily:
    """Extract the 2x2 branch operators; column j is <basis_k|(|j> (x) shared)."""
    k = shared.n_qubits
    rows = basis.as_matrix().conj()
    columns = []
    for j in (0, 1):
        message = np.zeros(2, dtype=complex)
        message[j] = 1.0
        joint = np.kron(message, shared.amplitudes).reshape(2**k, 2)
        columns.append(rows @ joint)
    ops = tuple(
        np.column_stack([columns[0][i], columns[1][i]]) for i in range(len(basis.elements))
    )
    return BranchOperatorFamily(ops)


def run_teleport(psi: PureState, protocol: TeleportProtocol) -> TeleportResult:
    """Exact branch-by-branch execution.

    Probability of outcome k is ||T_k psi||^2; the receiver applies the
    inverse of the stored correction, so a perfect protocol returns psi on
    every reachable branch. Total fidelity is the probability-weighted mean.
    """
    if psi.n_qubits != 1:
        raise ValueError("message must be a single qubit")
    family = branch_operators(protocol.basis, protocol.shared)
    n_bits = protocol.basis.n_qubits
    outcomes = []
    total = 0.0
    for k, t in enumerate(family.ops):
        branch = t @ psi.amplitudes
        prob = float(np.sum(np.abs(branch) ** 2))
        if prob <= PROB_FLOOR:
            outcomes.append(BranchOutcome(outcome_bits(k, n_bits), prob, None, None))
            continue
        bob = PureState(1, dagger(protocol.corrections[k]) @ (branch / np.sqrt(prob)))
        fid = fidelity(psi, bob)
        total += prob * fid
        outcomes.append(BranchOutcome(outcome_bits(k, n_bits), prob, bob, fid))
    return TeleportResult(tuple(outcomes), total)


def sample_teleport(
    psi: PureState, protocol: TeleportProtocol, trials: int, seed: int
) -> SampleResult:
    """Sampled execution over the classical channel.

    The sender draws outcomes from the exact branch distribution; each drawn
    outcome is delivered as a classical bit string to a receiver that applies
    its correction. Philox keying makes trial batches reproducible and
    splittable.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    exact = run_teleport(psi, protocol)
    probs = np.array([o.probability for o in exact.outcomes])
    rng = np.random.Generator(np.random.Philox(key=seed))
    drawn = rng.choice(len(probs), size=trials, p=probs / probs.sum())
    counts = np.bincount(drawn, minlength=len(probs))
    fidelity_sum = 0.0
    for k, count in enumerate(counts):
        if count == 0:
            continue
        branch_fid = exact.outcomes[k].branch_fidelity
        fidelity_sum += count * (branch_fid if branch_fid is not None else 0.0)
    return SampleResult(counts=counts, empirical_fidelity=fidelity_sum / trials, trials=trials)


def _basis_with_completion(live: dict[int, np.ndarray], dim: int) -> MeasurementBasis:
    live_rows = np.stack([live[i] for i in sorted(live)])
    full = complete_orthonormal(live_rows, dim)
    extras = iter(full[len(live) :])
    elements = []
    for i in range(dim):
        elements.append(PureState.from_array(live[i] if i in live else next(extras)))
    return MeasurementBasis(tuple(elements))


def bell_protocol() -> TeleportProtocol:
    """Baseline 2-qubit protocol over the bell(0,0) shared pair; four live branches."""
    basis = MeasurementBasis(
        tuple(make_named_state(f"bell({m},{n})") for m in (0, 1) for n in (0, 1))
    )
    # element order is 00, 01, 10, 11
    corrections = (IDENTITY, PAULI_X, PAULI_Z, -1j * PAULI_Y)
    return TeleportProtocol(
        shared=make_named_state("bell(0,0)"),
        basis=basis,
        corrections=corrections,
        coefficients=np.full(4, 0.5),
    )


def ghz_protocol() -> TeleportProtocol:
    """Perfect protocol over the GHZ state.

    Live outcomes are 000, 001, 100, 101 with corrections I, Z, X, -iY and
    branch magnitude 1/2 each; the four dead outcomes get probability 0 and
    identity corrections, with basis elements completed deterministically.
    """
    s = 1.0 / np.sqrt(2.0)
    live = {}
    for third, sign in ((0, 1.0), (1, -1.0)):
        e = np.zeros(8, dtype=complex)
        e[0], e[7] = s, sign * s
        live[third] = e  # outcomes 000 and 001
        e = np.zeros(8, dtype=complex)
        e[4], e[3] = s, sign * s
        live[4 + third] = e  # outcomes 100 and 101
    corrections = [IDENTITY] * 8
    corrections[0] = IDENTITY
    corrections[1] = PAULI_Z
    corrections[4] = PAULI_X
    corrections[5] = -1j * PAULI_Y
    coefficients = np.zeros(8)
    coefficients[[0, 1, 4, 5]] = 0.5
    return TeleportProtocol(
        shared=make_named_state("ghz"),
        basis=_basis_with_completion(live, 8),
        corrections=tuple(corrections),
        coefficients=coefficients,
    )


def w_like_protocol(params: WLikeParams) -> TeleportProtocol:
    """Perfect protocol over a W-like state.

    The live basis elements for outcomes 000..011 carry the state's own
    weights on shifted kets; corrections are I, Z, X, Y and the magnitudes
    are 1/2. Outcomes 100..111 are dead.
    """
    y = np.exp(1j * params.phi) * np.cos(params.gamma) / np.sqrt(2.0)
    z = np.exp(1j * params.omega) * np.sin(params.gamma) / np.sqrt(2.0)
    s = 1.0 / np.sqrt(2.0)
    live = {}
    for third, sign in ((0, 1.0), (1, -1.0)):
        e = np.zeros(8, dtype=complex)
        e[1], e[2], e[4] = y, z, sign * s
        live[third] = e  # outcomes 000 and 001
        e = np.zeros(8, dtype=complex)
        e[5], e[6], e[0] = y, z, sign * s
        live[2 + third] = e  # outcomes 010 and 011
    corrections = [IDENTITY] * 8
    corrections[0] = IDENTITY
    corrections[1] = PAULI_Z
    corrections[2] = PAULI_X
    corrections[3] = PAULI_Y
    coefficients = np.zeros(8)
    coefficients[:4] = 0.5
    return TeleportProtocol(
        shared=w_like_from_params(params),
        basis=_basis_with_completion(live, 8),
        corrections=tuple(corrections),
        coefficients=coefficients,
    )


def sigma_twirl_states(shared: PureState) -> tuple[tuple[PureState, ...], np.ndarray]:
    """Pauli twirl of the receiver slot: sigma† applied to the last qubit.

    Returns the four twirled states (indexed 00, 01, 10, 11 by the Pauli map)
    and their 4x4 Gram matrix; the shared state supports perfect teleportation
    with Pauli-style corrections exactly when the Gram matrix is the identity.
    """
    if shared.n_qubits != 3:
        raise ValueError("twirl expects a 3-qubit shared state")
    twirled = tuple(
        PureState.from_array(_apply_to_last_qubit(shared.amplitudes, dagger(sigma)))
        for sigma in SIGMA_BY_INDEX
    )
    gram = np.array(
        [[np.vdot(a.amplitudes, b.amplitudes) for b in twirled] for a in twirled]
    )
    return twirled, gram


def basis_from_S(params: WLikeParams, s: np.ndarray) -> TeleportProtocol:
    """Protocol over a W-like state with corrections sigma^{(mn)} S.

    The receiver fixes one free unitary S; the four live basis elements are
    then determined by contracting (S† sigma^{(mn)}) applied to the receiver
    slot of the shared state back onto the message slot. Live outcomes sit at
    000..011 in (m,n) order.
    """
    s = np.asarray(s, dtype=complex)
    if s.shape != (2, 2) or not is_unitary(s, ATOL):
        raise ValueError("S is not unitary (2x2 within tolerance 1e-10 required)")
    shared = w_like_from_params(params)
    live = {}
    corrections = [IDENTITY] * 8
    for mn, sigma in enumerate(SIGMA_BY_INDEX):
        v = _apply_to_last_qubit(shared.amplitudes, dagger(s) @ sigma)
        # re-slot the receiver contraction onto the message qubit:
        # element[4a+2b+c] = v[4b+2c+a]
        live[mn] = v.reshape(2, 2, 2).transpose(2, 0, 1).reshape(8)
        corrections[mn] = sigma @ s
    coefficients = np.zeros(8)
    coefficients[:4] = 0.5
    return TeleportProtocol(
        shared=shared,
        basis=_basis_with_completion(live, 8),
        corrections=tuple(corrections),
        coefficients=coefficients,
    )


def protocol_from_basis(shared: PureState, basis: MeasurementBasis) -> TeleportProtocol:
    """Best-effort protocol for an arbitrary basis.

    Corrections are the polar unitary factors of the branch operators and the
    branch magnitudes are sqrt(tr(T†T)/2), so the squared magnitudes always
    sum to 1. Fidelity reaches 1 only when every branch operator is
    proportional to a unitary.
    """
    family = branch_operators(basis, shared)
    corrections = tuple(closest_unitary(t) for t in family.ops)
    coefficients = np.array([np.sqrt(np.trace(dagger(t) @ t).real / 2.0) for t in family.ops])
    return TeleportProtocol(
        shared=shared, basis=basis, corrections=corrections, coefficients=coefficients
    )
