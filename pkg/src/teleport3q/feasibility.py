"""Feasibility of perfect teleportation for a shared 3-qubit state.

Four independent diagnostics are provided: the branch-operator
proportional-unitarity test, the basis-independent sum rule on the
receiver's reduced state, the entanglement-entropy criterion (one full ebit
is necessary and sufficient when the receiver holds a single qubit), and two
disentangler constructions on the sender's qubit pair.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import (
    complete_orthonormal,
    dagger,
    max_abs,
    schmidt_decompose,
    _haar_from_rng,
)
from .protocols import MeasurementBasis, branch_operators
from .states import DensityMatrix, PureState, entanglement_entropy, partial_trace

ENTROPY_ATOL = 1e-9
SUM_RULE_ATOL = 1e-9
SCAN_TOL = 1e-8
SUPPORT_THRESHOLD = 1e-12


@dataclass(frozen=True)
class UnitarityVerdict:
    """Whether T†T = TT† = scale * I within tolerance; scale is tr(T†T)/2."""

    is_proportional_unitary: bool
    scale: float
    deviation: float


@dataclass(frozen=True)
class DisentanglerResult:
    """Outcome of the componentwise sender-side disentangler search."""

    exists: bool
    unitary: np.ndarray | None
    residual: PureState | None


@dataclass(frozen=True)
class SchmidtDisentangler:
    """Always-constructible disentangler from the sender-pair Schmidt vectors."""

    unitary: np.ndarray
    residual: PureState
    coefficients: np.ndarray
    residual_entropy: float


@dataclass(frozen=True)
class ScanResult:
    trials: int
    feasible_count: int
    max_passing_branches: int
    tolerance: float
    injected: bool


@dataclass(frozen=True)
class FeasibilityReport:
    state_label: str
    bob_reduced_state: DensityMatrix
    entropy_bits: float
    entropy_feasible: bool
    sum_rule_row0: float
    sum_rule_row1: float
    sum_rule_balanced: bool
    scan: ScanResult
    componentwise: DisentanglerResult
    schmidt: SchmidtDisentangler


def unitarity_verdict(t: np.ndarray, tol: float) -> UnitarityVerdict:
    """Test proportionality to a unitary; the zero operator passes with scale 0.

    Accepting T = 0 reconciles the strictly-positive-scale requirement with
    legitimate protocols whose dead branches carry no probability.
    """
    t = np.asarray(t, dtype=complex)
    scale = float(np.trace(dagger(t) @ t).real) / 2.0
    eye = np.eye(2)
    deviation = max(
        max_abs(dagger(t) @ t - scale * eye),
        max_abs(t @ dagger(t) - scale * eye),
    )
    return UnitarityVerdict(deviation <= tol, scale, deviation)


def protocol_feasible(
    basis: MeasurementBasis, shared: PureState, tol: float
) -> tuple[bool, tuple[UnitarityVerdict, ...]]:
    """True iff every branch operator is proportional to a unitary at tol."""
    verdicts = tuple(unitarity_verdict(t, tol) for t in branch_operators(basis, shared).ops)
    return all(v.is_proportional_unitary for v in verdicts), verdicts


def sum_rule(shared: PureState, basis: MeasurementBasis) -> tuple[float, float]:
    """Row sums of |T entries|^2 over all branches.

    Each row equals twice the matching diagonal entry of the receiver's
    reduced state, for any orthonormal basis; perfect teleportation requires
    the two rows to balance.
    """
    ops = branch_operators(basis, shared).ops
    row0 = float(sum(abs(t[0, 0]) ** 2 + abs(t[0, 1]) ** 2 for t in ops))
    row1 = float(sum(abs(t[1, 0]) ** 2 + abs(t[1, 1]) ** 2 for t in ops))
    return row0, row1


def entropy_criterion(shared: PureState) -> tuple[float, bool]:
    """Entropy in bits of the receiver's reduced state; feasible iff exactly one ebit."""
    rho_b = partial_trace(shared.density(), keep=(shared.n_qubits - 1,))
    entropy = entanglement_entropy(rho_b)
    return entropy, abs(entropy - 1.0) <= ENTROPY_ATOL


def bob_reduced_state(shared: PureState) -> DensityMatrix:
    return partial_trace(shared.density(), keep=(shared.n_qubits - 1,))


def componentwise_disentangler(shared: PureState) -> DisentanglerResult:
    """Permutation-style unitary on the sender pair, when the support allows one.

    Collects the sender-pair kets carrying amplitude above 1e-12 (separating
    exact zeros from rounding noise). At most two distinct kets can be mapped
    into |0> (x) {|0>, |1>}; three or more orthonormal preimages cannot fit in
    a two-dimensional slice of a unitary, so the construction fails.
    """
    if shared.n_qubits != 3:
        raise ValueError("disentangler expects a 3-qubit shared state")
    amps = shared.amplitudes.reshape(4, 2)
    support = [a for a in range(4) if float(np.max(np.abs(amps[a]))) > SUPPORT_THRESHOLD]
    if len(support) > 2:
        return DisentanglerResult(False, None, None)
    targets = list(range(len(support)))
    remaining_targets = [t for t in range(4) if t not in targets]
    remaining_sources = [a for a in range(4) if a not in support]
    unitary = np.zeros((4, 4), dtype=complex)
    for target, source in zip(targets, support):
        unitary[target, source] = 1.0
    for target, source in zip(remaining_targets, remaining_sources):
        unitary[target, source] = 1.0
    transformed = unitary @ amps
    residual = transformed[:2].reshape(-1)
    residual = residual / np.linalg.norm(residual)
    return DisentanglerResult(True, unitary, PureState(2, residual))


def schmidt_disentangler(shared: PureState) -> SchmidtDisentangler:
    """Disentangler built from the sender-pair Schmidt vectors; always exists.

    The unitary sends the (at most two) left Schmidt vectors to |00> and
    |01>, completed deterministically over computational kets. The residual
    pair state carries exactly the shared state's bipartite entanglement,
    since the construction acts on the sender side only.
    """
    if shared.n_qubits != 3:
        raise ValueError("disentangler expects a 3-qubit shared state")
    form = schmidt_decompose(shared.amplitudes, cut_qubits=(0, 1))
    rows = form.left_factors.conj()
    unitary = complete_orthonormal(rows, 4)
    residual = np.zeros(4, dtype=complex)
    for k in range(form.coefficients.size):
        residual[2 * k : 2 * k + 2] = form.coefficients[k] * form.right_factors[k]
    probs = np.clip(form.coefficients**2, 0.0, 1.0)
    positive = probs[probs > 0.0]
    entropy = float(-np.sum(positive * np.log2(positive)))
    return SchmidtDisentangler(
        unitary=unitary,
        residual=PureState(2, residual),
        coefficients=form.coefficients.copy(),
        residual_entropy=entropy,
    )


def haar_scan(
    shared: PureState,
    trials: int,
    seed: int,
    inject: MeasurementBasis | None = None,
    tol: float = SCAN_TOL,
) -> ScanResult:
    """Feasibility search over Haar-random measurement bases.

    Trial i draws a fresh basis keyed by (seed, i), so batches may run
    concurrently and still aggregate identically. When `inject` is given it
    replaces trial 0 as a positive control. The scan tolerance is looser than
    construction tolerances because random bases miss proportional-unitarity
    by O(1), not by rounding.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    dim = 2**shared.n_qubits
    children = np.random.SeedSequence(seed).spawn(trials)
    feasible_count = 0
    max_passing = 0
    for i in range(trials):
        if inject is not None and i == 0:
            basis = inject
        else:
            u = _haar_from_rng(dim, np.random.default_rng(children[i]))
            basis = MeasurementBasis.from_unitary_columns(u)
        ok, verdicts = protocol_feasible(basis, shared, tol)
        feasible_count += int(ok)
        max_passing = max(max_passing, sum(v.is_proportional_unitary for v in verdicts))
    return ScanResult(
        trials=trials,
        feasible_count=feasible_count,
        max_passing_branches=max_passing,
        tolerance=tol,
        injected=inject is not None,
    )


def build_feasibility_report(
    shared: PureState,
    label: str,
    scan_trials: int,
    seed: int,
    inject: MeasurementBasis | None = None,
) -> FeasibilityReport:
    """Assemble every diagnostic for one shared state.

    The sum rule is evaluated on the computational basis; the rows are
    basis-independent, so any fixed orthonormal choice gives the same report.
    The componentwise and Schmidt disentanglers answer different questions
    (existence of a ket-permutation style move versus an unconstrained local
    unitary) and are reported side by side.
    """
    if shared.n_qubits != 3:
        raise ValueError("feasibility report expects a 3-qubit shared state")
    entropy, entropy_ok = entropy_criterion(shared)
    computational = MeasurementBasis.from_unitary_columns(np.eye(8, dtype=complex))
    row0, row1 = sum_rule(shared, computational)
    return FeasibilityReport(
        state_label=label,
        bob_reduced_state=bob_reduced_state(shared),
        entropy_bits=entropy,
        entropy_feasible=entropy_ok,
        sum_rule_row0=row0,
        sum_rule_row1=row1,
        sum_rule_balanced=abs(row0 - row1) <= SUM_RULE_ATOL,
        scan=haar_scan(shared, scan_trials, seed, inject=inject),
        componentwise=componentwise_disentangler(shared),
        schmidt=schmidt_disentangler(shared),
    )
