import math

import numpy as np
import pytest

from teleport3q.feasibility import (
    build_feasibility_report,
    componentwise_disentangler,
    entropy_criterion,
    haar_scan,
    protocol_feasible,
    schmidt_disentangler,
    sum_rule,
    unitarity_verdict,
)
from teleport3q.linalg import (
    PAULI_X,
    dagger,
    haar_random_unitary,
    is_unitary,
    max_abs,
    tensor_product,
)
from teleport3q.protocols import (
    MeasurementBasis,
    branch_operators,
    ghz_protocol,
    w_like_protocol,
)
from teleport3q.states import (
    PureState,
    WLikeParams,
    entanglement_entropy,
    fidelity,
    haar_random_state,
    make_named_state,
    partial_trace,
    w_like_from_params,
)

SQRT2 = math.sqrt(2.0)


def haar_basis(seed: int) -> MeasurementBasis:
    return MeasurementBasis.from_unitary_columns(haar_random_unitary(8, seed))


def random_w_like(rng) -> PureState:
    return w_like_from_params(
        WLikeParams(*(float(x) for x in rng.uniform(-math.pi, math.pi, 3)))
    )


# ---------------------------------------------------------------- unitarity verdicts


def test_verdict_scaled_pauli():
    verdict = unitarity_verdict(0.5 * PAULI_X, 1e-10)
    assert verdict.is_proportional_unitary
    assert verdict.scale == pytest.approx(0.25, abs=1e-12)


def test_verdict_rank_deficient():
    verdict = unitarity_verdict(np.diag([1.0, 0.0]), 1e-10)
    assert not verdict.is_proportional_unitary


def test_verdict_zero_operator_is_dead_branch():
    verdict = unitarity_verdict(np.zeros((2, 2)), 1e-10)
    assert verdict.is_proportional_unitary
    assert verdict.scale == 0.0


def test_verdict_ghz_live_branches():
    protocol = ghz_protocol()
    ops = branch_operators(protocol.basis, protocol.shared).ops
    for k in (0, 1, 4, 5):
        verdict = unitarity_verdict(ops[k], 1e-10)
        assert verdict.is_proportional_unitary
        assert verdict.scale == pytest.approx(0.25, abs=1e-12)


def test_verdict_scale_covariance():
    rng = np.random.default_rng(6)
    base = 0.3 * haar_random_unitary(2, 17)
    generic = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    for t in (base, generic):
        reference = unitarity_verdict(t, 1e-8)
        for _ in range(20):
            c = complex(rng.standard_normal(), rng.standard_normal())
            scaled = unitarity_verdict(c * t, 1e-8 * max(1.0, abs(c) ** 2))
            assert scaled.is_proportional_unitary == reference.is_proportional_unitary
            assert scaled.scale == pytest.approx(abs(c) ** 2 * reference.scale, rel=1e-9)


# ---------------------------------------------------------------- protocol feasibility


def test_ghz_basis_feasible_for_ghz():
    protocol = ghz_protocol()
    ok, _ = protocol_feasible(protocol.basis, protocol.shared, 1e-10)
    assert ok


def test_w_like_basis_feasible_for_matching_state():
    params = WLikeParams(0.8, -0.5, 2.2)
    protocol = w_like_protocol(params)
    ok, _ = protocol_feasible(protocol.basis, protocol.shared, 1e-10)
    assert ok


def test_haar_bases_never_feasible_for_w():
    w = make_named_state("w")
    for seed in range(25):
        ok, _ = protocol_feasible(haar_basis(seed), w, 1e-8)
        assert not ok


# ---------------------------------------------------------------- sum rule


def test_sum_rule_w_unbalanced():
    w = make_named_state("w")
    for seed in range(10):
        row0, row1 = sum_rule(w, haar_basis(seed))
        assert row0 == pytest.approx(4.0 / 3.0, abs=1e-9)
        assert row1 == pytest.approx(2.0 / 3.0, abs=1e-9)


def test_sum_rule_w_like_balanced():
    rng = np.random.default_rng(9)
    for seed in range(5):
        row0, row1 = sum_rule(random_w_like(rng), haar_basis(seed))
        assert row0 == pytest.approx(1.0, abs=1e-9)
        assert row1 == pytest.approx(1.0, abs=1e-9)


def test_sum_rule_ghz_balanced():
    row0, row1 = sum_rule(make_named_state("ghz"), haar_basis(2))
    assert row0 == pytest.approx(1.0, abs=1e-9)
    assert row1 == pytest.approx(1.0, abs=1e-9)


def test_sum_rule_basis_independent():
    state = haar_random_state(3, 55)
    rows = [sum_rule(state, haar_basis(seed)) for seed in range(50)]
    for row0, row1 in rows[1:]:
        assert row0 == pytest.approx(rows[0][0], abs=1e-9)
        assert row1 == pytest.approx(rows[0][1], abs=1e-9)


# ---------------------------------------------------------------- entropy criterion


def test_entropy_criterion_values():
    entropy, feasible = entropy_criterion(make_named_state("ghz"))
    assert feasible and entropy == pytest.approx(1.0, abs=1e-10)
    entropy, feasible = entropy_criterion(make_named_state("w"))
    assert not feasible
    assert entropy == pytest.approx(0.91829583, abs=1e-6)
    rng = np.random.default_rng(44)
    for _ in range(10):
        entropy, feasible = entropy_criterion(random_w_like(rng))
        assert feasible and entropy == pytest.approx(1.0, abs=1e-10)


def test_criterion_agreement():
    # entropy feasibility, sum-rule balance, and maximal mixedness coincide
    rng = np.random.default_rng(10)
    states = [make_named_state("ghz"), make_named_state("w")]
    states += [random_w_like(rng) for _ in range(50)]
    states += [haar_random_state(3, 4000 + k) for k in range(50)]
    basis = haar_basis(1)
    for state in states:
        entropy_ok = entropy_criterion(state)[1]
        row0, row1 = sum_rule(state, basis)
        balanced = abs(row0 - row1) <= 1e-9
        rho_b = partial_trace(state.density(), keep=(2,)).matrix
        mixed = max_abs(rho_b - np.eye(2) / 2) <= 1e-9
        assert entropy_ok == balanced == mixed


# ---------------------------------------------------------------- disentanglers


def test_componentwise_ghz():
    result = componentwise_disentangler(make_named_state("ghz"))
    assert result.exists
    assert is_unitary(result.unitary, 1e-10)
    bell = np.zeros(4, dtype=complex)
    bell[0] = bell[3] = 1 / SQRT2
    assert fidelity(result.residual, PureState(2, bell)) == pytest.approx(1.0, abs=1e-10)


def test_componentwise_w_fails():
    assert not componentwise_disentangler(make_named_state("w")).exists


def test_componentwise_w_like_quarter_pi_fails():
    state = w_like_from_params(WLikeParams(math.pi / 4, 0.0, 0.0))
    assert not componentwise_disentangler(state).exists


def test_componentwise_w_like_half_pi():
    omega = 0.3
    state = w_like_from_params(WLikeParams(math.pi / 2, 0.0, omega))
    result = componentwise_disentangler(state)
    assert result.exists
    expected = np.zeros(4, dtype=complex)
    expected[1] = 1 / SQRT2
    expected[2] = np.exp(1j * omega) / SQRT2
    assert fidelity(result.residual, PureState(2, expected)) == pytest.approx(1.0, abs=1e-10)


def test_componentwise_reconstruction():
    for state in (
        make_named_state("ghz"),
        w_like_from_params(WLikeParams(math.pi / 2, 0.0, 1.9)),
    ):
        result = componentwise_disentangler(state)
        moved = tensor_product(result.unitary, np.eye(2)) @ state.amplitudes
        zero_then_residual = np.zeros(8, dtype=complex)
        zero_then_residual[:4] = result.residual.amplitudes
        overlap = abs(np.vdot(zero_then_residual, moved)) ** 2
        assert overlap == pytest.approx(1.0, abs=1e-10)


def test_componentwise_product_state_support_one():
    # |0>|0>|+> has a single sender-pair ket; the move exists and leaves no entanglement
    amps = np.zeros(8, dtype=complex)
    amps[0] = amps[1] = 1 / SQRT2
    result = componentwise_disentangler(PureState(3, amps))
    assert result.exists
    reduced = partial_trace(result.residual.density(), keep=(1,))
    assert entanglement_entropy(reduced) == pytest.approx(0.0, abs=1e-10)


def test_schmidt_disentangler_values():
    assert schmidt_disentangler(make_named_state("ghz")).residual_entropy == pytest.approx(
        1.0, abs=1e-10
    )
    assert schmidt_disentangler(make_named_state("w")).residual_entropy == pytest.approx(
        0.91829583, abs=1e-6
    )
    amps = np.zeros(8, dtype=complex)
    amps[0] = amps[1] = 1 / SQRT2  # |0>|0>|+>
    assert schmidt_disentangler(PureState(3, amps)).residual_entropy == pytest.approx(
        0.0, abs=1e-12
    )


def test_schmidt_disentangler_reconstruction_and_entropy_match():
    for k in range(10):
        state = haar_random_state(3, 6000 + k)
        result = schmidt_disentangler(state)
        assert is_unitary(result.unitary, 1e-10)
        moved = tensor_product(result.unitary, np.eye(2)) @ state.amplitudes
        target = np.zeros(8, dtype=complex)
        target[:4] = result.residual.amplitudes
        assert abs(np.vdot(target, moved)) ** 2 == pytest.approx(1.0, abs=1e-10)
        assert result.residual_entropy == pytest.approx(
            entropy_criterion(state)[0], abs=1e-10
        )


# ---------------------------------------------------------------- scans and reports


def test_haar_scan_w_negative():
    result = haar_scan(make_named_state("w"), 50, seed=1)
    assert result.feasible_count == 0


def test_haar_scan_injection_positive_control():
    params = WLikeParams(0.7, 0.0, 0.0)
    basis = w_like_protocol(params).basis
    result = haar_scan(w_like_from_params(params), 1, seed=0, inject=basis)
    assert result.feasible_count == 1
    assert result.injected
    ghz_result = haar_scan(make_named_state("ghz"), 1, seed=0, inject=ghz_protocol().basis)
    assert ghz_result.feasible_count == 1
    assert ghz_result.max_passing_branches == 8


def test_haar_scan_deterministic():
    w = make_named_state("w")
    a = haar_scan(w, 10, seed=3)
    b = haar_scan(w, 10, seed=3)
    assert a == b


def test_haar_scan_rejects_zero_trials():
    with pytest.raises(ValueError):
        haar_scan(make_named_state("w"), 0, seed=1)


def test_feasibility_report_w():
    report = build_feasibility_report(make_named_state("w"), "w", scan_trials=20, seed=0)
    assert not report.entropy_feasible
    assert report.sum_rule_row0 == pytest.approx(4.0 / 3.0, abs=1e-9)
    assert report.sum_rule_row1 == pytest.approx(2.0 / 3.0, abs=1e-9)
    assert not report.sum_rule_balanced
    assert report.scan.feasible_count == 0
    assert not report.componentwise.exists
    assert report.schmidt.residual_entropy == pytest.approx(report.entropy_bits, abs=1e-10)
    np.testing.assert_allclose(
        report.bob_reduced_state.matrix, np.diag([2 / 3, 1 / 3]), atol=1e-12
    )


def test_feasibility_report_ghz():
    report = build_feasibility_report(make_named_state("ghz"), "ghz", scan_trials=5, seed=0)
    assert report.entropy_feasible
    assert report.sum_rule_balanced
    assert report.componentwise.exists


def test_feasibility_report_rejects_wrong_size():
    with pytest.raises(ValueError):
        build_feasibility_report(haar_random_state(2, 1), "pair", scan_trials=1, seed=0)
