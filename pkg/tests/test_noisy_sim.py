import numpy as np
import pytest

from conftest import ket, protocol_by_density_matrix
from noisyteleport.channels import (
    apply_channel,
    build_standard_channel,
    conjugate_channel,
    transpose_channel,
)
from noisyteleport.haar import haar_state, haar_unitary, random_kraus_channel
from noisyteleport.noisy_sim import (
    _brute_force_amplitudes,
    bob_premessage_marginal,
    compare_branchwise,
    effective_error,
    effective_errors,
    enumerate_outcomes,
    measure_and_correct,
    noisy_initial_state,
    predict_outcomes_via_effective_error,
    sample_outcomes,
)
from noisyteleport.qmath import fidelity, is_density_matrix, projector
from noisyteleport.teleport import BellMeasurement, shift_operator

X2 = np.array([[0, 1], [1, 0]], dtype=complex)
Z2 = np.diag([1, -1]).astype(complex)
PLUS = ket(1, 1)
MINUS = ket(1, -1)


def identity(N):
    return build_standard_channel("identity", N)


# --- single branch --------------------------------------------------------


def test_noisy_initial_state_ideal():
    N = 3
    psi = haar_state(N, 0)
    eye = np.eye(N)
    expected = sum(np.kron(psi, np.kron(eye[n], eye[n])) for n in range(N)) / np.sqrt(N)
    np.testing.assert_allclose(noisy_initial_state(psi, eye, eye), expected, atol=1e-15)


def test_noisy_initial_state_phase_error_on_r():
    state = noisy_initial_state(PLUS, Z2, np.eye(2))
    e0, e1 = np.eye(2)
    expected = (np.kron(PLUS, np.kron(e0, e0)) - np.kron(PLUS, np.kron(e1, e1))) / np.sqrt(2)
    np.testing.assert_allclose(state, expected, atol=1e-15)


def test_noisy_initial_state_norm():
    N = 3
    fr = random_kraus_channel(N, 3, 1).kraus[0]
    fb = random_kraus_channel(N, 2, 2).kraus[1]
    state = noisy_initial_state(haar_state(N, 3), fr, fb)
    expected = np.sum((fr.conj().T @ fr) * (fb.conj().T @ fb)).real / N
    assert np.vdot(state, state).real == pytest.approx(expected, abs=1e-14)
    assert expected <= 1


def test_noisy_initial_state_dimension_error():
    with pytest.raises(ValueError):
        noisy_initial_state(PLUS, np.eye(3), np.eye(2))


@pytest.mark.parametrize("N", [2, 3])
def test_measure_and_correct_ideal(N):
    meas = BellMeasurement.weyl(N)
    psi = haar_state(N, 5)
    state = noisy_initial_state(psi, np.eye(N), np.eye(N))
    for m in meas.labels:
        raw, out = measure_and_correct(state, meas, m)
        assert raw == pytest.approx(1 / N**2, abs=1e-14)
        assert fidelity(out, psi) == pytest.approx(1.0, abs=1e-12)


def test_measure_and_correct_phase_error_on_b():
    meas = BellMeasurement.weyl(2)
    raw, out = measure_and_correct(noisy_initial_state(PLUS, np.eye(2), Z2), meas, (0, 0))
    assert raw == pytest.approx(0.25)
    assert fidelity(out, MINUS) == pytest.approx(1.0)


def test_measure_and_correct_shift_error_on_r_qutrit():
    meas = BellMeasurement.weyl(3)
    x = shift_operator(3)
    raw, out = measure_and_correct(noisy_initial_state(ket(1, 0, 0), x, np.eye(3)), meas, (0, 0))
    assert fidelity(out, ket(0, 0, 1)) == pytest.approx(1.0)
    assert raw == pytest.approx(1 / 9)


def test_effective_error_examples():
    meas = BellMeasurement.weyl(2)
    for m in meas.labels:
        np.testing.assert_allclose(effective_error(meas, m, np.eye(2), np.eye(2)), np.eye(2), atol=1e-15)
    np.testing.assert_allclose(effective_error(meas, (1, 0), np.eye(2), Z2), -Z2, atol=1e-15)
    np.testing.assert_allclose(effective_error(meas, (0, 0), X2, np.eye(2)), X2, atol=1e-15)


def test_effective_errors_batch_matches_single():
    N = 3
    meas = BellMeasurement.weyl(N)
    cr, cb = random_kraus_channel(N, 2, 1), random_kraus_channel(N, 3, 2)
    batch = effective_errors(meas, cr, cb)
    for i, m in enumerate(meas.labels):
        for xr in range(len(cr)):
            for xb in range(len(cb)):
                np.testing.assert_allclose(
                    batch[i, xr, xb], effective_error(meas, m, cr.kraus[xr], cb.kraus[xb]), atol=1e-13
                )


@pytest.mark.parametrize("N", [2, 3])
def test_batched_branches_match_single_branch_and_density_oracle(N):
    meas = BellMeasurement.weyl(N)
    cr, cb = random_kraus_channel(N, 2, 10 + N), random_kraus_channel(N, 2, 20 + N)
    psi = haar_state(N, 30)
    amps = _brute_force_amplitudes(psi, cr, cb, meas, np.arange(len(meas)))
    for i, m in enumerate(meas.labels):
        for xr, fr in enumerate(cr.kraus):
            for xb, fb in enumerate(cb.kraus):
                raw, out = measure_and_correct(noisy_initial_state(psi, fr, fb), meas, m)
                a = amps[i, xr, xb]
                assert np.vdot(a, a).real == pytest.approx(raw, abs=1e-14)
                assert fidelity(a / np.linalg.norm(a), out) == pytest.approx(1.0, abs=1e-12)
                p_ref, rho_ref = protocol_by_density_matrix(psi, fr, fb, meas.correction(m))
                assert raw == pytest.approx(p_ref, abs=1e-14)
                np.testing.assert_allclose(np.outer(a, a.conj()), rho_ref, atol=1e-14)


# --- enumeration ----------------------------------------------------------


@pytest.mark.parametrize("N", [2, 3])
def test_enumerate_identity_channels(N):
    psi = haar_state(N, 1)
    res = enumerate_outcomes(psi, identity(N), identity(N))
    assert len(res.records) == N * N
    assert res.total_probability == pytest.approx(1.0, abs=1e-12)
    for r in res.records:
        assert fidelity(r.output, psi) == pytest.approx(1.0, abs=1e-12)
        assert r.prob == r.raw_norm2
    assert [r.key for r in res.records] == sorted(r.key for r in res.records)


def test_enumerate_full_depolarizing():
    c = build_standard_channel("uniform_depolarizing", 2, p=1.0)
    res = enumerate_outcomes(haar_state(2, 4), c, c)
    np.testing.assert_allclose(res.averaged_output, np.eye(2) / 2, atol=1e-12)


@pytest.mark.parametrize("p", [0.0, 0.1, 0.35, 0.5, 0.9])
def test_enumerate_dephasing_on_r(p):
    cr = build_standard_channel("dephasing", 2, p=p)
    res = enumerate_outcomes(PLUS, cr, identity(2))
    assert len(res.records) == 4 * 2
    # reference: brute-force density matrices over the 2 * 4 branches
    meas = BellMeasurement.weyl(2)
    ref = sum(
        protocol_by_density_matrix(PLUS, fr, np.eye(2), meas.correction(m))[1]
        for m in meas.labels
        for fr in cr.kraus
    )
    np.testing.assert_allclose(res.averaged_output, ref, atol=1e-14)
    # frozen: {sqrt(1-p) I, sqrt(p) Z} scales coherences by 1 - 2p
    assert abs(res.averaged_output[0, 1]) == pytest.approx(abs(1 - 2 * p) / 2, abs=1e-12)


@pytest.mark.parametrize("N", [2, 3, 4])
def test_sequential_error_reading(N):
    meas = BellMeasurement.weyl(N)
    cr, cb = random_kraus_channel(N, 3, N), random_kraus_channel(N, 2, N + 50)
    psi = haar_state(N, N + 100)
    res = enumerate_outcomes(psi, cr, cb, meas)
    crt = transpose_channel(cr)
    expected = np.zeros((N, N), dtype=complex)
    for m in meas.labels:
        u = meas.correction(m)
        step = apply_channel(conjugate_channel(crt, u), projector(psi))
        expected += meas.weight(m) / N**2 * apply_channel(conjugate_channel(cb, u), step)
    np.testing.assert_allclose(res.averaged_output, expected, atol=1e-10)
    assert is_density_matrix(res.averaged_output)


@pytest.mark.parametrize("N", [2, 3, 4])
def test_probability_conservation_random(N):
    for seed in range(5):
        cr = random_kraus_channel(N, 1 + seed % (N * N), seed)
        cb = random_kraus_channel(N, 1 + (seed * 3) % (N * N), seed + 9)
        res = enumerate_outcomes(haar_state(N, seed), cr, cb)
        assert res.total_probability == pytest.approx(1.0, abs=1e-10)


@pytest.mark.parametrize("kind", ["uniform_depolarizing", "dephasing"])
@pytest.mark.parametrize("N", [2, 3])
def test_homogeneous_channels_give_m_independent_outputs(kind, N):
    c = build_standard_channel(kind, N, p=0.3)
    res = enumerate_outcomes(haar_state(N, 2), c, c)
    states = [rho for _, rho in res.per_m_marginals.values()]
    probs = [p for p, _ in res.per_m_marginals.values()]
    for rho in states[1:]:
        np.testing.assert_allclose(rho, states[0], atol=1e-10)
    np.testing.assert_allclose(probs, 1 / N**2, atol=1e-12)


def test_accept_subset_renormalizes():
    N = 2
    cr = random_kraus_channel(N, 2, 3)
    psi = haar_state(N, 3)
    full = enumerate_outcomes(psi, cr, identity(N))
    part = enumerate_outcomes(psi, cr, identity(N), accept=[(0, 0), (1, 1)])
    acc = full.per_m_marginals[(0, 0)][0] + full.per_m_marginals[(1, 1)][0]
    assert part.acceptance_probability == pytest.approx(acc, abs=1e-14)
    assert part.total_probability == pytest.approx(1.0, abs=1e-12)
    assert part.accepted == ((0, 0), (1, 1))
    assert not part.complete
    with pytest.raises(ValueError):
        bob_premessage_marginal(part)


def test_impossible_post_selection():
    damp = build_standard_channel("amplitude_damping", 2, gamma=1.0)
    zero = ket(1, 0)
    res = enumerate_outcomes(zero, damp, identity(2))
    # outcomes with a = 1 never occur; their branches carry no state
    for r in res.records:
        if r.m[0] == 1:
            assert r.output is None and r.prob == pytest.approx(0.0, abs=1e-14)
    assert res.per_m_marginals[(1, 0)][1] is None
    assert res.total_probability == pytest.approx(1.0)
    with pytest.raises(ValueError, match="acceptance"):
        enumerate_outcomes(zero, damp, identity(2), accept=[(1, 0), (1, 1)])


def test_rejects_bad_inputs():
    with pytest.raises(ValueError):
        enumerate_outcomes(np.array([1.0, 1.0]), identity(2), identity(2))
    with pytest.raises(ValueError):
        enumerate_outcomes(PLUS, identity(3), identity(2))


# --- closed form ----------------------------------------------------------


def test_prediction_identity_channels_identical():
    psi = haar_state(3, 3)
    a = enumerate_outcomes(psi, identity(3), identity(3))
    b = predict_outcomes_via_effective_error(psi, identity(3), identity(3))
    dprob, infid = compare_branchwise(a, b)
    assert dprob < 1e-15 and infid < 1e-14


def test_prediction_random_rank4_qubit():
    cr, cb = random_kraus_channel(2, 4, 77), random_kraus_channel(2, 4, 78)
    psi = haar_state(2, 79)
    dprob, infid = compare_branchwise(enumerate_outcomes(psi, cr, cb), predict_outcomes_via_effective_error(psi, cr, cb))
    assert dprob < 1e-10 and infid < 1e-10


def test_prediction_qutrit_dephasing_and_unitary_error():
    cr = build_standard_channel("dephasing", 3, p=0.3)
    cb = build_standard_channel("unitary_error", 3, unitary=haar_unitary(3, 1), p=0.4)
    psi = haar_state(3, 2)
    dprob, infid = compare_branchwise(enumerate_outcomes(psi, cr, cb), predict_outcomes_via_effective_error(psi, cr, cb))
    assert dprob < 1e-10 and infid < 1e-10


def test_prediction_with_accept_subset():
    cr, cb = random_kraus_channel(3, 2, 1), random_kraus_channel(3, 2, 2)
    psi = haar_state(3, 3)
    acc = [(0, 1), (2, 2)]
    a = enumerate_outcomes(psi, cr, cb, accept=acc)
    b = predict_outcomes_via_effective_error(psi, cr, cb, accept=acc)
    assert a.acceptance_probability == pytest.approx(b.acceptance_probability, abs=1e-12)
    dprob, infid = compare_branchwise(a, b)
    assert dprob < 1e-10 and infid < 1e-10


# --- pre-message marginal -------------------------------------------------


@pytest.mark.parametrize("N", [2, 3, 4])
def test_premessage_marginal(N):
    psi = haar_state(N, 8)
    res = enumerate_outcomes(psi, identity(N), identity(N))
    np.testing.assert_allclose(bob_premessage_marginal(res), np.eye(N) / N, atol=1e-12)
    cb = random_kraus_channel(N, 3, N)
    res = enumerate_outcomes(psi, identity(N), cb)
    np.testing.assert_allclose(bob_premessage_marginal(res), apply_channel(cb, np.eye(N) / N), atol=1e-10)
    cr = random_kraus_channel(N, 3, N + 1)
    res = enumerate_outcomes(psi, cr, identity(N))
    np.testing.assert_allclose(
        bob_premessage_marginal(res), apply_channel(transpose_channel(cr), np.eye(N) / N), atol=1e-10
    )


# --- sampling -------------------------------------------------------------


def test_sampling_identity_frequencies():
    shots = 10_000
    res = sample_outcomes(PLUS, identity(2), identity(2), shots=shots, seed=3)
    sigma = np.sqrt(0.25 * 0.75 / shots)
    for m, p in res.m_marginal().items():
        assert abs(p - 0.25) < 5 * sigma
    assert res.total_probability == pytest.approx(1.0)
    assert res.shots == shots


def test_sampling_deterministic():
    cr, cb = random_kraus_channel(3, 3, 1), random_kraus_channel(3, 2, 2)
    psi = haar_state(3, 3)
    a = sample_outcomes(psi, cr, cb, shots=5000, seed=11)
    b = sample_outcomes(psi, cr, cb, shots=5000, seed=11)
    np.testing.assert_array_equal(a.branch_probs, b.branch_probs)
    np.testing.assert_array_equal(a.averaged_output, b.averaged_output)
    c = sample_outcomes(psi, cr, cb, shots=5000, seed=12)
    assert not np.array_equal(a.branch_probs, c.branch_probs)


@pytest.mark.parametrize("N", [2, 3])
def test_sampling_tv_distance(N):
    shots = 20_000
    cr, cb = random_kraus_channel(N, 2, 5), build_standard_channel("amplitude_damping", 2, gamma=0.4) if N == 2 else random_kraus_channel(N, 4, 6)
    psi = haar_state(N, 7)
    exact = enumerate_outcomes(psi, cr, cb).m_marginal()
    emp = sample_outcomes(psi, cr, cb, shots=shots, seed=0).m_marginal()
    tv = 0.5 * sum(abs(exact[m] - emp[m]) for m in exact)
    assert tv < 5 * np.sqrt(N**2 / shots)


def test_sampling_with_accept_set():
    res = sample_outcomes(PLUS, identity(2), identity(2), accept=[(0, 0)], shots=100, seed=0)
    assert res.m_marginal() == {(0, 0): 1.0}
    assert res.acceptance_probability == pytest.approx(0.25)


def test_sampling_requires_shots():
    with pytest.raises(ValueError):
        sample_outcomes(PLUS, identity(2), identity(2), shots=0)
