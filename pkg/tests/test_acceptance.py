"""Acceptance suite: one test per criterion, each recording a PASS/FAIL line.

The lines are printed in the "acceptance criteria" section of the pytest
terminal summary (see ``conftest.py``).
"""

from fractions import Fraction

import numpy as np

from conftest import record_acceptance
from noisyteleport.analysis import (
    VERDICT_EQUAL,
    angular_momentum_transpose_report,
    average_fidelity_mc,
    average_from_entanglement_fidelity,
    compare_teleport_vs_direct,
    entanglement_fidelity,
    homogeneity_report,
)
from noisyteleport.channels import apply_channel, build_standard_channel
from noisyteleport.haar import haar_state, haar_states, random_kraus_channel
from noisyteleport.noisy_sim import (
    bob_premessage_marginal,
    compare_branchwise,
    enumerate_outcomes,
    predict_outcomes_via_effective_error,
    sample_outcomes,
)
from noisyteleport.qmath import fidelity
from noisyteleport.scenario import dumps, parse_scenario, run_scenario
from noisyteleport.teleport import BellMeasurement, check_povm_completeness, ideal_teleport_outcome


def report(number, passed, detail):
    record_acceptance(number, passed, detail)
    print(f"[{'PASS' if passed else 'FAIL'}] criterion {number}: {detail}")
    assert passed, detail


def random_pairs(N, count, base_seed):
    """Seeded random channel pairs with ranks spread over 1..N^2."""
    rng = np.random.default_rng(base_seed)
    for k in range(count):
        rank_r, rank_b = (int(r) for r in rng.integers(1, N * N + 1, size=2))
        yield k, random_kraus_channel(N, rank_r, base_seed * 1000 + 2 * k), random_kraus_channel(
            N, rank_b, base_seed * 1000 + 2 * k + 1
        )


def test_criterion_01_povm_completeness():
    dev = {N: check_povm_completeness(BellMeasurement.weyl(N)) for N in (2, 3, 4, 5)}
    worst = max(dev.values())
    report(1, worst < 1e-12, f"POVM completeness, max deviation {worst:.2e} over N=2..5 (tol 1e-12)")


def test_criterion_02_ideal_teleportation():
    worst_f, worst_p = 0.0, 0.0
    for N in (2, 3, 4):
        meas = BellMeasurement.weyl(N)
        for psi in haar_states(N, 100, seed=200 + N):
            for m in meas.labels:
                prob, out = ideal_teleport_outcome(psi, meas, m)
                worst_f = max(worst_f, 1 - fidelity(out, psi))
                worst_p = max(worst_p, abs(prob - 1 / N**2))
    ok = worst_f < 1e-12 and worst_p < 1e-12
    report(2, ok, f"ideal teleportation, max infidelity {worst_f:.2e}, max |p - 1/N^2| {worst_p:.2e} (tol 1e-12)")


def _oracle_runs():
    for N in (2, 3, 4):
        for k, cr, cb in random_pairs(N, 20, base_seed=N):
            for psi in haar_states(N, 10, seed=N * 100 + k):
                brute = enumerate_outcomes(psi, cr, cb)
                closed = predict_outcomes_via_effective_error(psi, cr, cb)
                yield brute, closed


def test_criteria_03_04_oracle_equivalence_and_conservation():
    worst_dp, worst_inf, worst_total, runs = 0.0, 0.0, 0.0, 0
    for brute, closed in _oracle_runs():
        dp, inf = compare_branchwise(brute, closed)
        worst_dp = max(worst_dp, dp)
        worst_inf = max(worst_inf, inf)
        worst_total = max(worst_total, abs(brute.total_probability - 1), abs(closed.total_probability - 1))
        runs += 1
    ok3 = worst_dp < 1e-10 and worst_inf < 1e-10
    ok4 = worst_total < 1e-10
    record_acceptance(
        3, ok3, f"effective-error oracle, {runs} runs, max |dprob| {worst_dp:.2e}, max infidelity {worst_inf:.2e} (tol 1e-10)"
    )
    print(f"[{'PASS' if ok3 else 'FAIL'}] criterion 3")
    report(4, ok4, f"probability conservation, max |sum - 1| {worst_total:.2e} over {runs} runs (tol 1e-10)")
    assert ok3


def test_criterion_05_premessage_marginal():
    worst_id, worst_b = 0.0, 0.0
    for N in (2, 3, 4):
        psi = haar_state(N, 50 + N)
        ident = build_standard_channel("identity", N)
        res = enumerate_outcomes(psi, ident, ident)
        worst_id = max(worst_id, np.max(np.abs(bob_premessage_marginal(res) - np.eye(N) / N)))
        for cb in (random_kraus_channel(N, 3, 60 + N), build_standard_channel("uniform_depolarizing", N, p=0.4)):
            res = enumerate_outcomes(psi, ident, cb)
            target = apply_channel(cb, np.eye(N) / N)
            worst_b = max(worst_b, np.max(np.abs(bob_premessage_marginal(res) - target)))
    ok = worst_id < 1e-12 and worst_b < 1e-10
    report(5, ok, f"pre-message marginal, identity dev {worst_id:.2e} (tol 1e-12), B-noise dev {worst_b:.2e} (tol 1e-10)")


def test_criterion_06_angular_momentum():
    js = [Fraction(1, 2), 1, Fraction(3, 2), 2, Fraction(5, 2), 3]
    worst = max(max(v for _, v in angular_momentum_transpose_report(j).rows()) for j in js)
    report(6, worst < 1e-12, f"angular momentum transposition, max norm {worst:.2e} for j=1/2..3 (tol 1e-12)")


def test_criterion_07_homogeneity_classification():
    checks = {}
    for N in (2, 3):
        rep = homogeneity_report(build_standard_channel("uniform_depolarizing", N, p=0.35))
        checks[f"depolarizing N={N}"] = rep.covariant_under_weyl and rep.transpose_homogeneous
    damp = homogeneity_report(build_standard_channel("amplitude_damping", 2, gamma=0.3))
    checks["amplitude damping fails covariance"] = not damp.covariant_under_weyl
    for N in (2, 3):
        rep = homogeneity_report(build_standard_channel("dephasing", N, p=0.3))
        checks[f"dephasing N={N} transpose"] = rep.transpose_homogeneous
    failed = [k for k, v in checks.items() if not v]
    report(7, not failed, f"homogeneity classification, {len(checks)} checks, failed: {failed or 'none'}")


def test_criterion_08_teleport_vs_direct():
    cases = [(f"random N={N} #{k}", cr, cb) for N in (2, 3) for k, cr, cb in random_pairs(N, 10, base_seed=80 + N)]
    for N in (2, 3):
        c = build_standard_channel("uniform_depolarizing", N, p=0.3)
        cases.append((f"depolarizing N={N}", c, c))
        d = build_standard_channel("dephasing", N, p=0.2)
        cases.append((f"dephasing N={N}", d, d))
    bad, worst_dev, worst_spread = [], 0.0, 0.0
    for name, cr, cb in cases:
        rep = compare_teleport_vs_direct(cr, cb, samples=500, seed=1, tol=1e-9)
        worst_dev = max(worst_dev, rep.max_fidelity_deviation, rep.max_state_deviation)
        if rep.verdict != VERDICT_EQUAL:
            bad.append(name)
        hr, hb = homogeneity_report(cr), homogeneity_report(cb)
        if hr.predicts_m_independent and hb.predicts_m_independent:
            spread = rep.per_m_spread()
            worst_spread = max(worst_spread, spread)
            if spread > 1e-9:
                bad.append(f"{name} per-m spread")
    ok = not bad
    report(
        8,
        ok,
        f"teleport vs direct, {len(cases)} pairs, max deviation {worst_dev:.2e}, "
        f"homogeneous per-m spread {worst_spread:.2e} (tol 1e-9), failures: {bad or 'none'}",
    )


SAMPLED = """{
  "dim": 3,
  "input_state": "haar(9)",
  "channel_r": {"kind": "dephasing", "params": {"p": 0.3}},
  "channel_b": {"kind": "uniform_depolarizing", "params": {"p": 0.2}},
  "mode": {"sample": {"shots": 100000, "seed": 5}},
  "reports": ["outcomes"]
}"""


def test_criterion_09_monte_carlo():
    shots = 100_000
    worst_z = 0.0
    cases = [
        (2, random_kraus_channel(2, 3, 90), build_standard_channel("amplitude_damping", 2, gamma=0.3)),
        (3, random_kraus_channel(3, 4, 91), random_kraus_channel(3, 2, 92)),
    ]
    for N, cr, cb in cases:
        psi = haar_state(N, 93)
        exact = enumerate_outcomes(psi, cr, cb).m_marginal()
        emp = sample_outcomes(psi, cr, cb, shots=shots, seed=7).m_marginal()
        for m, p in exact.items():
            sigma = np.sqrt(max(p * (1 - p), 1e-300) / shots)
            worst_z = max(worst_z, abs(emp.get(m, 0.0) - p) / sigma)
    first = dumps(run_scenario(parse_scenario(SAMPLED)).data)
    second = dumps(run_scenario(parse_scenario(SAMPLED)).data)
    ok = worst_z < 5 and first == second
    report(9, ok, f"Monte Carlo m-marginals, worst deviation {worst_z:.2f} sigma (bound 5), byte-identical: {first == second}")


# The sampling error of a constant-fidelity channel (depolarizing) is zero, so
# its stderr is pure roundoff; the floor absorbs last-digit summation error only.
ROUNDOFF_FLOOR = 1e-14


def test_criterion_10_fidelity_cross_check():
    worst, rows = 0.0, []
    for N in (2, 3):
        for kind, p in (("uniform_depolarizing", 0.3), ("uniform_depolarizing", 0.6), ("dephasing", 0.3)):
            c = build_standard_channel(kind, N, p=p)
            action = lambda rho, c=c: apply_channel(c, rho)
            mean, err = average_fidelity_mc(action, N, samples=10_000, seed=N)
            predicted = average_from_entanglement_fidelity(entanglement_fidelity(action, N), N)
            ratio = abs(mean - predicted) / (3 * err + ROUNDOFF_FLOOR)
            worst = max(worst, ratio)
            rows.append(f"{kind}(p={p}) N={N}: |d|={abs(mean - predicted):.1e} stderr={err:.1e}")
    report(
        10,
        worst < 1,
        f"MC average fidelity vs entanglement fidelity, worst |d|/(3 stderr + 1e-14) = {worst:.2f}; " + "; ".join(rows),
    )
