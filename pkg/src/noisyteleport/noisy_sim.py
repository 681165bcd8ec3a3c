"""Teleportation with noisy entanglement distribution.

Two independent routes produce the same branch data.  The brute-force route
builds the tripartite A (x) R (x) B state for every error pair
``(x_r, x_b)``, projects A and R onto each Bell state and applies the
correction on B.  The closed-form route skips the tripartite state and
applies the effective error

    F_out(m; x_r, x_b) = U(m) F_B(x_b) F_R(x_r)^T U(m)^dag

to the input, with amplitude prefactor ``sqrt(chi(m)) / N``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable

import numpy as np

from .channels import KrausChannel
from .qmath import TOL_NORM, as_operator, as_state, dagger
from .teleport import BellMeasurement, normalize_accept

# Branches at or below this probability carry no output state.
NULL_BRANCH = 1e-14
# Minimum total probability of the accepted outcomes.
MIN_ACCEPTANCE = 1e-12


@dataclass(frozen=True, eq=False)
class OutcomeRecord:
    m: Hashable
    x_r: int
    x_b: int
    prob: float
    raw_norm2: float
    output: np.ndarray | None

    @property
    def key(self) -> tuple:
        return (self.m, self.x_r, self.x_b)


@dataclass(frozen=True, eq=False)
class SimulationResult:
    """Branch records in ``(m, x_r, x_b)`` order plus the B-side aggregates.

    ``per_m_marginals[m]`` is ``(prob of m, conditional density matrix)``; the
    matrix is ``None`` for outcomes that never occur.  ``premessage_marginal``
    mixes the branch states with the corrections undone.
    """

    records: list
    averaged_output: np.ndarray
    per_m_marginals: dict
    premessage_marginal: np.ndarray
    acceptance_probability: float
    accepted: tuple
    complete: bool
    shots: int | None = None
    branch_probs: np.ndarray = field(default=None, repr=False)

    @property
    def total_probability(self) -> float:
        return float(sum(r.prob for r in self.records))

    def m_marginal(self) -> dict:
        return {m: p for m, (p, _) in self.per_m_marginals.items()}


def _check_psi(psi, N: int) -> np.ndarray:
    psi = as_state(psi)
    if psi.shape[0] != N:
        raise ValueError(f"input has dimension {psi.shape[0]}, expected {N}")
    if abs(np.vdot(psi, psi).real - 1.0) >= TOL_NORM:
        raise ValueError("input state must be normalized")
    return psi


def _check_channels(cr: KrausChannel, cb: KrausChannel, meas: BellMeasurement):
    for name, c in (("R", cr), ("B", cb)):
        if c.dim != meas.dim:
            raise ValueError(f"channel {name} has dimension {c.dim}, measurement {meas.dim}")


def noisy_initial_state(psi, fr, fb) -> np.ndarray:
    """``(1/sqrt(N)) sum_n |psi>_A (x) F_R|n>_R (x) F_B|n>_B``, unnormalized."""
    psi = as_state(psi)
    fr = as_operator(fr)
    fb = as_operator(fb)
    N = psi.shape[0]
    if fr.shape != (N, N) or fb.shape != (N, N):
        raise ValueError(f"error operators must be {N}x{N}")
    return np.einsum("a,rn,bn->arb", psi, fr, fb).reshape(-1) / np.sqrt(N)


def measure_and_correct(state, meas: BellMeasurement, m) -> tuple[float, np.ndarray | None]:
    """Project A, R of an ``N^3`` state onto ``<P(m)|`` and apply ``U(m)`` to B.

    Returns the squared norm of the projected branch and the normalized
    corrected B state (``None`` when the branch weight is negligible).
    """
    state = as_state(state)
    N = meas.dim
    if state.shape[0] != N**3:
        raise ValueError(f"expected a state of length {N**3}, got {state.shape[0]}")
    k = meas.index(m)
    bra = np.conj(meas.bell_vectors()[k])
    projected = bra @ state.reshape(N * N, N)
    corrected = meas.corrections[k] @ projected
    raw = float(np.real(np.vdot(corrected, corrected)))
    if raw <= NULL_BRANCH:
        return raw, None
    return raw, corrected / np.sqrt(raw)


def _brute_force_amplitudes(psi, cr, cb, meas, indices) -> np.ndarray:
    """Corrected, unnormalized B amplitudes for all branches, ``[m, x_r, x_b, b]``.

    Same construction as :func:`noisy_initial_state` followed by
    :func:`measure_and_correct`, batched over error pairs and outcomes.
    """
    N = meas.dim
    initial = np.einsum("a,xrn,ybn->xyarb", psi, cr.kraus, cb.kraus) / np.sqrt(N)
    initial = initial.reshape(len(cr), len(cb), N * N, N)
    bras = np.conj(meas.bell_vectors()[indices])
    projected = np.einsum("mk,xykb->mxyb", bras, initial)
    return np.einsum("mcb,mxyb->mxyc", meas.corrections[indices], projected)


def effective_error(meas: BellMeasurement, m, fr, fb) -> np.ndarray:
    """``U(m) F_B F_R^T U(m)^-1``."""
    u = meas.correction(m)
    fr = as_operator(fr)
    fb = as_operator(fb)
    return u @ fb @ fr.T @ np.linalg.inv(u)


def effective_errors(meas: BellMeasurement, cr: KrausChannel, cb: KrausChannel, indices=None):
    """All effective error operators, shape ``[m, x_r, x_b, N, N]``."""
    if indices is None:
        indices = np.arange(len(meas))
    u = meas.corrections[indices]
    inner = np.einsum("yij,xkj->xyik", cb.kraus, cr.kraus)  # F_B(y) F_R(x)^T
    return np.einsum("mij,xyjk,mlk->mxyil", u, inner, np.conj(u))


def _assemble(meas, accepted, indices, amps, weights, acceptance, complete, shots=None):
    """Turn per-branch amplitudes and weights into a :class:`SimulationResult`.

    ``weights[m, x_r, x_b]`` are the reported branch probabilities (exact or
    empirical); output states come from normalizing ``amps``.
    """
    raw = np.sum(np.abs(amps) ** 2, axis=-1)
    norms = np.sqrt(np.where(raw > NULL_BRANCH, raw, 1.0))
    outputs = amps / norms[..., None]
    live = raw > NULL_BRANCH

    records = []
    M, KR, KB = raw.shape
    for i in range(M):
        m = accepted[i]
        for xr in range(KR):
            for xb in range(KB):
                out = outputs[i, xr, xb] if live[i, xr, xb] else None
                records.append(
                    OutcomeRecord(m, xr, xb, float(weights[i, xr, xb]), float(raw[i, xr, xb]), out)
                )

    w_live = np.where(live, weights, 0.0)
    dens = np.einsum("mxy,mxyi,mxyj->mij", w_live, outputs, np.conj(outputs))
    averaged = dens.sum(axis=0)
    u = meas.corrections[indices]
    premessage = np.einsum("mji,mjk,mkl->il", np.conj(u), dens, u)

    per_m = {}
    for i, m in enumerate(accepted):
        pm = float(weights[i].sum())
        per_m[m] = (pm, dens[i] / pm if pm > NULL_BRANCH else None)

    return SimulationResult(
        records=records,
        averaged_output=averaged,
        per_m_marginals=per_m,
        premessage_marginal=premessage,
        acceptance_probability=float(acceptance),
        accepted=tuple(accepted),
        complete=complete,
        shots=shots,
        branch_probs=np.asarray(weights, dtype=float),
    )


def _exact_from_amplitudes(meas, accepted, indices, amps):
    raw = np.sum(np.abs(amps) ** 2, axis=-1)
    complete = len(accepted) == len(meas)
    acceptance = float(raw.sum())
    if acceptance < MIN_ACCEPTANCE:
        raise ValueError(
            f"acceptance probability {acceptance:.3e} is below {MIN_ACCEPTANCE}; "
            "post-selection on this accept set is impossible"
        )
    weights = raw if complete else raw / acceptance
    return weights, acceptance, complete


def _prepare(psi, cr, cb, meas, accept):
    if meas is None:
        meas = BellMeasurement.weyl(cr.dim)
    _check_channels(cr, cb, meas)
    psi = _check_psi(psi, meas.dim)
    accepted = normalize_accept(meas, accept)
    indices = np.array([meas.index(m) for m in accepted])
    return psi, meas, accepted, indices


def enumerate_outcomes(psi, cr: KrausChannel, cb: KrausChannel, meas=None, accept=None):
    """Exact brute-force enumeration over ``(m in accept, x_r, x_b)``.

    With a proper accept subset, probabilities are renormalized by the total
    acceptance probability, which is reported on the result.
    """
    psi, meas, accepted, indices = _prepare(psi, cr, cb, meas, accept)
    amps = _brute_force_amplitudes(psi, cr, cb, meas, indices)
    weights, acceptance, complete = _exact_from_amplitudes(meas, accepted, indices, amps)
    return _assemble(meas, accepted, indices, amps, weights, acceptance, complete)


def predict_outcomes_via_effective_error(psi, cr: KrausChannel, cb: KrausChannel, meas=None, accept=None):
    """Same result as :func:`enumerate_outcomes`, from the effective error operators.

    Each branch is ``(sqrt(chi(m)) / N) F_out(m; x_r, x_b) |psi>``.
    """
    psi, meas, accepted, indices = _prepare(psi, cr, cb, meas, accept)
    N = meas.dim
    f_out = effective_errors(meas, cr, cb, indices)
    pref = np.sqrt(meas.chi[indices]) / N
    amps = pref[:, None, None, None] * np.einsum("mxyij,j->mxyi", f_out, psi)
    weights, acceptance, complete = _exact_from_amplitudes(meas, accepted, indices, amps)
    return _assemble(meas, accepted, indices, amps, weights, acceptance, complete)


def sample_outcomes(psi, cr, cb, meas=None, accept=None, shots: int = 1000, seed: int = 0):
    """Monte Carlo version of :func:`enumerate_outcomes`.

    The error pair ``(x_r, x_b)`` is drawn first from its marginal, then ``m``
    from the conditional distribution given the pair.  Reported branch
    probabilities are empirical frequencies; output states are exact.
    """
    if int(shots) < 1:
        raise ValueError("shots must be at least 1")
    shots = int(shots)
    psi, meas, accepted, indices = _prepare(psi, cr, cb, meas, accept)
    amps = _brute_force_amplitudes(psi, cr, cb, meas, indices)
    probs, acceptance, complete = _exact_from_amplitudes(meas, accepted, indices, amps)
    probs = probs / probs.sum()

    rng = np.random.default_rng(seed)
    pair = probs.sum(axis=0)
    pair_counts = rng.multinomial(shots, pair.ravel() / pair.sum()).reshape(pair.shape)
    counts = np.zeros_like(probs, dtype=np.int64)
    for xr, xb in zip(*np.nonzero(pair_counts)):
        cond = probs[:, xr, xb] / pair[xr, xb]
        counts[:, xr, xb] = rng.multinomial(pair_counts[xr, xb], cond / cond.sum())
    weights = counts / shots
    return _assemble(meas, accepted, indices, amps, weights, acceptance, complete, shots)


def bob_premessage_marginal(result: SimulationResult) -> np.ndarray:
    """B's state before learning ``m``: branch states with corrections undone."""
    if not result.complete:
        raise ValueError("the pre-message marginal is defined for accept = all only")
    return result.premessage_marginal


def compare_branchwise(a: SimulationResult, b: SimulationResult) -> tuple[float, float]:
    """Largest probability difference and largest infidelity over matching branches.

    Infidelity is only taken over branches with probability above ``1e-12``.
    """
    if [r.key for r in a.records] != [r.key for r in b.records]:
        raise ValueError("results enumerate different branches")
    dprob = 0.0
    infid = 0.0
    for ra, rb in zip(a.records, b.records):
        dprob = max(dprob, abs(ra.prob - rb.prob))
        if max(ra.prob, rb.prob) > 1e-12:
            if ra.output is None or rb.output is None:
                infid = max(infid, 1.0)
            else:
                infid = max(infid, 1.0 - float(abs(np.vdot(ra.output, rb.output)) ** 2))
    return dprob, infid
