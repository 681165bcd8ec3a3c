"""Fidelity metrics and the teleportation versus direct transmission comparison."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np
from scipy.linalg import expm

from .channels import (
    HomogeneityReport,
    KrausChannel,
    apply_channel,
    check_transpose_homogeneity,
    check_unitary_homogeneity,
    transpose_channel,
)
from .haar import haar_states
from .noisy_sim import NULL_BRANCH, enumerate_outcomes
from .qmath import as_operator, dagger, tensor
from .teleport import BellMeasurement, max_entangled

VERDICT_EQUAL = "equal-within-tol"
VERDICT_NOISIER = "teleport-noisier-without-m"
VERDICT_MISMATCH = "mismatch"

ChannelAction = Callable[[np.ndarray], np.ndarray]


def average_fidelity_mc(action: ChannelAction, N: int, samples: int = 10_000, seed=0):
    """Mean and standard error of ``<psi|action(|psi><psi|)|psi>`` over Haar states."""
    if samples < 100:
        raise ValueError("average_fidelity_mc needs at least 100 samples")
    states = haar_states(N, samples, seed)
    f = np.empty(samples)
    for k, psi in enumerate(states):
        out = action(np.outer(psi, np.conj(psi)))
        f[k] = np.real(np.vdot(psi, out @ psi))
    return float(f.mean()), float(f.std(ddof=1) / np.sqrt(samples))


def entanglement_fidelity(action: ChannelAction, N: int) -> float:
    """``<E|(action (x) id)(|E><E|)|E>`` for the maximally entangled pair ``E``.

    ``action`` must be linear on arbitrary N x N matrices.
    """
    e = max_entangled(N)
    big = np.zeros((N * N, N * N), dtype=complex)
    for i in range(N):
        for j in range(N):
            unit = np.zeros((N, N), dtype=complex)
            unit[i, j] = 1.0
            big += tensor(as_operator(action(unit)), unit) / N
    return float(np.real(np.vdot(e, big @ e)))


def average_from_entanglement_fidelity(fe: float, N: int) -> float:
    return (N * fe + 1) / (N + 1)


# --- superoperators -------------------------------------------------------


def _superop_from_action(action: ChannelAction, N: int) -> np.ndarray:
    """Tensor ``S[i, j, k, l]`` with ``action(rho)[i, j] = sum S[i, j, k, l] rho[k, l]``."""
    s = np.zeros((N, N, N, N), dtype=complex)
    for k in range(N):
        for l in range(N):
            unit = np.zeros((N, N), dtype=complex)
            unit[k, l] = 1.0
            s[:, :, k, l] = action(unit)
    return s


def _probe_states(N: int):
    """Pure states and weights with ``|k><l| = sum_q w_q |phi_q><phi_q|``."""
    probes = []
    for k in range(N):
        for l in range(N):
            if k == l:
                phi = np.zeros(N, dtype=complex)
                phi[k] = 1.0
                probes.append((k, l, 1.0, phi))
                continue
            for q in range(4):
                phase = 1j**q
                phi = np.zeros(N, dtype=complex)
                phi[k] = 1.0
                phi[l] = phase
                probes.append((k, l, phase / 2, phi / np.sqrt(2)))
    return probes


def teleport_superoperators(cr: KrausChannel, cb: KrausChannel, meas: BellMeasurement):
    """Outcome-resolved teleportation maps from brute-force enumeration.

    ``S[m]`` sends ``|psi><psi|`` to the unnormalized corrected B state of
    outcome ``m`` (its trace is the probability of ``m``).  Built by
    simulating the full protocol on a polarization set of pure inputs.
    """
    N = meas.dim
    s = np.zeros((len(meas), N, N, N, N), dtype=complex)
    for k, l, weight, phi in _probe_states(N):
        res = enumerate_outcomes(phi, cr, cb, meas)
        for i, m in enumerate(meas.labels):
            pm, rho = res.per_m_marginals[m]
            if rho is not None:
                s[i, :, :, k, l] += weight * pm * rho
    return s


def direct_superoperators(cr: KrausChannel, cb: KrausChannel, meas: BellMeasurement):
    """Direct transmission through ``cr^T`` then ``cb``, seen in the frame of each ``m``.

    ``S[m](rho) = (chi(m)/N^2) U(m) D(U(m)^dag rho U(m)) U(m)^dag`` where ``D``
    is the sequential transmission.
    """
    N = meas.dim
    crt = transpose_channel(cr)
    direct = _superop_from_action(lambda r: apply_channel(cb, apply_channel(crt, r)), N)
    u = meas.corrections
    w = meas.chi / N**2
    # U D(U^dag rho U) U^dag, contracted index by index
    return np.einsum("m,mia,abcd,mkc,mld,mjb->mijkl", w, u, direct, np.conj(u), u, np.conj(u))


def _apply_superop(s: np.ndarray, rho: np.ndarray) -> np.ndarray:
    return np.einsum("...ijkl,kl->...ij", s, rho)


def teleport_action(cr: KrausChannel, cb: KrausChannel, meas: BellMeasurement | None = None):
    """Linear map of the full protocol with the m-record discarded."""
    if meas is None:
        meas = BellMeasurement.weyl(cr.dim)
    s = teleport_superoperators(cr, cb, meas).sum(axis=0)
    return lambda rho: _apply_superop(s, as_operator(rho))


# --- comparison -----------------------------------------------------------


@dataclass
class ComparisonReport:
    """Teleportation against sequential direct transmission on the same inputs.

    ``avg_fidelity_direct`` evaluates the direct route in the frame of each
    outcome (input ``U(m)^dag psi``, output rotated back by ``U(m)``), which
    is the transmission teleportation is equivalent to.  The ``plain`` and
    ``untransposed`` variants drop the frame and the transposition of the R
    channel respectively.
    """

    avg_fidelity_teleport: float
    avg_fidelity_direct: float
    per_m_fidelity: dict
    per_m_probability: dict
    entanglement_fidelity_teleport: float
    entanglement_fidelity_direct: float
    verdict: str
    max_fidelity_deviation: float
    max_state_deviation: float
    avg_fidelity_direct_plain: float
    avg_fidelity_direct_untransposed: float
    entanglement_fidelity_direct_untransposed: float
    output_deviation_without_m: float
    n_inputs: int
    tol: float
    resolve_m: bool = True
    warnings: list = field(default_factory=list)

    def per_m_spread(self) -> float:
        vals = [v for v in self.per_m_fidelity.values() if v is not None]
        return float(max(vals) - min(vals)) if vals else 0.0

    def to_dict(self) -> dict:
        return {
            "avg_fidelity_teleport": self.avg_fidelity_teleport,
            "avg_fidelity_direct": self.avg_fidelity_direct,
            "avg_fidelity_direct_plain": self.avg_fidelity_direct_plain,
            "avg_fidelity_direct_untransposed": self.avg_fidelity_direct_untransposed,
            "entanglement_fidelity_teleport": self.entanglement_fidelity_teleport,
            "entanglement_fidelity_direct": self.entanglement_fidelity_direct,
            "entanglement_fidelity_direct_untransposed": self.entanglement_fidelity_direct_untransposed,
            "per_m": [
                {"m": list(m) if isinstance(m, tuple) else m,
                 "probability": self.per_m_probability[m],
                 "fidelity": self.per_m_fidelity[m]}
                for m in self.per_m_fidelity
            ],
            "max_fidelity_deviation": self.max_fidelity_deviation,
            "max_state_deviation": self.max_state_deviation,
            "output_deviation_without_m": self.output_deviation_without_m,
            "n_inputs": self.n_inputs,
            "tol": self.tol,
            "resolve_m": self.resolve_m,
            "verdict": self.verdict,
            "warnings": list(self.warnings),
        }


def _trace_norm(a: np.ndarray) -> float:
    return float(np.sum(np.abs(np.linalg.eigvalsh((a + dagger(a)) / 2))))


def compare_teleport_vs_direct(
    cr: KrausChannel,
    cb: KrausChannel,
    meas: BellMeasurement | None = None,
    psi_set=None,
    samples: int = 10_000,
    seed=0,
    tol: float = 1e-9,
    resolve_m: bool = True,
) -> ComparisonReport:
    """Compare teleportation through noisy R, B lines with direct transmission.

    The teleportation side comes from brute-force protocol simulation; the
    direct side applies ``cr^T`` then ``cb`` with :func:`apply_channel`.  With
    ``resolve_m`` the verdict asks whether the two agree outcome by outcome.
    Without it, teleported outputs with ``m`` discarded are compared to plain
    direct outputs, and a difference that disappears once ``m`` is resolved
    is reported as ``teleport-noisier-without-m``.
    """
    if meas is None:
        meas = BellMeasurement.weyl(cr.dim)
    N = meas.dim
    if cr.dim != N or cb.dim != N:
        raise ValueError("channel and measurement dimensions differ")
    if psi_set is None:
        psis = haar_states(N, samples, seed)
    else:
        psis = np.array([np.asarray(p, dtype=complex) for p in psi_set])
    rhos = np.einsum("si,sj->sij", psis, np.conj(psis))

    warnings = []
    crt = transpose_channel(cr)
    if not crt.trace_preserving:
        warnings.append(
            "transposed R channel is not trace preserving "
            f"(deviation {crt.completeness_deviation:.3e}); direct transmission "
            "through it is not a physical channel"
        )

    s_tel = teleport_superoperators(cr, cb, meas)
    s_dir = direct_superoperators(cr, cb, meas)

    def fid(out):  # <psi|out|psi> for every input and outcome
        return np.real(np.einsum("si,s...ij,sj->s...", np.conj(psis), out, psis))

    out_tel = np.einsum("mijkl,skl->smij", s_tel, rhos)
    out_dir = np.einsum("mijkl,skl->smij", s_dir, rhos)
    p_tel = np.real(np.einsum("smii->sm", out_tel))
    f_tel = fid(out_tel)
    f_dir = fid(out_dir)

    fdev = float(
        max(np.max(np.abs(f_tel - f_dir)), np.max(np.abs(f_tel.sum(1) - f_dir.sum(1))))
    )
    sdev = float(np.max(np.abs(out_tel - out_dir)))

    def plain(channel_r):
        action = lambda r: apply_channel(cb, apply_channel(channel_r, r))
        return np.array([np.real(np.vdot(p, action(r) @ p)) for p, r in zip(psis, rhos)])

    f_plain = plain(crt)
    f_untr = plain(cr)

    mixed_tel = out_tel.sum(axis=1)
    mixed_dir = np.array([apply_channel(cb, apply_channel(crt, r)) for r in rhos])
    dev_without_m = float(max(_trace_norm(a - b) for a, b in zip(mixed_tel, mixed_dir)))

    per_m_f, per_m_p = {}, {}
    for i, m in enumerate(meas.labels):
        live = p_tel[:, i] > 1e-12
        per_m_p[m] = float(p_tel[:, i].mean())
        per_m_f[m] = float(np.mean(f_tel[live, i] / p_tel[live, i])) if live.any() else None

    agree = fdev <= tol and sdev <= tol
    if not agree:
        verdict = VERDICT_MISMATCH
    elif resolve_m or dev_without_m <= tol:
        verdict = VERDICT_EQUAL
    else:
        verdict = VERDICT_NOISIER

    tel_sum = s_tel.sum(axis=0)
    dir_sum = s_dir.sum(axis=0)
    return ComparisonReport(
        avg_fidelity_teleport=float(f_tel.sum(1).mean()),
        avg_fidelity_direct=float(f_dir.sum(1).mean()),
        per_m_fidelity=per_m_f,
        per_m_probability=per_m_p,
        entanglement_fidelity_teleport=entanglement_fidelity(lambda r: _apply_superop(tel_sum, r), N),
        entanglement_fidelity_direct=entanglement_fidelity(lambda r: _apply_superop(dir_sum, r), N),
        verdict=verdict,
        max_fidelity_deviation=fdev,
        max_state_deviation=sdev,
        avg_fidelity_direct_plain=float(f_plain.mean()),
        avg_fidelity_direct_untransposed=float(f_untr.mean()),
        entanglement_fidelity_direct_untransposed=entanglement_fidelity(
            lambda r: apply_channel(cb, apply_channel(cr, r)), N
        ),
        output_deviation_without_m=dev_without_m,
        n_inputs=len(psis),
        tol=tol,
        resolve_m=resolve_m,
        warnings=warnings,
    )


# --- angular momentum -----------------------------------------------------


def parse_spin(j) -> Fraction:
    """Accept ``1/2``, ``"3/2"``, ``1.5`` ...; ``2j`` must be a positive integer."""
    try:
        jf = Fraction(str(j)) if not isinstance(j, Fraction) else j
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"invalid angular momentum {j!r}") from None
    if jf <= 0 or (2 * jf).denominator != 1:
        raise ValueError(f"angular momentum must be a positive multiple of 1/2, got {j!r}")
    return jf


def angular_momentum_operators(j):
    """``l_x, l_y, l_z`` in the ``l_z`` eigenbasis ``m = j, j-1, ..., -j`` (hbar = 1)."""
    jf = parse_spin(j)
    N = int(2 * jf) + 1
    jv = float(jf)
    mvals = jv - np.arange(N)
    lz = np.diag(mvals).astype(complex)
    lplus = np.zeros((N, N), dtype=complex)
    for k in range(1, N):
        # l_+ |m> = sqrt(j(j+1) - m(m+1)) |m+1>, and |m+1> sits one row up
        m = mvals[k]
        lplus[k - 1, k] = np.sqrt(jv * (jv + 1) - m * (m + 1))
    lminus = dagger(lplus)
    lx = (lplus + lminus) / 2
    ly = (lplus - lminus) / 2j
    return lx, ly, lz


def rotation_unitary(N: int, axis: str, angle: float) -> np.ndarray:
    """``exp(i angle l_axis)`` for spin ``j = (N-1)/2``."""
    if N < 2:
        raise ValueError("rotation needs N >= 2")
    ops = dict(zip("xyz", angular_momentum_operators(Fraction(N - 1, 2))))
    if axis not in ops:
        raise ValueError(f"axis must be one of x, y, z, got {axis!r}")
    return expm(1j * float(angle) * ops[axis])


@dataclass(frozen=True)
class AngularReport:
    j: Fraction
    dim: int
    lx_change: float
    ly_sign_flip: float
    lz_change: float
    tol: float = 1e-12

    @property
    def ok(self) -> bool:
        return max(self.lx_change, self.ly_sign_flip, self.lz_change) < self.tol

    def rows(self) -> list[tuple[str, float]]:
        return [
            ("||l_x^T - l_x||", self.lx_change),
            ("||l_y^T + l_y||", self.ly_sign_flip),
            ("||l_z^T - l_z||", self.lz_change),
        ]


def angular_momentum_transpose_report(j) -> AngularReport:
    """How transposition in the ``l_z`` basis acts on the angular momentum components."""
    jf = parse_spin(j)
    lx, ly, lz = angular_momentum_operators(jf)
    return AngularReport(
        j=jf,
        dim=lx.shape[0],
        lx_change=float(np.linalg.norm(lx.T - lx)),
        ly_sign_flip=float(np.linalg.norm(ly.T + ly)),
        lz_change=float(np.linalg.norm(lz.T - lz)),
    )


def homogeneity_report(c: KrausChannel, meas: BellMeasurement | None = None) -> HomogeneityReport:
    """Covariance under every correction ``U(m)`` plus transpose homogeneity."""
    if meas is None:
        meas = BellMeasurement.weyl(c.dim)
    if meas.dim != c.dim:
        raise ValueError("channel and measurement dimensions differ")
    names = [str(m) for m in meas.labels]
    cov = check_unitary_homogeneity(c, meas.corrections, names)
    tr = check_transpose_homogeneity(c)
    both = bool(cov.covariant_under_weyl and tr.transpose_homogeneous)
    notes = ()
    if both:
        notes = ("per-outcome teleportation statistics are expected to be independent of m",)
    return HomogeneityReport(
        covariant_under_weyl=cov.covariant_under_weyl,
        transpose_homogeneous=tr.transpose_homogeneous,
        permutation_witness=cov.permutation_witness + tr.permutation_witness,
        residual=max(cov.residual, tr.residual),
        predicts_m_independent=both,
        notes=notes,
    )
