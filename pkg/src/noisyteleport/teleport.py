"""Ideal N-level teleportation.

The Bell measurement is a family of outcomes ``m`` with weights ``chi(m)``
and unitaries ``U(m)``; outcome ``m`` projects the A, R pair onto

    |P(m)> = sqrt(chi(m)/N) * sum_n (U(m)|n>) (x) |n>.

The default family is the Weyl-Heisenberg one, ``U(a, b) = X^a Z^b`` with
``chi = 1``, which gives an orthonormal basis of N^2 maximally entangled
states.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Iterable, Sequence

import numpy as np

from .qmath import TOL_ALG, TOL_NORM, as_operator, as_state, dagger, is_unitary, projector

Label = Hashable


def shift_operator(N: int) -> np.ndarray:
    """``X|n> = |n+1 mod N>``."""
    return np.roll(np.eye(N, dtype=complex), 1, axis=0)


def clock_operator(N: int) -> np.ndarray:
    """``Z|n> = omega^n |n>`` with ``omega = exp(2 pi i / N)``."""
    return np.diag(np.exp(2j * np.pi * np.arange(N) / N))


def weyl_unitary(N: int, a: int, b: int) -> np.ndarray:
    """Return ``X^a Z^b`` on an N-level system."""
    if N < 1:
        raise ValueError(f"dimension must be positive, got {N}")
    if not (0 <= a < N and 0 <= b < N):
        raise ValueError(f"Weyl indices must lie in [0, {N}), got ({a}, {b})")
    return np.linalg.matrix_power(shift_operator(N), a) @ np.linalg.matrix_power(
        clock_operator(N), b
    )


def weyl_labels(N: int) -> list[tuple[int, int]]:
    return [(a, b) for a in range(N) for b in range(N)]


def max_entangled(N: int) -> np.ndarray:
    """``(1/sqrt(N)) sum_n |n>|n>`` as a vector of length N^2."""
    if N < 2:
        raise ValueError(f"need N >= 2, got {N}")
    return np.eye(N, dtype=complex).reshape(-1) / np.sqrt(N)


@dataclass(frozen=True, eq=False)
class BellMeasurement:
    """Outcome labels with their weights and correction unitaries.

    ``corrections[k]`` and ``chi[k]`` belong to ``labels[k]``.  Arrays are
    made read-only on construction.
    """

    labels: tuple
    chi: np.ndarray
    corrections: np.ndarray

    def __post_init__(self):
        labels = tuple(self.labels)
        chi = np.array(self.chi, dtype=float).reshape(-1)
        corr = np.array(self.corrections, dtype=complex)
        if corr.ndim != 3 or corr.shape[1] != corr.shape[2]:
            raise ValueError("corrections must be a stack of square matrices")
        if not (len(labels) == len(chi) == corr.shape[0]) or not labels:
            raise ValueError("labels, chi and corrections must have the same non-zero length")
        if len(set(labels)) != len(labels):
            raise ValueError("outcome labels must be distinct")
        if np.any(chi <= 0):
            raise ValueError("weights chi(m) must be positive")
        for lab, u in zip(labels, corr):
            if not is_unitary(u):
                raise ValueError(f"correction for outcome {lab!r} is not unitary")
        chi.setflags(write=False)
        corr.setflags(write=False)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "chi", chi)
        object.__setattr__(self, "corrections", corr)
        object.__setattr__(self, "_index", {lab: k for k, lab in enumerate(labels)})

    @classmethod
    def weyl(cls, N: int) -> "BellMeasurement":
        """Default unconditional measurement: ``U(a, b) = X^a Z^b``, ``chi = 1``."""
        labels = weyl_labels(N)
        corr = np.stack([weyl_unitary(N, a, b) for a, b in labels])
        return cls(labels, np.ones(len(labels)), corr)

    @property
    def dim(self) -> int:
        return self.corrections.shape[1]

    def __len__(self):
        return len(self.labels)

    def index(self, m: Label) -> int:
        try:
            return self._index[m]
        except (KeyError, TypeError):
            raise KeyError(f"unknown outcome label {m!r}") from None

    def correction(self, m: Label) -> np.ndarray:
        return self.corrections[self.index(m)]

    def weight(self, m: Label) -> float:
        return float(self.chi[self.index(m)])

    def restrict(self, accepted: Iterable[Label]) -> "BellMeasurement":
        """Keep only the listed outcomes (a conditional measurement)."""
        idx = [self.index(m) for m in accepted]
        return BellMeasurement(
            [self.labels[k] for k in idx], self.chi[idx], self.corrections[idx]
        )

    @property
    def conditional(self) -> bool:
        """True when the projectors do not resolve the identity."""
        return check_povm_completeness(self) >= TOL_ALG

    def bell_vectors(self) -> np.ndarray:
        """All ``|P(m)>`` stacked, shape ``(len(self), N*N)``."""
        N = self.dim
        return np.sqrt(self.chi / N)[:, None] * self.corrections.reshape(len(self), N * N)


def bell_state(meas: BellMeasurement, m: Label) -> np.ndarray:
    """``sqrt(chi(m)/N) sum_n (U(m)|n>) (x) |n>``."""
    k = meas.index(m)
    N = meas.dim
    # Entry (i, n) of U(m) is the amplitude of |i>|n>.
    return np.sqrt(meas.chi[k] / N) * meas.corrections[k].reshape(-1)


def check_povm_completeness(meas: BellMeasurement) -> float:
    """Max-norm deviation of ``sum_m |P(m)><P(m)|`` from the identity."""
    vecs = meas.bell_vectors()
    total = vecs.T @ np.conj(vecs)
    return float(np.max(np.abs(total - np.eye(total.shape[0]))))


def normalize_accept(meas: BellMeasurement, accept) -> tuple:
    """Validate an accept set; ``None`` or ``"all"`` means every outcome."""
    if accept is None or (isinstance(accept, str) and accept == "all"):
        return meas.labels
    accepted = set()
    for m in accept:
        m = tuple(m) if isinstance(m, list) else m
        meas.index(m)
        accepted.add(m)
    if not accepted:
        raise ValueError("accept set must not be empty")
    return tuple(lab for lab in meas.labels if lab in accepted)


def ideal_teleport_outcome(psi, meas: BellMeasurement, m: Label) -> tuple[float, np.ndarray]:
    """Teleport ``psi`` without noise and condition on outcome ``m``.

    Returns
    -------
    prob : float
        Squared norm of the projected branch, ``chi(m)/N**2``.
    corrected : numpy.ndarray
        Normalized state of B after applying ``U(m)``; equal to ``psi`` up to
        a global phase.
    """
    psi = as_state(psi)
    N = meas.dim
    if psi.shape[0] != N:
        raise ValueError(f"input has dimension {psi.shape[0]}, measurement expects {N}")
    if abs(np.vdot(psi, psi).real - 1.0) >= TOL_NORM:
        raise ValueError("input state must be normalized")
    eye = np.eye(N, dtype=complex)
    # (1/sqrt(N)) sum_n |psi>_A |n>_R |n>_B, indexed [a, r, b]
    initial = np.einsum("a,rb->arb", psi, eye) / np.sqrt(N)
    p = bell_state(meas, m).reshape(N, N)
    conditional = np.einsum("ar,arb->b", np.conj(p), initial)
    prob = float(np.real(np.vdot(conditional, conditional)))
    corrected = meas.correction(m) @ conditional
    return prob, corrected / np.sqrt(prob)


def premessage_state(psi, meas: BellMeasurement) -> np.ndarray:
    """B-marginal before ``m`` is communicated, averaged over outcomes."""
    rho = np.zeros((meas.dim, meas.dim), dtype=complex)
    for m in meas.labels:
        prob, out = ideal_teleport_outcome(psi, meas, m)
        raw = dagger(meas.correction(m)) @ out
        rho += prob * projector(raw)
    return rho


def custom_measurement(
    labels: Sequence[Label], unitaries: Sequence, chi: Sequence[float] | None = None
) -> BellMeasurement:
    """Build a measurement from user-supplied ``U(m)`` and ``chi(m)``."""
    unitaries = np.stack([as_operator(u) for u in unitaries])
    if chi is None:
        chi = np.ones(len(labels))
    return BellMeasurement(tuple(labels), chi, unitaries)
