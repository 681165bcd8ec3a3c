"""Seeded random states, unitaries and Kraus channels."""

from __future__ import annotations

import numpy as np

from .channels import KrausChannel


def _rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def haar_state(N: int, seed=None) -> np.ndarray:
    """Haar-random pure state from a normalized complex Gaussian vector."""
    rng = _rng(seed)
    v = rng.normal(size=N) + 1j * rng.normal(size=N)
    return v / np.linalg.norm(v)


def haar_states(N: int, count: int, seed=None) -> np.ndarray:
    """``count`` Haar-random states, shape ``(count, N)``."""
    rng = _rng(seed)
    v = rng.normal(size=(count, N)) + 1j * rng.normal(size=(count, N))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def haar_unitary(N: int, seed=None) -> np.ndarray:
    """Haar-random unitary via QR of a Ginibre matrix with the phase fix."""
    rng = _rng(seed)
    z = (rng.normal(size=(N, N)) + 1j * rng.normal(size=(N, N))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_kraus_channel(N: int, rank: int, seed=None) -> KrausChannel:
    """Random channel with ``rank`` Kraus elements.

    The first N columns of a Haar unitary on ``N * rank`` dimensions form an
    isometry ``V``; its N x N blocks are the Kraus elements, so
    ``sum F^dag F = V^dag V = 1``.
    """
    if rank < 1:
        raise ValueError("rank must be at least 1")
    v = haar_unitary(N * rank, seed)[:, :N]
    return KrausChannel(v.reshape(rank, N, N), None, f"random(rank={rank})")
