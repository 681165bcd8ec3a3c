"""Dense linear algebra over small Hilbert spaces.

States and operators are plain numpy arrays: a 1-D complex array is a
(possibly unnormalized) pure state, a 2-D square array is an operator or a
density matrix.  Composite systems are flattened row-major with the first
listed subsystem varying slowest, so ``np.kron(a, b)`` and ``dims=[dA, dB]``
agree.  Teleportation systems are always ordered A, R, B.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

# Algebraic identities (completeness, unitarity, equalities of matrices).
TOL_ALG = 1e-10
# Normalization of states.
TOL_NORM = 1e-12


def as_state(psi) -> np.ndarray:
    """Return ``psi`` as a 1-D complex array."""
    psi = np.asarray(psi, dtype=complex)
    if psi.ndim != 1:
        raise ValueError(f"a pure state must be a 1-D array, got shape {psi.shape}")
    return psi


def as_operator(a) -> np.ndarray:
    """Return ``a`` as a square 2-D complex array."""
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"an operator must be a square matrix, got shape {a.shape}")
    return a


def dagger(a: np.ndarray) -> np.ndarray:
    return np.conj(a).T


def norm2(psi) -> float:
    """Squared norm ``<psi|psi>``."""
    psi = as_state(psi)
    return float(np.real(np.vdot(psi, psi)))


def is_normalized(psi, tol: float = TOL_NORM) -> bool:
    return abs(norm2(psi) - 1.0) < tol


def is_hermitian(a, tol: float = TOL_ALG) -> bool:
    a = as_operator(a)
    return bool(np.max(np.abs(a - dagger(a)), initial=0.0) < tol)


def is_unitary(a, tol: float = TOL_ALG) -> bool:
    a = as_operator(a)
    eye = np.eye(a.shape[0])
    return bool(np.max(np.abs(dagger(a) @ a - eye)) < tol)


def is_psd(a, tol: float = TOL_ALG) -> bool:
    a = as_operator(a)
    if not is_hermitian(a, tol):
        return False
    return bool(np.min(np.linalg.eigvalsh((a + dagger(a)) / 2)) >= -tol)


def is_density_matrix(rho, trace: float = 1.0) -> bool:
    """Hermitian within ``TOL_NORM``, PSD within ``TOL_ALG`` and with the given trace."""
    rho = as_operator(rho)
    if not is_hermitian(rho, TOL_NORM):
        return False
    if abs(np.trace(rho) - trace) > TOL_ALG:
        return False
    return is_psd(rho, TOL_ALG)


def projector(psi) -> np.ndarray:
    """``|psi><psi|`` without normalizing."""
    psi = as_state(psi)
    return np.outer(psi, np.conj(psi))


def basis_state(dim: int, index: int) -> np.ndarray:
    psi = np.zeros(dim, dtype=complex)
    psi[index] = 1.0
    return psi


def tensor(*factors) -> np.ndarray:
    """Kronecker product of states or of operators, first factor slowest.

    Mixing 1-D states with 2-D operators is rejected.
    """
    if not factors:
        raise ValueError("tensor needs at least one factor")
    arrays = [np.asarray(f, dtype=complex) for f in factors]
    kinds = {a.ndim for a in arrays}
    if len(kinds) != 1 or kinds.pop() not in (1, 2):
        raise ValueError("tensor factors must all be states or all be operators")
    out = arrays[0]
    for a in arrays[1:]:
        out = np.kron(out, a)
    return out


def transpose_in_basis(a) -> np.ndarray:
    """Transpose in the computational basis: ``<n'|A^T|n> = <n|A|n'>``.

    No complex conjugation is involved.
    """
    return as_operator(a).T.copy()


def _check_dims(total: int, dims: Sequence[int]) -> list[int]:
    dims = [int(d) for d in dims]
    if any(d < 1 for d in dims) or int(np.prod(dims)) != total:
        raise ValueError(f"dims {dims} do not match total dimension {total}")
    return dims


def partial_trace(rho, dims: Sequence[int], keep: Iterable[int]) -> np.ndarray:
    """Trace out every subsystem not listed in ``keep``.

    Parameters
    ----------
    rho : array_like
        Operator on the composite space, shape ``(prod(dims), prod(dims))``.
    dims : sequence of int
        Subsystem dimensions in flattening order.
    keep : iterable of int
        Indices of subsystems to keep.  The result lists them in their
        original order regardless of the order given here.

    Returns
    -------
    numpy.ndarray
        The reduced operator.
    """
    rho = as_operator(rho)
    dims = _check_dims(rho.shape[0], dims)
    n = len(dims)
    keep = sorted(set(int(k) for k in keep))
    for k in keep:
        if not 0 <= k < n:
            raise ValueError(f"subsystem index {k} out of range for {n} subsystems")
    traced = [i for i in range(n) if i not in keep]
    t = rho.reshape(dims + dims)
    # Trace pairs from the highest index down so axis numbers stay valid.
    for count, i in enumerate(sorted(traced, reverse=True)):
        m = n - count
        t = np.trace(t, axis1=i, axis2=i + m)
    d_keep = int(np.prod([dims[k] for k in keep])) if keep else 1
    return t.reshape(d_keep, d_keep)


def _psd_sqrt(rho: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh((rho + dagger(rho)) / 2)
    if np.any(w < -TOL_ALG):
        raise ValueError(f"matrix is not positive semidefinite (min eigenvalue {w.min():.3e})")
    # Roundoff-level eigenvalues would leak sqrt(eps) into the result.
    floor = 64 * np.finfo(float).eps * max(1.0, float(np.max(np.abs(w))))
    w = np.where(w > floor, w, 0.0)
    return (v * np.sqrt(w)) @ dagger(v)


def fidelity(a, b) -> float:
    """Fidelity in the squared-overlap convention, so ``F(rho, rho) = 1``.

    Pure inputs are 1-D arrays and mixed inputs 2-D arrays; both must be
    normalized.  For two mixed states this is the Uhlmann fidelity
    ``(tr sqrt(sqrt(a) b sqrt(a)))**2``.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape[0] != b.shape[0]:
        raise ValueError(f"dimension mismatch: {a.shape[0]} vs {b.shape[0]}")
    if a.ndim == 1 and b.ndim == 1:
        f = abs(np.vdot(a, b)) ** 2
    elif a.ndim == 1:
        f = np.real(np.vdot(a, as_operator(b) @ a))
    elif b.ndim == 1:
        f = np.real(np.vdot(b, as_operator(a) @ b))
    else:
        s = _psd_sqrt(as_operator(a))
        m = s @ as_operator(b) @ s
        w = np.linalg.eigvalsh((m + dagger(m)) / 2)
        floor = 64 * np.finfo(float).eps * max(1.0, float(np.max(np.abs(w))))
        f = np.sum(np.sqrt(np.where(w > floor, w, 0.0))) ** 2
    return float(min(max(f, 0.0), 1.0))
