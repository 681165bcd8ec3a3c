import numpy as np
import pytest

ACCEPTANCE_LINES = []


def record_acceptance(number, passed, detail):
    ACCEPTANCE_LINES.append(f"[{'PASS' if passed else 'FAIL'}] criterion {number}: {detail}")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def ket(*amps):
    v = np.array(amps, dtype=complex)
    return v / np.linalg.norm(v)


def protocol_by_density_matrix(psi, fr, fb, u, chi=1.0):
    """Independent reference: build the full A R B density matrix with kron,
    project with an explicit projector, trace out A and R.

    Returns (probability, corrected density matrix on B, unnormalized).
    """
    N = len(psi)
    eye = np.eye(N)
    pair = sum(np.kron(fr[:, n], fb[:, n]) for n in range(N)) / np.sqrt(N)
    full = np.kron(psi, pair)
    rho = np.outer(full, full.conj())
    bell = np.sqrt(chi / N) * sum(np.kron(u[:, n], eye[n]) for n in range(N))
    proj = np.kron(np.outer(bell, bell.conj()), eye)
    after = proj @ rho @ proj
    # trace out A and R (first N*N index block)
    t = after.reshape(N * N, N, N * N, N)
    rho_b = np.einsum("iaib->ab", t)
    corrected = u @ rho_b @ u.conj().T
    return float(np.trace(corrected).real), corrected
