"""Dense complex linear algebra for few-qubit Hilbert spaces.

Everything operates on plain numpy arrays: state vectors are 1-d complex
arrays of length 2**n, operators and density matrices are square complex
arrays.  Qubit 1 is the most significant tensor factor, |up> = |0> = (1, 0)
and sigma_z |up> = +|up>.
"""

from __future__ import annotations

import numpy as np

HERMITICITY_TOL = 1e-12
UNITARITY_TOL = 1e-10
IMAG_RESIDUE_TOL = 1e-10

ID2 = np.eye(2, dtype=complex)
SX = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SY = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SZ = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)

PAULIS_1Q = {"i": ID2, "x": SX, "y": SY, "z": SZ}


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Tensor product; the first argument is the most significant factor."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def kron_all(*ops: np.ndarray) -> np.ndarray:
    out = np.asarray(ops[0], dtype=complex)
    for op in ops[1:]:
        out = np.kron(out, op)
    return out


def op_on_qubit(op: np.ndarray, qubit: int, n_qubits: int) -> np.ndarray:
    """Embed a single-qubit operator at position ``qubit`` (0 = most significant)."""
    if not 0 <= qubit < n_qubits:
        raise ValueError(f"qubit index {qubit} out of range for {n_qubits} qubits")
    factors = [ID2] * n_qubits
    factors[qubit] = np.asarray(op, dtype=complex)
    return kron_all(*factors)


def max_asymmetry(m: np.ndarray) -> float:
    m = np.asarray(m)
    return float(np.max(np.abs(m - m.conj().T)))


def is_hermitian(m: np.ndarray, tol: float = HERMITICITY_TOL) -> bool:
    return max_asymmetry(m) <= tol


def is_unitary(u: np.ndarray, tol: float = UNITARITY_TOL) -> bool:
    u = np.asarray(u)
    return float(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0])))) <= tol


def herm_expm(h: np.ndarray, t: float) -> np.ndarray:
    """exp(-i h t) for Hermitian h, via eigendecomposition.

    Raises ValueError for non-Hermitian input, reporting the maximum
    entrywise asymmetry.
    """
    h = np.asarray(h, dtype=complex)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {h.shape}")
    asym = max_asymmetry(h)
    if asym > HERMITICITY_TOL:
        raise ValueError(f"input is not Hermitian: max asymmetry {asym:.3e}")
    w, v = np.linalg.eigh(h)
    return (v * np.exp(-1j * t * w)) @ v.conj().T


def expectation(state: np.ndarray, obs: np.ndarray) -> float:
    """<obs> for a state vector or density matrix.

    The imaginary residue must be below 1e-10 (guaranteed for Hermitian
    observables on valid states); it is checked and discarded.
    """
    state = np.asarray(state, dtype=complex)
    obs = np.asarray(obs, dtype=complex)
    if state.ndim == 1:
        if obs.shape != (state.size, state.size):
            raise ValueError(
                f"dimension mismatch: state dim {state.size}, observable {obs.shape}"
            )
        val = complex(np.vdot(state, obs @ state))
    elif state.ndim == 2:
        if obs.shape != state.shape:
            raise ValueError(
                f"dimension mismatch: state {state.shape}, observable {obs.shape}"
            )
        val = complex(np.trace(state @ obs))
    else:
        raise ValueError("state must be a vector or a density matrix")
    if abs(val.imag) > IMAG_RESIDUE_TOL:
        raise ValueError(f"expectation has imaginary residue {val.imag:.3e}")
    return val.real


def partial_transpose(rho: np.ndarray, subsystem: int) -> np.ndarray:
    """Transpose one qubit's indices of a two-qubit matrix (qubit 0 or 1)."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise ValueError(f"partial_transpose expects a 4x4 matrix, got {rho.shape}")
    if subsystem not in (0, 1):
        raise ValueError(f"subsystem must be 0 or 1, got {subsystem}")
    r = rho.reshape(2, 2, 2, 2)  # axes: (i1, i2, j1, j2)
    r = r.transpose(2, 1, 0, 3) if subsystem == 0 else r.transpose(0, 3, 2, 1)
    return r.reshape(4, 4)


def check_density_matrix(rho: np.ndarray, name: str = "rho") -> np.ndarray:
    """Validate Hermiticity (1e-10), unit trace (1e-10) and positivity (-1e-8)."""
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError(f"{name} must be square, got shape {rho.shape}")
    asym = max_asymmetry(rho)
    if asym > 1e-10:
        raise ValueError(f"{name} is not Hermitian: max asymmetry {asym:.3e}")
    tr = complex(np.trace(rho))
    if abs(tr - 1.0) > 1e-10:
        raise ValueError(f"{name} has trace {tr:.12g}, expected 1")
    w = np.linalg.eigvalsh((rho + rho.conj().T) / 2)
    if w.min() < -1e-8:
        raise ValueError(f"{name} has negative eigenvalue {w.min():.3e}")
    return rho
