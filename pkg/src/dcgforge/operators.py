"""Dense operator algebra for a qubit register coupled to a finite bath.

Conventions used throughout the package:

* The joint Hilbert space is ordered system (x) bath, system qubits are the
  leftmost tensor factors.
* Operators are plain complex numpy arrays.  Everything here is dense and
  meant for small registers; the largest size exercised by the shipped
  benchmarks is 2**8 = 256.
* ``exp(-i H t)`` is evaluated through a Hermitian eigendecomposition so the
  result is unitary to machine precision and the decomposition can be reused
  across times.
"""
from __future__ import annotations

import numpy as np
import scipy.linalg

SIGMA_I = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)

PAULIS = {"i": SIGMA_I, "x": SIGMA_X, "y": SIGMA_Y, "z": SIGMA_Z}

PAULI_AXES = ("x", "y", "z")


def kron_all(ops) -> np.ndarray:
    """Kronecker product of a sequence of operators, leftmost factor first."""
    out = np.eye(1, dtype=complex)
    for op in ops:
        out = np.kron(out, op)
    return out


def pauli_string_matrix(string: str) -> np.ndarray:
    """Matrix of a Pauli string such as ``"xiz"`` (one letter per qubit).

    Letters are drawn from ``i x y z``; the first letter acts on qubit 0,
    which is the leftmost tensor factor.
    """
    try:
        factors = [PAULIS[c] for c in string.lower()]
    except KeyError as exc:
        raise ValueError(f"invalid Pauli letter in {string!r}") from exc
    if not factors:
        raise ValueError("empty Pauli string")
    return kron_all(factors)


def embed_pauli(axis: str, qubit: int, n_qubits: int) -> np.ndarray:
    """Single-qubit Pauli ``axis`` on ``qubit``, identity elsewhere.

    Parameters
    ----------
    axis : str
        One of ``"x"``, ``"y"``, ``"z"`` (or ``"i"``).
    qubit : int
        Index of the target qubit, 0-based from the left.
    n_qubits : int
        Total number of qubits in the register.
    """
    if not 0 <= qubit < n_qubits:
        raise ValueError(f"qubit {qubit} outside register of {n_qubits}")
    string = ["i"] * n_qubits
    string[qubit] = axis.lower()
    return pauli_string_matrix("".join(string))


def pauli_string_weight(string: str) -> int:
    """Number of non-identity letters in a Pauli string."""
    return sum(1 for c in string.lower() if c != "i")


def is_hermitian(a: np.ndarray, tol: float = 1e-12) -> bool:
    return bool(np.abs(a - a.conj().T).max() <= tol)


def is_unitary(a: np.ndarray, tol: float = 1e-12) -> bool:
    d = a.shape[0]
    return bool(np.abs(a @ a.conj().T - np.eye(d)).max() <= tol)


def spectral_norm(a: np.ndarray) -> float:
    """Largest singular value; for Hermitian input the largest |eigenvalue|."""
    if is_hermitian(a, tol=1e-10):
        return float(np.abs(np.linalg.eigvalsh(a)).max())
    return float(np.linalg.norm(a, 2))


def frobenius_norm(a: np.ndarray) -> float:
    return float(np.linalg.norm(a))


class HermitianEvolution:
    """exp(-i H t) factory that eigendecomposes ``H`` once.

    The same decomposition serves every requested time, which keeps long
    piecewise-constant propagations cheap when slot Hamiltonians repeat.
    """

    def __init__(self, h: np.ndarray):
        if not is_hermitian(h, tol=1e-10):
            raise ValueError("generator is not Hermitian")
        self.eigenvalues, self.eigenvectors = np.linalg.eigh(h)

    def unitary(self, t: float) -> np.ndarray:
        v = self.eigenvectors
        phases = np.exp(-1j * self.eigenvalues * t)
        return (v * phases) @ v.conj().T


def expm_unitary(h: np.ndarray, t: float = 1.0) -> np.ndarray:
    """exp(-i h t) for Hermitian ``h`` via eigendecomposition."""
    return HermitianEvolution(h).unitary(t)


def hermitian_log(u: np.ndarray, branch_guard: float = 1e-6) -> np.ndarray:
    """Hermitian ``phi`` with ``exp(-i phi) = u`` on the principal branch.

    Uses a complex Schur decomposition (diagonal for unitary input) so the
    eigenbasis stays orthonormal under degeneracies.  Raises ``ValueError``
    when any eigenphase sits within ``branch_guard`` of the +-pi branch cut,
    where the principal log is discontinuous and the result untrustworthy.
    """
    if not is_unitary(u, tol=1e-8):
        raise ValueError("input is not unitary")
    t, z = scipy.linalg.schur(u, output="complex")
    diag = np.diag(t)
    off = t - np.diag(diag)
    if np.abs(off).max() > 1e-8:
        raise ValueError("Schur form not diagonal; input not normal")
    phases = -np.angle(diag)
    if np.min(np.pi - np.abs(phases)) < branch_guard:
        raise ValueError(
            "eigenphase within branch guard of the +-pi cut; "
            "shorten the interval or rescale the generator")
    phi = (z * phases) @ z.conj().T
    return (phi + phi.conj().T) / 2


def _split_dims(a: np.ndarray, n_system: int) -> tuple[int, int]:
    dim = a.shape[0]
    d_s = 2 ** n_system
    if a.shape != (dim, dim) or dim % d_s:
        raise ValueError(f"operator of dim {a.shape} incompatible with "
                         f"{n_system} system qubits")
    return d_s, dim // d_s


def partial_trace_bath(a: np.ndarray, n_system: int) -> np.ndarray:
    """Trace out the bath factor, returning a system operator."""
    d_s, d_b = _split_dims(a, n_system)
    r = a.reshape(d_s, d_b, d_s, d_b)
    return np.einsum("aibi->ab", r)


def partial_trace_system(a: np.ndarray, n_system: int) -> np.ndarray:
    """Trace out the system factor, returning a bath operator."""
    d_s, d_b = _split_dims(a, n_system)
    r = a.reshape(d_s, d_b, d_s, d_b)
    return np.einsum("aiaj->ij", r)


def mod_bath(a: np.ndarray, n_system: int) -> np.ndarray:
    """Remove the pure-bath component: ``a - I_S (x) Tr_S[a] / 2**n``.

    Pure-bath terms commute with every system observable, so this projection
    keeps exactly the part of an error generator that can hurt the system.
    mod_bath is idempotent and linear.
    """
    d_s, _ = _split_dims(a, n_system)
    bath_part = partial_trace_system(a, n_system) / d_s
    return a - np.kron(np.eye(d_s, dtype=complex), bath_part)


def pauli_bath_components(a: np.ndarray, n_system: int) -> dict[str, np.ndarray]:
    """Expand a joint operator as ``sum_s P_s (x) B_s`` over system Paulis.

    Returns a map from Pauli string (e.g. ``"xiz"``) to the bath operator
    ``B_s = 2**-n Tr_S[(P_s (x) I) a]``.  The expansion is exact:
    ``sum_s kron(P_s, B_s)`` reconstructs ``a``.
    """
    d_s, d_b = _split_dims(a, n_system)
    r = a.reshape(d_s, d_b, d_s, d_b)
    out = {}
    for letters in _pauli_strings(n_system):
        p = pauli_string_matrix(letters)
        out[letters] = np.einsum("ba,aibj->ij", p, r) / d_s
    return out


def _pauli_strings(n: int) -> list[str]:
    strings = [""]
    for _ in range(n):
        strings = [s + c for s in strings for c in "ixyz"]
    return strings
