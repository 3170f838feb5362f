"""Dense complex matrix primitives for one- and two-qubit operators.

Matrices are plain ``numpy`` arrays of dtype ``complex128`` with shape
``(2, 2)`` or ``(4, 4)``.  Every function returns a fresh array; inputs are
never modified in place.

Eigendecomposition uses cyclic complex Jacobi rotations rather than LAPACK so
that the spectral routines feeding the entropies are self-contained and
auditable at these tiny sizes.
"""

from __future__ import annotations

import numpy as np

from .errors import UsageError

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_TOL = 1e-10

JACOBI_OFF_TOL = 1e-14
JACOBI_MAX_SWEEPS = 100

SUBSYSTEMS = ("A", "B")

IDENTITY2 = np.eye(2, dtype=complex)
IDENTITY4 = np.eye(4, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
# sigma_0 .. sigma_3
PAULIS = (IDENTITY2, SIGMA_X, SIGMA_Y, SIGMA_Z)


def as_matrix(m, dims=(2, 4)) -> np.ndarray:
    """Copy ``m`` into a square complex array, checking its dimension."""
    arr = np.array(m, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise UsageError(f"expected a square matrix, got shape {arr.shape}")
    if arr.shape[0] not in dims:
        raise UsageError(f"matrix dimension {arr.shape[0]} not in {tuple(dims)}")
    return arr


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(np.asarray(m)).T.copy()


def matmul(a, b) -> np.ndarray:
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape != b.shape:
        raise UsageError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return a @ b


def kron(a, b) -> np.ndarray:
    """4x4 Kronecker product ``out[2i+k, 2j+l] = a[i, j] * b[k, l]``."""
    a = as_matrix(a, dims=(2,))
    b = as_matrix(b, dims=(2,))
    out = np.zeros((4, 4), dtype=complex)
    for i in range(2):
        for j in range(2):
            out[2 * i : 2 * i + 2, 2 * j : 2 * j + 2] = a[i, j] * b
    return out


def hermiticity_error(m) -> float:
    m = np.asarray(m)
    return float(np.max(np.abs(m - np.conj(m).T)))


def is_hermitian(m, tol: float = HERMITIAN_TOL) -> bool:
    return hermiticity_error(m) <= tol


def _off_diagonal_norm(a: np.ndarray) -> float:
    off = a - np.diag(np.diag(a))
    return float(np.sqrt(np.sum(np.abs(off) ** 2)))


def _jacobi_rotation(a: np.ndarray, p: int, q: int) -> np.ndarray:
    """Unitary ``U`` such that ``(U^H a U)[p, q] == 0``.

    The phase of ``a[p, q]`` is first removed by a diagonal unitary, which
    leaves a real symmetric 2x2 block to annihilate with a Givens rotation.
    """
    apq = a[p, q]
    mag = abs(apq)
    phase = apq / mag
    app = a[p, p].real
    aqq = a[q, q].real
    theta = 0.5 * np.arctan2(2.0 * mag, aqq - app)
    c, s = np.cos(theta), np.sin(theta)
    u = np.eye(a.shape[0], dtype=complex)
    # D = diag(.., 1 @ p, conj(phase) @ q, ..) followed by the Givens rotation
    u[p, p] = c
    u[p, q] = s
    u[q, p] = -s * np.conj(phase)
    u[q, q] = c * np.conj(phase)
    return u


def eig_hermitian(m) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decompose a Hermitian matrix with cyclic Jacobi sweeps.

    Returns ``(values, vectors)`` with real eigenvalues sorted in descending
    order and ``vectors[:, k]`` the orthonormal eigenvector of ``values[k]``.
    """
    a = as_matrix(m)
    if not is_hermitian(a):
        raise UsageError(f"matrix is not Hermitian (error {hermiticity_error(a):.3e})")
    a = 0.5 * (a + dagger(a))
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    for _ in range(JACOBI_MAX_SWEEPS):
        if _off_diagonal_norm(a) < JACOBI_OFF_TOL:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                if abs(a[p, q]) == 0.0:
                    continue
                u = _jacobi_rotation(a, p, q)
                a = dagger(u) @ a @ u
                a[p, q] = a[q, p] = 0.0
                v = v @ u
    values = np.real(np.diag(a))
    order = np.argsort(-values, kind="stable")
    return values[order], v[:, order]


def eigvals_hermitian(m) -> np.ndarray:
    return eig_hermitian(m)[0]


def validate_density(rho, dims=(2, 4)) -> np.ndarray:
    """Return a copy of ``rho`` after checking it is a valid density matrix.

    Raises:
        UsageError: if ``rho`` is not Hermitian, not unit trace, or has an
            eigenvalue below ``-PSD_TOL``.
    """
    rho = as_matrix(rho, dims=dims)
    herr = hermiticity_error(rho)
    if herr > HERMITIAN_TOL:
        raise UsageError(f"density matrix not Hermitian (error {herr:.3e})")
    tr = np.trace(rho)
    if abs(tr - 1.0) > TRACE_TOL:
        raise UsageError(f"density matrix trace {tr} differs from 1")
    lowest = eigvals_hermitian(rho)[-1]
    if lowest < -PSD_TOL:
        raise UsageError(f"density matrix has negative eigenvalue {lowest:.3e}")
    return rho


def partial_trace(rho, trace_out: str = "B") -> np.ndarray:
    """Reduce a two-qubit state by tracing out subsystem ``"A"`` or ``"B"``."""
    rho = as_matrix(rho, dims=(4,))
    if trace_out not in SUBSYSTEMS:
        raise UsageError(f"subsystem must be one of {SUBSYSTEMS}, got {trace_out!r}")
    t = rho.reshape(2, 2, 2, 2)
    if trace_out == "B":
        return np.einsum("ijkj->ik", t)
    return np.einsum("ijil->jl", t)


def entropy_from_eigenvalues(values) -> float:
    """Shannon entropy in bits of a spectrum, with ``0 log 0 = 0``.

    Eigenvalues in ``[-PSD_TOL, 0)`` are numerical noise and count as zero;
    anything more negative means the state was invalid.
    """
    vals = np.asarray(values, dtype=float)
    if np.any(vals < -PSD_TOL):
        raise UsageError(f"negative eigenvalue {vals.min():.3e} in entropy")
    vals = vals[vals > 0.0]
    return float(max(0.0, -np.sum(vals * np.log2(vals))))


def von_neumann_entropy(rho) -> float:
    """``S(rho) = -tr(rho log2 rho)`` in bits."""
    return entropy_from_eigenvalues(eigvals_hermitian(rho))


def binary_entropy(x: float) -> float:
    """``H(x) = -x log2 x - (1-x) log2 (1-x)``.

    Arguments within 1e-12 outside ``[0, 1]`` are clamped.
    """
    if x < -1e-12 or x > 1.0 + 1e-12:
        raise UsageError(f"binary entropy argument {x} outside [0, 1]")
    x = min(1.0, max(0.0, float(x)))
    return entropy_from_eigenvalues((x, 1.0 - x))
