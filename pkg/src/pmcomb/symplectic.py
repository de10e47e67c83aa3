"""Dense real symplectic algebra in the (Q_1..Q_N, P_1..P_N) ordering.

Conventions: hbar = 1, Q = (a + a^dag)/sqrt(2), P = (a - a^dag)/(i sqrt(2)),
so the vacuum covariance is I/2 and the symplectic form is
``[[0, I], [-I, 0]]``.

Matrices are plain ``numpy.ndarray`` objects. Functions never mutate their
inputs.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg

from .exceptions import AccuracyError, InvalidDimensionError, NumericError

SYMPLECTIC_TOL = 1e-9
SYMMETRY_TOL = 1e-12
EIGEN_FLOOR = -1e-9
# expm refuses to return a matrix whose symplectic residual exceeds this.
EXPM_ACCURACY_TOL = 1e-6


def _mode_count(M: np.ndarray) -> int:
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise InvalidDimensionError(f"expected a square matrix, got shape {M.shape}")
    if M.shape[0] % 2:
        raise InvalidDimensionError(f"phase-space matrices have even dimension, got {M.shape[0]}")
    return M.shape[0] // 2


def symplectic_form(n: int) -> np.ndarray:
    """Return the 2n x 2n symplectic form ``[[0, I_n], [-I_n, 0]]``."""
    if int(n) != n or n < 1:
        raise InvalidDimensionError(f"mode count must be a positive integer, got {n!r}")
    n = int(n)
    omega = np.zeros((2 * n, 2 * n))
    omega[:n, n:] = np.eye(n)
    omega[n:, :n] = -np.eye(n)
    return omega


def blocks(S: np.ndarray):
    """Split a phase-space matrix into its ``(A, B, C, D)`` corners.

    ``S = [[A, B], [C, D]]`` with A acting Q -> Q, B acting P -> Q and so on.
    """
    n = _mode_count(S)
    return S[:n, :n], S[:n, n:], S[n:, :n], S[n:, n:]


def from_blocks(A, B, C, D) -> np.ndarray:
    return np.block([[A, B], [C, D]])


def is_hamiltonian(G: np.ndarray, tol: float = 1e-12):
    """Check that ``G @ Omega`` is symmetric, i.e. G generates a symplectic flow.

    Returns ``(ok, residual)`` with the residual in the max-abs norm.
    """
    n = _mode_count(G)
    GO = G @ symplectic_form(n)
    residual = float(np.max(np.abs(GO - GO.T))) if G.size else 0.0
    return residual <= tol, residual


def is_symplectic(S: np.ndarray, tol: float = SYMPLECTIC_TOL):
    """Return ``(ok, residual)`` where residual is ``||S Omega S^T - Omega||_inf``.

    The infinity norm here is the induced (max row sum) matrix norm.
    """
    n = _mode_count(S)
    omega = symplectic_form(n)
    residual = float(np.linalg.norm(S @ omega @ S.T - omega, ord=np.inf))
    return residual <= tol, residual


def expm(G: np.ndarray, t: float = 1.0) -> np.ndarray:
    """Matrix exponential ``exp(t G)``.

    Uses scaling-and-squaring with a Pade approximant. When G is Hamiltonian
    the result is symplectic; a residual above ``EXPM_ACCURACY_TOL`` raises
    :class:`AccuracyError` instead of returning a corrupted evolution.
    """
    G = np.asarray(G, dtype=float)
    _mode_count(G)
    if not np.all(np.isfinite(G)) or not np.isfinite(t):
        raise NumericError("generator and time must be finite")
    S = scipy.linalg.expm(t * G)
    if not np.all(np.isfinite(S)):
        raise NumericError("matrix exponential overflowed")
    if is_hamiltonian(G, tol=1e-9 * max(1.0, float(np.max(np.abs(G)))))[0]:
        ok, residual = is_symplectic(S, tol=EXPM_ACCURACY_TOL)
        if not ok:
            raise AccuracyError(f"expm lost symplecticity: residual {residual:.3e}")
    return S


def compose(S2: np.ndarray, S1: np.ndarray) -> np.ndarray:
    """Evolution by S1 followed by S2, i.e. ``S2 @ S1``."""
    if S2.shape != S1.shape:
        raise InvalidDimensionError(f"dimension mismatch: {S2.shape} vs {S1.shape}")
    _mode_count(S1)
    return S2 @ S1


def covariance_from_symplectic(S: np.ndarray) -> np.ndarray:
    """Covariance ``S S^T / 2`` of the state obtained by evolving vacuum with S."""
    _mode_count(S)
    sigma = 0.5 * (S @ S.T)
    return 0.5 * (sigma + sigma.T)


def apply_symplectic(sigma: np.ndarray, L: np.ndarray) -> np.ndarray:
    """Transform a covariance matrix by a symplectic congruence ``L sigma L^T``."""
    if sigma.shape != L.shape:
        raise InvalidDimensionError(f"dimension mismatch: {sigma.shape} vs {L.shape}")
    out = L @ sigma @ L.T
    return 0.5 * (out + out.T)


def vacuum(n: int) -> np.ndarray:
    return 0.5 * np.eye(2 * n)


def symplectic_eigenvalues(sigma: np.ndarray) -> np.ndarray:
    """Williamson symplectic eigenvalues of a covariance matrix, ascending.

    They are the moduli of the eigenvalues of ``i Omega sigma``; each appears
    twice in that spectrum and is returned once.
    """
    n = _mode_count(sigma)
    ev = np.linalg.eigvals(1j * symplectic_form(n) @ sigma)
    return np.sort(np.abs(ev))[::2]


def check_covariance(sigma: np.ndarray, pure: bool = False) -> dict:
    """Validate the covariance invariants and return the measured residuals.

    Raises :class:`AccuracyError` when symmetry, the uncertainty relation, or
    (with ``pure=True``) purity is violated.
    """
    n = _mode_count(sigma)
    asym = float(np.max(np.abs(sigma - sigma.T)))
    if asym > SYMMETRY_TOL * max(1.0, float(np.max(np.abs(sigma)))):
        raise AccuracyError(f"covariance not symmetric: {asym:.3e}")
    herm = sigma + 0.5j * symplectic_form(n)
    min_eig = float(np.min(np.linalg.eigvalsh(herm)))
    # the floor scales with the matrix magnitude (e^{4r} dynamic range)
    if min_eig < EIGEN_FLOOR * max(1.0, float(np.max(np.abs(sigma)))):
        raise AccuracyError(f"uncertainty relation violated: min eigenvalue {min_eig:.3e}")
    report = {"asymmetry": asym, "min_uncertainty_eigenvalue": min_eig}
    if pure:
        nu = symplectic_eigenvalues(sigma)
        dev = float(np.max(np.abs(nu - 0.5)))
        if dev > 1e-6:
            raise AccuracyError(f"state is not pure: symplectic eigenvalues deviate by {dev:.3e}")
        report["purity_deviation"] = dev
    return report
