"""Complex graphs Z = V + iU of pure Gaussian states.

A pure state with covariance

    sigma = 1/2 [[U^-1, U^-1 V], [V U^-1, U + V U^-1 V]]

is nullified by P - Z Q. V is the adjacency matrix of the graph and U the
error matrix; both are real symmetric and U is positive definite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import symplectic
from .exceptions import (
    ConventionError,
    DegenerateStateError,
    InvalidDimensionError,
    TransformationSingularError,
)

ASYMMETRY_GATE = 1e-8


@dataclass(frozen=True)
class ComplexGraph:
    V: np.ndarray
    U: np.ndarray
    # diagnostics from extraction; not part of the graph itself
    asymmetry: float = field(default=0.0, compare=False)
    condition_number: float = field(default=1.0, compare=False)

    @property
    def N(self) -> int:
        return self.V.shape[0]

    @property
    def Z(self) -> np.ndarray:
        return self.V + 1j * self.U

    def covariance(self) -> np.ndarray:
        """Rebuild the covariance matrix of the pure state with this graph."""
        U_inv = np.linalg.inv(self.U)
        qp = U_inv @ self.V
        pp = self.U + self.V @ U_inv @ self.V
        sigma = 0.5 * np.block([[U_inv, qp], [qp.T, pp]])
        return 0.5 * (sigma + sigma.T)


def _symmetrize(M: np.ndarray, name: str, scale: float = 1.0):
    asym = float(np.max(np.abs(M - M.T))) if M.size else 0.0
    if asym > ASYMMETRY_GATE * max(1.0, scale):
        raise ConventionError(f"{name} asymmetric by {asym:.3e}; check quadrature ordering")
    return 0.5 * (M + M.T), asym


def graph_from_covariance(sigma: np.ndarray) -> ComplexGraph:
    """Extract (V, U) from a pure-state covariance matrix.

    U = (2 sigma_QQ)^-1 and V = U (2 sigma_QP). Both are symmetrized; the
    removed asymmetry is recorded and must stay below 1e-8 (relative to the
    magnitude of the entries).
    """
    n = symplectic._mode_count(sigma)
    qq = sigma[:n, :n]
    qp = sigma[:n, n:]
    cond = float(np.linalg.cond(qq))
    if not math.isfinite(cond) or cond > 1e14:
        raise DegenerateStateError(f"sigma_QQ is singular (condition number {cond:.3e})")
    U = np.linalg.inv(2.0 * qq)
    V = U @ (2.0 * qp)
    U, asym_u = _symmetrize(U, "U", float(np.max(np.abs(U))))
    V, asym_v = _symmetrize(V, "V", float(np.max(np.abs(V), initial=0.0)))
    return ComplexGraph(V=V, U=U, asymmetry=max(asym_u, asym_v), condition_number=cond)


def nullifier_covariance(sigma: np.ndarray, V: np.ndarray) -> np.ndarray:
    """Covariance of the approximate nullifiers P - V Q for a symmetric V.

    Equals ``sigma_PP - V sigma_QP - sigma_QP^T V + V sigma_QQ V``; when V is
    the exact adjacency of the state this is U / 2.
    """
    n = symplectic._mode_count(sigma)
    if V.shape != (n, n):
        raise InvalidDimensionError(f"adjacency shape {V.shape} does not match {n} modes")
    qq = sigma[:n, :n]
    qp = sigma[:n, n:]
    pp = sigma[n:, n:]
    out = pp - V @ qp - qp.T @ V + V @ qq @ V
    return 0.5 * (out + out.T)


@dataclass(frozen=True)
class LocalUnitaryPlan:
    """Per-mode phase-space rotation angles, index 0 holding mode 1."""

    angles: tuple[float, ...]

    @classmethod
    def default(cls, N: int) -> "LocalUnitaryPlan":
        """Quarter-turn Fourier rotation on the lower half (modes 1..N/2).

        The angle is -pi/2 so the unmodulated comb gets positive EPR weights
        under the rotation convention of :func:`rotation_matrix`.
        """
        half = N // 2
        return cls(tuple([-math.pi / 2] * half + [0.0] * (N - half)))

    @classmethod
    def identity(cls, N: int) -> "LocalUnitaryPlan":
        return cls((0.0,) * N)

    @property
    def N(self) -> int:
        return len(self.angles)


def rotation_matrix(plan: LocalUnitaryPlan) -> np.ndarray:
    """2N x 2N matrix sending (Q_j, P_j) to (c Q_j + s P_j, -s Q_j + c P_j)."""
    theta = np.asarray(plan.angles, dtype=float)
    # exact zeros at multiples of pi/2 keep U free of 1e-17 dust
    c = np.round(np.cos(theta), 15)
    s = np.round(np.sin(theta), 15)
    return symplectic.from_blocks(np.diag(c), np.diag(s), np.diag(-s), np.diag(c))


def local_fourier(sigma: np.ndarray, plan: LocalUnitaryPlan) -> np.ndarray:
    n = symplectic._mode_count(sigma)
    if plan.N != n:
        raise InvalidDimensionError(f"plan covers {plan.N} modes, state has {n}")
    return symplectic.apply_symplectic(sigma, rotation_matrix(plan))


def mobius(graph: ComplexGraph, S: np.ndarray) -> ComplexGraph:
    """Graph after evolving the state by S: ``Z' = (C + D Z)(A + B Z)^-1``."""
    A, B, C, D = symplectic.blocks(S)
    if A.shape[0] != graph.N:
        raise InvalidDimensionError(f"symplectic acts on {A.shape[0]} modes, graph has {graph.N}")
    Z = graph.Z
    den = A + B @ Z
    cond = np.linalg.cond(den)
    if not math.isfinite(cond) or cond > 1e14:
        raise TransformationSingularError(f"A + BZ is singular (condition number {cond:.3e})")
    # X den = num  <=>  den^T X^T = num^T
    Zp = np.linalg.solve(den.T, (C + D @ Z).T).T
    V, asym_v = _symmetrize(Zp.real, "V'", float(np.max(np.abs(Zp.real), initial=0.0)))
    U, asym_u = _symmetrize(Zp.imag, "U'", float(np.max(np.abs(Zp.imag))))
    if np.min(np.linalg.eigvalsh(U)) <= 0:
        raise ConventionError("Mobius update produced a non positive-definite U'")
    return ComplexGraph(V=V, U=U, asymmetry=max(asym_u, asym_v), condition_number=float(cond))


def check_y_block_form(sigma: np.ndarray, graph: ComplexGraph) -> float:
    """Max deviation of cov[(Q, P - VQ)] from ``1/2 diag(U^-1, U)``."""
    n = graph.N
    T = np.eye(2 * n)
    T[n:, :n] = -graph.V
    cov_y = T @ sigma @ T.T
    expected = 0.5 * np.block(
        [[np.linalg.inv(graph.U), np.zeros((n, n))], [np.zeros((n, n)), graph.U]]
    )
    return float(np.max(np.abs(cov_y - expected)))


def bipartite_residuals(graph: ComplexGraph) -> dict:
    """Largest V entry inside either half and largest U entry across halves."""
    h = graph.N // 2
    V, U = graph.V, graph.U
    v_within = max(np.max(np.abs(V[:h, :h])), np.max(np.abs(V[h:, h:])))
    u_across = np.max(np.abs(U[:h, h:]))
    return {"v_within_halves": float(v_within), "u_across_halves": float(u_across)}
