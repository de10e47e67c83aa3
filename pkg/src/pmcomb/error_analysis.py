"""Spurious-edge trimming and error-matrix diagnostics."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import graphs, hamiltonians, symplectic
from .exceptions import InvalidErrorMatrixError, InvalidSpecError


@dataclass(frozen=True)
class TrimPolicy:
    epsilon_min: float

    def __post_init__(self):
        if not (self.epsilon_min > 0) or not math.isfinite(self.epsilon_min):
            raise InvalidSpecError(f"epsilon_min must be a positive finite number, got {self.epsilon_min!r}")


@dataclass(frozen=True)
class RemovedEdge:
    a: int  # 1-based qumode index, a < b
    b: int
    weight: float


def trim(V: np.ndarray, policy: TrimPolicy):
    """Zero every edge with ``|V_jk| < epsilon_min``.

    Returns the trimmed adjacency and the removed off-diagonal edges (one per
    unordered pair, heaviest first). Exact zeros are not reported.
    """
    keep = np.abs(V) >= policy.epsilon_min
    Vt = np.where(keep, V, 0.0)
    rows, cols = np.nonzero(~keep & (V != 0.0))
    removed = [
        RemovedEdge(int(a) + 1, int(b) + 1, float(V[a, b])) for a, b in zip(rows, cols) if a < b
    ]
    removed.sort(key=lambda e: (-abs(e.weight), e.a, e.b))
    return Vt, removed


def recompute_error(sigma: np.ndarray, V_trimmed: np.ndarray) -> np.ndarray:
    """Error matrix U' = 2 cov[P - V' Q] seen when V' is taken as the graph."""
    return 2.0 * graphs.nullifier_covariance(sigma, V_trimmed)


def gamma(U: np.ndarray) -> np.ndarray:
    """Error vector: off-diagonal row mass of U relative to its diagonal."""
    U = np.asarray(U, dtype=float)
    if U.ndim != 2 or U.shape[0] != U.shape[1]:
        raise InvalidErrorMatrixError(f"error matrix must be square, got {U.shape}")
    d = np.diag(U)
    if np.any(d <= 0):
        raise InvalidErrorMatrixError("error matrix has a non-positive diagonal entry")
    off = np.abs(U).sum(axis=1) - np.abs(d)
    return np.maximum(off, 0.0) / d


def epsilon_min_criterion(r1: float, r2: float) -> float:
    """Edge weight e^{-(r1+r2)} at which a neglected edge doubles the P noise."""
    if r1 < 0 or r2 < 0:
        raise InvalidSpecError("squeezing gains must be >= 0")
    return math.exp(-(r1 + r2))


def bulk_modes(N: int, shifts: Sequence[int]) -> np.ndarray:
    """Boolean mask of modes far enough from the comb edges to count as bulk.

    The margin is the largest shift that is shorter than half the comb; a
    shift of N/2 or more only couples across the pump point and does not
    carve out an edge layer. With no such shift every mode is bulk.
    """
    short = [s for s in shifts if s < N // 2]
    margin = max(short) if short else 0
    j = np.arange(1, N + 1)
    return (j - 1 >= margin) & (N - j >= margin)


@dataclass
class ErrorReport:
    epsilon_min: float
    gamma: np.ndarray  # from the trimmed error matrix
    gamma_raw: np.ndarray  # from the untrimmed error matrix
    u_diag: np.ndarray  # diagonal of the trimmed error matrix
    trace_u: float
    trace_u_trimmed: float
    removed_edges: int
    max_removed_weight: float
    bulk: np.ndarray = field(repr=False)

    @property
    def N(self) -> int:
        return len(self.gamma)

    @property
    def mean_diag_u(self) -> float:
        return self.trace_u / self.N

    def summary(self) -> dict:
        g = self.gamma
        gb = g[self.bulk] if self.bulk.any() else g
        return {
            "epsilon_min": self.epsilon_min,
            "trace_u": self.trace_u,
            "trace_u_trimmed": self.trace_u_trimmed,
            "mean_diag_u": self.mean_diag_u,
            "removed_edges": self.removed_edges,
            "max_removed_weight": self.max_removed_weight,
            "gamma_mean": float(g.mean()),
            "gamma_max": float(g.max()),
            "gamma_raw_mean": float(self.gamma_raw.mean()),
            "bulk_modes": int(self.bulk.sum()),
            "bulk_fraction_gamma_le_0p1": float(np.mean(gb <= 0.1)),
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["mode_index", "gamma", "u_diag"])
        for j, (g, u) in enumerate(zip(self.gamma, self.u_diag), start=1):
            w.writerow([j, _fmt(g), _fmt(u)])
        return buf.getvalue()

    def to_json(self) -> dict:
        out = self.summary()
        out["modes"] = [
            {"mode_index": j, "gamma": _fmt(g), "gamma_raw": _fmt(g0), "u_diag": _fmt(u), "bulk": bool(b)}
            for j, (g, g0, u, b) in enumerate(
                zip(self.gamma, self.gamma_raw, self.u_diag, self.bulk), start=1
            )
        ]
        return out


def _fmt(x: float) -> float:
    # 10 significant digits keeps files stable across BLAS builds
    return float(f"{float(x):.10g}")


def analyze(sigma: np.ndarray, graph: graphs.ComplexGraph, policy: TrimPolicy,
            shifts: Sequence[int] = ()) -> tuple[np.ndarray, ErrorReport]:
    """Trim ``graph`` and compute the error report. Returns ``(V', report)``."""
    Vt, removed = trim(graph.V, policy)
    U_trim = recompute_error(sigma, Vt)
    report = ErrorReport(
        epsilon_min=policy.epsilon_min,
        gamma=gamma(U_trim),
        gamma_raw=gamma(graph.U),
        u_diag=np.diag(U_trim).copy(),
        trace_u=float(np.trace(graph.U)),
        trace_u_trimmed=float(np.trace(U_trim)),
        removed_edges=len(removed),
        max_removed_weight=abs(removed[0].weight) if removed else 0.0,
        bulk=bulk_modes(graph.N, shifts),
    )
    return Vt, report


def aligned_graph(comb: hamiltonians.CombSpec, tones: Sequence[hamiltonians.ToneSpec],
                  scheme="extrinsic", plan: graphs.LocalUnitaryPlan | None = None):
    """Build the state, apply the Fourier plan, and extract its graph.

    Returns ``(sigma_aligned, graph)``.
    """
    sigma = hamiltonians.build_state(comb, tones, scheme)
    plan = plan or graphs.LocalUnitaryPlan.default(comb.N)
    sigma = graphs.local_fourier(sigma, plan)
    return sigma, graphs.graph_from_covariance(sigma)


def trace_u_vs_squeezing(N: int, r_values: Iterable[float],
                         tones: Sequence[hamiltonians.ToneSpec] = (),
                         scheme="extrinsic") -> list[tuple[float, float]]:
    """Mean diagonal of U after the default Fourier plan, for each r."""
    rows = []
    for r in r_values:
        _, g = aligned_graph(hamiltonians.CombSpec(N, float(r)), tones, scheme)
        rows.append((float(r), float(np.trace(g.U)) / N))
    return rows


@dataclass(frozen=True)
class TwoModeResult:
    predicted: float
    simulated: float

    @property
    def residual(self) -> float:
        return abs(self.predicted - self.simulated)


def two_mode_oracle(r1: float, r2: float, epsilon: float) -> TwoModeResult:
    """Var[P_1] of two phase-squeezed modes joined by a CZ edge of weight epsilon.

    The simulated value comes from evolving vacuum through the squeezers and
    the CZ gate symplectically; the prediction is the closed form
    ``1/2 e^{-2 r1} (1 + eps^2 e^{2(r1+r2)})``.
    """
    squeeze = np.diag([math.exp(r1), math.exp(r2), math.exp(-r1), math.exp(-r2)])
    cz = np.eye(4)
    cz[2, 1] = epsilon  # P_1 += eps Q_2
    cz[3, 0] = epsilon  # P_2 += eps Q_1
    S = symplectic.compose(cz, squeeze)
    sigma = symplectic.covariance_from_symplectic(S)
    predicted = 0.5 * math.exp(-2 * r1) * (1.0 + epsilon**2 * math.exp(2 * (r1 + r2)))
    return TwoModeResult(predicted=predicted, simulated=float(sigma[2, 2]))
