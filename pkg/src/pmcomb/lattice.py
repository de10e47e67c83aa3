"""EPR macronode graphs and the lattices the modulation tones should produce.

Qumodes j and p - j (p = N + 1) form macronode ``min(j, p - j)``, so
macronodes are numbered 1..N/2 from the comb edge toward the pump point.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .error_analysis import TrimPolicy, _fmt, trim
from .exceptions import InvalidDimensionError, InvalidSpecError
from .graphs import ComplexGraph
from .hamiltonians import CombSpec


@dataclass(frozen=True)
class MacronodeGraph:
    M: int
    edges: dict  # (a, b) with a < b  ->  weight
    epr_weights: tuple = ()  # intra-pair |V|, index 0 for macronode 1
    u_diag: tuple = ()  # mean U'_jj over the pair, index 0 for macronode 1
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        for a, b in self.edges:
            if not (1 <= a < b <= self.M):
                raise InvalidDimensionError(f"edge {(a, b)} invalid for {self.M} vertices")

    def edge_set(self) -> set:
        return set(self.edges)

    def degrees(self) -> list[int]:
        deg = [0] * self.M
        for a, b in self.edges:
            deg[a - 1] += 1
            deg[b - 1] += 1
        return deg

    def sorted_edges(self):
        return sorted(self.edges.items())

    def to_json(self) -> dict:
        nodes = []
        for v in range(1, self.M + 1):
            node = {"id": v, "kind": "macronode"}
            node["u_diag"] = _fmt(self.u_diag[v - 1]) if self.u_diag else None
            nodes.append(node)
        meta = dict(self.meta)
        meta["vertex_count"] = self.M
        if self.epr_weights:
            meta["epr_weights"] = [_fmt(w) for w in self.epr_weights]
        return {
            "nodes": nodes,
            "edges": [{"a": a, "b": b, "weight": _fmt(w)} for (a, b), w in self.sorted_edges()],
            "meta": meta,
        }

    @classmethod
    def from_json(cls, doc: dict) -> "MacronodeGraph":
        meta = dict(doc.get("meta", {}))
        M = int(meta.pop("vertex_count", len(doc["nodes"])))
        epr = tuple(meta.pop("epr_weights", ()))
        u = tuple(n["u_diag"] for n in doc["nodes"]) if doc["nodes"] and doc["nodes"][0].get("u_diag") is not None else ()
        edges = {(int(e["a"]), int(e["b"])): float(e["weight"]) for e in doc["edges"]}
        return cls(M=M, edges=edges, epr_weights=epr, u_diag=u, meta=meta)

    def to_dot(self, name: str = "macronodes") -> str:
        lines = [f"graph {name} {{"]
        for v in range(1, self.M + 1):
            lines.append(f"  {v};")
        for (a, b), w in self.sorted_edges():
            lines.append(f'  {a} -- {b} [weight="{_fmt(w)!r}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def macronode_of(j: int, N: int) -> int:
    return min(j, N + 1 - j)


def contract_macronodes(graph: ComplexGraph, comb: CombSpec, policy: TrimPolicy,
                        U_trimmed: np.ndarray | None = None) -> MacronodeGraph:
    """Trim V and collapse each EPR pair into one vertex.

    Parallel qumode edges between two macronodes merge by largest |weight|;
    the edge inside a pair is kept as that vertex's EPR weight.
    """
    N = comb.N
    if N % 2 or graph.N != N:
        raise InvalidDimensionError(f"graph has {graph.N} modes, comb has {N}")
    Vt, _ = trim(graph.V, policy)
    rows, cols = np.nonzero(np.triu(Vt, k=1))
    edges: dict = {}
    epr = [0.0] * (N // 2)
    for j, k in zip(rows + 1, cols + 1):
        a, b = macronode_of(int(j), N), macronode_of(int(k), N)
        w = abs(float(Vt[j - 1, k - 1]))
        if a == b:
            epr[a - 1] = max(epr[a - 1], w)
            continue
        key = (min(a, b), max(a, b))
        edges[key] = max(edges.get(key, 0.0), w)
    u_diag = ()
    if U_trimmed is not None:
        d = np.diag(U_trimmed)
        u_diag = tuple(0.5 * (d[v - 1] + d[N - v]) for v in range(1, N // 2 + 1))
    return MacronodeGraph(M=N // 2, edges=edges, epr_weights=tuple(epr), u_diag=u_diag)


def expected_lattice(M: int, shifts: Sequence[int], fold_center: bool = True) -> MacronodeGraph:
    """Integer-shift lattice on macronodes 1..M with edges mu -- mu + shift.

    With ``fold_center`` the shift acts on the underlying qumodes 1..2M and a
    coupling that crosses the pump point lands on macronode
    ``2M + 1 - mu - shift`` instead of running off the end. That is what the
    comb physically produces; ``fold_center=False`` gives the bare lattice.
    """
    shifts = [int(s) for s in shifts]
    if M < 1:
        raise InvalidDimensionError("macronode count must be positive")
    if sorted(set(shifts)) != shifts:
        raise InvalidSpecError(f"shifts must be distinct and ascending, got {shifts}")
    limit = 2 * M if fold_center else M
    for s in shifts:
        if s < 1 or s >= limit:
            raise InvalidSpecError(f"shift {s} out of range for {M} macronodes")
    edges = {}
    N = 2 * M
    for s in shifts:
        if fold_center:
            for j in range(1, N - s + 1):
                a, b = macronode_of(j, N), macronode_of(j + s, N)
                if a != b:
                    edges[(min(a, b), max(a, b))] = 1.0
        else:
            for mu in range(1, M - s + 1):
                edges[(mu, mu + s)] = 1.0
    return MacronodeGraph(M=M, edges=edges, meta={"shifts": shifts, "fold_center": fold_center})


@dataclass(frozen=True)
class GraphDiff:
    missing: tuple  # expected but absent
    extra: tuple  # present but not expected
    matched: int
    weight_min: float
    weight_max: float
    weight_mean: float

    @property
    def empty(self) -> bool:
        return not self.missing and not self.extra

    def to_json(self) -> dict:
        return {
            "missing": [list(e) for e in self.missing],
            "extra": [list(e) for e in self.extra],
            "missing_count": len(self.missing),
            "extra_count": len(self.extra),
            "matched": self.matched,
            "matched_weight_min": _fmt(self.weight_min),
            "matched_weight_max": _fmt(self.weight_max),
            "matched_weight_mean": _fmt(self.weight_mean),
        }


def compare_graphs(actual: MacronodeGraph, expected: MacronodeGraph) -> GraphDiff:
    if actual.M != expected.M:
        raise InvalidDimensionError(f"vertex counts differ: {actual.M} vs {expected.M}")
    a, e = actual.edge_set(), expected.edge_set()
    matched = [actual.edges[x] for x in a & e]
    w = np.array(matched) if matched else np.zeros(1)
    return GraphDiff(
        missing=tuple(sorted(e - a)),
        extra=tuple(sorted(a - e)),
        matched=len(matched),
        weight_min=float(w.min()),
        weight_max=float(w.max()),
        weight_mean=float(w.mean()),
    )


def degree_histogram(g: MacronodeGraph) -> dict[int, int]:
    return dict(sorted(Counter(g.degrees()).items()))


def spoke_counts(shifts: Iterable[int]) -> list[float]:
    """Ratios of consecutive shifts: the lattice width along each new axis."""
    s = sorted(shifts)
    return [s[i + 1] / s[i] for i in range(len(s) - 1)]


def dumps(doc: dict) -> str:
    """Canonical JSON text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(doc, sort_keys=True, indent=2, allow_nan=False) + "\n"
