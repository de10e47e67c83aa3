"""Cluster states of the phase-modulated optical frequency comb.

Build the Gaussian state of a pumped comb under phase modulation, extract its
complex graph, trim weak edges, and check the result against the expected
hypercubic lattice.
"""

__version__ = "0.1.0"

from .error_analysis import ErrorReport, TrimPolicy, gamma, trim  # noqa: E402
from .graphs import ComplexGraph, LocalUnitaryPlan, graph_from_covariance, mobius  # noqa: E402
from .hamiltonians import CombSpec, Scheme, ToneSpec, build_state  # noqa: E402
from .lattice import MacronodeGraph, compare_graphs, contract_macronodes, expected_lattice  # noqa: E402

__all__ = [
    "CombSpec", "ComplexGraph", "ErrorReport", "LocalUnitaryPlan", "MacronodeGraph",
    "Scheme", "ToneSpec", "TrimPolicy", "build_state", "compare_graphs",
    "contract_macronodes", "expected_lattice", "gamma", "graph_from_covariance",
    "mobius", "trim",
]
