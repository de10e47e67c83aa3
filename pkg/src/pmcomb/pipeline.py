"""End-to-end runs: build, align, extract, trim, contract, compare, write."""

from __future__ import annotations

import concurrent.futures
import csv
import io
import logging
import os
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from . import __version__, error_analysis, graphs, hamiltonians, lattice, symplectic
from .config import RunConfig
from .exceptions import PmcombError

log = logging.getLogger(__name__)

SYMPLECTIC_GATE = symplectic.SYMPLECTIC_TOL
Y_BLOCK_GATE = 1e-7


def _rounded(obj):
    if isinstance(obj, float):
        return error_analysis._fmt(obj)
    if isinstance(obj, dict):
        return {k: _rounded(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_rounded(v) for v in obj]
    if isinstance(obj, np.generic):
        return _rounded(obj.item())
    return obj


@dataclass
class ResultRecord:
    config_hash: str
    config: RunConfig
    report: dict = field(default_factory=dict)
    files: dict = field(default_factory=dict)
    timings: dict = field(default_factory=dict)
    version: str = __version__
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.error is None and bool(self.report.get("accuracy", {}).get("ok", False))


@dataclass
class Artifacts:
    """In-memory run products, written out by :func:`write_artifacts`."""

    graph: lattice.MacronodeGraph
    errors: error_analysis.ErrorReport
    report: dict


def simulate(config: RunConfig):
    """Run the pipeline in memory. Returns ``(artifacts, timings)``."""
    timings = {}
    t0 = time.perf_counter()
    comb, tones = config.comb, config.tone_specs
    S = hamiltonians.evolution(comb, tones, config.scheme)
    _, symp_residual = symplectic.is_symplectic(S)
    sigma = symplectic.covariance_from_symplectic(S)
    timings["build"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    if config.lu_plan == "default":
        plan = graphs.LocalUnitaryPlan.default(config.N)
    else:
        plan = graphs.LocalUnitaryPlan(tuple(config.lu_plan))
    sigma = graphs.local_fourier(sigma, plan)
    g = graphs.graph_from_covariance(sigma)
    y_residual = graphs.check_y_block_form(sigma, g)
    timings["extract"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    policy = error_analysis.TrimPolicy(config.epsilon_min)
    V_trim, err = error_analysis.analyze(sigma, g, policy, config.shifts)
    U_trim = error_analysis.recompute_error(sigma, V_trim)
    timings["errors"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    macro = lattice.contract_macronodes(g, comb, policy, U_trimmed=U_trim)
    shifts = config.shifts
    lattice_doc = {"shifts": shifts, "spokes": lattice.spoke_counts(shifts)}
    if shifts:
        expected = lattice.expected_lattice(config.N // 2, shifts)
        diff = lattice.compare_graphs(macro, expected)
        lattice_doc["diff"] = diff.to_json()
        lattice_doc["matches_expected"] = diff.empty
        if all(s < config.N // 2 for s in shifts):
            bare = lattice.compare_graphs(macro, lattice.expected_lattice(config.N // 2, shifts, fold_center=False))
            lattice_doc["center_fold_edges"] = len(bare.extra)
    else:
        lattice_doc["matches_expected"] = not macro.edges
    lattice_doc["edge_count"] = len(macro.edges)
    lattice_doc["degree_histogram"] = {str(k): v for k, v in lattice.degree_histogram(macro).items()}
    if len(shifts) >= 2:
        lattice_doc["width"] = lattice_doc["spokes"][0]
    timings["lattice"] = time.perf_counter() - t0

    accuracy = {
        "symplectic_residual": symp_residual,
        "y_block_residual": y_residual,
        "graph_asymmetry": g.asymmetry,
        "sigma_qq_condition": g.condition_number,
        **graphs.bipartite_residuals(g),
    }
    accuracy["ok"] = bool(symp_residual <= SYMPLECTIC_GATE and y_residual <= Y_BLOCK_GATE)

    macro = lattice.MacronodeGraph(
        M=macro.M, edges=macro.edges, epr_weights=macro.epr_weights, u_diag=macro.u_diag,
        meta={"config_hash": config.config_hash(), "shifts": shifts,
              "epsilon_min": config.epsilon_min, "scheme": config.scheme.value},
    )
    report = _rounded({"accuracy": accuracy, "errors": err.summary(), "lattice": lattice_doc})
    report.update(
        tool_version=__version__,
        config_hash=config.config_hash(),
        config=config.canonical(include_output=False),
    )
    return Artifacts(graph=macro, errors=err, report=report), timings


def write_artifacts(art: Artifacts, out_dir: Path) -> dict:
    out_dir.mkdir(parents=True, exist_ok=True)
    files = {
        "graph.json": lattice.dumps(art.graph.to_json()),
        "graph.dot": art.graph.to_dot(),
        "gamma.csv": art.errors.to_csv(),
        "report.json": lattice.dumps(art.report),
    }
    paths = {}
    for name, text in files.items():
        path = out_dir / name
        path.write_text(text, encoding="utf-8", newline="\n")
        paths[name] = str(path)
    return paths


def run_simulation(config: RunConfig, out_dir: str | os.PathLike | None = None) -> ResultRecord:
    """Execute one configuration and write graph.json, graph.dot, gamma.csv,
    report.json (and the non-deterministic timings.json) into ``out_dir``.

    Library errors are caught and recorded on the returned record.
    """
    rec = ResultRecord(config_hash=config.config_hash(), config=config)
    target = out_dir if out_dir is not None else config.output_dir
    try:
        art, rec.timings = simulate(config)
    except PmcombError as exc:
        rec.error = f"{type(exc).__module__}.{type(exc).__name__}: {exc}"
        log.error("run %s failed: %s", rec.config_hash, rec.error)
        return rec
    rec.report = art.report
    if target is not None:
        target = Path(target)
        rec.files = write_artifacts(art, target)
        timing_doc = {"tool_version": __version__, "seconds": rec.timings}
        (target / "timings.json").write_text(lattice.dumps(timing_doc), encoding="utf-8")
        rec.files["timings.json"] = str(target / "timings.json")
    return rec


def _run_point(args):
    config, out_dir = args
    return run_simulation(config, out_dir)


SWEEP_COLUMNS = [
    "config_hash", "status", "N", "r", "m", "epsilon_min", "scheme", "shifts",
    "trace_u", "trace_u_trimmed", "mean_diag_u", "gamma_mean", "gamma_max",
    "removed_edges", "missing_edges", "extra_edges",
]


def sweep_table(records: Sequence[ResultRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SWEEP_COLUMNS)
    for rec in sorted(records, key=lambda r: r.config_hash):
        cfg = rec.config
        ms = sorted({t.m for t in cfg.tones})
        row = {
            "config_hash": rec.config_hash,
            "status": "ok" if rec.ok else ("error" if rec.error else "accuracy"),
            "N": cfg.N, "r": cfg.r, "m": "/".join(repr(m) for m in ms),
            "epsilon_min": cfg.epsilon_min, "scheme": cfg.scheme.value,
            "shifts": "/".join(str(s) for s in cfg.shifts),
        }
        if rec.report:
            e = rec.report["errors"]
            d = rec.report["lattice"].get("diff", {})
            row.update(
                trace_u=e["trace_u"], trace_u_trimmed=e["trace_u_trimmed"], mean_diag_u=e["mean_diag_u"],
                gamma_mean=e["gamma_mean"], gamma_max=e["gamma_max"], removed_edges=e["removed_edges"],
                missing_edges=d.get("missing_count", 0), extra_edges=d.get("extra_count", 0),
            )
        w.writerow([row.get(c, "") for c in SWEEP_COLUMNS])
    return buf.getvalue()


def run_sweep(configs: Sequence[RunConfig], workers: int = 1,
              out_dir: str | os.PathLike | None = None) -> list[ResultRecord]:
    """Run every configuration, each independently, and merge by config hash.

    With ``out_dir`` each point writes into ``out_dir/<config_hash>/`` and the
    merged table goes to ``out_dir/sweep.csv``. Output does not depend on
    ``workers``.
    """
    base = Path(out_dir) if out_dir is not None else None
    jobs = [(c, base / c.config_hash() if base else None) for c in configs]
    if workers <= 1 or len(jobs) <= 1:
        records = [_run_point(j) for j in jobs]
    else:
        with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(_run_point, jobs))
    records.sort(key=lambda r: r.config_hash)
    if base is not None:
        base.mkdir(parents=True, exist_ok=True)
        (base / "sweep.csv").write_text(sweep_table(records), encoding="utf-8", newline="\n")
    return records
