"""Command-line front end: ``pmcomb simulate|sweep|verify|export``."""

from __future__ import annotations

import json
import logging
import sys
from pathlib import Path

import click

from . import lattice
from .config import expand_grid, parse_config, validate_config
from .exceptions import ConfigError
from .pipeline import run_simulation, run_sweep


def _load_config(path, epsilon_min, scheme, large):
    text = Path(path).read_text(encoding="utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise click.ClickException(f"{path}: not valid JSON: {exc}")
    if isinstance(doc, dict):
        if epsilon_min is not None:
            doc["epsilon_min"] = epsilon_min
        if scheme is not None:
            doc["scheme"] = scheme
    try:
        return validate_config(doc, allow_large=large) if isinstance(doc, dict) else parse_config(text)
    except ConfigError as exc:
        raise click.ClickException(str(exc))


def _common(f):
    f = click.option("--large", is_flag=True, help="Allow N up to 1000 (slow).")(f)
    f = click.option("--scheme", type=click.Choice(["extrinsic", "intrinsic"]), default=None,
                     help="Override the config's scheme.")(f)
    f = click.option("--epsilon-min", type=float, default=None, help="Override the trimming threshold.")(f)
    f = click.option("--out", "out", type=click.Path(file_okay=False), default=None, help="Output directory.")(f)
    f = click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False),
                     required=True, help="JSON config file.")(f)
    return f


@click.group()
@click.option("-v", "--verbose", is_flag=True)
@click.version_option(package_name="artifact")
def main(verbose):
    """Simulate and verify cluster states of the phase-modulated comb."""
    logging.basicConfig(level=logging.INFO if verbose else logging.WARNING, format="%(levelname)s %(message)s")


@main.command()
@_common
def simulate(config_path, out, epsilon_min, scheme, large):
    """Run one configuration and write graph.json, graph.dot, gamma.csv, report.json."""
    cfg = _load_config(config_path, epsilon_min, scheme, large)
    out = out or cfg.output_dir
    if out is None:
        raise click.ClickException("no output directory: pass --out or set output_dir")
    rec = run_simulation(cfg, out)
    if rec.error:
        raise click.ClickException(rec.error)
    lat = rec.report["lattice"]
    click.echo(f"{rec.config_hash}  edges={lat['edge_count']}  matches_expected={lat['matches_expected']}  "
               f"trace_u_trimmed={rec.report['errors']['trace_u_trimmed']}  -> {out}")
    sys.exit(0 if rec.ok else 2)


@main.command()
@_common
@click.option("--workers", type=int, default=1, show_default=True, help="Parallel worker processes.")
def sweep(config_path, out, epsilon_min, scheme, large, workers):
    """Expand a {"base", "grid"} sweep document and run every point."""
    doc = json.loads(Path(config_path).read_text(encoding="utf-8"))
    if isinstance(doc, dict) and isinstance(doc.get("base"), dict):
        if epsilon_min is not None:
            doc["base"]["epsilon_min"] = epsilon_min
            doc.get("grid", {}).pop("epsilon_min", None)
        if scheme is not None:
            doc["base"]["scheme"] = scheme
            doc.get("grid", {}).pop("scheme", None)
    try:
        configs = expand_grid(doc, allow_large=large)
    except ConfigError as exc:
        raise click.ClickException(str(exc))
    if out is None:
        raise click.ClickException("pass --out for sweeps")
    records = run_sweep(configs, workers=workers, out_dir=out)
    failed = [r for r in records if not r.ok]
    click.echo(f"{len(records)} points, {len(failed)} failed -> {Path(out) / 'sweep.csv'}")
    for r in failed:
        click.echo(f"  {r.config_hash}: {r.error or 'accuracy gate failed'}", err=True)
    sys.exit(1 if failed else 0)


@main.command()
@_common
@click.option("--bulk-fraction", type=float, default=0.8, show_default=True,
              help="Required share of bulk modes with gamma <= 0.1.")
def verify(config_path, out, epsilon_min, scheme, large, bulk_fraction):
    """Run a configuration and check accuracy, lattice topology and error vector."""
    cfg = _load_config(config_path, epsilon_min, scheme, large)
    rec = run_simulation(cfg, out)
    if rec.error:
        click.echo(f"FAIL run: {rec.error}")
        sys.exit(1)
    rep = rec.report
    acc, err, lat = rep["accuracy"], rep["errors"], rep["lattice"]
    checks = [
        ("symplectic", acc["symplectic_residual"] <= 1e-9, f"residual {acc['symplectic_residual']:.3e}"),
        ("y-block", acc["y_block_residual"] <= 1e-7, f"residual {acc['y_block_residual']:.3e}"),
        ("trace", err["trace_u_trimmed"] >= err["trace_u"] - 1e-12,
         f"Tr U' {err['trace_u_trimmed']:.6g} >= Tr U {err['trace_u']:.6g}"),
        ("lattice", bool(lat["matches_expected"]),
         "missing {} extra {}".format(lat.get("diff", {}).get("missing_count", 0),
                                      lat.get("diff", {}).get("extra_count", 0))),
    ]
    frac = err["bulk_fraction_gamma_le_0p1"]
    checks.append(("gamma", frac >= bulk_fraction, f"{frac:.3f} of bulk modes with gamma <= 0.1"))
    ok = True
    for name, passed, detail in checks:
        ok &= passed
        click.echo(f"{'PASS' if passed else 'FAIL'} {name}: {detail}")
    sys.exit(0 if ok else 1)


@main.command(name="export")
@click.argument("graph_json", type=click.Path(exists=True, dir_okay=False))
@click.option("--format", "fmt", type=click.Choice(["json", "dot"]), default="dot", show_default=True)
@click.option("--out", "out", type=click.Path(dir_okay=False), default=None, help="Output file (default stdout).")
def export(graph_json, fmt, out):
    """Re-export a graph.json file as canonical JSON or DOT."""
    g = lattice.MacronodeGraph.from_json(json.loads(Path(graph_json).read_text(encoding="utf-8")))
    text = lattice.dumps(g.to_json()) if fmt == "json" else g.to_dot()
    if out:
        Path(out).write_text(text, encoding="utf-8", newline="\n")
    else:
        click.echo(text, nl=False)


if __name__ == "__main__":
    main()
