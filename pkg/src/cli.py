"""
Command-line front end for spectral inclusion runs.

Copyright (c) 2025 Mathew Mark Mytka
SPDX-License-Identifier: LicenseRef-ESL-A

Licensed under the Earthian Stewardship License (ESL-A).
See LICENSE file for full terms.

Subcommands:
    enclose         EnclosureReport JSON + boundary CSV for one hypothesis
    validate        seeded soundness batches (exit 1 on any violation)
    compare-bounds  grid of primary vs alternative sector estimates
    stargraph       star-graph spectrum, discretization and gap reports
    oracle          cross-check of the in-house eigen/smin kernels

Exit codes: 0 success, 1 soundness violation, 2 config error,
3 inapplicable hypothesis (report still written).
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
import yaml
from scipy.optimize import linear_sum_assignment

from . import bounds as bd
from . import enclosures as enc
from . import oplab
from . import regions as rg
from . import stargraph as sg
from .experiment import ValidationRunner
from .hypotheses import hypothesis_from_dict
from .report_writer import ReportWriter

logger = logging.getLogger(__name__)

__all__ = ['ConfigError', 'load_config', 'expand_batches', 'build_parser', 'main',
           'cmd_enclose', 'cmd_validate', 'cmd_compare_bounds', 'cmd_stargraph', 'cmd_oracle']

SCHEMA_VERSION = 1
KINDS = ('enclose', 'validate', 'compare-bounds', 'stargraph', 'oracle')

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_CONFIG = 2
EXIT_INAPPLICABLE = 3

DEFAULT_WINDOW = rg.Window(-20.0, 20.0, -20.0, 20.0)


class ConfigError(ValueError):
    """Schema problem in a scenario config."""


# =============================================================================
# Config loading
# =============================================================================

def load_config(path: Path) -> Dict[str, Any]:
    """
    Load a YAML or JSON scenario config and check the schema version.

    Raises:
        ConfigError: Unreadable file, parse error, or wrong schema
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e}") from e
    try:
        data = json.loads(text) if path.suffix == '.json' else yaml.safe_load(text)
    except (json.JSONDecodeError, yaml.YAMLError) as e:
        raise ConfigError(f"cannot parse config {path}: {e}") from e
    if not isinstance(data, dict):
        raise ConfigError(f"config {path} must be a mapping")
    if data.get('schema') != SCHEMA_VERSION:
        raise ConfigError(f"config {path}: expected schema: {SCHEMA_VERSION}, got {data.get('schema')!r}")
    return data


def _apply_overrides(config: Dict[str, Any], args: argparse.Namespace) -> Dict[str, Any]:
    config = dict(config)
    if args.seed is not None:
        config['matrix'] = {**config.get('matrix', {}), 'seed': args.seed}
        config['seed'] = args.seed
    if args.window:
        try:
            config['window'] = rg.Window.parse(args.window).to_list()
        except ValueError as e:
            raise ConfigError(f"bad --window {args.window!r}: {e}") from e
    if args.grid is not None:
        config['grid'] = args.grid
    return config


def _window(config: Dict[str, Any]) -> rg.Window:
    w = config.get('window')
    if w is None:
        return DEFAULT_WINDOW
    try:
        return rg.Window.parse(w) if isinstance(w, str) else rg.Window(*(float(v) for v in w))
    except (TypeError, ValueError) as e:
        raise ConfigError(f"bad window {w!r}: {e}") from e


def expand_batches(config: Dict[str, Any]) -> List[Dict[str, Any]]:
    """Each entry of `batches` inherits the top-level keys it does not set."""
    shared = {k: v for k, v in config.items() if k != 'batches'}
    entries = config.get('batches')
    if not entries:
        return [shared]
    out = []
    for entry in entries:
        merged = {**shared, **entry}
        merged['matrix'] = {**shared.get('matrix', {}), **entry.get('matrix', {})}
        out.append(merged)
    return out


def _parse_models(config: Dict[str, Any]):
    try:
        return hypothesis_from_dict(config['hypothesis']), bd.perturbation_from_dict(config['perturbation'])
    except KeyError as e:
        raise ConfigError(f"config missing key {e}") from e
    except (TypeError, ValueError) as e:
        raise ConfigError(str(e)) from e


# =============================================================================
# Commands
# =============================================================================

def cmd_enclose(config: Dict[str, Any], out: Path) -> int:
    """EnclosureReport JSON, region and hypothesis boundaries, bound samples on a grid."""
    h, m = _parse_models(config)
    try:
        report = enc.enclose(h, m, config.get('theorem'), **config.get('options', {}))
    except (TypeError, ValueError) as e:
        raise ConfigError(str(e)) from e
    window = _window(config)
    grid = int(config.get('grid', 0) or 0)
    points = rg.sample_grid(window, grid).ravel() if grid > 1 and report.bound_fn is not None else None

    writer = ReportWriter(out)
    writer.write_json("enclosure.json", report.to_dict(bound_points=points))
    writer.write_regions("boundary.csv",
                         [("", report.region), ("hypothesis/", enc.hypothesis_region(h))], window)

    print(f"\n{'='*60}")
    print(f"Enclosure: {report.theorem} ({type(h).__name__})")
    print(f"{'='*60}")
    for key, value in sorted(report.constants.items()):
        print(f"  {key}: {value}")
    if not report.applicable:
        print(f"[WARN] inapplicable: {report.reason}")
        return EXIT_INAPPLICABLE
    return EXIT_OK


def cmd_validate(config: Dict[str, Any], out: Path, jobs: int = 1) -> int:
    """Run every batch; exit 1 if any scenario fails."""
    failed = 0
    for batch in expand_batches(config):
        if 'seed' not in batch.get('matrix', {}):
            raise ConfigError("validate configs need matrix.seed")
        if batch.get('window') is not None:
            batch['window'] = _window(batch).to_list()
        try:
            runner = ValidationRunner(batch, out, jobs)
        except KeyError as e:
            raise ConfigError(f"config missing key {e}") from e
        except (TypeError, ValueError) as e:
            raise ConfigError(str(e)) from e

        print(f"\n{'='*60}")
        print(f"Validation Batch: {batch.get('name') or runner.report.theorem}")
        print(f"Theorem: {runner.report.theorem}")
        print(f"Scenarios: {runner.scenarios}  Seed: {runner.base_seed}  Jobs: {runner.jobs}")
        print(f"{'='*60}")

        result = runner.run(batch.get('name'))

        print(f"\n{'-'*60}")
        print(f"Passed: {result.n_scenarios - len(result.failures)}/{result.n_scenarios}")
        if not result.applicable:
            print(f"[WARN] hypothesis inapplicable: {result.reason}")
        for sid in result.failures[:10]:
            print(f"[FAIL] {sid}")
        failed += len(result.failures)
    print(f"\n{'='*60}")
    print("All batches passed" if not failed else f"[FAIL] {failed} scenario(s) violated soundness")
    print(f"{'='*60}")
    return EXIT_OK if not failed else EXIT_VIOLATION


def _observed_sign(row: bd.SectorComparison) -> int:
    tol = 1e-12 * (abs(row.primary) + abs(row.alt))
    if abs(row.difference) <= tol:
        return 0
    return 1 if row.difference > 0 else -1


def cmd_compare_bounds(config: Dict[str, Any], out: Path) -> int:
    """Grid CSV of both sector estimates and whether the sign rule holds."""
    try:
        m = bd.perturbation_from_dict(config['perturbation'])
        sector = config['sector']
        vertex, theta = float(sector['vertex']), float(sector['theta'])
        mirrored = bool(sector.get('mirrored', False))
    except KeyError as e:
        raise ConfigError(f"config missing key {e}") from e
    except (TypeError, ValueError) as e:
        raise ConfigError(str(e)) from e
    if not isinstance(m, bd.RelBound):
        raise ConfigError("compare-bounds needs a relbound perturbation")

    window = _window(config)
    rows, mismatches = [], 0
    for z in rg.sample_grid(window, int(config.get('grid', 41) or 41)).ravel():
        for r in bd.compare_sector_estimates(m, complex(z), vertex, theta, mirrored):
            observed = _observed_sign(r)
            ok = observed == 0 or observed == r.predicted
            mismatches += not ok
            rows.append((z.real, z.imag, r.branch, r.primary, r.alt, r.difference, r.predicted, observed))

    writer = ReportWriter(out)
    writer.write_table("sector_compare.csv",
                       ["re", "im", "branch", "primary", "alt", "difference", "predicted", "observed"], rows)
    summary = {'perturbation': m, 'vertex': vertex, 'theta': theta, 'mirrored': mirrored,
               'rows': len(rows), 'sign_rule_mismatches': mismatches}
    writer.write_json("sector_compare.json", summary)
    print(f"Compared {len(rows)} branch estimates; sign-rule mismatches: {mismatches}")
    return EXIT_OK


def _potential(value: Any):
    """Constant or list of per-edge constants."""
    if value is None:
        return None
    if isinstance(value, (int, float, str)):
        return float(value)
    return [complex(*v) if isinstance(v, (list, tuple)) else float(v) for v in value]


def cmd_stargraph(config: Dict[str, Any], out: Path) -> int:
    """Secular roots, optional discretization, Weyl fit, gap persistence, Im tail."""
    try:
        graph_cfg = config['graph']
        g = sg.StarGraph.from_dict(graph_cfg)
    except KeyError as e:
        raise ConfigError(f"config missing key {e}") from e
    except (TypeError, ValueError) as e:
        raise ConfigError(str(e)) from e

    count = int(graph_cfg.get('count', 50))
    window = rg.Window(*graph_cfg['window']) if graph_cfg.get('window') else sg.default_window(g, count)
    spectrum = sg.find_eigs(g, window, seed=int(config.get('seed', 0)))
    writer = ReportWriter(out)
    writer.write_json("spectrum.json", spectrum)

    print(f"\n{'='*60}")
    print(f"Star graph: n={g.n} |Gamma|={g.total_length:.6g} c={g.to_dict()['c']}")
    print(f"{'='*60}")
    print(f"Eigenvalues: {spectrum.eigenvalues.size} (argument principle: {spectrum.expected})")
    if not spectrum.complete:
        print("[WARN] root search incomplete")

    if graph_cfg.get('N'):
        try:
            D = sg.discretize(g, _potential(graph_cfg.get('V')), int(graph_cfg['N']))
        except sg.DiscretizationError as e:
            raise ConfigError(str(e)) from e
        vals = oplab.eig(D).eigenvalues
        vals = vals[np.lexsort((vals.imag, vals.real))]
        writer.write_json("discretized.json", {'N': int(graph_cfg['N']), 'size': D.shape[0], 'eigenvalues': vals})

    if spectrum.eigenvalues.size >= 20:
        writer.write_json("weyl.json", sg.weyl_gap_report(spectrum, g.total_length))
    if graph_cfg.get('subordinate'):
        s = bd.perturbation_from_dict({'type': 'subordinate', **graph_cfg['subordinate']})
        gammaT = float(graph_cfg.get('gammaT', 0.0))
        writer.write_json("gaps.json", sg.graph_gap_persistence(spectrum, s, gammaT))
    if not g.selfadjoint:
        writer.write_json("imag_tail.json", sg.imag_tail_report(spectrum, g, float(graph_cfg.get('tail_R', 0.0))))
    return EXIT_OK


def _match_error(a: np.ndarray, b: np.ndarray) -> float:
    cost = np.abs(a[:, None] - b[None, :])
    rows, cols = linear_sum_assignment(cost)
    return float(cost[rows, cols].max())


def cmd_oracle(config: Dict[str, Any], out: Path) -> int:
    """Random dense matrices: qr vs lapack eigenvalues, jacobi vs svd smin."""
    matrix = config.get('matrix', {})
    if 'seed' not in matrix:
        raise ConfigError("oracle configs need matrix.seed")
    seed, count = int(matrix['seed']), int(matrix.get('count', 20))
    n = int(matrix.get('n', 16))
    tol = float(config.get('tolerance', 1e-8))
    rows = []
    for i in range(count):
        rng = np.random.default_rng(seed + i)
        M = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        scale = np.linalg.norm(M, 2)
        eig_err = _match_error(oplab.eig(M, 'qr').eigenvalues, oplab.eig(M, 'lapack').eigenvalues) / scale
        smin_err = abs(oplab.smin(M, 'jacobi') - oplab.smin(M, 'svd')) / scale
        rows.append({'seed': seed + i, 'n': n, 'eig_error': eig_err, 'smin_error': smin_err,
                     'pass': eig_err <= tol and smin_err <= tol})
    failed = sum(not r['pass'] for r in rows)
    ReportWriter(out).write_json("oracle.json", {'tolerance': tol, 'rows': rows, 'failed': failed})
    print(f"Oracle cross-check: {count - failed}/{count} within {tol:g}")
    return EXIT_OK if not failed else EXIT_VIOLATION


# =============================================================================
# Entry point
# =============================================================================

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spectral_inclusions",
        description="Spectral inclusion regions for perturbed normal operators",
    )
    sub = parser.add_subparsers(dest='command', required=True)
    for kind in KINDS:
        p = sub.add_parser(kind)
        p.add_argument('--config', type=Path, required=True, help="YAML or JSON scenario config")
        p.add_argument('--out', type=Path, default=None, help="Output directory")
        p.add_argument('--seed', type=int, default=None, help="Override the config seed")
        p.add_argument('--jobs', type=int, default=1, help="Worker threads")
        p.add_argument('--window', type=str, default=None, help='"x0,x1,y0,y1"')
        p.add_argument('--grid', type=int, default=None, help="Grid points per axis")
        p.add_argument('--verbose', action='store_true', help="DEBUG logging")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        config = _apply_overrides(load_config(args.config), args)
        kind = config.get('kind', args.command)
        if kind != args.command:
            raise ConfigError(f"config kind {kind!r} does not match command {args.command!r}")
        out = args.out or Path(config.get('out', 'experiments/runs'))
        if args.command == 'enclose':
            return cmd_enclose(config, out)
        if args.command == 'validate':
            return cmd_validate(config, out, args.jobs)
        if args.command == 'compare-bounds':
            return cmd_compare_bounds(config, out)
        if args.command == 'stargraph':
            return cmd_stargraph(config, out)
        return cmd_oracle(config, out)
    except ConfigError as e:
        print(f"[ERROR] {e}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
