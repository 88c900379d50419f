#!/usr/bin/env python3
"""
Run the acceptance batch: soundness, resolvent bounds, lemma dominance,
selfadjoint reduction, gap closing, gap thresholds, multiplicity homotopy,
star graphs and negative controls.

Usage:
    python scripts/run_acceptance.py
    python scripts/run_acceptance.py --quick
    python scripts/run_acceptance.py --only 3 6 8 --out experiments/runs/acceptance
"""

import sys
import math
import time
import argparse
from pathlib import Path

import numpy as np

# Add src to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from src import bounds as bd
from src import enclosures as enc
from src import oplab
from src import stargraph as sg
from src.bounds import RelBound, Subordinate
from src.cli import expand_batches, load_config
from src.experiment import ValidationRunner
from src.hypotheses import FiniteEigsPlusStrip, GapSequence, HorizontalStripWithGap, Bisector
from src.report_writer import ReportWriter


CONFIG_DIR = Path("experiments/config")
DOMINANCE_MARGIN = 1e-9
EXACTNESS_MARGIN = 1e-3


# =============================================================================
# 1-2: soundness and resolvent bounds
# =============================================================================

def check_soundness(out: Path, quick: bool, jobs: int) -> dict:
    config = load_config(CONFIG_DIR / "validate_default.yaml")
    if quick:
        config['matrix'] = {**config['matrix'], 'scenarios': 20}
    start = time.perf_counter()
    batches, violations, resolvent_failures = {}, 0, 0
    for batch in expand_batches(config):
        result = ValidationRunner(batch, out / "soundness", jobs).run(batch['name'])
        enclosure_fail = sum(not s.enclosure.passed for s in result.scenarios)
        bound_fail = sum(s.resolvent is not None and not s.resolvent.passed for s in result.scenarios)
        violations += enclosure_fail
        resolvent_failures += bound_fail
        batches[batch['name']] = {'theorem': result.theorem, 'scenarios': result.n_scenarios,
                                  'enclosure_failures': enclosure_fail, 'resolvent_failures': bound_fail}
    elapsed = time.perf_counter() - start
    return {
        'batches': batches,
        'runtime_s': elapsed,
        'soundness_pass': violations == 0 and (quick or elapsed <= 180.0),
        'resolvent_pass': resolvent_failures == 0,
        'pass': violations == 0 and resolvent_failures == 0,
    }


# =============================================================================
# 3: lemma dominance and exactness
# =============================================================================

def _random_model(rng) -> RelBound:
    return RelBound(float(rng.uniform(0.0, 2.0)), float(rng.uniform(0.0, 0.9)))


def _strip_sampler(g1, g2, seed):
    edges = bd.strip_boundary_sampler(g1, g2, seed=seed)

    def sample(n):
        pts = edges(n)
        inner = pts.real[: n // 4] + 1j * np.random.default_rng(seed).uniform(g1, g2, n // 4)
        return np.concatenate([pts, inner])
    return sample


def check_dominance(cases: int, samples: int, seed: int = 11) -> dict:
    rng = np.random.default_rng(seed)
    worst = {'line': -math.inf, 'strip': -math.inf, 'sector_alt': -math.inf, 'sector_tan': -math.inf}
    exact = {'vertical': 0.0, 'gapped_plane': 0.0}
    for i in range(cases):
        m = _random_model(rng)
        gamma = float(rng.uniform(-3, 3))
        z = complex(rng.uniform(-10, 10), gamma + rng.uniform(0.1, 5))
        oracle = bd.oracle_sup(m, z, bd.line_sampler(gamma, seed=i), samples)
        worst['line'] = max(worst['line'], oracle - bd.sup_h_line(m, z, gamma).value)

        g1, g2 = sorted(rng.uniform(-3, 3, 2))
        z = complex(rng.uniform(-10, 10), g2 + rng.uniform(0.1, 5))
        oracle = bd.oracle_sup(m, z, _strip_sampler(g1, g2, i), samples)
        worst['strip'] = max(worst['strip'], oracle - bd.sup_h_strip(m, z, g1, g2).value)

        vertex, theta = float(rng.uniform(-5, 5)), float(rng.uniform(0, 1.4))
        z = vertex + complex(rng.uniform(-8, 8), rng.uniform(-8, 8))
        est = bd.sup_h_sector_alt(m, z, vertex, theta)
        if math.isfinite(est.value):
            oracle = bd.oracle_sup(m, z, bd.sector_boundary_sampler(vertex, theta, seed=i), samples)
            worst['sector_alt'] = max(worst['sector_alt'], oracle - est.value)

        z = complex(vertex - rng.uniform(0.1, 8), rng.uniform(-8, 8))
        oracle = bd.oracle_sup(m, z, bd.sector_boundary_sampler(vertex, theta, seed=i), samples)
        worst['sector_tan'] = max(worst['sector_tan'], oracle - bd.sup_h_sector_tan(m, z, vertex, theta).value)

        x, mu = float(rng.uniform(-5, 5)), float(rng.uniform(-5, 5))
        if abs(x - mu) > 0.1:
            oracle = bd.oracle_sup(m, complex(mu), bd.vertical_line_sampler(x, seed=i), samples)
            exact['vertical'] = max(exact['vertical'], abs(oracle - bd.sup_h_vertical_exact(m, mu, x).value))

        alpha, beta = sorted(rng.uniform(-5, 5, 2))
        if beta - alpha > 0.5:
            mu = float(rng.uniform(alpha + 0.1, beta - 0.1))
            left = bd.vertical_line_sampler(alpha, seed=i)
            right = bd.vertical_line_sampler(beta, seed=i + 1)
            oracle = max(bd.oracle_sup(m, complex(mu), left, samples // 2),
                         bd.oracle_sup(m, complex(mu), right, samples // 2))
            exact['gapped_plane'] = max(exact['gapped_plane'], abs(
                oracle - bd.sup_h_gapped_plane_exact(m, mu, alpha, beta).value))
    passed = (all(v <= DOMINANCE_MARGIN for v in worst.values())
              and all(v <= EXACTNESS_MARGIN for v in exact.values()))
    return {'cases': cases, 'samples': samples, 'worst_excess': worst, 'exact_error': exact, 'pass': passed}


# =============================================================================
# 4: selfadjoint reduction
# =============================================================================

def check_selfadjoint(cases: int = 100, seed: int = 13) -> dict:
    rng = np.random.default_rng(seed)
    worst_const, mismatched = 0.0, 0
    for _ in range(cases):
        m = RelBound(float(rng.uniform(0, 1)), float(rng.uniform(0, 0.9)))
        alpha = float(rng.uniform(-5, 0))
        beta = alpha + float(rng.uniform(0.5, 10))
        ref = enc.selfadjoint_reference(m, alpha, beta)
        gap = enc.enclose_strip_gap(HorizontalStripWithGap(0.0, 0.0, alpha, beta), m)
        bis = enc.enclose_bisector(Bisector(alpha, beta, 0.0), m)
        worst_const = max(worst_const,
                          abs(gap.constants['alpha_prime'] - ref.alpha_prime),
                          abs(gap.constants['beta_prime'] - ref.beta_prime),
                          abs(bis.constants['alpha_TA'] - ref.alpha_prime),
                          abs(bis.constants['beta_TA'] - ref.beta_prime))
        pts = rng.uniform(-15, 15, 400) + 1j * rng.uniform(-15, 15, 400)
        mismatched += int(np.count_nonzero(gap.region.contains(pts) != ref.contains(pts)))
    return {'cases': cases, 'constant_error': worst_const, 'region_mismatches': mismatched,
            'pass': worst_const <= 1e-14 and mismatched == 0}


# =============================================================================
# 5: gap closing
# =============================================================================

def check_gap_closing(k: float = 1.0) -> dict:
    xs = np.linspace(-2.0, 2.0, 9)
    T, A, s = oplab.example_gap_closing(k, xs)
    vals = oplab.eig(T.matrix + A).eigenvalues
    closest = float(np.min(np.abs(vals.real)))
    unbounded = enc.psub_strip(HorizontalStripWithGap(-math.inf, math.inf, -k, k), s)
    bounded = enc.psub_strip(HorizontalStripWithGap(-2.0, 2.0, -k, k), s)
    return {
        'closest_real_part': closest,
        'unbounded_reason': unbounded.reason,
        'bounded_reason': bounded.reason,
        'pass': closest <= 1e-12 and not unbounded.applicable and unbounded.reason == 'gamma_unbounded',
    }


# =============================================================================
# 6: gap-sequence thresholds
# =============================================================================

def _geometric_gaps(rho: float, count: int):
    q = rho * rho
    return tuple((q ** n, rho * q ** n) for n in range(1, count + 1))


def check_gap_thresholds(b: float = 0.2, a: float = 0.1, count: int = 40) -> dict:
    m = RelBound(a, b)
    bdd_threshold = (1 + b) / (1 - b)
    unbdd_threshold = enc.gaps_unbdd_threshold(b)
    rows = {}
    ok = True
    for name, threshold, imaginary in (('gaps_bdd', bdd_threshold, (-1.0, 1.0)),
                                       ('gaps_unbdd', unbdd_threshold, None)):
        for label, rho in (('below', threshold * 0.98), ('above', threshold * 1.02)):
            report = enc.enclose(GapSequence(_geometric_gaps(rho, count), imaginary), m, name)
            gaps = report.constants['gaps']
            opened = [g['open'] for g in gaps]
            if label == 'below':
                good = not any(opened)
            else:
                good = opened[-1] and all(opened[opened.index(True):])
            ok &= good
            rows[f"{name}_{label}"] = {'rho': rho, 'open_count': report.constants['open_count'],
                                       'last_open': opened[-1], 'pass': good}
    return {'thresholds': {'gaps_bdd': bdd_threshold, 'gaps_unbdd': unbdd_threshold},
            'runs': rows, 'pass': ok}


# =============================================================================
# 7: multiplicity homotopy
# =============================================================================

def check_homotopy(seed: int = 5) -> dict:
    h = FiniteEigsPlusStrip(-1.0, 1.0, -10.0, 10.0, ((-3 + 0j, 1), (3 + 0j, 2)))
    m = RelBound(0.2, 0.05)
    spectrum = [-3, 3, 3, -12, -11 + 0.5j, 11 - 0.5j, 12, 13 + 1j]
    T = oplab.build_normal(spectrum, conjugate=True, seed=seed)
    A = oplab.build_relbounded(T, m, seed)
    report = enc.ev_disks(h, m)
    disks = oplab.homotopy_multiplicity(T, A, h, m, report.plan)
    rect = oplab.homotopy_multiplicity(T, A, h, m, enc.rect_contour(h, m))
    return {'all_qualify': report.constants['all_qualify'], 'disks': disks.to_dict(),
            'rectangle': rect.to_dict(),
            'pass': report.constants['all_qualify'] and disks.passed and rect.passed}


# =============================================================================
# 8: star graphs
# =============================================================================

def _closed_form_error(c, count: int = 20) -> float:
    g = sg.StarGraph((1.0,), c)
    offset = 0.5 if g.kirchhoff else 1.0
    expected = (math.pi * (np.arange(count) + offset)) ** 2
    found = np.sort(sg.find_eigs(g, count=count).eigenvalues.real)
    if found.size != count:
        return math.inf
    return float(np.max(np.abs(found - expected) / expected))


def _discretization_order(g: sg.StarGraph, grids=(24, 48, 96), index: int = 0) -> float:
    exact = np.sort(sg.find_eigs(g, count=10).eigenvalues.real)[index]
    errors = []
    for N in grids:
        vals = np.sort(np.linalg.eigvalsh(sg.discretize(g, N=N)))
        errors.append(abs(vals[index] - exact))
    orders = [math.log2(errors[i] / errors[i + 1]) for i in range(len(errors) - 1)]
    return min(orders)


def check_stargraph() -> dict:
    lengths = (1.0, math.sqrt(2.0), math.sqrt(3.0))
    closed = {'kirchhoff': _closed_form_error(math.inf), 'dirichlet_centre': _closed_form_error(0.0)}
    g = sg.StarGraph(lengths, 0.5)
    order = _discretization_order(g)
    spectrum = sg.find_eigs(g, count=50)
    weyl = sg.weyl_gap_report(spectrum, g.total_length)
    D = sg.discretize(g, N=90)
    disc_imag = float(np.max(np.abs(oplab.eig(D).eigenvalues.imag)))
    gaps = sg.graph_gap_persistence(spectrum, Subordinate(0.02, 0.5), 0.0)
    return {
        'closed_form_error': closed,
        'observed_order': order,
        'weyl': {k: weyl[k] for k in ('count', 'slope', 'expected_slope', 'relative_error')},
        'real_spectrum_imag': disc_imag,
        'spectrum_complete': spectrum.complete,
        'gap_m0': gaps.m0,
        'pass': (max(closed.values()) <= 1e-8 and order >= 1.9 and weyl['relative_error'] <= 0.05
                 and disc_imag <= 1e-8 and spectrum.complete and gaps.m0 is not None),
    }


# =============================================================================
# 9: negative controls
# =============================================================================

def check_negative_controls(out: Path, jobs: int) -> dict:
    config = load_config(CONFIG_DIR / "validate_negative.yaml")
    disk = ValidationRunner(config, out / "negative", jobs).run(config['name'])
    strip_config = dict(config, name='negative_strip_gap', shrink=1.25,
                        hypothesis={'type': 'strip_gap', 'g1': -1.0, 'g2': 1.0,
                                    'alphaT': -2.0, 'betaT': 6.0})
    strip = ValidationRunner(strip_config, out / "negative", jobs).run(strip_config['name'])
    runs = {'disk_complement': len(disk.failures), 'strip_gap': len(strip.failures)}
    return {'violations': runs, 'pass': all(v > 0 for v in runs.values())}


# =============================================================================
# Driver
# =============================================================================

def main():
    parser = argparse.ArgumentParser(description="Run the spectral inclusion acceptance batch")
    parser.add_argument('--quick', action='store_true', help="Reduced scenario and sample counts")
    parser.add_argument('--only', type=int, nargs='*', help="Criteria to run (1-9)")
    parser.add_argument('--jobs', type=int, default=1, help="Worker threads for batches")
    parser.add_argument('--out', type=Path, default=Path("experiments/runs/acceptance"))
    args = parser.parse_args()

    selected = set(args.only or range(1, 10))
    cases, samples = (50, 10_000) if args.quick else (500, 1_000_000)

    print("Spectral inclusion acceptance")
    print("=" * 60)
    print(f"Criteria: {sorted(selected)}  Quick: {args.quick}")

    results = {}
    if selected & {1, 2}:
        results['soundness'] = check_soundness(args.out, args.quick, args.jobs)
    if 3 in selected:
        results['dominance'] = check_dominance(cases, samples)
    if 4 in selected:
        results['selfadjoint'] = check_selfadjoint()
    if 5 in selected:
        results['gap_closing'] = check_gap_closing()
    if 6 in selected:
        results['gap_thresholds'] = check_gap_thresholds()
    if 7 in selected:
        results['homotopy'] = check_homotopy()
    if 8 in selected:
        results['stargraph'] = check_stargraph()
    if 9 in selected:
        results['negative_controls'] = check_negative_controls(args.out, args.jobs)

    ReportWriter(args.out).write_json("acceptance.json", results)

    print(f"\n{'='*60}")
    print("Acceptance Summary")
    print(f"{'='*60}")
    for name, result in results.items():
        print(f"  {name:<20} {'PASS' if result['pass'] else 'FAIL'}")
    failed = [name for name, result in results.items() if not result['pass']]
    if failed:
        print(f"\n[FAIL] {', '.join(failed)}")
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
