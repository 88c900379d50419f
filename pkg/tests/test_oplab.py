"""
Tests for the finite-dimensional validation lab: builders, oracles,
soundness checks and negative controls.
"""

import math

import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy.optimize import linear_sum_assignment

from src import enclosures as enc
from src import hypotheses as hy
from src import oplab
from src import regions as rg
from src.bounds import RelBound, Subordinate


def _match(a, b):
    cost = np.abs(np.asarray(a)[:, None] - np.asarray(b)[None, :])
    rows, cols = linear_sum_assignment(cost)
    return cost[rows, cols].max()


# =============================================================================
# Builders
# =============================================================================

def test_conjugated_model_is_normal():
    T = oplab.build_normal([1, 2j, -3 + 1j, 4, 0.5], conjugate=True, seed=3)
    assert T.normality_defect() < 1e-13
    assert _match(np.linalg.eigvals(T.matrix), T.spectrum) < 1e-12


def test_model_rejects_empty_and_non_finite():
    with pytest.raises(ValueError):
        oplab.NormalModel(np.zeros(0))
    with pytest.raises(ValueError):
        oplab.NormalModel(np.array([1.0, math.inf]))


@pytest.mark.parametrize("kind", oplab.CONTRACTIONS)
def test_contractions_have_unit_norm_bound(kind):
    T = oplab.build_normal([3, -1j, 2 + 2j, 0.0], conjugate=True, seed=1)
    C = oplab.random_contraction(T, kind, seed=2)
    assert np.linalg.norm(C, 2) <= 1 + 1e-12


@pytest.mark.parametrize("kind", oplab.CONTRACTIONS)
def test_relbounded_perturbation_satisfies_bound(kind, relbound):
    T = oplab.build_normal(np.linspace(-5, 5, 12) + 1j * np.linspace(1, -1, 12), conjugate=True, seed=4)
    A = oplab.build_relbounded(T, relbound, seed=5, contraction=kind)
    assert oplab.relbound_violation(T, A, relbound, seed=6) <= 1e-10


@pytest.mark.parametrize("kind", oplab.CONTRACTIONS)
def test_subordinate_perturbation_satisfies_bound(kind, subordinate):
    T = oplab.build_normal(np.arange(1, 13) * (1 + 0.5j), conjugate=True, seed=7)
    A = oplab.build_subordinate(T, subordinate, seed=8, contraction=kind)
    assert oplab.subordinate_violation(T, A, subordinate, seed=9) <= 1e-10


def test_unknown_contraction():
    T = oplab.build_normal([1.0, 2.0])
    with pytest.raises(ValueError, match="unknown contraction"):
        oplab.random_contraction(T, 'orthogonal')


def test_builders_are_seeded(relbound):
    T = oplab.build_normal([1, 2, 3j], conjugate=True, seed=11)
    A1 = oplab.build_relbounded(T, relbound, seed=12)
    A2 = oplab.build_relbounded(T, relbound, seed=12)
    np.testing.assert_array_equal(A1, A2)


# =============================================================================
# Oracles
# =============================================================================

def test_eig_methods_agree(rng, relbound):
    T = oplab.build_normal(rng.standard_normal(15) + 1j * rng.standard_normal(15), conjugate=True, seed=rng)
    M = T.matrix + oplab.build_relbounded(T, relbound, seed=rng)
    lapack = oplab.eig(M, 'lapack')
    qr = oplab.eig(M, 'qr')
    assert qr.method == 'qr' and qr.iterations > 0
    assert _match(lapack.eigenvalues, qr.eigenvalues) < 1e-9
    assert lapack.residuals.max() < 1e-12
    assert qr.residuals.max() < 1e-10


def test_smin_methods_agree(rng):
    M = rng.standard_normal((8, 8)) + 1j * rng.standard_normal((8, 8))
    assert oplab.smin(M, 'jacobi') == pytest.approx(oplab.smin(M, 'svd'), abs=1e-7)


@pytest.mark.parametrize("fn,method", [(oplab.eig, 'arpack'), (oplab.smin, 'power')])
def test_unknown_oracle_method(fn, method):
    with pytest.raises(ValueError):
        fn(np.eye(2), method)


# =============================================================================
# Soundness checks
# =============================================================================

SOUND_CASES = [
    (hy.DiskComplement(5.0), RelBound(0.3, 0.2)),
    (hy.HorizontalStripWithGap(-1.0, 1.0, -2.0, 6.0), RelBound(0.3, 0.2)),
    (hy.ImUpperBounded(1.0), RelBound(0.3, 0.2)),
    (hy.VerticalGap(-4.0, 4.0), RelBound(0.3, 0.1)),
    (hy.HorizontalStripWithGap(-1.0, 1.0, -2.0, 30.0), Subordinate(0.5, 0.5)),
]


@pytest.mark.parametrize("h,m", SOUND_CASES)
@pytest.mark.parametrize("kind", ['unitary', 'aligned'])
def test_enclosure_holds_on_sampled_models(h, m, kind):
    spectrum = oplab.sample_spectrum(h, 40, seed=21)
    T = oplab.build_normal(spectrum, conjugate=True, seed=22)
    if isinstance(m, Subordinate):
        A = oplab.build_subordinate(T, m, seed=23, contraction=kind)
    else:
        A = oplab.build_relbounded(T, m, seed=23, contraction=kind)
    report = enc.enclose(h, m)
    assert report.applicable
    verdict = oplab.verify_enclosure(T, A, report, method='lapack')
    assert verdict.passed, verdict.offenders
    assert verdict.checked == 40
    assert verdict.timings == {}


def test_shrunk_disk_is_caught():
    h, m = hy.DiskComplement(5.0), RelBound(0.3, 0.2)
    T = oplab.build_normal([5, 5j, -5, 6])
    A = oplab.build_relbounded(T, m, contraction='aligned')
    report = enc.enclose(h, m)
    assert oplab.verify_enclosure(T, A, report).passed
    shrunk = oplab.shrink_report(report)
    assert shrunk.theorem == 'disk_complement_shrunk'
    verdict = oplab.verify_enclosure(T, A, shrunk)
    assert not verdict.passed
    assert verdict.offenders


def test_inapplicable_report_passes_vacuously():
    report = enc.enclose(hy.DiskComplement(1.0), RelBound(1.0, 0.5))
    T = oplab.build_normal([2.0])
    verdict = oplab.verify_enclosure(T, np.eye(1), report)
    assert verdict.passed
    assert verdict.checked == 0
    assert verdict.reason == 'inapplicable:radius_nonpositive'


def test_timings_recorded_on_request():
    h, m = hy.DiskComplement(5.0), RelBound(0.3, 0.2)
    T = oplab.build_normal(oplab.sample_spectrum(h, 10, seed=1))
    A = oplab.build_relbounded(T, m, seed=2)
    verdict = oplab.verify_enclosure(T, A, enc.enclose(h, m), record_timings=True)
    assert set(verdict.timings) == {'eig_s', 'total_s'}


def test_shrink_unsupported():
    report = enc.enclose(hy.SectorOnly(2.0, 0.3), RelBound(0.3, 0.2))
    with pytest.raises(ValueError, match="no negative control"):
        oplab.shrink_report(report)


@pytest.mark.parametrize("method", ['svd', 'jacobi'])
def test_resolvent_bound_holds(method):
    h, m = hy.DiskComplement(5.0), RelBound(0.3, 0.2)
    T = oplab.build_normal(oplab.sample_spectrum(h, 20, seed=31), conjugate=True, seed=32)
    A = oplab.build_relbounded(T, m, seed=33)
    report = enc.enclose(h, m)
    zs = oplab.sample_region_points(report, rg.Window(-4, 4, -4, 4), 25, seed=34)
    assert zs.size == 25
    verdict = oplab.verify_resolvent_bound(T, A, report, zs, method=method)
    assert verdict.passed
    assert verdict.checked == 25
    assert 0 < verdict.worst <= 1 + 1e-6


def test_resolvent_bound_needs_bound():
    report = enc.enclose(hy.DiskComplement(1.0), RelBound(1.0, 0.5))
    T = oplab.build_normal([2.0])
    with pytest.raises(ValueError):
        oplab.verify_resolvent_bound(T, np.zeros((1, 1)), report, [0j])


# =============================================================================
# Homotopy
# =============================================================================

FINITE = hy.FiniteEigsPlusStrip(-1.0, 1.0, -10.0, 10.0, ((-3 + 0j, 1), (3 + 0j, 2)))
FINITE_M = RelBound(0.2, 0.05)


def _finite_model():
    T = oplab.build_normal(oplab.sample_spectrum(FINITE, 24, seed=41), conjugate=True, seed=42)
    return T, oplab.build_relbounded(T, FINITE_M, seed=43)


def test_homotopy_disk_counts_constant():
    T, A = _finite_model()
    plan = enc.ev_disks(FINITE, FINITE_M).plan
    result = oplab.homotopy_multiplicity(T, A, FINITE, FINITE_M, plan)
    assert result.precondition_ok
    assert result.expected == {'0': 1, '1': 2}
    assert result.constant
    assert result.passed
    assert len(result.counts['1']) == len(plan['s_grid'])


def test_homotopy_rect_counts_constant():
    T, A = _finite_model()
    contour = enc.rect_contour(FINITE, FINITE_M)
    result = oplab.homotopy_multiplicity(T, A, FINITE, FINITE_M, contour)
    assert result.passed
    assert result.counts['rect'][0] == 3


def test_homotopy_invalid_contour():
    T, A = _finite_model()
    contour = enc.rect_contour(FINITE, FINITE_M, eta=0.5)
    result = oplab.homotopy_multiplicity(T, A, FINITE, FINITE_M, contour)
    assert not result.precondition_ok
    assert result.reason == 'eta_too_small'
    assert not result.passed


# =============================================================================
# Samplers
# =============================================================================

def _angle_ok(w, theta):
    return (np.abs(w) < 1e-12) | (np.abs(np.angle(w)) <= theta + 1e-9)


SAMPLER_CASES = [
    (hy.DiskComplement(5.0), lambda z: np.abs(z) >= 5 - 1e-12),
    (hy.ImUpperBounded(1.0), lambda z: z.imag <= 1.0),
    (hy.HorizontalStripWithGap(-1.0, 1.0, -2.0, 6.0),
     lambda z: (np.abs(z.imag) <= 1.0) & ~((z.real > -2) & (z.real < 6))),
    (hy.SemiBounded(-1.0, 1.0, 'right', 2.0), lambda z: (np.abs(z.imag) <= 1.0) & (z.real >= 2.0)),
    (hy.SectorOnly(2.0, 0.3), lambda z: _angle_ok(z - 2.0, 0.3)),
    (hy.Bisector(-3.0, 3.0, 0.3), lambda z: _angle_ok(z - 3.0, 0.3) | _angle_ok(-3.0 - z, 0.3)),
    (hy.VerticalGap(-1.0, 1.0), lambda z: ~((z.real > -1) & (z.real < 1))),
    (hy.RectComplement(-3.0, 3.0, -2.0, 2.0),
     lambda z: ~((np.abs(z.real) < 3) & (np.abs(z.imag) < 2))),
    (hy.GapSequence(((1.0, 2.0), (4.0, 8.0)), (-1.0, 1.0)),
     lambda z: ~(((z.real > 1) & (z.real < 2)) | ((z.real > 4) & (z.real < 8)))),
    (hy.ParabolicBisector(-5.0, 5.0),
     lambda z: ((z.real >= 5) & (z.imag ** 2 <= (z.real - 5) ** 2 * (z.real - 5) ** 2 + 1e-9))
     | ((z.real <= -5) & (z.imag ** 2 <= (-5 - z.real) ** 4 + 1e-9))),
]


@pytest.mark.parametrize("h,inside", SAMPLER_CASES)
def test_sampled_spectrum_satisfies_hypothesis(h, inside):
    z = oplab.sample_spectrum(h, 50, seed=51)
    assert z.size == 50
    assert np.all(inside(z))


def test_finite_eigs_sampler_keeps_isolated_eigenvalues():
    z = oplab.sample_spectrum(FINITE, 20, seed=3)
    assert np.count_nonzero(z == 3) == 2
    assert np.count_nonzero(z == -3) == 1


def test_sampler_is_seeded():
    h = hy.DiskComplement(2.0)
    np.testing.assert_array_equal(oplab.sample_spectrum(h, 9, seed=5), oplab.sample_spectrum(h, 9, seed=5))


def test_region_points_lie_in_region():
    report = enc.enclose(hy.HorizontalStripWithGap(-1.0, 1.0, -2.0, 6.0), RelBound(0.3, 0.2))
    pts = oplab.sample_region_points(report, rg.Window(-5, 9, -5, 5), 40, seed=2)
    assert 0 < pts.size <= 40
    assert report.contains(pts).all()
    assert np.isfinite(report.bound(pts)).all()


# =============================================================================
# Worked model
# =============================================================================

def test_gap_closing_example():
    xs = np.array([0.0, 0.25, 1.0, 4.0])
    T, A, s = oplab.example_gap_closing(1.0, xs)
    assert s == Subordinate(1.0, 0.5)
    assert oplab.subordinate_violation(T, A, s) <= 1e-12
    vals = np.linalg.eigvals(T.matrix + A)
    roots = np.sqrt(np.abs(xs))
    expected = np.concatenate([(1 - roots) + 1j * xs, -(1 - roots) + 1j * xs])
    assert _match(vals, expected) < 1e-12
    assert np.min(np.abs(vals.real)) < 1e-12

    h = hy.HorizontalStripWithGap(0.0, 4.0, -1.0, 1.0)
    report = enc.psub_strip(h, s)
    assert not report.applicable
    assert report.reason == 'gap_too_narrow'


def test_verdict_to_dict():
    v = oplab.Verdict(False, 3, [1 + 2j], worst=1.5)
    assert v.to_dict() == {'pass': False, 'checked': 3, 'offenders': [[1.0, 2.0]],
                           'worst': 1.5, 'reason': None, 'timings': {}}


def test_normal_model_eigenvalues_match_spectrum():
    T = oplab.build_normal([1, 1j], conjugate=False)
    assert_allclose(np.diag(T.matrix), [1, 1j])
    assert T.to_dict() == {'n': 2, 'spectrum': [[1.0, 0.0], [0.0, 1.0]], 'conjugated': False}
