"""
Finite-dimensional validation lab.

Copyright (c) 2025 Mathew Mark Mytka
SPDX-License-Identifier: LicenseRef-ESL-A

Licensed under the Earthian Stewardship License (ESL-A).
See LICENSE file for full terms.

Builds normal matrices with prescribed spectra and perturbations that
satisfy a relative bound or a p-subordination by construction, then checks
enclosure reports against the eigenvalues of T + A and resolvent bounds
against 1/sigma_min(T + A - z).

Classes:
    NormalModel: diagonal spectrum with optional unitary conjugation
    EigResult: eigenvalues and relative residuals
    Verdict: pass/fail with offending points
    HomotopyResult: eigenvalue counts along T + sA
"""

import logging
import math
import time
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Union

import numpy as np
from scipy import linalg as sla
from scipy.stats import unitary_group

from . import enclosures as enc
from . import regions as rg
from .bounds import RelBound, Subordinate
from .hypotheses import (
    Bisector, BisectorPlusStrip, DiskComplement, FiniteEigsPlusStrip,
    GapSequence, HorizontalStrip, HorizontalStripWithGap, ImUpperBounded,
    ParabolicBisector, RectComplement, SectorOnly, SemiBounded,
    SpectrumHypothesis, VerticalGap,
)
from .linalg import inverse_iteration_residuals, qr_eigvals, smin_jacobi

logger = logging.getLogger(__name__)

__all__ = [
    'NormalModel',
    'EigResult',
    'Verdict',
    'HomotopyResult',
    'CONTRACTIONS',
    'build_normal',
    'random_contraction',
    'build_relbounded',
    'build_subordinate',
    'relbound_violation',
    'subordinate_violation',
    'eig',
    'smin',
    'verify_enclosure',
    'verify_resolvent_bound',
    'homotopy_multiplicity',
    'sample_spectrum',
    'sample_region_points',
    'example_gap_closing',
    'shrink_report',
]

Seed = Union[int, np.random.Generator, None]

CONTRACTIONS = ('unitary', 'subunitary', 'aligned', 'identity')


def _rng(seed: Seed) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


# =============================================================================
# Models
# =============================================================================

@dataclass
class NormalModel:
    """T = Q diag(spectrum) Q^H; Q = None means diagonal."""
    spectrum: np.ndarray
    basis: Optional[np.ndarray] = None

    def __post_init__(self):
        self.spectrum = np.asarray(self.spectrum, dtype=complex).ravel()
        if self.spectrum.size == 0:
            raise ValueError("spectrum must be nonempty")
        if not np.all(np.isfinite(self.spectrum)):
            raise ValueError("spectrum must be finite")

    @property
    def n(self) -> int:
        return self.spectrum.size

    def _lift(self, diag: np.ndarray) -> np.ndarray:
        if self.basis is None:
            return np.diag(diag)
        return (self.basis * diag) @ self.basis.conj().T

    @property
    def matrix(self) -> np.ndarray:
        return self._lift(self.spectrum)

    def function(self, values: np.ndarray) -> np.ndarray:
        """f(T) for f given by its values on the spectrum."""
        return self._lift(np.asarray(values, dtype=complex))

    def normality_defect(self) -> float:
        """||M^H M - M M^H||_F / ||M||_F^2."""
        m = self.matrix
        scale = max(np.linalg.norm(m) ** 2, np.finfo(float).tiny)
        return float(np.linalg.norm(m.conj().T @ m - m @ m.conj().T) / scale)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'n': self.n,
            'spectrum': [[float(t.real), float(t.imag)] for t in self.spectrum],
            'conjugated': self.basis is not None,
        }


@dataclass
class EigResult:
    """Eigenvalues with relative residuals ||Mv - lambda v||/||M||."""
    eigenvalues: np.ndarray
    residuals: np.ndarray
    method: str
    iterations: int = 0


@dataclass
class Verdict:
    """Outcome of a soundness check."""
    passed: bool
    checked: int
    offenders: List[complex] = field(default_factory=list)
    worst: float = 0.0                      # largest violation ratio (bound checks)
    reason: Optional[str] = None
    timings: Dict[str, float] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'pass': self.passed,
            'checked': self.checked,
            'offenders': [[float(z.real), float(z.imag)] for z in self.offenders],
            'worst': self.worst,
            'reason': self.reason,
            'timings': self.timings,
        }


# =============================================================================
# Builders
# =============================================================================

def build_normal(spectrum: Sequence[complex], conjugate: bool = False, seed: Seed = 0) -> NormalModel:
    """Normal model with the given spectrum, optionally conjugated by a seeded Haar unitary."""
    spectrum = np.asarray(spectrum, dtype=complex)
    basis = None
    if conjugate:
        basis = unitary_group.rvs(spectrum.size, random_state=_rng(seed)) if spectrum.size > 1 \
            else np.ones((1, 1), dtype=complex)
    return NormalModel(spectrum, basis)


def random_contraction(T: NormalModel, kind: str = 'unitary', seed: Seed = 0) -> np.ndarray:
    """
    Contraction C with ||C|| <= 1.

    kind:
        unitary: Haar unitary (extremal)
        subunitary: Gaussian matrix scaled to operator norm 1
        aligned: -phase(T), pushing every eigenvalue toward the origin
        identity: I
    """
    n = T.n
    rng = _rng(seed)
    if kind == 'unitary':
        return unitary_group.rvs(n, random_state=rng) if n > 1 else np.exp(2j * np.pi * rng.random()) * np.ones((1, 1))
    if kind == 'subunitary':
        g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        return g / np.linalg.norm(g, 2)
    if kind == 'aligned':
        mags = np.abs(T.spectrum)
        phase = np.where(mags > 0, T.spectrum / np.where(mags > 0, mags, 1.0), 1.0)
        return T.function(-phase)
    if kind == 'identity':
        return np.eye(n, dtype=complex)
    raise ValueError(f"unknown contraction kind {kind!r}; expected one of {CONTRACTIONS}")


def build_relbounded(T: NormalModel, m: RelBound, seed: Seed = 0, contraction: str = 'unitary',
                     C: Optional[np.ndarray] = None) -> np.ndarray:
    """A = C sqrt(a^2 I + b^2 T^H T), so ||Ax||^2 <= a^2||x||^2 + b^2||Tx||^2."""
    if C is None:
        C = random_contraction(T, contraction, seed)
    root = T.function(np.sqrt(m.a ** 2 + m.b ** 2 * np.abs(T.spectrum) ** 2))
    return np.asarray(C, dtype=complex) @ root


def build_subordinate(T: NormalModel, s: Subordinate, seed: Seed = 0, contraction: str = 'unitary',
                      C: Optional[np.ndarray] = None) -> np.ndarray:
    """A = C c |T|^p, so ||Ax|| <= c ||x||^{1-p} ||Tx||^p."""
    if C is None:
        C = random_contraction(T, contraction, seed)
    power = T.function(s.c * np.abs(T.spectrum) ** s.p)
    return np.asarray(C, dtype=complex) @ power


def _random_vectors(n: int, count: int, seed: Seed) -> np.ndarray:
    rng = _rng(seed)
    return rng.standard_normal((n, count)) + 1j * rng.standard_normal((n, count))


def relbound_violation(T: NormalModel, A: np.ndarray, m: RelBound, count: int = 1000,
                       seed: Seed = 0) -> float:
    """max over random x of ||Ax||^2 - a^2||x||^2 - b^2||Tx||^2, relative to the right side."""
    x = _random_vectors(T.n, count, seed)
    lhs = np.sum(np.abs(A @ x) ** 2, axis=0)
    rhs = m.a ** 2 * np.sum(np.abs(x) ** 2, axis=0) + m.b ** 2 * np.sum(np.abs(T.matrix @ x) ** 2, axis=0)
    return float(np.max((lhs - rhs) / np.maximum(rhs, 1.0)))


def subordinate_violation(T: NormalModel, A: np.ndarray, s: Subordinate, count: int = 1000,
                          seed: Seed = 0) -> float:
    """max over random x of ||Ax|| - c||x||^{1-p}||Tx||^p, relative to the right side."""
    x = _random_vectors(T.n, count, seed)
    lhs = np.linalg.norm(A @ x, axis=0)
    rhs = s.c * np.linalg.norm(x, axis=0) ** (1 - s.p) * np.linalg.norm(T.matrix @ x, axis=0) ** s.p
    return float(np.max((lhs - rhs) / np.maximum(rhs, 1.0)))


# =============================================================================
# Oracles
# =============================================================================

def eig(M: np.ndarray, method: str = 'lapack') -> EigResult:
    """
    All eigenvalues of M with residuals.

    method="qr" uses the in-house Hessenberg/QR kernel (inverse-iteration
    residuals); "lapack" uses scipy.linalg.eig.

    Raises:
        linalg.ConvergenceError: QR budget exhausted
    """
    M = np.asarray(M, dtype=complex)
    norm = max(np.linalg.norm(M, 2), np.finfo(float).tiny)
    if method == 'qr':
        vals, iterations = qr_eigvals(M)
        return EigResult(vals, inverse_iteration_residuals(M, vals), 'qr', iterations)
    if method == 'lapack':
        vals, vecs = sla.eig(M)
        vecs = vecs / np.linalg.norm(vecs, axis=0)
        res = np.linalg.norm(M @ vecs - vecs * vals, axis=0) / norm
        return EigResult(np.asarray(vals, dtype=complex), res, 'lapack')
    raise ValueError(f"unknown eig method {method!r}")


def smin(M: np.ndarray, method: str = 'svd') -> float:
    """Smallest singular value: "jacobi" (in-house) or "svd" (scipy.linalg.svdvals)."""
    if method == 'jacobi':
        return smin_jacobi(M)
    if method == 'svd':
        return float(sla.svdvals(np.asarray(M, dtype=complex))[-1])
    raise ValueError(f"unknown smin method {method!r}")


# =============================================================================
# Checks
# =============================================================================

PROBE_DIRECTIONS = np.array([1, 1j, -1, -1j])


def _robustly_inside(region: rg.RegionExpr, lam: complex, margin: float) -> bool:
    """lam and its four probes lam +- d, lam +- i d (d = margin (1 + |lam|)) all in region."""
    d = margin * (1 + abs(lam))
    pts = np.concatenate([[lam], lam + d * PROBE_DIRECTIONS])
    return bool(np.all(region.contains(pts)))


def verify_enclosure(T: NormalModel, A: np.ndarray, report: enc.EnclosureReport,
                     method: str = 'lapack', margin: float = 1e-8,
                     record_timings: bool = False) -> Verdict:
    """
    Pass iff no eigenvalue of T + A lies inside the guaranteed region.
    Eigenvalues within margin (1 + |lambda|) of the boundary are not counted.
    """
    if not report.applicable:
        return Verdict(True, 0, reason=f"inapplicable:{report.reason}")
    start = time.perf_counter()
    vals = eig(T.matrix + A, method).eigenvalues
    eig_time = time.perf_counter() - start
    offenders = [complex(lam) for lam in vals if _robustly_inside(report.region, complex(lam), margin)]
    if offenders:
        logger.warning("%s: %d eigenvalue(s) inside the guaranteed region", report.theorem, len(offenders))
    timings = {'eig_s': eig_time, 'total_s': time.perf_counter() - start} if record_timings else {}
    return Verdict(not offenders, len(vals), offenders, timings=timings)


def verify_resolvent_bound(T: NormalModel, A: np.ndarray, report: enc.EnclosureReport,
                           zs: Sequence[complex], method: str = 'svd',
                           rtol: float = 1e-6, atol: float = 1e-8) -> Verdict:
    """Pass iff 1/smin(T + A - z) <= bound(z)(1 + rtol) + atol at every z with a finite bound."""
    if report.bound_fn is None:
        raise ValueError(f"{report.theorem} has no resolvent bound")
    M = T.matrix + A
    eye = np.eye(T.n)
    zs = np.asarray(zs, dtype=complex).ravel()
    bounds = np.asarray(report.bound_fn(zs), dtype=float)
    offenders, worst, checked = [], 0.0, 0
    for z, bound in zip(zs, bounds):
        if not math.isfinite(bound):
            continue
        checked += 1
        s = smin(M - z * eye, method)
        actual = math.inf if s == 0 else 1.0 / s
        worst = max(worst, actual / bound)
        if actual > bound * (1 + rtol) + atol:
            offenders.append(complex(z))
    return Verdict(not offenders, checked, offenders, worst=worst)


@dataclass
class HomotopyResult:
    """Eigenvalue counts inside each contour along s -> T + sA."""
    s_grid: List[float]
    counts: Dict[str, List[int]]
    expected: Dict[str, int]
    precondition_ok: bool
    reason: Optional[str] = None

    @property
    def constant(self) -> bool:
        return all(len(set(c)) == 1 for c in self.counts.values())

    @property
    def passed(self) -> bool:
        return (self.precondition_ok and self.constant
                and all(self.counts[k][0] == self.expected[k] for k in self.counts))

    def to_dict(self) -> Dict[str, Any]:
        return {
            's_grid': self.s_grid, 'counts': self.counts, 'expected': self.expected,
            'precondition_ok': self.precondition_ok, 'reason': self.reason,
            'constant': self.constant, 'pass': self.passed,
        }


def _circle(center: complex, radius: float, samples: int = 720) -> np.ndarray:
    t = np.linspace(0.0, 2 * math.pi, samples, endpoint=False)
    return center + radius * np.exp(1j * t)


def homotopy_multiplicity(T: NormalModel, A: np.ndarray, h: FiniteEigsPlusStrip, m: RelBound,
                          contour: Union[Dict[str, Any], enc.RectContour],
                          s_grid: Optional[Sequence[float]] = None,
                          method: str = 'lapack') -> HomotopyResult:
    """
    Count eigenvalues of T + sA strictly inside each contour for s in s_grid.

    `contour` is either an ev_disks plan (circles of radius r_k + eps) or a
    RectContour. The contours must lie in the resolvent region computed for
    (sqrt(s) a, sqrt(s) b) at every s; otherwise the precondition fails and
    no counts are taken.
    """
    if isinstance(contour, enc.RectContour):
        s_grid = list(s_grid) if s_grid is not None else [round(0.1 * i, 10) for i in range(11)]
        if not contour.valid:
            return HomotopyResult(s_grid, {}, {}, False, contour.reason)
        shapes = {'rect': (contour.boundary(0.01 * max(contour.eta, 1.0)), contour.inside)}
        expected = {'rect': contour.total_multiplicity}
    else:
        s_grid = list(s_grid) if s_grid is not None else list(contour['s_grid'])
        shapes, expected = {}, {}
        for circle in contour['contours']:
            center = complex(*circle['center'])
            radius = circle['radius']
            key = str(circle['k'])
            shapes[key] = (_circle(center, radius),
                           lambda z, c=center, r=radius: np.abs(np.asarray(z) - c) < r)
            expected[key] = int(circle['multiplicity'])

    for s in s_grid:
        region = enc.ev_disks(h, m.scaled(s)).region
        for key, (boundary, _) in shapes.items():
            if not np.all(region.contains(boundary)):
                logger.warning("contour %s leaves the resolvent region at s=%g", key, s)
                return HomotopyResult(s_grid, {}, expected, False, f"contour_{key}_outside_region")

    counts: Dict[str, List[int]] = {key: [] for key in shapes}
    for s in s_grid:
        vals = eig(T.matrix + s * A, method).eigenvalues
        for key, (_, inside) in shapes.items():
            counts[key].append(int(np.count_nonzero(inside(vals))))
    return HomotopyResult(s_grid, counts, expected, True)


# =============================================================================
# Spectrum samplers
# =============================================================================

def _split(n: int, parts: int) -> List[int]:
    base = [n // parts] * parts
    for i in range(n % parts):
        base[i] += 1
    return base


def _sector_points(rng, vertex: float, theta: float, count: int, reach: float,
                   mirrored: bool) -> np.ndarray:
    """Half on the two boundary rays, half inside."""
    on_ray, inside = _split(count, 2)
    r = reach * rng.random(on_ray)
    sign = rng.choice([-1.0, 1.0], on_ray)
    rays = r * np.exp(1j * sign * theta)
    r2 = reach * rng.random(inside)
    ang = theta * (2 * rng.random(inside) - 1)
    pts = np.concatenate([rays, r2 * np.exp(1j * ang)])
    return vertex - pts if mirrored else vertex + pts


def _parabola_points(rng, lam: float, count: int, reach: float, mirrored: bool) -> np.ndarray:
    x = reach * rng.random(count)
    y = x * x * rng.choice([-1.0, 1.0], count)
    y[count // 2:] *= rng.random(count - count // 2)
    pts = x + 1j * y
    return lam - np.conj(pts) if mirrored else lam + pts


def _outside_gaps(rng, gaps, count: int, reach: float) -> np.ndarray:
    """Real parts outside every gap; half pinned to gap edges."""
    edges = np.array([e for gap in gaps for e in gap])
    pinned, free = _split(count, 2)
    out = [rng.choice(edges, pinned)]
    lo, hi = gaps[0][0] - reach, gaps[-1][1] + reach
    cand = rng.uniform(lo, hi, 4 * free + 8)
    ok = np.ones(cand.size, dtype=bool)
    for alpha, beta in gaps:
        ok &= ~((cand > alpha) & (cand < beta))
    out.append(cand[ok][:free])
    xs = np.concatenate(out)
    if xs.size < count:
        xs = np.concatenate([xs, rng.choice(edges, count - xs.size)])
    return xs


def sample_spectrum(h: SpectrumHypothesis, n: int, seed: Seed = 0, reach: float = 10.0) -> np.ndarray:
    """
    n points of a set satisfying hypothesis h, weighted toward its boundary.

    Args:
        h: Spectral hypothesis
        n: Number of points
        seed: Seed or Generator
        reach: Extent of the sampled part of unbounded sets
    """
    rng = _rng(seed)
    if isinstance(h, ImUpperBounded):
        edge, below = _split(n, 2)
        x = rng.uniform(-reach, reach, n)
        y = np.concatenate([np.full(edge, h.gamma), h.gamma - rng.exponential(reach / 4, below)])
        return x + 1j * y
    if isinstance(h, (HorizontalStrip, SemiBounded)):
        edge, inside = _split(n, 2)
        y = np.concatenate([rng.choice([h.g1, h.g2], edge), rng.uniform(h.g1, h.g2, inside)])
        if isinstance(h, SemiBounded):
            sign = 1.0 if h.side == 'right' else -1.0
            x = h.bound + sign * np.concatenate([[0.0] * (n // 3), rng.uniform(0, reach, n - n // 3)])
        else:
            x = rng.uniform(-reach, reach, n)
        return x + 1j * y
    if isinstance(h, HorizontalStripWithGap):
        xs = _outside_gaps(rng, [(h.alphaT, h.betaT)], n, reach)
        edge, inside = _split(n, 2)
        y = np.concatenate([rng.choice([h.g1, h.g2], edge), rng.uniform(h.g1, h.g2, inside)])
        return xs + 1j * rng.permutation(y)
    if isinstance(h, SectorOnly):
        return _sector_points(rng, h.vertex, h.theta, n, reach, h.mirrored)
    if isinstance(h, (Bisector, BisectorPlusStrip)):
        if isinstance(h, BisectorPlusStrip):
            n_sec, n_strip = _split(n, 2)
        else:
            n_sec, n_strip = n, 0
        right, left = _split(n_sec, 2)
        pts = [_sector_points(rng, h.betaT, h.theta, right, reach, False),
               _sector_points(rng, h.alphaT, h.theta, left, reach, True)]
        if n_strip:
            g = h.gammaT
            pts.append(rng.uniform(h.alphaT, h.betaT, n_strip)
                       + 1j * rng.choice([-g, g], n_strip) * rng.random(n_strip) ** 0.25)
        return np.concatenate(pts)
    if isinstance(h, VerticalGap):
        xs = _outside_gaps(rng, [(h.v1, h.v2)], n, reach)
        return xs + 1j * rng.uniform(-reach, reach, n)
    if isinstance(h, RectComplement):
        edge, outside = _split(n, 2)
        t = rng.random(edge)
        w, ht = h.v2 - h.v1, h.e2 - h.e1
        side = rng.integers(0, 4, edge)
        x = np.where(side == 0, h.v1, np.where(side == 1, h.v2, h.v1 + t * w))
        y = np.where(side == 2, h.e1, np.where(side == 3, h.e2, h.e1 + t * ht))
        pts = [x + 1j * y]
        cand = rng.uniform(h.v1 - reach, h.v2 + reach, 4 * outside + 8) \
            + 1j * rng.uniform(h.e1 - reach, h.e2 + reach, 4 * outside + 8)
        inside = (cand.real > h.v1) & (cand.real < h.v2) & (cand.imag > h.e1) & (cand.imag < h.e2)
        pts.append(cand[~inside][:outside])
        return np.concatenate(pts)[:n]
    if isinstance(h, DiskComplement):
        edge, outside = _split(n, 2)
        ang = 2 * math.pi * rng.random(n)
        radii = np.concatenate([np.full(edge, h.R), h.R + rng.uniform(0, reach, outside)])
        return radii * np.exp(1j * ang)
    if isinstance(h, GapSequence):
        xs = _outside_gaps(rng, list(h.gaps), n, reach)
        if h.imaginary is not None:
            y = rng.uniform(h.imaginary[0], h.imaginary[1], n)
        else:
            y = rng.uniform(-reach, reach, n)
        return xs + 1j * y
    if isinstance(h, FiniteEigsPlusStrip):
        isolated = [complex(lam) for lam, mult in h.eigs for _ in range(int(mult))]
        rest = max(0, n - len(isolated))
        strip = HorizontalStripWithGap(h.g1, h.g2, h.alphaT, h.betaT)
        return np.concatenate([np.asarray(isolated, dtype=complex),
                               sample_spectrum(strip, rest, rng, reach)])
    if isinstance(h, ParabolicBisector):
        right, left = _split(n, 2)
        return np.concatenate([_parabola_points(rng, h.betaT, right, reach, False),
                               _parabola_points(rng, h.alphaT, left, reach, True)])
    raise ValueError(f"no sampler for {type(h).__name__}")


def sample_region_points(report: enc.EnclosureReport, window: rg.Window, count: int,
                         seed: Seed = 0, max_tries: int = 50) -> np.ndarray:
    """Up to `count` uniform points of the window inside the report region with a finite bound."""
    rng = _rng(seed)
    found: List[np.ndarray] = []
    total = 0
    for _ in range(max_tries):
        cand = rng.uniform(window.x0, window.x1, 4 * count) + 1j * rng.uniform(window.y0, window.y1, 4 * count)
        keep = np.asarray(report.region.contains(cand), dtype=bool)
        if report.bound_fn is not None:
            keep &= np.isfinite(np.asarray(report.bound_fn(cand), dtype=float))
        found.append(cand[keep])
        total += int(keep.sum())
        if total >= count:
            break
    pts = np.concatenate(found) if found else np.zeros(0, dtype=complex)
    return pts[:count]


# =============================================================================
# Worked models
# =============================================================================

def example_gap_closing(k: float, xs: Sequence[float]):
    """
    Block model whose vertical free strip closes under a p = 1/2 perturbation.

    T = diag over x of (k + ix, -k + ix); A = diag(-sqrt|x|, sqrt|x|).
    T + A has eigenvalues +-(k - sqrt|x|) + ix, which reach Re = 0 at x = k^2.

    Returns:
        (NormalModel T, A, Subordinate(1, 1/2))
    """
    xs = np.asarray(xs, dtype=float)
    spectrum = np.empty(2 * xs.size, dtype=complex)
    spectrum[0::2] = k + 1j * xs
    spectrum[1::2] = -k + 1j * xs
    roots = np.sqrt(np.abs(xs))
    diag = np.empty(2 * xs.size, dtype=complex)
    diag[0::2] = -roots
    diag[1::2] = roots
    return NormalModel(spectrum), np.diag(diag), Subordinate(1.0, 0.5)


# =============================================================================
# Negative controls
# =============================================================================

def shrink_report(report: enc.EnclosureReport, factor: float = 1.25) -> enc.EnclosureReport:
    """
    Deliberately unsound copy of a report: the defining constant is moved
    toward the spectrum by `factor` (e.g. disk radius r -> factor r).

    Supported: disk_complement, strip_gap, psub_strip, interior_strip, im_upper.
    """
    k = report.constants
    name = report.theorem
    if name == 'disk_complement':
        region = rg.leaf(rg.Disk(0j, factor * k['r'], closed=False))
    elif name in ('strip_gap', 'psub_strip'):
        hyp = report.hypothesis
        alpha, beta = hyp['alphaT'], hyp['betaT']
        a_p, b_p = k['alpha_prime'], k['beta_prime']
        region = rg.leaf(rg.VerticalStrip(a_p - (factor - 1) * (a_p - alpha),
                                          b_p + (factor - 1) * (beta - b_p), closed=False))
    elif name == 'interior_strip':
        hyp = report.hypothesis
        a_p, b_p = k['alpha_prime'], k['beta_prime']
        region = rg.leaf(rg.VerticalStrip(a_p - (factor - 1) * (a_p - hyp['v1']),
                                          b_p + (factor - 1) * (hyp['v2'] - b_p), closed=False))
    elif name == 'im_upper':
        gamma = report.hypothesis['gamma']
        drop = (factor - 1) * (k['apex'] - gamma)
        region = rg.leaf(rg.HorizontalStrip(k['apex'] - drop, math.inf, closed=False)) \
            if math.isfinite(k['apex']) else rg.EMPTY
        region = rg.Union((report.region, region))
    else:
        raise ValueError(f"no negative control for {name!r}")
    return enc.EnclosureReport(
        theorem=f"{name}_shrunk",
        hypothesis=report.hypothesis,
        perturbation=report.perturbation,
        applicable=True,
        reason=None,
        constants=dict(k, shrink_factor=factor),
        region=region,
        label=report.label,
    )
