"""
Star-graph Robin operator: secular equation, discretization, gap studies.

Copyright (c) 2025 Mathew Mark Mytka
SPDX-License-Identifier: LicenseRef-ESL-A

Licensed under the Earthian Stewardship License (ESL-A).
See LICENSE file for full terms.

L_c acts as -psi'' on n edges [0, a_j] joined at a central vertex (x = 0),
with Dirichlet conditions at the outer ends, continuity at the centre and
sum_j (psi_j(0) + c psi_j'(0)) = 0. c = inf gives the Neumann-Kirchhoff
condition sum_j psi_j'(0) = 0.

With psi_j(x) = A_j sin(k(a_j - x)) the vertex conditions reduce to

    F(k) = n prod_j sin(k a_j) - c k sum_j cos(k a_j) prod_{i != j} sin(k a_i)

and eigenvalues are lambda = k^2. G(lambda) = F(k)/k^n is even in k and
entire in lambda; its zeros are exactly the eigenvalues (including
lambda = 0 iff c = c_Gamma), so root searches run in the lambda-plane.

Classes:
    StarGraph: edge lengths and vertex parameter c
    GraphSpectrum: computed eigenvalues with residuals and completeness flag
    GapPersistence: per-gap subordination verdicts
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Union

import numpy as np
from scipy.optimize import brentq, newton

from . import enclosures as enc
from .bounds import Subordinate
from .hypotheses import HorizontalStripWithGap
from .regions import Window

logger = logging.getLogger(__name__)

__all__ = [
    'StarGraph',
    'GraphSpectrum',
    'GapPersistence',
    'DiscretizationError',
    'secular',
    'secular_lambda',
    'secular_scale',
    'c_gamma',
    'winding_count',
    'default_window',
    'find_eigs',
    'find_eigs_many',
    'discretize',
    'weyl_gap_report',
    'graph_gap_persistence',
    'imag_tail_report',
]

MAX_SIZE = 400
MIN_POINTS_PER_EDGE = 8


class DiscretizationError(ValueError):
    """Grid too coarse for an edge, or matrix over the size cap."""


@dataclass(frozen=True)
class StarGraph:
    """Star graph with edge lengths a_j and vertex parameter c (complex or inf)."""
    lengths: tuple
    c: complex = math.inf

    def __post_init__(self):
        object.__setattr__(self, 'lengths', tuple(float(a) for a in self.lengths))
        if not self.lengths:
            raise ValueError("star graph needs at least one edge")
        if any(not (a > 0 and math.isfinite(a)) for a in self.lengths):
            raise ValueError(f"edge lengths must be positive and finite, got {self.lengths}")
        object.__setattr__(self, 'c', math.inf if math.isinf(abs(self.c)) else complex(self.c))

    @property
    def kirchhoff(self) -> bool:
        return isinstance(self.c, float)

    @property
    def n(self) -> int:
        return len(self.lengths)

    @property
    def total_length(self) -> float:
        return float(sum(self.lengths))

    @property
    def selfadjoint(self) -> bool:
        return self.kirchhoff or self.c.imag == 0

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'StarGraph':
        c = data.get('c', 'inf')
        if isinstance(c, str) and c.strip().lower() in ('inf', 'infinity'):
            c = math.inf
        elif isinstance(c, (list, tuple)):
            c = complex(float(c[0]), float(c[1]))
        else:
            c = complex(c)
        return cls(tuple(float(a) for a in data['lengths']), c)

    def to_dict(self) -> Dict[str, Any]:
        c = 'inf' if self.kirchhoff else [self.c.real, self.c.imag]
        return {'lengths': list(self.lengths), 'c': c}


# =============================================================================
# Secular function
# =============================================================================

def _leave_one_out(s: np.ndarray) -> np.ndarray:
    """prod_{i != j} s_i along the last axis, without division."""
    ones = np.ones(s.shape[:-1] + (1,), dtype=s.dtype)
    before = np.cumprod(np.concatenate([ones, s[..., :-1]], axis=-1), axis=-1)
    after = np.cumprod(np.concatenate([ones, s[..., :0:-1]], axis=-1), axis=-1)[..., ::-1]
    return before * after


def _terms(g: StarGraph, k):
    k = np.asarray(k, dtype=complex)
    ka = k[..., None] * np.asarray(g.lengths)
    sins, coss = np.sin(ka), np.cos(ka)
    return k, sins, coss, _leave_one_out(sins)


def secular(g: StarGraph, k) -> Union[complex, np.ndarray]:
    """F(k), vectorized; the Neumann-Kirchhoff form when c = inf."""
    k_arr, sins, coss, loo = _terms(g, k)
    cross = np.sum(coss * loo, axis=-1)
    if g.kirchhoff:
        out = cross
    else:
        out = g.n * np.prod(sins, axis=-1) - g.c * k_arr * cross
    return complex(out) if np.ndim(k) == 0 else out


def secular_scale(g: StarGraph, k) -> Union[float, np.ndarray]:
    """Sum of the absolute values of the terms of F(k), for relative residuals."""
    k_arr, sins, coss, loo = _terms(g, k)
    cross = np.sum(np.abs(coss * loo), axis=-1)
    if g.kirchhoff:
        out = cross
    else:
        out = g.n * np.abs(np.prod(sins, axis=-1)) + abs(g.c) * np.abs(k_arr) * cross
    out = np.maximum(out, np.finfo(float).tiny)
    return float(out) if np.ndim(k) == 0 else out


def _order(g: StarGraph) -> int:
    return g.n - 1 if g.kirchhoff else g.n


def _value_at_zero(g: StarGraph) -> complex:
    a = np.asarray(g.lengths)
    if g.kirchhoff:
        return complex(np.sum(_leave_one_out(a[None, :])[0]))
    return complex(np.prod(a) * (g.n - g.c * np.sum(1.0 / a)))


def secular_lambda(g: StarGraph, lam) -> Union[complex, np.ndarray]:
    """G(lambda) = F(k)/k^order with k = sqrt(lambda); entire in lambda."""
    lam_arr = np.asarray(lam, dtype=complex)
    k = np.sqrt(lam_arr)
    small = np.abs(k) < 1e-8
    safe_k = np.where(small, 1.0, k)
    out = np.where(small, _value_at_zero(g), secular(g, safe_k) / safe_k ** _order(g))
    return complex(out) if np.ndim(lam) == 0 else out


def c_gamma(g: StarGraph) -> float:
    """The vertex parameter n / sum(1/a_j) for which 0 is an eigenvalue."""
    return g.n / float(np.sum(1.0 / np.asarray(g.lengths)))


# =============================================================================
# Argument principle
# =============================================================================

def _crossings(x: np.ndarray, y: np.ndarray) -> int:
    """Winding number of a closed path about 0 by signed crossings of the positive real ray."""
    winding = 0
    above = y[0] >= 0
    for i in range(1, len(x)):
        now = y[i] >= 0
        if now == above:
            continue
        above = now
        if x[i] > 0 and x[i - 1] > 0:
            winding += 2 * above - 1
        elif not (x[i] <= 0 and x[i - 1] <= 0):
            cross = (x[i - 1] * y[i] - x[i] * y[i - 1]) / (y[i] - y[i - 1])
            if cross > 0:
                winding += 2 * above - 1
    return winding


def _rectangle_path(window: Window, per_side: int) -> np.ndarray:
    c = window.corners()
    sides = [np.linspace(c[i], c[(i + 1) % 4], per_side, endpoint=False) for i in range(4)]
    path = np.concatenate(sides)
    return np.concatenate([path, path[:1]])


def winding_count(func: Callable[[np.ndarray], np.ndarray], window: Window,
                  per_side: int = 256, max_per_side: int = 1 << 16,
                  max_step: float = math.pi / 4) -> Optional[int]:
    """
    Zeros of an entire function inside the window (counterclockwise boundary),
    refining the boundary until consecutive phase steps stay below max_step.

    Returns None if a zero sits on the boundary or refinement runs out.
    """
    while per_side <= max_per_side:
        path = _rectangle_path(window, per_side)
        vals = np.asarray(func(path), dtype=complex)
        if np.any(vals == 0) or not np.all(np.isfinite(vals)):
            return None
        steps = np.abs(np.angle(vals[1:] / vals[:-1]))
        if np.max(steps) < max_step:
            return _crossings(vals.real, vals.imag)
        per_side *= 2
    logger.warning("winding count did not resolve on %s", window.to_list())
    return None


# =============================================================================
# Root search
# =============================================================================

@dataclass
class GraphSpectrum:
    """Eigenvalues found in a lambda-window, ordered by real part."""
    eigenvalues: np.ndarray
    residuals: np.ndarray
    window: Window
    expected: Optional[int]                 # argument-principle count
    graph: Optional[StarGraph] = None

    @property
    def k_values(self) -> np.ndarray:
        return np.sqrt(self.eigenvalues)

    @property
    def complete(self) -> bool:
        return self.expected is not None and self.expected == self.eigenvalues.size

    def to_dict(self) -> Dict[str, Any]:
        return {
            'graph': None if self.graph is None else self.graph.to_dict(),
            'window': self.window.to_list(),
            'eigenvalues': [[float(v.real), float(v.imag)] for v in self.eigenvalues],
            'residuals': [float(r) for r in self.residuals],
            'expected': self.expected,
            'complete': self.complete,
        }


def default_window(g: StarGraph, count: int, imag: Optional[float] = None) -> Window:
    """lambda-window expected to hold about `count` eigenvalues (Weyl asymptotics)."""
    top = (math.pi * (count + 0.25) / g.total_length) ** 2
    if g.kirchhoff or g.c == 0:
        bottom = -1.0
    else:
        bottom = -((2.0 / abs(g.c)) + 2.0 * g.n / min(g.lengths)) ** 2 - 1.0
    if imag is None:
        if g.selfadjoint:
            imag = 1.0
        else:
            imag = max(2.0, 10.0 * 2 * g.n * abs((1 / g.c).imag) / g.total_length)
    return Window(bottom, top, -imag, imag)


def _real_axis_grid(g: StarGraph, lo: float, hi: float, density: int) -> np.ndarray:
    """lambda-grid with uniform spacing in sqrt(|lambda|) on each side of 0."""
    dk = math.pi / (density * g.total_length)
    parts = []
    if lo < 0:
        kappa = np.arange(0.0, math.sqrt(-lo) + dk, dk)
        parts.append(-kappa[::-1] ** 2)
    if hi > 0:
        k = np.arange(0.0, math.sqrt(hi) + dk, dk)
        parts.append(k ** 2)
    grid = np.unique(np.concatenate(parts)) if parts else np.array([lo, hi])
    return grid[(grid >= lo) & (grid <= hi)]


def _dedupe(roots: List[complex], tol: float = 1e-8) -> List[complex]:
    out: List[complex] = []
    for r in sorted(roots, key=lambda z: (z.real, z.imag)):
        if not any(abs(r - q) <= tol * (1 + abs(q)) for q in out):
            out.append(r)
    return out


def _real_roots(g: StarGraph, window: Window, density: int) -> List[complex]:
    grid = _real_axis_grid(g, window.x0, window.x1, density)
    vals = np.real(secular_lambda(g, grid))
    roots = []
    for i in np.nonzero(vals == 0)[0]:
        roots.append(complex(grid[i]))
    for i in np.nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)[0]:
        root = brentq(lambda x: float(np.real(secular_lambda(g, x))), grid[i], grid[i + 1],
                      xtol=1e-14, rtol=4 * np.finfo(float).eps)
        roots.append(complex(root))
    return roots


def _complex_roots(g: StarGraph, window: Window, density: int, rng: np.random.Generator) -> List[complex]:
    grid = _real_axis_grid(g, window.x0, window.x1, max(2, density // 4))
    rows = [0.0, 0.5 * window.y0, 0.5 * window.y1]
    seeds = [complex(x, y) for x in grid for y in rows]
    seeds += list(rng.uniform(window.x0, window.x1, len(grid))
                  + 1j * rng.uniform(window.y0, window.y1, len(grid)))
    roots = []
    for z0 in seeds:
        z = complex(newton(lambda z: secular_lambda(g, z), z0, x1=z0 + 1e-4 * (1 + abs(z0)),
                           tol=1e-12, rtol=1e-13, maxiter=100, disp=False))
        if not (np.isfinite(z) and window.contains(z)):
            continue
        k = np.sqrt(z)
        if abs(secular(g, k)) <= 1e-9 * secular_scale(g, k):
            roots.append(z)
    return roots


def find_eigs(g: StarGraph, window: Optional[Window] = None, count: int = 20,
              density: int = 32, seed: int = 0) -> GraphSpectrum:
    """
    Eigenvalues of L_c in a lambda-window.

    Real c: sign changes of G on a real grid (uniform in sqrt|lambda|),
    refined by brentq. Complex c: secant-Newton from seeded starts,
    deduplicated. Both are checked against the argument-principle count of
    G over the window boundary; a mismatch leaves `complete` False.

    Args:
        g: Star graph
        window: lambda-rectangle; default_window(g, count) if None
        count: Target eigenvalue count for the default window
        density: Grid points per mean k-spacing pi/|Gamma|
        seed: Seed for the Newton starts
    """
    window = window or default_window(g, count)
    if g.selfadjoint:
        roots = _real_roots(g, window, density)
    else:
        roots = _complex_roots(g, window, density, np.random.default_rng(seed))
    roots = [r for r in _dedupe(roots) if window.contains(r)]
    lam = np.asarray(roots, dtype=complex)
    res = np.abs(secular(g, np.sqrt(lam))) / secular_scale(g, np.sqrt(lam)) if lam.size else np.zeros(0)
    expected = winding_count(lambda z: secular_lambda(g, z), window)
    spectrum = GraphSpectrum(lam, np.asarray(res, dtype=float), window, expected, g)
    if not spectrum.complete:
        logger.warning("root search incomplete: found %d, argument principle %s", lam.size, expected)
    logger.debug("find_eigs: %d roots in %s", lam.size, window.to_list())
    return spectrum


def find_eigs_many(g: StarGraph, windows: Sequence[Window], jobs: int = 1, **opts) -> List[GraphSpectrum]:
    """find_eigs over disjoint windows in a thread pool; results in window order."""
    if jobs <= 1:
        return [find_eigs(g, w, **opts) for w in windows]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(lambda w: find_eigs(g, w, **opts), windows))


# =============================================================================
# Discretization
# =============================================================================

Potential = Union[None, float, Sequence[Union[float, Callable[[np.ndarray], np.ndarray]]]]


def _edge_potential(V: Potential, j: int, x: np.ndarray) -> np.ndarray:
    if V is None:
        return np.zeros_like(x)
    if np.isscalar(V):
        return np.full_like(x, V, dtype=complex)
    vj = V[j]
    if callable(vj):
        return np.asarray(vj(x), dtype=complex)
    return np.full_like(x, vj, dtype=complex)


def discretize(g: StarGraph, V: Potential = None, N: int = 32) -> np.ndarray:
    """
    Finite-difference matrix for L_c + V.

    Edge j gets m_j = round(N a_j) cells; interior nodes use the three-point
    stencil, outer ends are eliminated (Dirichlet) and the central vertex is
    one unknown whose row integrates over the half cells next to it:

        sum_j (psi_0 - psi_1^j)/h_j - (n/c) psi_0 = lambda (sum_j h_j/2) psi_0

    (c = 0 removes the vertex unknown). Rows are scaled symmetrically, so
    real c and real V give a real symmetric matrix.

    Raises:
        DiscretizationError: N a_j < 8 on some edge, or size above 400
    """
    cells = [int(round(N * a)) for a in g.lengths]
    if min(cells) < MIN_POINTS_PER_EDGE:
        raise DiscretizationError(f"need N*a_j >= {MIN_POINTS_PER_EDGE}; got cells {cells}")
    dirichlet_centre = (not g.kirchhoff) and g.c == 0
    size = sum(m - 1 for m in cells) + (0 if dirichlet_centre else 1)
    if size > MAX_SIZE:
        raise DiscretizationError(f"matrix size {size} exceeds {MAX_SIZE}")

    K = np.zeros((size, size), dtype=complex)
    w = np.zeros(size)
    offset = 0 if dirichlet_centre else 1
    centre = None if dirichlet_centre else 0
    for j, (a, m) in enumerate(zip(g.lengths, cells)):
        h = a / m
        idx = np.arange(offset, offset + m - 1)
        x = h * np.arange(1, m)
        K[idx, idx] = 2.0 / h + h * _edge_potential(V, j, x)
        K[idx[:-1], idx[1:]] = -1.0 / h
        K[idx[1:], idx[:-1]] = -1.0 / h
        w[idx] = h
        if centre is not None:
            K[centre, centre] += 1.0 / h
            K[centre, idx[0]] = K[idx[0], centre] = -1.0 / h
            w[centre] += h / 2
            K[centre, centre] += h / 2 * _edge_potential(V, j, np.zeros(1))[0]
        offset += m - 1
    if centre is not None and not g.kirchhoff:
        K[centre, centre] -= g.n / g.c
    scale = 1.0 / np.sqrt(w)
    return K * scale[:, None] * scale[None, :]


# =============================================================================
# Reports
# =============================================================================

def weyl_gap_report(s: GraphSpectrum, gl: float) -> Dict[str, Any]:
    """Least-squares fit Re lambda_m ~ A m^2 + B m + C with the gap sequence."""
    re = np.sort(s.eigenvalues.real)
    if re.size < 20:
        raise ValueError(f"Weyl fit needs at least 20 eigenvalues, got {re.size}")
    m = np.arange(1, re.size + 1, dtype=float)
    A, B, C = np.polyfit(m, re, 2)
    expected = math.pi ** 2 / gl ** 2
    gaps = np.diff(re)
    trend = np.polyfit(m[:-1], gaps, 1)
    return {
        'count': int(re.size),
        'slope': float(A),
        'expected_slope': expected,
        'relative_error': float(abs(A - expected) / expected),
        'linear_term': float(B),
        'constant_term': float(C),
        'gaps': gaps.tolist(),
        'gap_trend': [float(trend[0]), float(trend[1])],
    }


@dataclass
class GapPersistence:
    """Which consecutive-eigenvalue strips survive a p-subordinate perturbation."""
    rows: List[Dict[str, Any]]
    fractions: Dict[int, float] = field(default_factory=dict)
    m0: Optional[int] = None                # all gaps with index >= m0 open

    def to_dict(self) -> Dict[str, Any]:
        return {'rows': self.rows, 'fractions': {str(k): v for k, v in self.fractions.items()},
                'm0': self.m0}


def graph_gap_persistence(s: GraphSpectrum, subordination: Subordinate, gammaT: float,
                          checkpoints: Sequence[int] = (10, 20, 40)) -> GapPersistence:
    """
    Apply the p-subordinate strip inclusion to each gap (Re lambda_m, Re lambda_{m+1}).

    The subordination constant is an input: it already contains the
    embedding constants of the potential.
    """
    re = np.sort(s.eigenvalues.real)
    rows = []
    for m in range(re.size - 1):
        alpha, beta = float(re[m]), float(re[m + 1])
        if not beta > alpha:
            rows.append({'m': m + 1, 'alpha': alpha, 'beta': beta, 'open': False, 'reason': 'no_gap'})
            continue
        report = enc.psub_strip(HorizontalStripWithGap(-gammaT, gammaT, alpha, beta), subordination)
        rows.append({'m': m + 1, 'alpha': alpha, 'beta': beta, 'open': report.applicable,
                     'reason': report.reason, 'K': report.constants.get('K')})
    fractions = {}
    for M in checkpoints:
        window = [r['open'] for r in rows if M <= r['m'] <= 2 * M]
        if len(window) == M + 1:
            fractions[M] = sum(window) / len(window)
    m0 = None
    for r in reversed(rows):
        if not r['open']:
            break
        m0 = r['m']
    return GapPersistence(rows, fractions, m0)


def imag_tail_report(s: GraphSpectrum, g: StarGraph, R: float) -> Dict[str, Any]:
    """Empirical max |Im lambda| over Re lambda >= R against 2n|Im(1/c)|/|Gamma|."""
    bound = 0.0 if g.kirchhoff or g.c == 0 else 2 * g.n * abs((1 / g.c).imag) / g.total_length
    tail = s.eigenvalues[s.eigenvalues.real >= R]
    empirical = float(np.max(np.abs(tail.imag))) if tail.size else None
    gamma_c = float(np.max(np.abs(s.eigenvalues.imag))) if s.eigenvalues.size else 0.0
    return {
        'R': R,
        'bound': bound,
        'tail_count': int(tail.size),
        'tail_max_imag': empirical,
        'gamma_c': gamma_c,
        'gamma_c_empirical': True,
    }
