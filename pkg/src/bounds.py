"""
Supremum and distance estimates for perturbation-resolvent products.

Copyright (c) 2025 Mathew Mark Mytka
SPDX-License-Identifier: LicenseRef-ESL-A

Licensed under the Earthian Stewardship License (ESL-A).
See LICENSE file for full terms.

For a normal operator T and a perturbation A with
||Ax||^2 <= a^2 ||x||^2 + b^2 ||Tx||^2, the norm of A(T - z)^{-1} is bounded
by the square root of

    H_z(t) = (a^2 + b^2 |t|^2) / |t - z|^2

maximized over t in (a superset of) the spectrum of T. H_z has no local
maximum and tends to b^2 at infinity, so suprema over filled sets reduce to
their boundaries. This module collects the closed-form estimates of that
supremum over lines, strips, sectors and gapped planes, a few distance
bounds, and a brute-force sampling oracle to check them against.

Geometric inapplicability (z inside the set) gives SupBound(inf, False).
Poles of a formula raise ValueError.
"""

import logging
import math
from dataclasses import dataclass, asdict
from typing import Any, Callable, Dict, List, Optional, Union

import numpy as np
from scipy.stats import qmc

logger = logging.getLogger(__name__)

__all__ = [
    'RelBound',
    'Subordinate',
    'PerturbationModel',
    'perturbation_from_dict',
    'SupBound',
    'SectorComparison',
    'h_value',
    'sup_h_line',
    'sup_h_strip',
    'sup_h_strip_symmetric',
    'sup_tau_ratio',
    'sup_h_sector',
    'sup_h_sector_alt',
    'compare_sector_estimates',
    'sup_h_vertical_exact',
    'sup_h_gapped_plane_exact',
    'sup_h_sector_tan',
    'dist_parabola',
    'dist_sector',
    'dist_bisector',
    'resolvent_bound',
    'oracle_sup',
    'line_sampler',
    'strip_boundary_sampler',
    'vertical_line_sampler',
    'sector_boundary_sampler',
    'parabola_boundary_sampler',
    'young_linear_constant',
    'subordination_to_relbound',
]


# =============================================================================
# Perturbation models
# =============================================================================

@dataclass(frozen=True)
class RelBound:
    """Relative bound ||Ax||^2 <= a^2||x||^2 + b^2||Tx||^2 with b < 1."""
    a: float
    b: float

    def __post_init__(self):
        if not (math.isfinite(self.a) and self.a >= 0):
            raise ValueError(f"a must be finite and >= 0, got {self.a}")
        if not 0 <= self.b < 1:
            raise ValueError(f"b must lie in [0, 1), got {self.b}")

    def scaled(self, s: float) -> 'RelBound':
        """Bound for sA with 0 <= s <= 1: (sqrt(s) a, sqrt(s) b)."""
        if not 0 <= s <= 1:
            raise ValueError(f"homotopy parameter must lie in [0, 1], got {s}")
        r = math.sqrt(s)
        return RelBound(r * self.a, r * self.b)

    def to_dict(self) -> Dict[str, Any]:
        d = asdict(self)
        d['type'] = 'relbound'
        return d


@dataclass(frozen=True)
class Subordinate:
    """p-subordination ||Ax|| <= c ||x||^{1-p} ||Tx||^p."""
    c: float
    p: float

    def __post_init__(self):
        if not (math.isfinite(self.c) and self.c >= 0):
            raise ValueError(f"c must be finite and >= 0, got {self.c}")
        if not 0 <= self.p <= 1:
            raise ValueError(f"p must lie in [0, 1], got {self.p}")

    def to_dict(self) -> Dict[str, Any]:
        d = asdict(self)
        d['type'] = 'subordinate'
        return d


PerturbationModel = Union[RelBound, Subordinate]


def perturbation_from_dict(data: Dict[str, Any]) -> PerturbationModel:
    """Build a perturbation model from a config mapping."""
    kind = data.get('type')
    if kind == 'relbound':
        return RelBound(float(data['a']), float(data['b']))
    if kind == 'subordinate':
        return Subordinate(float(data['c']), float(data['p']))
    raise ValueError(f"unknown perturbation type: {kind!r}")


@dataclass(frozen=True)
class SupBound:
    """Estimate of sup H_z over a set."""
    value: float        # >= 0, may be inf
    exact: bool = False  # True when the estimate is the supremum itself

    def __post_init__(self):
        if not self.value >= 0:
            raise ValueError(f"supremum estimate must be >= 0, got {self.value}")


INAPPLICABLE = SupBound(math.inf, False)


# =============================================================================
# H_z and line/strip estimates
# =============================================================================

def h_value(m: RelBound, z: complex, t) -> Union[float, np.ndarray]:
    """(a^2 + b^2|t|^2)/|t - z|^2, vectorized in t."""
    t_arr = np.asarray(t, dtype=complex)
    dist2 = np.abs(t_arr - z) ** 2
    if np.any(dist2 == 0):
        raise ValueError("H_z has a pole at t = z")
    val = (m.a ** 2 + m.b ** 2 * np.abs(t_arr) ** 2) / dist2
    return float(val) if np.ndim(t) == 0 else val


def sup_h_line(m: RelBound, z: complex, gamma: float) -> SupBound:
    """Upper bound of H_z over the horizontal line R + i*gamma."""
    d = z.imag - gamma
    if d == 0:
        raise ValueError("z lies on the line")
    a2, b2 = m.a ** 2, m.b ** 2
    return SupBound(b2 + b2 * z.real ** 2 / d ** 2 + (a2 + b2 * gamma ** 2) / d ** 2)


def sup_h_strip(m: RelBound, z: complex, g1: float, g2: float) -> SupBound:
    """Upper bound over the filled strip R + i[g1, g2], from its two edges."""
    if g1 > g2:
        raise ValueError("strip requires g1 <= g2")
    if g1 <= z.imag <= g2:
        raise ValueError("z lies in the strip")
    a2, b2 = m.a ** 2, m.b ** 2
    worst = max((b2 * z.real ** 2 + a2 + b2 * g ** 2) / (z.imag - g) ** 2 for g in (g1, g2))
    return SupBound(b2 + worst)


def sup_h_strip_symmetric(m: RelBound, z: complex, g1: float, g2: float) -> SupBound:
    """
    Strip estimate with gamma_tilde = max(|g1|, |g2|) in the numerator and
    the distance to the nearer edge in the denominator.
    """
    if g1 > g2:
        raise ValueError("strip requires g1 <= g2")
    if g1 <= z.imag <= g2:
        raise ValueError("z lies in the strip")
    g_tilde = max(abs(g1), abs(g2))
    d = z.imag - g2 if z.imag > g2 else g1 - z.imag
    a2, b2 = m.a ** 2, m.b ** 2
    return SupBound(b2 + (a2 + b2 * g_tilde ** 2 + b2 * z.real ** 2) / d ** 2)


def sup_tau_ratio(w: complex) -> float:
    """sup over real tau of |tau|/|tau - w|, which equals |w|/|Im w|."""
    if w.imag == 0:
        return math.inf
    return abs(w) / abs(w.imag)


# =============================================================================
# Sector estimates
# =============================================================================

def _sector_branches(z: complex, vertex: float, theta: float):
    """
    Yield (branch, w, u) for the half-planes bounding the sector that
    separate it from z: w = e^{-+i theta}(z - vertex) and u = e^{-+i theta} z,
    conjugated on the lower branch so that Im w > 0.
    """
    rot = complex(math.cos(theta), -math.sin(theta))
    w_up = rot * (z - vertex)
    if w_up.imag > 0:
        yield 'upper', w_up, rot * z
    w_low = np.conj(rot.conjugate() * (z - vertex))
    if w_low.imag > 0:
        yield 'lower', complex(w_low), complex(np.conj(rot.conjugate() * z))


def _in_sector(z: complex, vertex: float, theta: float) -> bool:
    d = z - vertex
    return d == 0 or abs(np.angle(d)) <= theta


def _primary_value(m: RelBound, w: complex, vertex: float) -> float:
    a2, b2 = m.a ** 2, m.b ** 2
    return b2 + (b2 * w.real ** 2 + a2 + b2 * vertex ** 2) / w.imag ** 2


def _alt_value(m: RelBound, w: complex, u: complex, vertex: float, theta: float) -> float:
    a2, b2 = m.a ** 2, m.b ** 2
    shift = vertex * math.sin(theta)
    return b2 + (b2 * u.real ** 2 + a2 + b2 * shift ** 2) / w.imag ** 2


def _sector_estimate(m, z, vertex, theta, mirrored, alt: bool) -> SupBound:
    if not 0 <= theta < math.pi / 2:
        raise ValueError(f"theta must lie in [0, pi/2), got {theta}")
    z = complex(z)
    if mirrored:
        z, vertex = -z, -vertex
    if _in_sector(z, vertex, theta):
        return INAPPLICABLE
    values = []
    for _, w, u in _sector_branches(z, vertex, theta):
        values.append(_alt_value(m, w, u, vertex, theta) if alt else _primary_value(m, w, vertex))
    return SupBound(min(values)) if values else INAPPLICABLE


def sup_h_sector(m: RelBound, z: complex, vertex: float, theta: float,
                 mirrored: bool = False) -> SupBound:
    """
    Vertex-centred estimate of H_z over the sector at `vertex`.

    On the branch with w = e^{-i theta}(z - vertex), Im w > 0:
        b^2 + (b^2 (Re w)^2 + a^2 + b^2 vertex^2) / (Im w)^2

    This drops the cross term 2 b^2 vertex cos(theta) Re(.) of |t|^2 and is
    only an upper bound where vertex * Re w <= 0. Use sup_h_sector_alt for a
    bound valid everywhere outside the sector.
    """
    return _sector_estimate(m, z, vertex, theta, mirrored, alt=False)


def sup_h_sector_alt(m: RelBound, z: complex, vertex: float, theta: float,
                     mirrored: bool = False) -> SupBound:
    """
    Estimate of H_z over the sector from the supporting half-plane of the
    nearer edge:
        b^2 + (b^2 (Re e^{-i theta} z)^2 + a^2 + b^2 vertex^2 sin^2 theta) / (Im w)^2

    Valid for every z outside the (possibly mirrored) sector.
    """
    return _sector_estimate(m, z, vertex, theta, mirrored, alt=True)


@dataclass
class SectorComparison:
    """Primary vs alternative sector estimate on one branch."""
    branch: str             # "upper" or "lower"
    primary: float
    alt: float
    difference: float       # primary - alt
    predicted: int          # sign of -vertex * Re w (0 on ties)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def compare_sector_estimates(m: RelBound, z: complex, vertex: float, theta: float,
                             mirrored: bool = False) -> List[SectorComparison]:
    """
    Compare both sector estimates branch by branch.

    The two formulas differ by exactly -2 b^2 vertex cos(theta) Re w / (Im w)^2,
    so the primary estimate is the smaller one iff vertex * Re w > 0.
    Mirrored sectors compare in negated coordinates (vertex -> -vertex).
    """
    z = complex(z)
    if mirrored:
        z, vertex = -z, -vertex
    if _in_sector(z, vertex, theta):
        return []
    rows = []
    for branch, w, u in _sector_branches(z, vertex, theta):
        primary = _primary_value(m, w, vertex)
        alt = _alt_value(m, w, u, vertex, theta)
        rows.append(SectorComparison(
            branch=branch,
            primary=primary,
            alt=alt,
            difference=primary - alt,
            predicted=int(np.sign(-vertex * w.real)) if m.b > 0 else 0,
        ))
    return rows


def sup_h_sector_tan(m: RelBound, z: complex, vertex: float, theta: float,
                     mirrored: bool = False) -> SupBound:
    """
    max{b^2, (a^2 + b^2 vertex^2)/(vertex - Re z)^2} + b^2 tan^2 theta
    for Re z left of the vertex (right of it when mirrored).
    """
    if not 0 <= theta < math.pi / 2:
        raise ValueError(f"theta must lie in [0, pi/2), got {theta}")
    gap = (z.real - vertex) if mirrored else (vertex - z.real)
    if gap <= 0:
        raise ValueError("z is on the wrong side of the sector vertex")
    a2, b2 = m.a ** 2, m.b ** 2
    return SupBound(max(b2, (a2 + b2 * vertex ** 2) / gap ** 2) + b2 * math.tan(theta) ** 2)


# =============================================================================
# Exact suprema
# =============================================================================

def sup_h_vertical_exact(m: RelBound, mu: float, x: float) -> SupBound:
    """Supremum of H_z over the vertical line x + iR for Re z = mu."""
    if x == mu:
        raise ValueError("Re z lies on the line")
    a2, b2 = m.a ** 2, m.b ** 2
    return SupBound(max(b2, (a2 + b2 * x ** 2) / (mu - x) ** 2), exact=True)


def sup_h_gapped_plane_exact(m: RelBound, mu: float, alpha: float, beta: float) -> SupBound:
    """Supremum over {Re t <= alpha} u {Re t >= beta} for alpha < Re z = mu < beta."""
    if not alpha < mu < beta:
        raise ValueError(f"Re z = {mu} outside the gap ({alpha}, {beta})")
    a2, b2 = m.a ** 2, m.b ** 2
    return SupBound(max(b2, (a2 + b2 * alpha ** 2) / (mu - alpha) ** 2,
                        (a2 + b2 * beta ** 2) / (beta - mu) ** 2), exact=True)


# =============================================================================
# Distances
# =============================================================================

def dist_parabola(z: complex, lam: float, mirrored: bool = False) -> float:
    """Lower bound for the distance from z to the parabolic region at lam."""
    if mirrored:
        z, lam = -z, -lam
    d = lam - z.real
    if d <= 0:
        raise ValueError("z is on the wrong side of the parabola apex")
    nu = abs(z.imag)
    if nu <= 0.5:
        return math.sqrt(d * d + nu * nu)
    return math.sqrt(d * d + nu - 0.25)


def dist_sector(z, vertex: float, theta: float, mirrored: bool = False):
    """Exact distance from z (scalar or array) to the closed sector."""
    w = np.asarray(z, dtype=complex) - vertex
    if mirrored:
        w = -w
    ang = np.abs(np.angle(w))
    r = np.abs(w)
    out = np.where(ang <= theta, 0.0,
                   np.where(ang >= theta + math.pi / 2, r, r * np.sin(ang - theta)))
    return float(out) if np.ndim(z) == 0 else out


def dist_bisector(z, alpha: float, beta: float, theta: float):
    """Distance to the union of the sector at beta and the mirrored sector at alpha."""
    return np.minimum(dist_sector(z, beta, theta), dist_sector(z, alpha, theta, mirrored=True))


def resolvent_bound(dist, sup):
    """1/(dist (1 - sqrt(sup))), inf when sup >= 1 or dist <= 0."""
    dist = np.asarray(dist, dtype=float)
    sup = np.asarray(sup, dtype=float)
    with np.errstate(divide='ignore', invalid='ignore'):
        val = 1.0 / (dist * (1.0 - np.sqrt(sup)))
    out = np.where((sup < 1) & (dist > 0), val, math.inf)
    return float(out) if out.ndim == 0 else out


# =============================================================================
# Sampling oracle
# =============================================================================

Sampler = Callable[[int], np.ndarray]


def _halton(n: int, d: int, seed: int) -> np.ndarray:
    return qmc.Halton(d=d, scramble=True, seed=seed).random(n)


def _unbounded_parameter(u: np.ndarray, scale: float, limit: float) -> np.ndarray:
    """Map (0,1) onto (-limit, limit), dense near 0 on the given scale."""
    cap = math.atan(limit / scale) / (math.pi / 2)
    return scale * np.tan((2 * u - 1) * cap * math.pi / 2)


def line_sampler(gamma: float, scale: float = 1.0, limit: float = 1e6, seed: int = 0) -> Sampler:
    """Points on R + i*gamma with |Re t| <= limit."""
    def sample(n: int) -> np.ndarray:
        tau = _unbounded_parameter(_halton(n, 1, seed)[:, 0], scale, limit)
        return tau + 1j * gamma
    return sample


def vertical_line_sampler(x: float, scale: float = 1.0, limit: float = 1e4, seed: int = 0) -> Sampler:
    """Points on x + iR with |Im t| <= limit."""
    def sample(n: int) -> np.ndarray:
        return x + 1j * _unbounded_parameter(_halton(n, 1, seed)[:, 0], scale, limit)
    return sample


def strip_boundary_sampler(g1: float, g2: float, scale: float = 1.0,
                           limit: float = 1e6, seed: int = 0) -> Sampler:
    """Alternating points on both edges of R + i[g1, g2]."""
    def sample(n: int) -> np.ndarray:
        tau = _unbounded_parameter(_halton(n, 1, seed)[:, 0], scale, limit)
        edges = np.where(np.arange(n) % 2 == 0, g1, g2)
        return tau + 1j * edges
    return sample


def sector_boundary_sampler(vertex: float, theta: float, mirrored: bool = False,
                            scale: float = 1.0, limit: float = 1e6, seed: int = 0) -> Sampler:
    """Points on both rays of the sector, |t - vertex| <= limit."""
    def sample(n: int) -> np.ndarray:
        s = _unbounded_parameter(_halton(n, 1, seed)[:, 0], scale, limit)
        rays = np.abs(s) * np.exp(1j * theta * np.sign(s))
        return vertex + (-rays if mirrored else rays)
    return sample


def parabola_boundary_sampler(lam: float, mirrored: bool = False, scale: float = 1.0,
                              limit: float = 1e3, seed: int = 0) -> Sampler:
    """Points on the boundary curves Im t = +-(Re t - lam)^2."""
    def sample(n: int) -> np.ndarray:
        s = _unbounded_parameter(_halton(n, 1, seed)[:, 0], scale, limit)
        pts = np.abs(s) + 1j * np.sign(s) * s ** 2
        return lam + (-pts if mirrored else pts)
    return sample


def oracle_sup(m: RelBound, z: complex, sampler: Sampler, n: int) -> float:
    """
    Brute-force sup of H_z: max over n sampled points and the limit b^2.

    Args:
        m: Relative bound
        z: Evaluation point
        sampler: Callable returning n points of the set (or its boundary)
        n: Number of samples

    Returns:
        float: Sampled supremum
    """
    t = sampler(n)
    t = t[t != z]
    best = m.b ** 2
    if t.size:
        best = max(best, float(np.max(h_value(m, z, t))))
    return best


# =============================================================================
# Subordination
# =============================================================================

def young_linear_constant(s: Subordinate, eps: float) -> float:
    """
    a_eps with c||x||^{1-p}||Tx||^p <= a_eps||x|| + eps||Tx||, from
    weighted AM-GM: a_eps = c (1-p) (c p / eps)^{p/(1-p)}.
    """
    if s.p >= 1:
        raise ValueError("p = 1 has no Young splitting")
    if eps <= 0:
        raise ValueError("eps must be positive")
    if s.p == 0 or s.c == 0:
        return s.c
    return s.c * (1 - s.p) * (s.c * s.p / eps) ** (s.p / (1 - s.p))


def subordination_to_relbound(s: Subordinate, eps: float) -> RelBound:
    """
    Relative bound (a_eps, eps) in the squared form
    ||Ax||^2 <= a_eps^2||x||^2 + eps^2||Tx||^2, from Young's inequality
    applied to c^2 ||x||^{2(1-p)} ||Tx||^{2p}.
    """
    if s.p >= 1:
        raise ValueError("p = 1 has no Young splitting")
    if eps <= 0:
        raise ValueError("eps must be positive")
    if s.p == 0 or s.c == 0:
        return RelBound(s.c, 0.0)
    if eps >= 1:
        raise ValueError("eps must be below 1 to give a relative bound")
    c2, p = s.c ** 2, s.p
    a2 = c2 * (1 - p) * (c2 * p / eps ** 2) ** (p / (1 - p))
    return RelBound(math.sqrt(a2), eps)
