"""
Enclosure engine: guaranteed resolvent-set regions for T + A.

Copyright (c) 2025 Mathew Mark Mytka
SPDX-License-Identifier: LicenseRef-ESL-A

Licensed under the Earthian Stewardship License (ESL-A).
See LICENSE file for full terms.

Each enclose_* function takes a spectral hypothesis on the normal operator T
and a perturbation model for A, and returns an EnclosureReport: a region
guaranteed to lie in the resolvent set of T + A, the constants that define
it, and (where available) a resolvent-norm bound valid on that region.

Failed theorem hypotheses are reported, not raised: applicable=False with a
reason code, so threshold studies see both sides.

Sector-type regions default to the half-plane estimate (estimate="alt"),
which is an upper bound everywhere outside the sector; estimate="primary"
reproduces the vertex-centred hyperbolas.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence

import numpy as np
from scipy.optimize import brentq

from . import bounds as bd
from . import regions as rg
from .bounds import RelBound, Subordinate
from .hypotheses import (
    Bisector, BisectorPlusStrip, DiskComplement, FiniteEigsPlusStrip,
    GapSequence, HorizontalStrip, HorizontalStripWithGap, ImUpperBounded,
    ParabolicBisector, RectComplement, SectorOnly, SemiBounded,
    SpectrumHypothesis, VerticalGap,
)

logger = logging.getLogger(__name__)

__all__ = [
    'EnclosureReport',
    'RectContour',
    'RouteComparison',
    'SelfadjointReference',
    'THEOREMS',
    'default_theorem',
    'enclose',
    'enclose_im_upper',
    'enclose_strip',
    'enclose_strip_symmetric',
    'enclose_strip_gap',
    'enclose_semibounded',
    'enclose_sector',
    'enclose_bisector',
    'enclose_essgap_bisector',
    'resolvent_bound_bisector',
    'resolvent_bound_bisector_simple',
    'enclose_bisector_strip',
    'enclose_interior_strip',
    'enclose_rect_complement',
    'enclose_disk_complement',
    'gaps_bdd',
    'gaps_unbdd',
    'ev_disks',
    'rect_contour',
    'essgap_regions',
    'hypothesis_region',
    'psub_strip',
    'psub_parabola',
    'route_comparison',
    'selfadjoint_reference',
    'sector_pair',
    'tan_shift',
]

BoundFn = Callable[[Any], Any]

ESTIMATES = ('alt', 'primary')


# =============================================================================
# Report types
# =============================================================================

@dataclass
class EnclosureReport:
    """Outcome of one inclusion theorem applied to (hypothesis, perturbation)."""
    theorem: str                            # short machine label, e.g. "strip_gap"
    hypothesis: Dict[str, Any]
    perturbation: Dict[str, Any]
    applicable: bool
    reason: Optional[str]                   # reason code when not applicable
    constants: Dict[str, Any]
    region: rg.RegionExpr                   # guaranteed subset of the resolvent set
    bound_fn: Optional[BoundFn] = None      # +inf outside the region
    label: str = 'resolvent'                # "essential" for essential-spectrum-free regions
    plan: Optional[Dict[str, Any]] = None   # homotopy plan for multiplicity checks

    def contains(self, z):
        return self.region.contains(z)

    def bound(self, z):
        if self.bound_fn is None:
            raise ValueError(f"{self.theorem} has no resolvent bound")
        return self.bound_fn(z)

    def to_dict(self, bound_points: Optional[Sequence[complex]] = None) -> Dict[str, Any]:
        d = {
            'theorem': self.theorem,
            'label': self.label,
            'hypothesis': self.hypothesis,
            'perturbation': self.perturbation,
            'applicable': self.applicable,
            'reason': self.reason,
            'constants': self.constants,
            'region': self.region.to_dict(),
        }
        if self.plan is not None:
            d['plan'] = self.plan
        if bound_points is not None and self.bound_fn is not None:
            pts = np.asarray(bound_points, dtype=complex).ravel()
            vals = np.asarray(self.bound_fn(pts), dtype=float)
            d['bound_samples'] = [[float(p.real), float(p.imag), float(v)] for p, v in zip(pts, vals)]
        return d


def _report(theorem: str, h, m, region: rg.RegionExpr, constants: Dict[str, Any],
            bound_fn: Optional[BoundFn] = None, applicable: bool = True,
            reason: Optional[str] = None, **kwargs) -> EnclosureReport:
    if not applicable:
        logger.debug("%s inapplicable: %s", theorem, reason)
    return EnclosureReport(
        theorem=theorem,
        hypothesis=h.to_dict() if isinstance(h, SpectrumHypothesis) else dict(h),
        perturbation=m.to_dict(),
        applicable=applicable,
        reason=reason,
        constants=constants,
        region=region,
        bound_fn=bound_fn,
        **kwargs,
    )


def _require_relbound(m) -> RelBound:
    if not isinstance(m, RelBound):
        raise ValueError(f"expected a RelBound perturbation, got {type(m).__name__}")
    return m


def _require_subordinate(m) -> Subordinate:
    if not isinstance(m, Subordinate):
        raise ValueError(f"expected a Subordinate perturbation, got {type(m).__name__}")
    return m


def _check_estimate(estimate: str) -> None:
    if estimate not in ESTIMATES:
        raise ValueError(f"estimate must be one of {ESTIMATES}, got {estimate!r}")


def _pair(z: complex) -> List[float]:
    return [float(z.real), float(z.imag)]


# =============================================================================
# Bound-function plumbing
# =============================================================================

def _masked(region: rg.RegionExpr, raw: Callable[[np.ndarray], np.ndarray]) -> BoundFn:
    """Restrict a raw bound to the region; non-positive or non-finite values become inf."""
    def bound_fn(z):
        arr = rg.as_complex_array(z)
        with np.errstate(divide='ignore', invalid='ignore', over='ignore'):
            vals = np.asarray(raw(arr), dtype=float)
        inside = np.asarray(region.contains(arr), dtype=bool)
        out = np.where(inside & np.isfinite(vals) & (vals > 0), vals, math.inf)
        return float(out) if np.ndim(z) == 0 else out
    return bound_fn


def _pointwise(fn: Callable[[complex], float]) -> Callable[[np.ndarray], np.ndarray]:
    """Lift a scalar estimate to arrays of points."""
    def lifted(arr: np.ndarray) -> np.ndarray:
        flat = [fn(complex(w)) for w in np.ravel(arr)]
        return np.asarray(flat, dtype=float).reshape(np.shape(arr))
    return lifted


def _min_bound(*fns: BoundFn) -> BoundFn:
    def bound_fn(z):
        vals = [np.asarray(f(z), dtype=float) for f in fns]
        out = vals[0]
        for v in vals[1:]:
            out = np.minimum(out, v)
        return float(out) if np.ndim(z) == 0 else out
    return bound_fn


def _generic_bound(dist_fn: Callable[[complex], float],
                   sup_fn: Callable[[complex], float]) -> Callable[[np.ndarray], np.ndarray]:
    """1/(dist (1 - sqrt(sup))) from scalar distance and supremum estimates."""
    def scalar(z: complex) -> float:
        sup = sup_fn(z)
        if not sup < 1:
            return math.inf
        return bd.resolvent_bound(dist_fn(z), sup)
    return _pointwise(scalar)


# =============================================================================
# Region builders
# =============================================================================

def _hyp(m: RelBound, gamma: float) -> rg.HyperbolaUpper:
    return rg.HyperbolaUpper(m.a, m.b, gamma)


def _above(m: RelBound, gamma: float, level: float) -> rg.Leaf:
    """i*level + Hyp_gamma."""
    return rg.leaf(_hyp(m, gamma), translate=1j * level)


def _below(m: RelBound, gamma: float, level: float) -> rg.Leaf:
    """i*level - Hyp_gamma."""
    return rg.leaf(_hyp(m, gamma), reflect=-1, translate=1j * level)


def _right_of(m: RelBound, gamma: float, x: float) -> rg.Leaf:
    """{x + sqrt((a^2 + b^2 gamma^2 + b^2 (Im z)^2)/(1 - b^2)) < Re z}."""
    return rg.leaf(_hyp(m, gamma), phi=-math.pi / 2, translate=x)


def _left_of(m: RelBound, gamma: float, x: float) -> rg.Leaf:
    """{Re z < x - sqrt((a^2 + b^2 gamma^2 + b^2 (Im z)^2)/(1 - b^2))}."""
    return rg.leaf(_hyp(m, gamma), phi=-math.pi / 2, reflect=-1, translate=x)


def _open_vertical(v1: float, v2: float) -> rg.Leaf:
    return rg.leaf(rg.VerticalStrip(v1, v2, closed=False))


def _strip_hyperbolas(m: RelBound, g1: float, g2: float) -> rg.RegionExpr:
    g_tilde = max(abs(g1), abs(g2))
    return rg.Union((_below(m, g_tilde, g1), _above(m, g_tilde, g2)))


def sector_pair(m: RelBound, vertex: float, theta: float, mirrored: bool = False,
                estimate: str = 'alt') -> rg.RegionExpr:
    """
    Union of the two rotated hyperbola regions outside the sector at `vertex`
    where the sector supremum estimate stays below 1.

    mirrored=True gives the pair for the left-opening sector at `vertex`.
    """
    _check_estimate(estimate)
    if mirrored:
        pair = sector_pair(m, -vertex, theta, mirrored=False, estimate=estimate)
        return rg.Union(tuple(rg.Leaf(lf.region.negated()) for lf in pair.leaves()))
    if estimate == 'alt':
        shift = vertex * math.sin(theta)
        c = -1j * shift * complex(math.cos(theta), math.sin(theta))
        upper = rg.leaf(_hyp(m, shift), phi=theta, reflect=1, translate=c)
        lower = rg.leaf(_hyp(m, shift), phi=-theta, reflect=-1, translate=c.conjugate())
    else:
        upper = rg.leaf(_hyp(m, vertex), phi=theta, reflect=1, translate=vertex)
        lower = rg.leaf(_hyp(m, vertex), phi=-theta, reflect=-1, translate=vertex)
    return rg.Union((upper, lower))


def tan_shift(m: RelBound, vertex: float, theta: float) -> Optional[float]:
    """sqrt(a^2 + b^2 vertex^2)/sqrt(1 - b^2 tan^2 theta), None unless b < cos(theta)."""
    if not m.b < math.cos(theta):
        return None
    return math.sqrt(m.a ** 2 + m.b ** 2 * vertex ** 2) / math.sqrt(1 - (m.b * math.tan(theta)) ** 2)


def _sector_sup(m: RelBound, z: complex, vertex: float, theta: float, mirrored: bool) -> float:
    est = bd.sup_h_sector_alt(m, z, vertex, theta, mirrored).value
    if m.b < math.cos(theta):
        beyond = z.real > vertex if mirrored else z.real < vertex
        if beyond:
            est = min(est, bd.sup_h_sector_tan(m, z, vertex, theta, mirrored).value)
    return est


def _bisector_sup(m: RelBound, z: complex, alpha: float, beta: float, theta: float) -> float:
    return max(_sector_sup(m, z, beta, theta, False), _sector_sup(m, z, alpha, theta, True))


def _phi_b(m: RelBound) -> float:
    return math.atan(m.b / math.sqrt(1 - m.b ** 2))


# =============================================================================
# Selfadjoint reference
# =============================================================================

@dataclass
class SelfadjointReference:
    """Selfadjoint inclusion for sigma(T) in (-inf, alpha] u [beta, inf)."""
    a: float
    b: float
    alpha: float
    beta: float
    alpha_prime: float
    beta_prime: float

    def contains(self, z):
        z = rg.as_complex_array(z)
        x, y = z.real, z.imag
        hyperbolas = y * y > (self.a ** 2 + self.b ** 2 * x * x) / (1 - self.b ** 2)
        strip = (x > self.alpha_prime) & (x < self.beta_prime)
        out = hyperbolas | strip
        return bool(out) if out.ndim == 0 else out


def selfadjoint_reference(m: RelBound, alpha: float, beta: float) -> SelfadjointReference:
    """Constants and membership of the classical selfadjoint gap inclusion."""
    return SelfadjointReference(
        a=m.a, b=m.b, alpha=alpha, beta=beta,
        alpha_prime=alpha + math.sqrt(m.a ** 2 + m.b ** 2 * alpha ** 2),
        beta_prime=beta - math.sqrt(m.a ** 2 + m.b ** 2 * beta ** 2),
    )


# =============================================================================
# Bounded imaginary part
# =============================================================================

def enclose_im_upper(h: ImUpperBounded, m: RelBound) -> EnclosureReport:
    """
    Im sigma(T) <= gamma: the region above i*gamma + Hyp_gamma, with
        ||(T+A-z)^{-1}|| <= 1/(Im z - gamma - sqrt(a^2 + b^2 gamma^2 + b^2|z - i gamma|^2)).
    """
    m = _require_relbound(m)
    gamma = h.gamma
    region = _above(m, gamma, gamma)

    def raw(z):
        root = np.sqrt(m.a ** 2 + m.b ** 2 * gamma ** 2 + m.b ** 2 * np.abs(z - 1j * gamma) ** 2)
        return 1.0 / (z.imag - gamma - root)

    return _report('im_upper', h, m, region,
                   constants={'apex': gamma + region.region.base.apex, 'slope': region.region.base.slope},
                   bound_fn=_masked(region, raw))


def _strip_bound_raw(m: RelBound, g1: float, g2: float):
    g_tilde = max(abs(g1), abs(g2))

    def raw(z):
        nu = z.imag
        level = np.where(nu > g2, g2, g1)
        d = np.where(nu > g2, nu - g2, g1 - nu)
        root = np.sqrt(m.a ** 2 + m.b ** 2 * g_tilde ** 2 + m.b ** 2 * np.abs(z - 1j * level) ** 2)
        return np.where(d > 0, 1.0 / (d - root), math.inf)
    return raw


def enclose_strip(h: HorizontalStrip, m: RelBound) -> EnclosureReport:
    """Strip hypothesis g1 <= Im sigma(T) <= g2: two shifted hyperbola regions."""
    m = _require_relbound(m)
    region = _strip_hyperbolas(m, h.g1, h.g2)
    g_tilde = h.gamma_tilde
    apex = _hyp(m, g_tilde).apex
    return _report('strip', h, m, region,
                   constants={'gamma_tilde': g_tilde, 'upper_apex': h.g2 + apex,
                              'lower_apex': h.g1 - apex},
                   bound_fn=_masked(region, _strip_bound_raw(m, h.g1, h.g2)))


def enclose_strip_symmetric(h: HorizontalStrip, m: RelBound) -> EnclosureReport:
    """
    Symmetric strip |Im sigma(T)| <= gamma. Same region as enclose_strip; the
    bound uses the expanded radicand a^2 + 2b^2 gamma^2 - 2b^2 gamma|Im z| + b^2|z|^2.
    """
    m = _require_relbound(m)
    if h.g1 != -h.g2:
        raise ValueError(f"symmetric strip requires g1 = -g2, got {h.g1}, {h.g2}")
    gamma = h.g2
    region = _strip_hyperbolas(m, -gamma, gamma)

    def raw(z):
        nu = np.abs(z.imag)
        rad = m.a ** 2 + 2 * m.b ** 2 * gamma ** 2 - 2 * m.b ** 2 * gamma * nu + m.b ** 2 * np.abs(z) ** 2
        return 1.0 / (nu - gamma - np.sqrt(rad))

    return _report('strip_symmetric', h, m, region, constants={'gamma': gamma},
                   bound_fn=_masked(region, raw))


def _gap_ends(m: RelBound, g_tilde: float, alpha: float, beta: float):
    c2 = m.a ** 2 + m.b ** 2 * g_tilde ** 2
    alpha_p = alpha + math.sqrt(c2 + m.b ** 2 * alpha ** 2) if math.isfinite(alpha) else -math.inf
    beta_p = beta - math.sqrt(c2 + m.b ** 2 * beta ** 2) if math.isfinite(beta) else math.inf
    return alpha_p, beta_p


def _gap_bound_raw(m: RelBound, g_tilde: float, alpha: float, beta: float, g1: float, g2: float):
    """Gap resolvent estimate; either end may be infinite."""
    c2 = m.a ** 2 + m.b ** 2 * g_tilde ** 2

    def raw(z):
        mu, nu = z.real, z.imag
        q = np.full(mu.shape, m.b, dtype=float)
        dx = np.full(mu.shape, math.inf)
        inside = np.ones(mu.shape, dtype=bool)
        for end, sign in ((alpha, 1.0), (beta, -1.0)):
            if not math.isfinite(end):
                continue
            d = sign * (mu - end)
            inside &= d > 0
            q = np.maximum(q, math.sqrt(c2 + m.b ** 2 * end ** 2) / d)
            dx = np.minimum(dx, d)
        dy = np.maximum(0.0, np.maximum(nu - g2, g1 - nu))
        dist = np.sqrt(dx ** 2 + dy ** 2)
        return np.where(inside & (q < 1), 1.0 / (dist * (1.0 - q)), math.inf)
    return raw


def enclose_strip_gap(h: HorizontalStripWithGap, m: RelBound) -> EnclosureReport:
    """
    Gapped strip: the strip hyperbolas united with the open vertical strip
    alpha' < Re z < beta' when alpha' < beta'.
    """
    m = _require_relbound(m)
    g_tilde = h.gamma_tilde
    alpha_p, beta_p = _gap_ends(m, g_tilde, h.alphaT, h.betaT)
    hyperbolas = _strip_hyperbolas(m, h.g1, h.g2)
    constants = {'alpha_prime': alpha_p, 'beta_prime': beta_p, 'gamma_tilde': g_tilde}
    strip_bound = _masked(hyperbolas, _strip_bound_raw(m, h.g1, h.g2))
    if not alpha_p < beta_p:
        return _report('strip_gap', h, m, hyperbolas, constants, bound_fn=strip_bound,
                       applicable=False, reason='strip_empty')
    region = rg.Union((_open_vertical(alpha_p, beta_p), hyperbolas))
    gap_bound = _masked(region, _gap_bound_raw(m, g_tilde, h.alphaT, h.betaT, h.g1, h.g2))
    return _report('strip_gap', h, m, region, constants,
                   bound_fn=_min_bound(gap_bound, _masked(region, _strip_bound_raw(m, h.g1, h.g2))))


def enclose_semibounded(h: SemiBounded, m: RelBound) -> EnclosureReport:
    """
    Strip spectrum on one side of Re t = bound: the open half-plane beyond
    the shifted bound, united with the strip hyperbolas.
    """
    m = _require_relbound(m)
    g_tilde = h.gamma_tilde
    if h.side == 'right':
        alpha, beta = -math.inf, h.bound
        _, edge = _gap_ends(m, g_tilde, alpha, beta)
        half = _open_vertical(-math.inf, edge)
        constants = {'beta_prime': edge}
    else:
        alpha, beta = h.bound, math.inf
        edge, _ = _gap_ends(m, g_tilde, alpha, beta)
        half = _open_vertical(edge, math.inf)
        constants = {'alpha_prime': edge}
    constants['gamma_tilde'] = g_tilde
    region = rg.Union((half, _strip_hyperbolas(m, h.g1, h.g2)))
    bound_fn = _min_bound(
        _masked(region, _gap_bound_raw(m, g_tilde, alpha, beta, h.g1, h.g2)),
        _masked(region, _strip_bound_raw(m, h.g1, h.g2)),
    )
    return _report('semibounded', h, m, region, constants, bound_fn=bound_fn)


# =============================================================================
# Sectors and bisectors
# =============================================================================

def enclose_sector(h: SectorOnly, m: RelBound, estimate: str = 'alt') -> EnclosureReport:
    """
    Sector hypothesis. The rotated hyperbola pair always applies; when
    b < cos(theta) the half-plane Re z < beta_{T+A} (or Re z > alpha_{T+A}
    for the mirrored sector) is added.
    """
    m = _require_relbound(m)
    pair = sector_pair(m, h.vertex, h.theta, h.mirrored, estimate)
    constants: Dict[str, Any] = {'estimate': estimate, 'phi_b': _phi_b(m)}
    shift = tan_shift(m, h.vertex, h.theta)
    parts: List[rg.RegionExpr] = [pair]
    if shift is None:
        constants['half_plane'] = False
    elif h.mirrored:
        constants.update(half_plane=True, alpha_TA=h.vertex + shift)
        parts.insert(0, _open_vertical(h.vertex + shift, math.inf))
    else:
        constants.update(half_plane=True, beta_TA=h.vertex - shift)
        parts.insert(0, _open_vertical(-math.inf, h.vertex - shift))
    region = rg.union_all(parts)

    def sup(z):
        return _sector_sup(m, z, h.vertex, h.theta, h.mirrored)

    def dist(z):
        return bd.dist_sector(z, h.vertex, h.theta, h.mirrored)

    return _report('sector', h, m, region, constants,
                   bound_fn=_masked(region, _generic_bound(dist, sup)))


def _bisector_constants(m: RelBound, h, estimate: str) -> Dict[str, Any]:
    constants: Dict[str, Any] = {'estimate': estimate, 'phi_b': _phi_b(m)}
    shift_b = tan_shift(m, h.betaT, h.theta)
    if shift_b is None:
        constants['strip_open'] = False
        return constants
    shift_a = tan_shift(m, h.alphaT, h.theta)
    alpha_ta, beta_ta = h.alphaT + shift_a, h.betaT - shift_b
    constants.update(alpha_TA=alpha_ta, beta_TA=beta_ta, strip_open=alpha_ta < beta_ta)
    return constants


def _bisector_bound(m: RelBound, region: rg.RegionExpr, alpha: float, beta: float,
                    theta: float) -> BoundFn:
    def sup(z):
        return _bisector_sup(m, z, alpha, beta, theta)

    def dist(z):
        return float(bd.dist_bisector(z, alpha, beta, theta))

    return _masked(region, _generic_bound(dist, sup))


def enclose_bisector(h: Bisector, m: RelBound, estimate: str = 'alt') -> EnclosureReport:
    """
    Bisector hypothesis: intersection of the two hyperbola pairs, united
    with the vertical strip alpha_{T+A} < Re z < beta_{T+A} when b < cos(theta)
    and the strip is nonempty.
    """
    m = _require_relbound(m)
    pairs = rg.Intersection((
        sector_pair(m, h.betaT, h.theta, False, estimate),
        sector_pair(m, h.alphaT, h.theta, True, estimate),
    ))
    constants = _bisector_constants(m, h, estimate)
    if constants.get('strip_open'):
        region = rg.Union((_open_vertical(constants['alpha_TA'], constants['beta_TA']), pairs))
    else:
        region = pairs
    return _report('bisector', h, m, region, constants,
                   bound_fn=_bisector_bound(m, region, h.alphaT, h.betaT, h.theta))


def enclose_essgap_bisector(h: Bisector, m: RelBound, estimate: str = 'alt') -> EnclosureReport:
    """
    Crossed form (pair_beta u {Re z < beta_{T+A}}) n (pair_alpha u {Re z > alpha_{T+A}}),
    labeled as an essential-spectrum-free region. Contains the enclose_bisector region.
    """
    m = _require_relbound(m)
    constants = _bisector_constants(m, h, estimate)
    right = sector_pair(m, h.betaT, h.theta, False, estimate)
    left = sector_pair(m, h.alphaT, h.theta, True, estimate)
    if 'beta_TA' in constants:
        right = rg.Union((right, _open_vertical(-math.inf, constants['beta_TA'])))
        left = rg.Union((left, _open_vertical(constants['alpha_TA'], math.inf)))
    region = rg.Intersection((right, left))
    return _report('essgap_bisector', h, m, region, constants,
                   bound_fn=_bisector_bound(m, region, h.alphaT, h.betaT, h.theta),
                   label='essential')


def _bisector_strip_ends(h: Bisector, m: RelBound):
    shift_b = tan_shift(m, h.betaT, h.theta)
    if shift_b is None:
        raise ValueError("resolvent bound requires b < cos(theta)")
    alpha_ta = h.alphaT + tan_shift(m, h.alphaT, h.theta)
    beta_ta = h.betaT - shift_b
    if not alpha_ta < beta_ta:
        raise ValueError("bisector strip is empty")
    return alpha_ta, beta_ta


def _bisector_strip_bound(h: Bisector, m: RelBound, exact_distance: bool) -> BoundFn:
    alpha_ta, beta_ta = _bisector_strip_ends(h, m)
    alpha, beta = h.alphaT, h.betaT
    tan2 = (m.b * math.tan(h.theta)) ** 2

    def bound_fn(z):
        arr = rg.as_complex_array(z)
        mu = arr.real
        inside = (mu > alpha_ta) & (mu < beta_ta)
        with np.errstate(divide='ignore', invalid='ignore'):
            worst = np.maximum(m.b ** 2, np.maximum(
                (m.a ** 2 + m.b ** 2 * beta ** 2) / (beta - mu) ** 2,
                (m.a ** 2 + m.b ** 2 * alpha ** 2) / (mu - alpha) ** 2))
            q = np.sqrt(tan2 + worst)
            if exact_distance:
                dist = np.asarray(bd.dist_bisector(arr, alpha, beta, h.theta), dtype=float)
            else:
                dist = np.minimum(beta - mu, mu - alpha)
            val = 1.0 / (dist * (1.0 - q))
        out = np.where(inside & (q < 1) & (dist > 0), val, math.inf)
        return float(out) if np.ndim(z) == 0 else out
    return bound_fn


def resolvent_bound_bisector(h: Bisector, m: RelBound) -> BoundFn:
    """
    Resolvent bound on the bisector strip alpha_{T+A} < Re z < beta_{T+A},
    with the exact point-to-bisector distance. Raises ValueError if
    b >= cos(theta) or the strip is empty.
    """
    return _bisector_strip_bound(h, _require_relbound(m), exact_distance=True)


def resolvent_bound_bisector_simple(h: Bisector, m: RelBound) -> BoundFn:
    """As resolvent_bound_bisector with dist replaced by min(beta - Re z, Re z - alpha)."""
    return _bisector_strip_bound(h, _require_relbound(m), exact_distance=False)


def enclose_bisector_strip(h: BisectorPlusStrip, m: RelBound, estimate: str = 'alt') -> EnclosureReport:
    """Bisector united with the strip |Im t| <= gammaT: triple intersection."""
    m = _require_relbound(m)
    gamma = h.gammaT
    strip_part = rg.Union((_above(m, gamma, gamma), _below(m, gamma, -gamma)))
    region = rg.Intersection((
        sector_pair(m, h.betaT, h.theta, False, estimate),
        sector_pair(m, h.alphaT, h.theta, True, estimate),
        strip_part,
    ))
    constants: Dict[str, Any] = {'estimate': estimate, 'phi_b': _phi_b(m), 'gammaT': gamma}
    if not m.b < math.cos(h.theta):
        return _report('bisector_strip', h, m, region, constants,
                       applicable=False, reason='b_not_below_cos_theta')

    def sup(z):
        strip_sup = (bd.sup_h_strip_symmetric(m, z, -gamma, gamma).value
                     if abs(z.imag) > gamma else math.inf)
        return max(_bisector_sup(m, z, h.alphaT, h.betaT, h.theta), strip_sup)

    def dist(z):
        return min(float(bd.dist_bisector(z, h.alphaT, h.betaT, h.theta)),
                   max(0.0, abs(z.imag) - gamma))

    return _report('bisector_strip', h, m, region, constants,
                   bound_fn=_masked(region, _generic_bound(dist, sup)))


# =============================================================================
# Gaps, rectangles, disks
# =============================================================================

def _side_sup(m: RelBound, g_tilde: float, along: float, d: float) -> float:
    """Line estimate for a half-plane at distance d, `along` the coordinate parallel to it."""
    if d <= 0:
        return math.inf
    return m.b ** 2 + (m.a ** 2 + m.b ** 2 * g_tilde ** 2 + m.b ** 2 * along ** 2) / d ** 2


def _interior_strip(m: RelBound, v1: float, v2: float) -> rg.RegionExpr:
    g_tilde = max(abs(v1), abs(v2))
    return rg.Intersection((_right_of(m, g_tilde, v1), _left_of(m, g_tilde, v2)))


def _interior_bound(m: RelBound, region: rg.RegionExpr, v1: float, v2: float) -> BoundFn:
    g_tilde = max(abs(v1), abs(v2))

    def sup(z):
        return max(_side_sup(m, g_tilde, z.imag, z.real - v1), _side_sup(m, g_tilde, z.imag, v2 - z.real))

    def dist(z):
        return min(z.real - v1, v2 - z.real)

    return _masked(region, _generic_bound(dist, sup))


def enclose_interior_strip(h: VerticalGap, m: RelBound) -> EnclosureReport:
    """
    No spectrum in v1 < Re t < v2:
        v1 + s(Im z) < Re z < v2 - s(Im z),
        s(y) = sqrt((a^2 + b^2 g^2 + b^2 y^2)/(1 - b^2)), g = max(|v1|, |v2|).
    """
    m = _require_relbound(m)
    region = _interior_strip(m, h.v1, h.v2)
    g_tilde = max(abs(h.v1), abs(h.v2))
    half_width = math.sqrt((m.a ** 2 + m.b ** 2 * g_tilde ** 2) / (1 - m.b ** 2))
    constants = {'gamma_tilde': g_tilde, 'alpha_prime': h.v1 + half_width,
                 'beta_prime': h.v2 - half_width}
    return _report('interior_strip', h, m, region, constants,
                   bound_fn=_interior_bound(m, region, h.v1, h.v2),
                   applicable=constants['alpha_prime'] < constants['beta_prime'],
                   reason=None if constants['alpha_prime'] < constants['beta_prime'] else 'strip_empty')


def enclose_rect_complement(h: RectComplement, m: RelBound) -> EnclosureReport:
    """
    No spectrum in the open rectangle (v1, v2) x (e1, e2): intersection of
    the two vertical and the two horizontal hyperbola sides. a = b = 0
    gives back the open rectangle.
    """
    m = _require_relbound(m)
    g_tilde = max(abs(h.v1), abs(h.v2))
    e_tilde = max(abs(h.e1), abs(h.e2))
    region = rg.Intersection((
        _right_of(m, g_tilde, h.v1),
        _left_of(m, g_tilde, h.v2),
        _above(m, e_tilde, h.e1),
        _below(m, e_tilde, h.e2),
    ))

    def sup(z):
        return max(
            _side_sup(m, g_tilde, z.imag, z.real - h.v1),
            _side_sup(m, g_tilde, z.imag, h.v2 - z.real),
            _side_sup(m, e_tilde, z.real, z.imag - h.e1),
            _side_sup(m, e_tilde, z.real, h.e2 - z.imag),
        )

    def dist(z):
        return min(z.real - h.v1, h.v2 - z.real, z.imag - h.e1, h.e2 - z.imag)

    return _report('rect_complement', h, m, region,
                   constants={'gamma_tilde': g_tilde, 'eta_tilde': e_tilde},
                   bound_fn=_masked(region, _generic_bound(dist, sup)))


def enclose_disk_complement(h: DiskComplement, m: RelBound) -> EnclosureReport:
    """|sigma(T)| >= R: the open disk of radius r = R - sqrt(a^2 + b^2 R^2), if r > 0."""
    m = _require_relbound(m)
    R = h.R
    r = R - math.sqrt(m.a ** 2 + m.b ** 2 * R ** 2)
    constants = {'r': r, 'R': R}
    if not r > 0:
        return _report('disk_complement', h, m, rg.EMPTY, constants,
                       applicable=False, reason='radius_nonpositive')
    region = rg.leaf(rg.Disk(0j, r, closed=False))

    def raw(z):
        d = R - np.abs(z)
        sup = (m.a ** 2 + m.b ** 2 * R ** 2) / d ** 2
        return np.asarray(bd.resolvent_bound(d, sup), dtype=float)

    return _report('disk_complement', h, m, region, constants, bound_fn=_masked(region, raw))


# =============================================================================
# Gap sequences
# =============================================================================

def _width_or_ratio(m: RelBound, alpha: float, beta: float, threshold: float) -> Dict[str, Any]:
    if m.b == 0:
        return {'criterion': 'width', 'value': beta - alpha, 'above_threshold': beta - alpha > threshold}
    ratio = beta / alpha if alpha > 0 else math.nan
    return {'criterion': 'ratio', 'value': ratio,
            'above_threshold': bool(alpha > 0 and ratio > threshold)}


def gaps_bdd(h: GapSequence, m: RelBound) -> EnclosureReport:
    """
    Gap sequence with bounded imaginary part: per-gap strip constants with
    gamma_tilde and the asymptotic persistence threshold
    (1 + b)/(1 - b) on beta_n/alpha_n, or 2a on the width when b = 0.
    """
    m = _require_relbound(m)
    threshold = 2 * m.a if m.b == 0 else (1 + m.b) / (1 - m.b)
    if h.imaginary is None:
        return _report('gaps_bdd', h, m, rg.EMPTY, {'threshold': threshold},
                       applicable=False, reason='gamma_unbounded')
    g1, g2 = h.imaginary
    g_tilde = h.gamma_tilde
    rows, strips, bounds = [], [], []
    hyperbolas = _strip_hyperbolas(m, g1, g2)
    for n, (alpha, beta) in enumerate(h.gaps):
        alpha_p, beta_p = _gap_ends(m, g_tilde, alpha, beta)
        row = {'n': n, 'alpha': alpha, 'beta': beta, 'alpha_prime': alpha_p,
               'beta_prime': beta_p, 'open': alpha_p < beta_p}
        row.update(_width_or_ratio(m, alpha, beta, threshold))
        rows.append(row)
        if alpha_p < beta_p:
            strips.append(_open_vertical(alpha_p, beta_p))
            bounds.append(_gap_bound_raw(m, g_tilde, alpha, beta, g1, g2))
    region = rg.union_all(strips + [hyperbolas])
    fns = [_masked(region, raw) for raw in bounds] + [_masked(region, _strip_bound_raw(m, g1, g2))]
    constants = {'threshold': threshold, 'gamma_tilde': g_tilde, 'gaps': rows,
                 'open_count': sum(r['open'] for r in rows)}
    return _report('gaps_bdd', h, m, region, constants, bound_fn=_min_bound(*fns))


def gaps_unbdd_threshold(b: float) -> float:
    """1 + 2b/(sqrt(1 - b^2) - 2b); finite for b < 1/sqrt(5)."""
    return 1 + 2 * b / (math.sqrt(1 - b * b) - 2 * b)


def gaps_unbdd(h: GapSequence, m: RelBound) -> EnclosureReport:
    """
    Gap sequence without an imaginary bound (b < 1/sqrt(5)): per gap
    alpha'_n = alpha_n + s_n, beta'_n = beta_n - s_n with
    s_n = sqrt((a^2 + b^2 beta_n^2)/(1 - b^2)); each open gap contributes
    its pinched interior-strip region.
    """
    m = _require_relbound(m)
    if not m.b < 1 / math.sqrt(5):
        return _report('gaps_unbdd', h, m, rg.EMPTY, {},
                       applicable=False, reason='b_not_below_inv_sqrt5')
    threshold = 2 * m.a if m.b == 0 else gaps_unbdd_threshold(m.b)
    rows, regions, fns = [], [], []
    for n, (alpha, beta) in enumerate(h.gaps):
        s = math.sqrt((m.a ** 2 + m.b ** 2 * max(alpha * alpha, beta * beta)) / (1 - m.b ** 2))
        alpha_p, beta_p = alpha + s, beta - s
        row = {'n': n, 'alpha': alpha, 'beta': beta, 'alpha_prime': alpha_p,
               'beta_prime': beta_p, 'open': alpha_p < beta_p}
        row.update(_width_or_ratio(m, alpha, beta, threshold))
        rows.append(row)
        if alpha_p < beta_p:
            part = _interior_strip(m, alpha, beta)
            regions.append(part)
            fns.append(_interior_bound(m, part, alpha, beta))
    region = rg.union_all(regions)
    constants = {'threshold': threshold, 'gaps': rows, 'open_count': sum(r['open'] for r in rows)}
    return _report('gaps_unbdd', h, m, region, constants,
                   bound_fn=_min_bound(*fns) if fns else None)


# =============================================================================
# Finitely many eigenvalues outside a gapped strip
# =============================================================================

def _in_gapped_strip(h: FiniteEigsPlusStrip, lam: complex) -> bool:
    return h.g1 <= lam.imag <= h.g2 and not h.alphaT < lam.real < h.betaT


def _disk_fits(base: rg.RegionExpr, center: complex, radius: float,
               open_strip: Optional[tuple], samples: int = 4096) -> bool:
    """Closed disk inside `base`: exact for the vertical strip, sampled otherwise."""
    if open_strip is not None:
        lo, hi = open_strip
        if lo < center.real - radius and center.real + radius < hi:
            return True
    t = np.linspace(0.0, 2 * math.pi, samples, endpoint=False)
    circle = center + radius * (1 + 1e-9) * np.exp(1j * t)
    return bool(np.all(base.contains(circle)))


def ev_disks(h: FiniteEigsPlusStrip, m: RelBound, eps: float = 1e-3,
             s_grid: Optional[Sequence[float]] = None) -> EnclosureReport:
    """
    Gapped strip plus finitely many eigenvalues: (strip u hyperbolas) minus
    the closed disks K_{r_j}(lambda_j), r_j = sqrt(a^2 + b^2|lambda_j|^2).

    Also checks, for each k, whether K_{r_k + 2 eps}(lambda_k) lies in the
    region with disk k put back, and emits the homotopy plan (circles of
    radius r_k + eps, s-grid) that the lab uses to confirm multiplicities.
    """
    m = _require_relbound(m)
    if eps <= 0:
        raise ValueError("eps must be positive")
    if s_grid is None:
        s_grid = [round(0.1 * i, 10) for i in range(11)]
    g_tilde = h.gamma_tilde
    lams = [complex(lam) for lam, _ in h.eigs]
    mults = [int(k) for _, k in h.eigs]
    alpha_p, beta_p = _gap_ends(m, g_tilde, h.alphaT, h.betaT)
    radii = [math.sqrt(m.a ** 2 + m.b ** 2 * abs(lam) ** 2) for lam in lams]
    constants: Dict[str, Any] = {
        'alpha_prime': alpha_p, 'beta_prime': beta_p, 'gamma_tilde': g_tilde,
        'strip_open': alpha_p < beta_p, 'r': radii,
    }

    hyperbolas = _strip_hyperbolas(m, h.g1, h.g2)
    if alpha_p < beta_p:
        base = rg.Union((_open_vertical(alpha_p, beta_p), hyperbolas))
        open_strip = (alpha_p, beta_p)
    else:
        base = hyperbolas
        open_strip = None
    disks = [rg.leaf(rg.Disk(lam, r, closed=True)) for lam, r in zip(lams, radii)]
    region = base - rg.union_all(disks)

    if any(_in_gapped_strip(h, lam) for lam in lams):
        return _report('ev_disks', h, m, region, constants,
                       applicable=False, reason='eigenvalue_in_strip')

    qualifies = []
    for k, (lam, r) in enumerate(zip(lams, radii)):
        grown = r + 2 * eps
        separated = all(abs(lam - lams[j]) > grown + radii[j] for j in range(len(lams)) if j != k)
        qualifies.append(bool(separated and _disk_fits(base, lam, grown, open_strip)))
    constants['qualifies'] = qualifies
    constants['all_qualify'] = all(qualifies)

    plan = {
        'eps': eps,
        's_grid': list(s_grid),
        'contours': [
            {'k': k, 'center': _pair(lam), 'radius': r + eps, 'multiplicity': mult}
            for k, (lam, r, mult) in enumerate(zip(lams, radii, mults))
        ],
    }

    def sup(z):
        strip_sup = math.inf
        if h.alphaT < z.real < h.betaT:
            c2 = m.a ** 2 + m.b ** 2 * g_tilde ** 2
            strip_sup = max(m.b ** 2,
                            (c2 + m.b ** 2 * h.alphaT ** 2) / (z.real - h.alphaT) ** 2,
                            (c2 + m.b ** 2 * h.betaT ** 2) / (h.betaT - z.real) ** 2)
        if not h.g1 <= z.imag <= h.g2:
            strip_sup = min(strip_sup, bd.sup_h_strip_symmetric(m, z, h.g1, h.g2).value)
        if any(z == lam for lam in lams):
            return math.inf
        point_sup = max((float(bd.h_value(m, z, lam)) for lam in lams), default=0.0)
        return max(strip_sup, point_sup)

    def dist(z):
        dx = max(0.0, min(z.real - h.alphaT, h.betaT - z.real))
        dy = max(0.0, z.imag - h.g2, h.g1 - z.imag)
        return min([math.hypot(dx, dy)] + [abs(z - lam) for lam in lams])

    return _report('ev_disks', h, m, region, constants,
                   bound_fn=_masked(region, _generic_bound(dist, sup)), plan=plan)


@dataclass
class RectContour:
    """Rectangle with corners R1~ +- i eta, R2~ +- i eta around all eigenvalues."""
    valid: bool
    reason: Optional[str]
    R1: float
    RN: float
    R1_tilde: float
    R2_tilde: float
    eta: float
    eta_min: float
    total_multiplicity: int
    constants: Dict[str, Any] = field(default_factory=dict)

    def corners(self) -> List[complex]:
        return [complex(self.R1_tilde, -self.eta), complex(self.R2_tilde, -self.eta),
                complex(self.R2_tilde, self.eta), complex(self.R1_tilde, self.eta)]

    def inside(self, z):
        """Strict interior."""
        z = np.asarray(z, dtype=complex)
        out = ((z.real > self.R1_tilde) & (z.real < self.R2_tilde)
               & (np.abs(z.imag) < self.eta))
        return bool(out) if out.ndim == 0 else out

    def boundary(self, max_step: float) -> np.ndarray:
        pts = []
        corners = self.corners() + [self.corners()[0]]
        for p, q in zip(corners[:-1], corners[1:]):
            n = max(2, int(math.ceil(abs(q - p) / max_step)) + 1)
            pts.append(np.linspace(p, q, n)[:-1])
        return np.concatenate(pts)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'valid': self.valid, 'reason': self.reason, 'R1': self.R1, 'RN': self.RN,
            'R1_tilde': self.R1_tilde, 'R2_tilde': self.R2_tilde, 'eta': self.eta,
            'eta_min': self.eta_min, 'total_multiplicity': self.total_multiplicity,
            'corners': [_pair(c) for c in self.corners()], 'constants': self.constants,
        }


def rect_contour(h: FiniteEigsPlusStrip, m: RelBound, eta: Optional[float] = None) -> RectContour:
    """
    Rectangular contour enclosing all listed eigenvalues that stays in the
    resolvent set of T + sA for every s in [0, 1]. R1~ and R2~ are the
    midpoints of (alpha', R1) and (RN, beta'); eta defaults to 1.05 times
    the smallest height whose horizontal sides lie in the strip hyperbolas.
    """
    m = _require_relbound(m)
    g_tilde = h.gamma_tilde
    c2 = m.a ** 2 + m.b ** 2 * g_tilde ** 2
    alpha_p, beta_p = _gap_ends(m, g_tilde, h.alphaT, h.betaT)
    if not h.eigs:
        raise ValueError("rect_contour needs at least one eigenvalue")
    lams = sorted((complex(lam) for lam, _ in h.eigs), key=lambda w: (w.real, w.imag))
    total = h.total_multiplicity
    re1, reN = lams[0].real, lams[-1].real
    R1 = re1 - math.sqrt(c2 + m.b ** 2 * re1 ** 2)
    RN = reN + math.sqrt(c2 + m.b ** 2 * reN ** 2)
    R1t = 0.5 * (alpha_p + R1)
    R2t = 0.5 * (RN + beta_p)
    S = math.sqrt((c2 + m.b ** 2 * max(R1t ** 2, R2t ** 2)) / (1 - m.b ** 2))
    eta_min = max(h.g2 + S, -h.g1 + S)
    constants = {'alpha_prime': alpha_p, 'beta_prime': beta_p, 'gamma_tilde': g_tilde}

    def result(valid, reason, eta_value):
        return RectContour(valid, reason, R1, RN, R1t, R2t, eta_value, eta_min, total, constants)

    if not all(h.g1 < lam.imag < h.g2 and h.alphaT < lam.real < h.betaT for lam in lams):
        return result(False, 'eigenvalue_outside_gap', math.nan)
    if not (alpha_p < R1 and RN < beta_p):
        return result(False, 'contour_outside_strip', math.nan)
    if eta is None:
        eta = 1.05 * eta_min
    elif not eta > eta_min:
        return result(False, 'eta_too_small', eta)
    return result(True, None, eta)


# =============================================================================
# Essential-spectrum regions
# =============================================================================

def essgap_regions(h, m: RelBound, crossed: bool = False, estimate: str = 'alt') -> EnclosureReport:
    """
    Regions free of essential spectrum. For a gapped strip or a bisector
    these are the resolvent regions of enclose_strip_gap / enclose_bisector,
    relabeled; crossed=True gives the larger crossed bisector form.
    """
    if isinstance(h, HorizontalStripWithGap):
        report = enclose_strip_gap(h, m)
    elif isinstance(h, Bisector):
        if crossed:
            return enclose_essgap_bisector(h, m, estimate)
        report = enclose_bisector(h, m, estimate)
    else:
        raise ValueError(f"no essential-gap region for {type(h).__name__}")
    report.label = 'essential'
    return report


# =============================================================================
# p-subordinate perturbations
# =============================================================================

def psub_strip(h: HorizontalStripWithGap, s: Subordinate) -> EnclosureReport:
    """
    p-subordinate perturbation of a gapped strip |Im t| <= gammaT:
        K = c max(|alpha + i gammaT|^p, |beta + i gammaT|^p),
    strip alpha + K < Re z < beta - K when 2K < beta - alpha.
    """
    s = _require_subordinate(s)
    gamma = h.gamma_tilde
    alpha, beta = h.alphaT, h.betaT
    if not math.isfinite(gamma):
        return _report('psub_strip', h, s, rg.EMPTY, {'gammaT': gamma},
                       applicable=False, reason='gamma_unbounded')
    K = s.c * max(abs(complex(alpha, gamma)) ** s.p, abs(complex(beta, gamma)) ** s.p)
    constants = {'K': K, 'gammaT': gamma, 'alpha_prime': alpha + K, 'beta_prime': beta - K}
    if not 2 * K < beta - alpha:
        return _report('psub_strip', h, s, rg.EMPTY, constants,
                       applicable=False, reason='gap_too_narrow')
    region = _open_vertical(alpha + K, beta - K)

    def raw(z):
        mu, nu = z.real, z.imag
        dmin = np.minimum(mu - alpha, beta - mu)
        q = K / dmin
        dy = np.maximum(0.0, np.maximum(nu - h.g2, h.g1 - nu))
        dist = np.sqrt(dmin ** 2 + dy ** 2)
        return np.where((dmin > 0) & (q < 1), 1.0 / (dist * (1.0 - q)), math.inf)

    return _report('psub_strip', h, s, region, constants, bound_fn=_masked(region, raw))


NU0_GRID_TOP = 1e9


def _parabola_tail_ratio(s: Subordinate, zeta: float, nu) -> np.ndarray:
    nu = np.asarray(nu, dtype=float)
    r = np.sqrt(nu - 0.25)
    return s.c * (r + np.sqrt(zeta ** 2 + nu ** 2)) ** s.p / r


def _find_nu0(s: Subordinate, zeta: float):
    """Smallest nu0 >= 1/2 with the tail ratio below 1 beyond it, and the tail check."""
    grid = 0.5 * np.geomspace(1.0, 2 * NU0_GRID_TOP, 4000)
    vals = _parabola_tail_ratio(s, zeta, grid)
    failing = np.nonzero(vals >= 1)[0]
    if failing.size == 0:
        nu0 = 0.5
    elif failing[-1] == grid.size - 1:
        return None, False
    else:
        i = failing[-1]
        nu0 = brentq(lambda v: float(_parabola_tail_ratio(s, zeta, v)) - 1.0, grid[i], grid[i + 1])
    tail = nu0 * 2.0 ** np.arange(1, 31)
    return float(nu0), bool(np.all(_parabola_tail_ratio(s, zeta, tail) < 1))


def _smallest_margin(s: Subordinate, anchor: float) -> float:
    """Smallest M with c (M + anchor)^p / M < 1; the left side decreases in M."""
    def excess(M):
        return s.c * (M + anchor) ** s.p / M - 1.0
    hi = max(1.0, anchor)
    while excess(hi) >= 0:
        hi *= 2.0
    lo = hi / 2.0
    while excess(lo) < 0 and lo > 1e-300:
        lo /= 2.0
    return brentq(excess, lo, hi, xtol=1e-14, rtol=1e-14) * (1 + 1e-12)


def psub_parabola(h: ParabolicBisector, s: Subordinate) -> EnclosureReport:
    """
    p-subordinate perturbation (p < 1/2) of T with spectrum in the two
    parabolic regions at alphaT (mirrored) and betaT: strip
    alphaT + M < Re z < betaT - M with the smallest admissible M.

    nu0 is located on a geometric grid up to 1e9 and the tail is checked on
    nu0 * 2^k, k <= 30; the ratio tends to 0 for p < 1/2.
    """
    s = _require_subordinate(s)
    alpha, beta = h.alphaT, h.betaT
    zeta = h.zeta
    if not 0 <= s.p < 0.5:
        return _report('psub_parabola', h, s, rg.EMPTY, {'zeta': zeta},
                       applicable=False, reason='p_not_below_half')
    if s.c == 0:
        constants = {'zeta': zeta, 'nu0': 0.5, 'M': 0.0, 'tail_checked': True,
                     'alpha_prime': alpha, 'beta_prime': beta}
        return _report('psub_parabola', h, s, _open_vertical(alpha, beta), constants)
    nu0, tail_ok = _find_nu0(s, zeta)
    if nu0 is None:
        return _report('psub_parabola', h, s, rg.EMPTY, {'zeta': zeta},
                       applicable=False, reason='nu0_not_found')
    M = _smallest_margin(s, math.sqrt(zeta ** 2 + nu0 ** 2))
    constants = {'zeta': zeta, 'nu0': nu0, 'M': M, 'tail_checked': tail_ok,
                 'alpha_prime': alpha + M, 'beta_prime': beta - M}
    if not 2 * M < beta - alpha:
        return _report('psub_parabola', h, s, rg.EMPTY, constants,
                       applicable=False, reason='gap_too_narrow')
    region = _open_vertical(alpha + M, beta - M)

    def scalar(z: complex) -> float:
        if not alpha < z.real < beta:
            return math.inf
        d = min(bd.dist_parabola(z, beta), bd.dist_parabola(z, alpha, mirrored=True))
        q = s.c * (1 + abs(z) / d) ** s.p / d ** (1 - s.p)
        return 1.0 / (d * (1 - q)) if q < 1 else math.inf

    return _report('psub_parabola', h, s, region, constants,
                   bound_fn=_masked(region, _pointwise(scalar)))


@dataclass
class RouteComparison:
    """Direct p-subordinate strip vs the strip via conversion to a relative bound."""
    direct: EnclosureReport
    converted: Optional[EnclosureReport]
    eps: Optional[float]
    relbound: Optional[RelBound]

    def widths(self) -> Dict[str, float]:
        def width(rep):
            if rep is None or not rep.applicable:
                return 0.0
            return rep.constants['beta_prime'] - rep.constants['alpha_prime']
        return {'direct': width(self.direct), 'converted': width(self.converted)}

    def to_dict(self) -> Dict[str, Any]:
        return {
            'direct': self.direct.to_dict(),
            'converted': None if self.converted is None else self.converted.to_dict(),
            'eps': self.eps,
            'relbound': None if self.relbound is None else self.relbound.to_dict(),
            'widths': self.widths(),
        }


def route_comparison(h: HorizontalStripWithGap, s: Subordinate,
                     eps_grid: Optional[Sequence[float]] = None) -> RouteComparison:
    """
    Compare the direct p-subordinate strip with the gap strip obtained by
    converting s to a relative bound (a_eps, eps), eps chosen on a grid in
    (0, 1) to maximize the strip width. Both are reported; neither is
    claimed wider.
    """
    s = _require_subordinate(s)
    direct = psub_strip(h, s)
    if s.p >= 1:
        return RouteComparison(direct, None, None, None)
    if eps_grid is None:
        eps_grid = np.linspace(0.01, 0.99, 99)
    best = None
    for eps in eps_grid:
        rb = bd.subordination_to_relbound(s, float(eps))
        rep = enclose_strip_gap(h, rb)
        width = rep.constants['beta_prime'] - rep.constants['alpha_prime']
        if best is None or width > best[0]:
            best = (width, float(eps), rb, rep)
        if rb.b == 0:
            break
    _, eps, rb, rep = best
    return RouteComparison(direct, rep, eps, rb)


# =============================================================================
# Hypothesis sets
# =============================================================================

def _closed_strip(g1: float, g2: float) -> rg.Leaf:
    return rg.leaf(rg.HorizontalStrip(g1, g2))


def _without_gap(v1: float, v2: float) -> rg.RegionExpr:
    return rg.Complement(_open_vertical(v1, v2))


def hypothesis_region(h: SpectrumHypothesis) -> rg.RegionExpr:
    """
    Closed set that the hypothesis places sigma(T) in.

    Isolated eigenvalues of FiniteEigsPlusStrip appear as radius-0 disks.
    """
    if isinstance(h, ImUpperBounded):
        return _closed_strip(-math.inf, h.gamma)
    if isinstance(h, HorizontalStrip):
        return _closed_strip(h.g1, h.g2)
    if isinstance(h, HorizontalStripWithGap):
        return rg.Intersection((_closed_strip(h.g1, h.g2), _without_gap(h.alphaT, h.betaT)))
    if isinstance(h, SemiBounded):
        side = (h.bound, math.inf) if h.side == 'right' else (-math.inf, h.bound)
        return rg.Intersection((_closed_strip(h.g1, h.g2), rg.leaf(rg.VerticalStrip(*side))))
    if isinstance(h, SectorOnly):
        return rg.leaf(rg.Sector(h.vertex, h.theta, h.mirrored))
    if isinstance(h, (Bisector, BisectorPlusStrip)):
        parts = [rg.leaf(rg.Sector(h.betaT, h.theta)), rg.leaf(rg.Sector(h.alphaT, h.theta, True))]
        if isinstance(h, BisectorPlusStrip):
            parts.append(_closed_strip(-h.gammaT, h.gammaT))
        return rg.Union(tuple(parts))
    if isinstance(h, VerticalGap):
        return _without_gap(h.v1, h.v2)
    if isinstance(h, RectComplement):
        box = rg.Intersection((_open_vertical(h.v1, h.v2),
                               rg.leaf(rg.HorizontalStrip(h.e1, h.e2, closed=False))))
        return rg.Complement(box)
    if isinstance(h, DiskComplement):
        return rg.Complement(rg.leaf(rg.Disk(0j, h.R, closed=False)))
    if isinstance(h, GapSequence):
        parts = [_without_gap(a, b) for a, b in h.gaps]
        if h.imaginary is not None:
            parts.append(_closed_strip(*h.imaginary))
        return rg.intersection_all(parts)
    if isinstance(h, FiniteEigsPlusStrip):
        strip = rg.Intersection((_closed_strip(h.g1, h.g2), _without_gap(h.alphaT, h.betaT)))
        points = [rg.leaf(rg.Disk(complex(lam), 0.0)) for lam, _ in h.eigs]
        return rg.union_all([strip] + points)
    if isinstance(h, ParabolicBisector):
        return rg.Union((rg.leaf(rg.ParabolaRegion(h.betaT)), rg.leaf(rg.ParabolaRegion(h.alphaT, True))))
    raise ValueError(f"no hypothesis set for {type(h).__name__}")


# =============================================================================
# Dispatcher
# =============================================================================

def _essgap_crossed(h, m, **opts):
    return essgap_regions(h, m, crossed=True, **opts)


THEOREMS: Dict[str, Callable[..., EnclosureReport]] = {
    'im_upper': enclose_im_upper,
    'strip': enclose_strip,
    'strip_symmetric': enclose_strip_symmetric,
    'strip_gap': enclose_strip_gap,
    'semibounded': enclose_semibounded,
    'sector': enclose_sector,
    'bisector': enclose_bisector,
    'bisector_strip': enclose_bisector_strip,
    'interior_strip': enclose_interior_strip,
    'rect_complement': enclose_rect_complement,
    'disk_complement': enclose_disk_complement,
    'gaps_bdd': gaps_bdd,
    'gaps_unbdd': gaps_unbdd,
    'ev_disks': ev_disks,
    'essgap': essgap_regions,
    'essgap_crossed': _essgap_crossed,
    'psub_strip': psub_strip,
    'psub_parabola': psub_parabola,
}

_RELBOUND_DEFAULTS = {
    ImUpperBounded: 'im_upper',
    HorizontalStrip: 'strip',
    HorizontalStripWithGap: 'strip_gap',
    SemiBounded: 'semibounded',
    SectorOnly: 'sector',
    Bisector: 'bisector',
    BisectorPlusStrip: 'bisector_strip',
    VerticalGap: 'interior_strip',
    RectComplement: 'rect_complement',
    DiskComplement: 'disk_complement',
    FiniteEigsPlusStrip: 'ev_disks',
}

_ACCEPTS = {name: cls for cls, name in _RELBOUND_DEFAULTS.items()}
_ACCEPTS.update(
    strip_symmetric=HorizontalStrip,
    gaps_bdd=GapSequence,
    gaps_unbdd=GapSequence,
    essgap=(HorizontalStripWithGap, Bisector),
    essgap_crossed=Bisector,
    psub_strip=HorizontalStripWithGap,
    psub_parabola=ParabolicBisector,
)

_SUBORDINATE_DEFAULTS = {
    HorizontalStripWithGap: 'psub_strip',
    ParabolicBisector: 'psub_parabola',
}


def default_theorem(h: SpectrumHypothesis, m) -> str:
    """Name of the inclusion `enclose` applies when no theorem is given."""
    if isinstance(m, Subordinate):
        name = _SUBORDINATE_DEFAULTS.get(type(h))
    elif isinstance(h, GapSequence):
        name = 'gaps_bdd' if h.imaginary is not None else 'gaps_unbdd'
    else:
        name = _RELBOUND_DEFAULTS.get(type(h))
    if name is None:
        raise ValueError(f"no {type(m).__name__} inclusion for {type(h).__name__}")
    return name


def enclose(h: SpectrumHypothesis, m, theorem: Optional[str] = None, **opts) -> EnclosureReport:
    """
    Apply the inclusion matching the hypothesis type and perturbation model.

    Args:
        h: Spectral hypothesis
        m: RelBound or Subordinate
        theorem: Name from THEOREMS, for hypotheses with more than one
            inclusion (e.g. "strip_symmetric", "essgap_crossed", "gaps_unbdd")
        **opts: Passed to the selected enclosure (estimate, eps, ...)

    Returns:
        EnclosureReport
    """
    name = theorem or default_theorem(h, m)
    if name not in THEOREMS:
        raise ValueError(f"unknown theorem: {name!r}")
    accepted = _ACCEPTS.get(name)
    if accepted is not None and not isinstance(h, accepted):
        raise ValueError(f"theorem {name!r} does not apply to {type(h).__name__}")
    return THEOREMS[name](h, m, **opts)
