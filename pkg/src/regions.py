"""
Complex-plane regions for spectral inclusion statements.

Copyright (c) 2025 Mathew Mark Mytka
SPDX-License-Identifier: LicenseRef-ESL-A

Licensed under the Earthian Stewardship License (ESL-A).
See LICENSE file for full terms.

Every inclusion result in this package is a set in the complex plane built
from a handful of primitive shapes, moved rigidly and combined with set
operations. Membership is vectorized over numpy arrays of complex points.

Open/closed conventions:
- hyperbola interiors are open
- sectors and parabolic regions are closed
- strips, half-planes and disks are closed unless built with closed=False

Classes:
    HyperbolaUpper, Sector, ParabolaRegion, HalfPlane,
    HorizontalStrip, VerticalStrip, Disk: primitive regions
    TransformedRegion: primitive mapped by z = translate + reflect*e^{i*phi}*w
    RegionExpr: boolean expression tree over transformed primitives
    Window, BoundaryPolyline: plotting support
"""

import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

logger = logging.getLogger(__name__)

__all__ = [
    'Window',
    'PrimitiveRegion',
    'HyperbolaUpper',
    'Sector',
    'ParabolaRegion',
    'HalfPlane',
    'HorizontalStrip',
    'VerticalStrip',
    'Disk',
    'TransformedRegion',
    'RegionExpr',
    'Leaf',
    'Union',
    'Intersection',
    'Complement',
    'EMPTY',
    'FULL',
    'leaf',
    'union_all',
    'intersection_all',
    'contains',
    'transformed_membership',
    'BoundaryPolyline',
    'boundary_samples',
    'sample_grid',
    'as_complex_array',
]


def as_complex_array(z) -> np.ndarray:
    """Convert input to a complex array, rejecting NaN/Inf."""
    arr = np.asarray(z, dtype=complex)
    if not np.all(np.isfinite(arr)):
        raise ValueError("complex points must be finite")
    return arr


def _scalar_or_array(result: np.ndarray, z) -> Any:
    if np.ndim(z) == 0:
        return bool(result)
    return result


def _complex_pair(z: complex) -> List[float]:
    return [float(np.real(z)), float(np.imag(z))]


# =============================================================================
# Window
# =============================================================================

@dataclass(frozen=True)
class Window:
    """Axis-aligned rectangle [x0, x1] x [y0, y1]."""
    x0: float
    x1: float
    y0: float
    y1: float

    def __post_init__(self):
        if not all(math.isfinite(v) for v in (self.x0, self.x1, self.y0, self.y1)):
            raise ValueError("window bounds must be finite")
        if not (self.x0 < self.x1 and self.y0 < self.y1):
            raise ValueError(f"degenerate window: {self}")

    @classmethod
    def parse(cls, text: str) -> 'Window':
        """Parse "x0,x1,y0,y1"."""
        parts = [float(p) for p in text.split(',')]
        if len(parts) != 4:
            raise ValueError(f"window needs 4 numbers, got {text!r}")
        return cls(*parts)

    @classmethod
    def around(cls, points: np.ndarray, pad: float = 0.0) -> 'Window':
        pts = np.asarray(points, dtype=complex).ravel()
        return cls(
            float(pts.real.min()) - pad, float(pts.real.max()) + pad,
            float(pts.imag.min()) - pad, float(pts.imag.max()) + pad,
        )

    def corners(self) -> np.ndarray:
        return np.array([
            complex(self.x0, self.y0), complex(self.x1, self.y0),
            complex(self.x1, self.y1), complex(self.x0, self.y1),
        ])

    def contains(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        return ((z.real >= self.x0) & (z.real <= self.x1)
                & (z.imag >= self.y0) & (z.imag <= self.y1))

    def padded(self, pad: float) -> 'Window':
        return Window(self.x0 - pad, self.x1 + pad, self.y0 - pad, self.y1 + pad)

    @property
    def center(self) -> complex:
        return complex(0.5 * (self.x0 + self.x1), 0.5 * (self.y0 + self.y1))

    @property
    def radius(self) -> float:
        """Half the diagonal."""
        return 0.5 * math.hypot(self.x1 - self.x0, self.y1 - self.y0)

    def to_list(self) -> List[float]:
        return [self.x0, self.x1, self.y0, self.y1]


def sample_grid(window: Window, n: int) -> np.ndarray:
    """n x n grid of complex points covering the window."""
    xs = np.linspace(window.x0, window.x1, n)
    ys = np.linspace(window.y0, window.y1, n)
    X, Y = np.meshgrid(xs, ys)
    return X + 1j * Y


def _uniform_samples(lo: float, hi: float, max_step: float) -> np.ndarray:
    n = max(2, int(math.ceil((hi - lo) / max_step)) + 1)
    return np.linspace(lo, hi, n)


# =============================================================================
# Primitive regions
# =============================================================================

class PrimitiveRegion(ABC):
    """A closed-form subset of the plane in its own (base) coordinates."""

    kind = 'primitive'

    @abstractmethod
    def contains(self, w: np.ndarray) -> np.ndarray:
        """Vectorized membership of base-coordinate points."""

    @abstractmethod
    def boundary(self, box: Window, max_step: float) -> List[np.ndarray]:
        """Boundary curves covering the box, consecutive points <= max_step apart."""

    @abstractmethod
    def params(self) -> Dict[str, Any]:
        """JSON-ready parameters."""

    def to_dict(self) -> Dict[str, Any]:
        d = {'type': self.kind}
        d.update(self.params())
        return d


@dataclass(frozen=True)
class HyperbolaUpper(PrimitiveRegion):
    """
    Open region above the hyperbola

        y^2 = (a^2 + b^2 gamma^2)/(1 - b^2) + b^2 x^2/(1 - b^2),  y > 0.

    b = 0 degenerates to the half-plane y > a.
    """
    a: float
    b: float
    gamma: float = 0.0

    kind = 'hyperbola_upper'

    def __post_init__(self):
        if not (self.a >= 0 and math.isfinite(self.a)):
            raise ValueError(f"a must be finite and >= 0, got {self.a}")
        if not 0 <= self.b < 1:
            raise ValueError(f"b must lie in [0, 1), got {self.b}")
        if not math.isfinite(self.gamma):
            raise ValueError("gamma must be finite")

    @property
    def apex(self) -> float:
        return math.sqrt((self.a ** 2 + self.b ** 2 * self.gamma ** 2) / (1 - self.b ** 2))

    @property
    def slope(self) -> float:
        return self.b / math.sqrt(1 - self.b ** 2)

    def height(self, x) -> np.ndarray:
        """Boundary curve y(x)."""
        x = np.asarray(x, dtype=float)
        return np.sqrt(self.apex ** 2 + self.slope ** 2 * x ** 2)

    def asymptote(self) -> Tuple[float, float]:
        """(slope, intercept) of y ~ slope*|x| + intercept."""
        return self.slope, 0.0

    def contains(self, w):
        y = w.imag
        return (y > 0) & (y * y > self.apex ** 2 + self.slope ** 2 * w.real ** 2)

    def boundary(self, box, max_step):
        dx = max_step / math.sqrt(1 + self.slope ** 2)
        xs = _uniform_samples(box.x0, box.x1, dx)
        return [xs + 1j * self.height(xs)]

    def params(self):
        return {'a': self.a, 'b': self.b, 'gamma': self.gamma}


@dataclass(frozen=True)
class Sector(PrimitiveRegion):
    """
    Closed sector {z : z = vertex or |arg(z - vertex)| <= theta}.

    mirrored=True gives the left-opening sector with the same vertex,
    i.e. the negation image of the sector at -vertex.
    """
    vertex: float
    theta: float
    mirrored: bool = False

    kind = 'sector'

    def __post_init__(self):
        if not 0 <= self.theta < math.pi / 2:
            raise ValueError(f"theta must lie in [0, pi/2), got {self.theta}")
        if not math.isfinite(self.vertex):
            raise ValueError("vertex must be finite")

    def contains(self, w):
        d = w - self.vertex
        if self.mirrored:
            d = -d
        return (d == 0) | (np.abs(np.angle(d)) <= self.theta)

    def boundary(self, box, max_step):
        r_max = float(np.max(np.abs(box.corners() - self.vertex))) + max_step
        rs = _uniform_samples(0.0, r_max, max_step)
        sign = -1.0 if self.mirrored else 1.0
        upper = self.vertex + sign * rs * np.exp(1j * self.theta)
        if self.theta == 0:
            return [upper]
        lower = self.vertex + sign * rs * np.exp(-1j * self.theta)
        return [upper, lower]

    def params(self):
        return {'vertex': self.vertex, 'theta': self.theta, 'mirrored': self.mirrored}


@dataclass(frozen=True)
class ParabolaRegion(PrimitiveRegion):
    """
    Closed parabolic region {Re z >= lam, |Im z| <= (Re z - lam)^2}.

    mirrored=True opens to the left: {Re z <= lam, |Im z| <= (lam - Re z)^2}.
    """
    lam: float
    mirrored: bool = False

    kind = 'parabola'

    def contains(self, w):
        s = (w.real - self.lam) * (-1.0 if self.mirrored else 1.0)
        return (s >= 0) & (np.abs(w.imag) <= s * s)

    def boundary(self, box, max_step):
        sign = -1.0 if self.mirrored else 1.0
        reach = max(abs(box.x0 - self.lam), abs(box.x1 - self.lam))
        s_max = min(reach, math.sqrt(max(abs(box.y0), abs(box.y1)))) + max_step
        s_vals = [0.0]
        s = 0.0
        while s < s_max:
            s += max_step / math.sqrt(1 + 4 * s * s)
            s_vals.append(s)
        s_arr = np.array(s_vals)
        upper = self.lam + sign * s_arr + 1j * s_arr ** 2
        return [upper, np.conj(upper)]

    def params(self):
        return {'lam': self.lam, 'mirrored': self.mirrored}


@dataclass(frozen=True)
class HalfPlane(PrimitiveRegion):
    """{z : Re(z e^{-i angle}) <= offset}; angle is the outward normal."""
    angle: float
    offset: float
    closed: bool = True

    kind = 'half_plane'

    def contains(self, w):
        proj = (w * np.exp(-1j * self.angle)).real
        return proj <= self.offset if self.closed else proj < self.offset

    def boundary(self, box, max_step):
        normal = np.exp(1j * self.angle)
        s_center = float((box.center / normal).imag)
        ss = _uniform_samples(s_center - box.radius, s_center + box.radius, max_step)
        return [normal * (self.offset + 1j * ss)]

    def params(self):
        return {'angle': self.angle, 'offset': self.offset, 'closed': self.closed}


@dataclass(frozen=True)
class HorizontalStrip(PrimitiveRegion):
    """{g1 <= Im z <= g2}; bounds may be infinite for half-planes."""
    g1: float
    g2: float
    closed: bool = True

    kind = 'horizontal_strip'

    def __post_init__(self):
        if self.g1 > self.g2:
            raise ValueError(f"strip requires g1 <= g2, got {self.g1} > {self.g2}")

    def contains(self, w):
        y = w.imag
        if self.closed:
            return (y >= self.g1) & (y <= self.g2)
        return (y > self.g1) & (y < self.g2)

    def boundary(self, box, max_step):
        xs = _uniform_samples(box.x0, box.x1, max_step)
        return [xs + 1j * g for g in (self.g1, self.g2) if math.isfinite(g)]

    def params(self):
        return {'g1': self.g1, 'g2': self.g2, 'closed': self.closed}


@dataclass(frozen=True)
class VerticalStrip(PrimitiveRegion):
    """{v1 <= Re z <= v2}; bounds may be infinite for half-planes."""
    v1: float
    v2: float
    closed: bool = True

    kind = 'vertical_strip'

    def __post_init__(self):
        if self.v1 > self.v2:
            raise ValueError(f"strip requires v1 <= v2, got {self.v1} > {self.v2}")

    def contains(self, w):
        x = w.real
        if self.closed:
            return (x >= self.v1) & (x <= self.v2)
        return (x > self.v1) & (x < self.v2)

    def boundary(self, box, max_step):
        ys = _uniform_samples(box.y0, box.y1, max_step)
        return [v + 1j * ys for v in (self.v1, self.v2) if math.isfinite(v)]

    def params(self):
        return {'v1': self.v1, 'v2': self.v2, 'closed': self.closed}


@dataclass(frozen=True)
class Disk(PrimitiveRegion):
    """{|z - center| <= radius}."""
    center: complex
    radius: float
    closed: bool = True

    kind = 'disk'

    def __post_init__(self):
        if not (self.radius >= 0 and math.isfinite(self.radius)):
            raise ValueError(f"radius must be finite and >= 0, got {self.radius}")

    def contains(self, w):
        d = np.abs(w - self.center)
        return d <= self.radius if self.closed else d < self.radius

    def boundary(self, box, max_step):
        n = max(16, int(math.ceil(2 * math.pi * self.radius / max_step))) + 1
        t = np.linspace(0.0, 2 * math.pi, n)
        return [self.center + self.radius * np.exp(1j * t)]

    def params(self):
        return {'center': _complex_pair(self.center), 'radius': self.radius,
                'closed': self.closed}


# =============================================================================
# Rigid transforms
# =============================================================================

@dataclass(frozen=True)
class TransformedRegion:
    """
    Primitive moved into the plane: z in region iff
    base.contains(reflect * e^{-i phi} * (z - translate)).
    """
    base: PrimitiveRegion
    phi: float = 0.0
    reflect: int = 1
    translate: complex = 0j

    def __post_init__(self):
        if self.reflect not in (1, -1):
            raise ValueError(f"reflect must be +1 or -1, got {self.reflect}")
        if not (math.isfinite(self.phi) and np.isfinite(self.translate)):
            raise ValueError("transform parameters must be finite")

    def to_base(self, z) -> np.ndarray:
        return self.reflect * np.exp(-1j * self.phi) * (np.asarray(z, dtype=complex) - self.translate)

    def from_base(self, w) -> np.ndarray:
        return self.translate + self.reflect * np.exp(1j * self.phi) * np.asarray(w, dtype=complex)

    def contains(self, z) -> np.ndarray:
        return self.base.contains(self.to_base(z))

    def then(self, phi: float = 0.0, reflect: int = 1, translate: complex = 0j) -> 'TransformedRegion':
        """Apply a further transform to this region; the result is a single transform."""
        return TransformedRegion(
            base=self.base,
            phi=self.phi + phi,
            reflect=self.reflect * reflect,
            translate=complex(translate + reflect * np.exp(1j * phi) * self.translate),
        )

    def negated(self) -> 'TransformedRegion':
        """Image under z -> -z."""
        return self.then(reflect=-1)

    def boundary(self, window: Window, max_step: float) -> List[np.ndarray]:
        box = Window.around(self.to_base(window.corners()), pad=max_step)
        return [self.from_base(curve) for curve in self.base.boundary(box, max_step)]

    def to_dict(self) -> Dict[str, Any]:
        return {
            'base': self.base.to_dict(),
            'phi': self.phi,
            'reflect': self.reflect,
            'translate': _complex_pair(self.translate),
        }


# =============================================================================
# Expression trees
# =============================================================================

class RegionExpr(ABC):
    """Boolean combination of transformed primitives."""

    def contains(self, z):
        arr = as_complex_array(z)
        return _scalar_or_array(self._eval(arr), z)

    @abstractmethod
    def _eval(self, z: np.ndarray) -> np.ndarray:
        pass

    @abstractmethod
    def leaves(self) -> List['Leaf']:
        pass

    @abstractmethod
    def to_dict(self) -> Dict[str, Any]:
        pass

    def __or__(self, other: 'RegionExpr') -> 'RegionExpr':
        return Union((self, other))

    def __and__(self, other: 'RegionExpr') -> 'RegionExpr':
        return Intersection((self, other))

    def __invert__(self) -> 'RegionExpr':
        return Complement(self)

    def __sub__(self, other: 'RegionExpr') -> 'RegionExpr':
        return Intersection((self, Complement(other)))


@dataclass(frozen=True, eq=False)
class Leaf(RegionExpr):
    region: TransformedRegion

    def _eval(self, z):
        return np.asarray(self.region.contains(z), dtype=bool)

    def leaves(self):
        return [self]

    def to_dict(self):
        d = {'type': 'leaf'}
        d.update(self.region.to_dict())
        return d


@dataclass(frozen=True, eq=False)
class Union(RegionExpr):
    children: Tuple[RegionExpr, ...]

    def _eval(self, z):
        out = np.zeros(z.shape, dtype=bool)
        for child in self.children:
            out |= child._eval(z)
        return out

    def leaves(self):
        return [lf for child in self.children for lf in child.leaves()]

    def to_dict(self):
        return {'type': 'union', 'children': [c.to_dict() for c in self.children]}


@dataclass(frozen=True, eq=False)
class Intersection(RegionExpr):
    children: Tuple[RegionExpr, ...]

    def _eval(self, z):
        out = np.ones(z.shape, dtype=bool)
        for child in self.children:
            out &= child._eval(z)
        return out

    def leaves(self):
        return [lf for child in self.children for lf in child.leaves()]

    def to_dict(self):
        return {'type': 'intersection', 'children': [c.to_dict() for c in self.children]}


@dataclass(frozen=True, eq=False)
class Complement(RegionExpr):
    child: RegionExpr

    def _eval(self, z):
        return ~self.child._eval(z)

    def leaves(self):
        return self.child.leaves()

    def to_dict(self):
        return {'type': 'complement', 'child': self.child.to_dict()}


class _Constant(RegionExpr):
    def __init__(self, value: bool):
        self.value = value

    def _eval(self, z):
        return np.full(z.shape, self.value, dtype=bool)

    def leaves(self):
        return []

    def to_dict(self):
        return {'type': 'full' if self.value else 'empty'}

    def __repr__(self):
        return 'FULL' if self.value else 'EMPTY'


EMPTY = _Constant(False)
FULL = _Constant(True)


def leaf(base: PrimitiveRegion, phi: float = 0.0, reflect: int = 1,
         translate: complex = 0j) -> Leaf:
    """Shorthand for a single transformed primitive."""
    return Leaf(TransformedRegion(base, phi, reflect, complex(translate)))


def union_all(parts: Sequence[RegionExpr]) -> RegionExpr:
    parts = [p for p in parts if p is not EMPTY]
    if not parts:
        return EMPTY
    if len(parts) == 1:
        return parts[0]
    return Union(tuple(parts))


def intersection_all(parts: Sequence[RegionExpr]) -> RegionExpr:
    parts = [p for p in parts if p is not FULL]
    if any(p is EMPTY for p in parts):
        return EMPTY
    if not parts:
        return FULL
    if len(parts) == 1:
        return parts[0]
    return Intersection(tuple(parts))


def contains(expr: RegionExpr, z):
    """Membership of z (scalar or array) in expr."""
    return expr.contains(z)


def transformed_membership(t: TransformedRegion, z):
    arr = as_complex_array(z)
    return _scalar_or_array(np.asarray(t.contains(arr), dtype=bool), z)


# =============================================================================
# Boundary sampling
# =============================================================================

@dataclass
class BoundaryPolyline:
    """Ordered boundary points of one primitive, clipped to a window."""
    points: np.ndarray                  # complex, consecutive points <= max_step apart
    source: str                         # "<leaf index>:<primitive kind>"
    masked: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=bool))

    def to_dict(self) -> Dict[str, Any]:
        return {
            'source': self.source,
            'points': [_complex_pair(p) for p in self.points],
            'masked': [bool(m) for m in self.masked],
        }


def _runs(mask: np.ndarray) -> List[Tuple[int, int]]:
    runs = []
    start: Optional[int] = None
    for i, flag in enumerate(mask):
        if flag and start is None:
            start = i
        elif not flag and start is not None:
            runs.append((start, i))
            start = None
    if start is not None:
        runs.append((start, len(mask)))
    return runs


def boundary_samples(expr: RegionExpr, window: Window, max_step: float,
                     prefix: str = "") -> List[BoundaryPolyline]:
    """
    Sample the boundary of every leaf of expr inside the window.

    Each point is probed at distance max_step/100 in the four axis
    directions against the whole expression; points where all probes agree
    lie on a leaf boundary that is hidden inside (or outside) the full set
    and are flagged masked.

    Args:
        expr: Region expression
        window: Sampling window
        max_step: Maximum distance between consecutive points
        prefix: Prepended to every source label

    Returns:
        List of BoundaryPolyline (empty for EMPTY/FULL)
    """
    if max_step <= 0:
        raise ValueError("max_step must be positive")
    eps = max_step / 100.0
    probes = np.array([eps, -eps, 1j * eps, -1j * eps])
    polylines: List[BoundaryPolyline] = []
    for index, lf in enumerate(expr.leaves()):
        source = f"{prefix}{index}:{lf.region.base.kind}"
        for curve in lf.region.boundary(window, max_step):
            inside = window.contains(curve)
            for start, stop in _runs(inside):
                pts = curve[start:stop]
                member = expr._eval(pts[None, :] + probes[:, None])
                mixed = member.any(axis=0) & ~member.all(axis=0)
                polylines.append(BoundaryPolyline(points=pts, source=source, masked=~mixed))
    logger.debug("sampled %d boundary polylines", len(polylines))
    return polylines
