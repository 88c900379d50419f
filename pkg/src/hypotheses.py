"""
Spectral hypotheses on the unperturbed normal operator.

Copyright (c) 2025 Mathew Mark Mytka
SPDX-License-Identifier: LicenseRef-ESL-A

Licensed under the Earthian Stewardship License (ESL-A).
See LICENSE file for full terms.

Each hypothesis describes a closed set that contains sigma(T). The
enclosure engine dispatches on the class; the validation lab samples
spectra from the same sets. All classes are frozen and validate their
ordering constraints on construction.
"""

import math
from dataclasses import MISSING, dataclass, fields
from typing import Any, Dict, Optional, Tuple, Type

__all__ = [
    'SpectrumHypothesis',
    'ImUpperBounded',
    'HorizontalStrip',
    'HorizontalStripWithGap',
    'SemiBounded',
    'SectorOnly',
    'Bisector',
    'BisectorPlusStrip',
    'VerticalGap',
    'RectComplement',
    'DiskComplement',
    'GapSequence',
    'FiniteEigsPlusStrip',
    'ParabolicBisector',
    'HYPOTHESES',
    'hypothesis_from_dict',
]


def _check_theta(theta: float) -> None:
    if not 0 <= theta < math.pi / 2:
        raise ValueError(f"theta must lie in [0, pi/2), got {theta}")


def _check_order(lo: float, hi: float, names: str, strict: bool = True) -> None:
    if (lo >= hi) if strict else (lo > hi):
        raise ValueError(f"{names} out of order: {lo}, {hi}")


class SpectrumHypothesis:
    """Base class; subclasses are frozen dataclasses with a `kind` tag."""

    kind = 'hypothesis'

    def to_dict(self) -> Dict[str, Any]:
        d = {'type': self.kind}
        for f in fields(self):
            d[f.name] = _jsonable(getattr(self, f.name))
        return d

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'SpectrumHypothesis':
        kwargs = {f.name: data[f.name] for f in fields(cls) if f.name in data}
        return cls(**cls._coerce(kwargs))

    @classmethod
    def _coerce(cls, kwargs: Dict[str, Any]) -> Dict[str, Any]:
        return {k: float(v) if isinstance(v, (int, str)) and not isinstance(v, bool) else v
                for k, v in kwargs.items()}


def _jsonable(value):
    if isinstance(value, complex):
        return [value.real, value.imag]
    if isinstance(value, tuple):
        return [_jsonable(v) for v in value]
    return value


def _parse_complex(value) -> complex:
    if isinstance(value, (list, tuple)):
        return complex(float(value[0]), float(value[1]))
    return complex(value)


@dataclass(frozen=True)
class ImUpperBounded(SpectrumHypothesis):
    """Im sigma(T) <= gamma."""
    gamma: float

    kind = 'im_upper'


@dataclass(frozen=True)
class HorizontalStrip(SpectrumHypothesis):
    """sigma(T) in R + i[g1, g2]."""
    g1: float
    g2: float

    kind = 'strip'

    def __post_init__(self):
        _check_order(self.g1, self.g2, 'g1, g2', strict=False)

    @property
    def gamma_tilde(self) -> float:
        return max(abs(self.g1), abs(self.g2))


@dataclass(frozen=True)
class HorizontalStripWithGap(SpectrumHypothesis):
    """sigma(T) in the strip R + i[g1, g2] with no point in alphaT < Re t < betaT."""
    g1: float
    g2: float
    alphaT: float
    betaT: float

    kind = 'strip_gap'

    def __post_init__(self):
        _check_order(self.g1, self.g2, 'g1, g2', strict=False)
        _check_order(self.alphaT, self.betaT, 'alphaT, betaT')

    @property
    def gamma_tilde(self) -> float:
        return max(abs(self.g1), abs(self.g2))


@dataclass(frozen=True)
class SemiBounded(SpectrumHypothesis):
    """
    sigma(T) in the strip R + i[g1, g2], on one side of Re t = bound.
    side="right": Re sigma(T) >= bound; side="left": Re sigma(T) <= bound.
    """
    g1: float
    g2: float
    side: str
    bound: float

    kind = 'semibounded'

    def __post_init__(self):
        _check_order(self.g1, self.g2, 'g1, g2', strict=False)
        if self.side not in ('left', 'right'):
            raise ValueError(f"side must be 'left' or 'right', got {self.side!r}")

    @property
    def gamma_tilde(self) -> float:
        return max(abs(self.g1), abs(self.g2))

    @classmethod
    def _coerce(cls, kwargs):
        out = super()._coerce({k: v for k, v in kwargs.items() if k != 'side'})
        out['side'] = kwargs.get('side')
        return out


@dataclass(frozen=True)
class SectorOnly(SpectrumHypothesis):
    """sigma(T) in the sector at vertex (mirrored: the left-opening sector)."""
    vertex: float
    theta: float
    mirrored: bool = False

    kind = 'sector'

    def __post_init__(self):
        _check_theta(self.theta)

    @classmethod
    def _coerce(cls, kwargs):
        out = super()._coerce({k: v for k, v in kwargs.items() if k != 'mirrored'})
        out['mirrored'] = bool(kwargs.get('mirrored', False))
        return out


@dataclass(frozen=True)
class Bisector(SpectrumHypothesis):
    """sigma(T) in the sector at betaT united with the mirrored sector at alphaT."""
    alphaT: float
    betaT: float
    theta: float

    kind = 'bisector'

    def __post_init__(self):
        _check_order(self.alphaT, self.betaT, 'alphaT, betaT')
        _check_theta(self.theta)


@dataclass(frozen=True)
class BisectorPlusStrip(SpectrumHypothesis):
    """Bisector hypothesis united with the strip |Im t| <= gammaT."""
    alphaT: float
    betaT: float
    theta: float
    gammaT: float

    kind = 'bisector_strip'

    def __post_init__(self):
        _check_order(self.alphaT, self.betaT, 'alphaT, betaT')
        _check_theta(self.theta)
        if self.gammaT < 0:
            raise ValueError("gammaT must be >= 0")


@dataclass(frozen=True)
class VerticalGap(SpectrumHypothesis):
    """No spectrum in v1 < Re t < v2."""
    v1: float
    v2: float

    kind = 'vertical_gap'

    def __post_init__(self):
        _check_order(self.v1, self.v2, 'v1, v2')


@dataclass(frozen=True)
class RectComplement(SpectrumHypothesis):
    """No spectrum in the open rectangle (v1, v2) x (e1, e2)."""
    v1: float
    v2: float
    e1: float
    e2: float

    kind = 'rect_complement'

    def __post_init__(self):
        _check_order(self.v1, self.v2, 'v1, v2')
        _check_order(self.e1, self.e2, 'e1, e2')


@dataclass(frozen=True)
class DiskComplement(SpectrumHypothesis):
    """sigma(T) in {|t| >= R}."""
    R: float

    kind = 'disk_complement'

    def __post_init__(self):
        if not self.R > 0:
            raise ValueError(f"R must be positive, got {self.R}")


@dataclass(frozen=True)
class GapSequence(SpectrumHypothesis):
    """
    No spectrum in any of the vertical gaps alpha_n < Re t < beta_n.
    imaginary=(g1, g2) adds the strip hypothesis; None leaves Im unbounded.
    """
    gaps: Tuple[Tuple[float, float], ...]
    imaginary: Optional[Tuple[float, float]] = None

    kind = 'gap_sequence'

    def __post_init__(self):
        if not self.gaps:
            raise ValueError("gap sequence is empty")
        prev_beta = -math.inf
        for alpha, beta in self.gaps:
            _check_order(alpha, beta, 'gap ends')
            if alpha < prev_beta:
                raise ValueError("gaps must be increasing and disjoint")
            prev_beta = beta
        if self.imaginary is not None:
            _check_order(self.imaginary[0], self.imaginary[1], 'g1, g2', strict=False)

    @property
    def gamma_tilde(self) -> Optional[float]:
        if self.imaginary is None:
            return None
        return max(abs(self.imaginary[0]), abs(self.imaginary[1]))

    @classmethod
    def _coerce(cls, kwargs):
        gaps = tuple((float(a), float(b)) for a, b in kwargs['gaps'])
        imag = kwargs.get('imaginary')
        if imag is not None:
            imag = (float(imag[0]), float(imag[1]))
        return {'gaps': gaps, 'imaginary': imag}


@dataclass(frozen=True)
class FiniteEigsPlusStrip(SpectrumHypothesis):
    """
    sigma(T) in the gapped strip (R + i[g1, g2] minus alphaT < Re t < betaT)
    together with finitely many eigenvalues (lambda_j, multiplicity_j).
    """
    g1: float
    g2: float
    alphaT: float
    betaT: float
    eigs: Tuple[Tuple[complex, int], ...]

    kind = 'finite_eigs'

    def __post_init__(self):
        _check_order(self.g1, self.g2, 'g1, g2', strict=False)
        _check_order(self.alphaT, self.betaT, 'alphaT, betaT')
        for lam, mult in self.eigs:
            if int(mult) < 1:
                raise ValueError("multiplicities must be positive")

    @property
    def gamma_tilde(self) -> float:
        return max(abs(self.g1), abs(self.g2))

    @property
    def total_multiplicity(self) -> int:
        return sum(int(m) for _, m in self.eigs)

    @classmethod
    def _coerce(cls, kwargs):
        out = super()._coerce({k: v for k, v in kwargs.items() if k != 'eigs'})
        out['eigs'] = tuple((_parse_complex(lam), int(mult)) for lam, mult in kwargs['eigs'])
        return out


@dataclass(frozen=True)
class ParabolicBisector(SpectrumHypothesis):
    """sigma(T) in the parabola region at betaT united with the mirrored one at alphaT."""
    alphaT: float
    betaT: float

    kind = 'parabolic_bisector'

    def __post_init__(self):
        _check_order(self.alphaT, self.betaT, 'alphaT, betaT')

    @property
    def zeta(self) -> float:
        return max(abs(self.alphaT), abs(self.betaT))


HYPOTHESES: Dict[str, Type[SpectrumHypothesis]] = {
    cls.kind: cls for cls in (
        ImUpperBounded, HorizontalStrip, HorizontalStripWithGap, SemiBounded,
        SectorOnly, Bisector, BisectorPlusStrip, VerticalGap, RectComplement,
        DiskComplement, GapSequence, FiniteEigsPlusStrip, ParabolicBisector,
    )
}


def hypothesis_from_dict(data: Dict[str, Any]) -> SpectrumHypothesis:
    """Build a hypothesis from a config mapping with a `type` key."""
    kind = data.get('type')
    if kind not in HYPOTHESES:
        raise ValueError(f"unknown hypothesis type: {kind!r}")
    cls = HYPOTHESES[kind]
    missing = [f.name for f in fields(cls)
               if f.name not in data and f.default is MISSING]
    if missing:
        raise ValueError(f"hypothesis {kind!r} missing fields: {missing}")
    return cls.from_dict(data)
