"""
Tests for spectral hypothesis construction and config parsing.
"""

import math

import pytest

from src import hypotheses as hy
from src.hypotheses import hypothesis_from_dict


def test_from_dict_coerces_numbers():
    h = hypothesis_from_dict({'type': 'strip_gap', 'g1': -1, 'g2': '1', 'alphaT': -2, 'betaT': 6})
    assert h == hy.HorizontalStripWithGap(-1.0, 1.0, -2.0, 6.0)
    assert isinstance(h.g2, float)
    assert h.gamma_tilde == 1.0


def test_semibounded_keeps_side():
    h = hypothesis_from_dict({'type': 'semibounded', 'g1': -1, 'g2': 2, 'side': 'left', 'bound': 0})
    assert h.side == 'left'
    assert h.gamma_tilde == 2.0
    with pytest.raises(ValueError):
        hy.SemiBounded(-1.0, 1.0, 'up', 0.0)


def test_sector_mirrored_default():
    h = hypothesis_from_dict({'type': 'sector', 'vertex': 2, 'theta': 0.3})
    assert h.mirrored is False
    assert hypothesis_from_dict({'type': 'sector', 'vertex': 2, 'theta': 0.3, 'mirrored': True}).mirrored


def test_gap_sequence_parsing():
    h = hypothesis_from_dict({'type': 'gap_sequence', 'gaps': [[1, 2], [4, 8]], 'imaginary': [-1, 1]})
    assert h.gaps == ((1.0, 2.0), (4.0, 8.0))
    assert h.imaginary == (-1.0, 1.0)
    assert h.gamma_tilde == 1.0
    bare = hypothesis_from_dict({'type': 'gap_sequence', 'gaps': [[1, 2]]})
    assert bare.imaginary is None
    assert bare.gamma_tilde is None


@pytest.mark.parametrize("gaps", [[], [[2, 1]], [[1, 3], [2, 4]]])
def test_gap_sequence_rejects(gaps):
    with pytest.raises(ValueError):
        hy.GapSequence(tuple(tuple(g) for g in gaps))


def test_finite_eigs_parsing():
    h = hypothesis_from_dict({
        'type': 'finite_eigs', 'g1': -1, 'g2': 1, 'alphaT': -2, 'betaT': 6,
        'eigs': [[[2.0, 0.5], 1], [3, 2]],
    })
    assert h.eigs == ((complex(2.0, 0.5), 1), (complex(3.0), 2))
    assert h.total_multiplicity == 3
    with pytest.raises(ValueError):
        hy.FiniteEigsPlusStrip(-1.0, 1.0, -2.0, 6.0, ((2j, 0),))


def test_parabolic_bisector_zeta():
    assert hy.ParabolicBisector(-10.0, 3.0).zeta == 10.0


@pytest.mark.parametrize("cls,args", [
    (hy.HorizontalStrip, (1.0, -1.0)),
    (hy.HorizontalStripWithGap, (-1.0, 1.0, 2.0, 2.0)),
    (hy.Bisector, (3.0, -3.0, 0.3)),
    (hy.Bisector, (-3.0, 3.0, math.pi / 2)),
    (hy.BisectorPlusStrip, (-3.0, 3.0, 0.3, -1.0)),
    (hy.VerticalGap, (1.0, 1.0)),
    (hy.RectComplement, (-1.0, 1.0, 2.0, 1.0)),
    (hy.DiskComplement, (0.0,)),
    (hy.SectorOnly, (0.0, -0.1)),
    (hy.ParabolicBisector, (1.0, 0.0)),
])
def test_invalid_orderings(cls, args):
    with pytest.raises(ValueError):
        cls(*args)


def test_degenerate_strip_allowed():
    assert hy.HorizontalStrip(0.0, 0.0).gamma_tilde == 0.0


def test_unknown_type():
    with pytest.raises(ValueError, match="unknown hypothesis"):
        hypothesis_from_dict({'type': 'annulus', 'R': 1})


def test_missing_fields():
    with pytest.raises(ValueError, match="missing fields"):
        hypothesis_from_dict({'type': 'bisector', 'alphaT': -1, 'betaT': 1})


@pytest.mark.parametrize("data", [
    {'type': 'im_upper', 'gamma': 1.0},
    {'type': 'disk_complement', 'R': 5.0},
    {'type': 'bisector_strip', 'alphaT': -3.0, 'betaT': 3.0, 'theta': 0.3, 'gammaT': 1.0},
    {'type': 'rect_complement', 'v1': -3.0, 'v2': 3.0, 'e1': -2.0, 'e2': 2.0},
])
def test_to_dict_reparses(data):
    h = hypothesis_from_dict(data)
    assert h.to_dict() == data
    assert hypothesis_from_dict(h.to_dict()) == h
