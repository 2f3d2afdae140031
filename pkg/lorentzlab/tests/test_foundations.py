import math

import numpy as np
import pytest

from .. import foundations
from ..exceptions import DomainError
from ..foundations import INFINITY, BallDomain, ExponentPair, Interval1D


@pytest.mark.parametrize("n,volume", [(1, 2.0), (2, math.pi), (3, 4 * math.pi / 3)])
def test_unit_ball_volume(n, volume):
    assert math.isclose(foundations.unit_ball_volume(n), volume, rel_tol=1e-14)
    assert math.isclose(foundations.sphere_area(n), n * volume, rel_tol=1e-14)


def test_unit_ball_volume_high_dimension():
    # log-gamma branch stays positive and tiny
    v = foundations.unit_ball_volume(400)
    assert 0 < v < 1e-100


@pytest.mark.parametrize("n", [0, -1, 2.5, True])
def test_unit_ball_volume_rejects(n):
    with pytest.raises(DomainError):
        foundations.unit_ball_volume(n)


@pytest.mark.parametrize("p,expected", [(2, 2.0), (3, 1.5), (1, INFINITY), ('inf', 1.0)])
def test_conjugate_exponent(p, expected):
    assert foundations.conjugate_exponent(p) == expected


def test_infinity_ordering():
    assert INFINITY > 1e308
    assert not INFINITY < 5
    assert INFINITY == math.inf
    assert foundations.as_exponent('inf') is INFINITY
    assert foundations.as_exponent(math.inf) is INFINITY
    assert foundations.reciprocal(INFINITY) == 0.0
    assert sorted([INFINITY, 2.0, 1.0])[-1] is INFINITY


@pytest.mark.parametrize("p,q", [(1.0, 2), (0.5, 2), ('inf', 2), (2, 0.5)])
def test_exponent_pair_rejects(p, q):
    with pytest.raises(DomainError):
        ExponentPair(p, q)


def test_exponent_pair_conjugate_and_dict():
    pq = ExponentPair(3, 'inf')
    assert pq.weak
    assert pq.conjugate() == ExponentPair(1.5, 1)
    assert pq.to_dict() == {'p': 3.0, 'q': 'inf'}
    assert ExponentPair.from_dict(pq.to_dict()) == pq
    assert ExponentPair(2, 1).conjugate().q is INFINITY


def test_ball_domain():
    ball = BallDomain(2, 2.0)
    assert ball.center == (0.0, 0.0)
    assert math.isclose(ball.measure, 4 * math.pi)
    assert ball.contains_domain(BallDomain(2, 1.0, (0.5, 0.5)))
    assert not ball.contains_domain(BallDomain(2, 1.0, (1.5, 0.0)))
    np.testing.assert_allclose(ball.radii([[3.0, 4.0], [0.0, 1.0]]), [5.0, 1.0])
    assert foundations.domain_from_dict(ball.to_dict()) == ball


@pytest.mark.parametrize("n,r,center", [(0, 1.0, None), (2, 0.0, None), (2, 1.0, (0.0,))])
def test_ball_domain_rejects(n, r, center):
    with pytest.raises(DomainError):
        BallDomain(n, r, center)


def test_interval():
    interval = Interval1D(0, 1)
    assert interval.length == 1.0
    assert interval.center == (0.5,)
    assert interval.as_ball() == BallDomain(1, 0.5, (0.5,))
    assert BallDomain(1, 0.5, (0.5,)).as_interval() == interval
    assert interval.contains_domain(Interval1D(0.25, 1.0))
    assert list(interval.contains(np.array([0.0, 0.5, 1.0]))) == [False, True, False]
    assert not Interval1D(0, math.inf).bounded
    with pytest.raises(DomainError):
        Interval1D(1, 0)
    with pytest.raises(DomainError):
        Interval1D(-math.inf, math.inf)
