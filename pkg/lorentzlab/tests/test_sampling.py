import numpy as np
import pytest

from ..exceptions import DomainError
from ..foundations import BallDomain, Interval1D
from ..lab.sampling import PairSampler, Strategy, sample_simple_field

ball = BallDomain(2, 1.0)
interval = Interval1D(0, 1)


@pytest.mark.parametrize("strategy", list(Strategy))
@pytest.mark.parametrize("domain", [ball, interval, BallDomain(3, 2.0, (1.0, 0.0, -1.0))])
def test_pairs_stay_in_closure(strategy, domain):
    x, y = PairSampler(domain, 1000, strategy, seed=3).pairs()
    assert x.shape == y.shape == (1000, domain.n)
    for points in (x, y):
        assert np.all(domain.radii(points) <= domain.r * (1 + 1e-12))


@pytest.mark.parametrize("strategy", list(Strategy))
def test_pairs_are_deterministic(strategy):
    a = PairSampler(ball, 700, strategy, seed=11).pairs()
    b = PairSampler(ball, 700, strategy, seed=11).pairs()
    c = PairSampler(ball, 700, strategy, seed=12).pairs()
    np.testing.assert_array_equal(a[0], b[0])
    np.testing.assert_array_equal(a[1], b[1])
    assert not np.array_equal(a[0], c[0])


def test_refined_sampler_extends_pairs():
    small = PairSampler(ball, 500, seed=5)
    large = small.refined(4)
    assert len(large) == 2000
    np.testing.assert_array_equal(large.pairs()[0][:500], small.pairs()[0])


def test_geometric_ladder_reaches_small_scales():
    x, y = PairSampler(ball, 2000, seed=0).pairs()
    distances = np.linalg.norm(x - y, axis=1)
    assert distances[distances > 0].min() < 1e-9
    assert distances.max() > 0.5


def test_focus_pairs_can_be_dropped():
    x, y = PairSampler(ball, 2000, seed=0, include_focus=False).pairs()
    for points in (x, y):
        assert np.all(np.linalg.norm(points, axis=1) > 0)


def test_radial_window():
    sampler = PairSampler(ball, 1000, seed=2, include_focus=False, radial_window=(1e-3, 1e-2))
    x, y = sampler.pairs()
    radii = np.linalg.norm(x, axis=1)
    assert np.all((radii >= 1e-3 * (1 - 1e-12)) & (radii <= 1e-2 * (1 + 1e-12)))
    with pytest.raises(DomainError):
        PairSampler(ball, radial_window=(1e-2, 1e-3))


def test_explicit_pairs():
    sampler = PairSampler.all_pairs(interval, [0.1, 0.5, 0.9])
    x, y = sampler.pairs()
    assert len(sampler) == 3
    np.testing.assert_allclose(x[:, 0], [0.1, 0.1, 0.5])
    np.testing.assert_allclose(y[:, 0], [0.5, 0.9, 0.9])


def test_sampler_dict():
    sampler = PairSampler(interval, 10, 'UNIFORM', seed=4)
    assert sampler.to_dict() == {'count': 10, 'strategy': 'UNIFORM', 'seed': 4, 'focus': [0.5],
                                 'include_focus': True, 'radial_window': None}


@pytest.mark.parametrize("kwargs", [{'count': 0}, {'seed': -1}])
def test_sampler_rejects(kwargs):
    with pytest.raises(DomainError):
        PairSampler(ball, **kwargs)
    with pytest.raises(DomainError):
        PairSampler(Interval1D(0, np.inf))


def test_simple_field():
    rng = np.random.default_rng(1)
    field = sample_simple_field(ball, 40, rng)
    assert len(field) == 40
    assert np.isclose(np.sum(field.weights), ball.measure)
    assert np.all((field.magnitudes >= 0) & (field.magnitudes < 10))
    reused = sample_simple_field(ball, 40, rng, weights=field.weights)
    np.testing.assert_array_equal(reused.weights, field.weights)
    with pytest.raises(DomainError):
        sample_simple_field(ball, 0, rng)
