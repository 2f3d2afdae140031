import json
import math

import numpy as np
import pytest

from .. import rearrangement
from ..exceptions import DomainError, PreconditionError
from ..foundations import BallDomain, Interval1D, unit_ball_volume
from ..lab.sampling import sample_simple_field
from ..rearrangement import (
    IndicatorProfile, LogPowerProfile, PowerProfile, RadialPower, SampledField, StepProfile,
    rearrange,
)

rng = np.random.default_rng(0)
unit = Interval1D(0.0, 1.0)
random_fields = [sample_simple_field(unit, 30, rng) for _ in range(200)]


def test_rearrange_merges_ties_and_drops_zeros():
    field = SampledField.from_cells([(1.0, 3.0), (2.0, 1.0), (0.5, 3.0), (4.0, 0.0)])
    f_star = rearrange(field)
    np.testing.assert_array_equal(f_star.breakpoints, [0.0, 1.5, 3.5])
    np.testing.assert_array_equal(f_star.values, [3.0, 1.0])
    assert f_star.support_end == 3.5


def test_rearrange_zero_field():
    f_star = rearrange(SampledField(unit, [0.5, 0.5], [0.0, 0.0]))
    assert f_star.is_zero
    assert f_star(0.3) == 0.0


@pytest.mark.parametrize("index", range(0, 200, 20))
def test_equimeasurable(index):
    field = random_fields[index]
    f_star = rearrange(field)
    levels = np.concatenate([[0.0], np.unique(field.magnitudes), [5.0, 20.0]])
    for level in levels:
        assert math.isclose(rearrangement.distribution_function(field, level),
                            f_star.distribution(level), rel_tol=1e-12, abs_tol=1e-15)


def test_equimeasurable_all_trials():
    for field in random_fields:
        f_star = rearrange(field)
        assert math.isclose(f_star.support_end, float(np.sum(field.weights[field.magnitudes > 0])),
                            rel_tol=1e-12)
        assert np.all(np.diff(f_star.values) < 0)


@pytest.mark.parametrize("a", [0.5, 2.0, 3.0])
def test_power_compatibility(a):
    for field in random_fields[:50]:
        left = rearrange(field.power(a))
        right = rearrange(field).power(a)
        np.testing.assert_allclose(left.breakpoints, right.breakpoints, rtol=1e-12)
        np.testing.assert_allclose(left.values, right.values, rtol=1e-12)


def test_domination():
    grid = np.linspace(0.0, 1.0, 257)[:-1]
    for field in random_fields[:50]:
        smaller = SampledField(field.domain, field.weights,
                               field.magnitudes * rng.uniform(size=len(field)))
        assert np.all(rearrange(smaller)(grid) <= rearrange(field)(grid))


def test_step_profile_canonical_form():
    a = StepProfile([0, 1, 2, 3], [2.0, 2.0, 0.0])
    b = StepProfile([0, 2], [2.0])
    assert a == b
    assert len(a) == 1
    with pytest.raises(PreconditionError):
        StepProfile([0, 1, 2], [1.0, 2.0])
    with pytest.raises(DomainError):
        StepProfile([1, 2], [1.0])


def test_step_profile_json_round_trip():
    f_star = rearrange(SampledField.from_cells([(1.0, 3.0), (2.0, 1.0), (0.5, 3.0), (4.0, 0.0)]))
    assert StepProfile.from_json(f_star.to_json()) == f_star
    assert StepProfile.from_json(json.loads(json.dumps(f_star.to_json()))) == f_star
    for field in random_fields[:20]:
        f_star = rearrange(field)
        assert StepProfile.from_json(json.loads(json.dumps(f_star.to_json()))) == f_star
    assert StepProfile.from_json({'breakpoints': [0.0], 'values': []}).is_zero


@pytest.mark.parametrize("payload", [
    {'breakpoints': [0, 2, 1], 'values': [3.0, 1.0]},
    {'breakpoints': [0, 1, 2], 'values': [1.0, 3.0]},
    {'breakpoints': [0, 1, 2], 'values': [1.0, -1.0]},
    {'breakpoints': [1, 2], 'values': [1.0]},
    {'breakpoints': [0, 1, 2], 'values': [1.0]},
    {'breakpoints': [0, 1]},
    {'values': [1.0]},
    [[0, 1], [1.0]],
])
def test_step_profile_from_json_rejects(payload):
    with pytest.raises(DomainError):
        StepProfile.from_json(payload)


def test_step_profile_calculus():
    f_star = StepProfile([0, 1, 3], [4.0, 2.0])
    assert f_star(0.0) == 4.0
    assert f_star(1.0) == 2.0
    assert f_star(3.0) == 0.0
    assert f_star.integral(2.0) == 6.0
    assert f_star.average(2.0) == 3.0
    assert f_star.integral(10.0) == 8.0
    assert f_star.distribution(2.0) == 1.0
    assert f_star.distribution(1.0) == 3.0
    assert f_star.distribution(5.0) == 0.0
    assert f_star.restrict(2.0) == StepProfile([0, 1, 2], [4.0, 2.0])


def test_maximal_dominates_profile():
    t = np.geomspace(1e-3, 1.0, 50)
    for field in random_fields[:20]:
        f_star = rearrange(field)
        assert np.all(rearrangement.maximal_profile(f_star, t) >= f_star(t) * (1 - 1e-12))
    with pytest.raises(DomainError):
        rearrangement.maximal_profile(rearrange(random_fields[0]), 0.0)


def test_power_profile():
    f_star = PowerProfile(1.0, 0.5, 4.0)
    assert f_star(1.0) == 1.0
    assert f_star(4.0) == 0.0
    assert math.isinf(f_star(0.0))
    assert f_star.distribution(1.0) == 1.0
    assert f_star.distribution(0.25) == 4.0
    assert math.isclose(f_star.integral(4.0), 4.0)
    assert math.isinf(PowerProfile(1.0, 1.0, 1.0).integral(0.5))


def test_indicator_profile():
    chi = IndicatorProfile(2.0, 3.0)
    assert chi(2.9) == 2.0
    assert chi(3.0) == 0.0
    assert chi.integral(1.5) == 3.0
    assert chi.distribution(1.0) == 3.0
    assert chi.distribution(2.0) == 0.0


@pytest.mark.parametrize("p,alpha", [(2.0, 1.0), (3.0, 0.5), (1.5, 0.25)])
def test_log_power_profile_inverts_distribution(p, alpha):
    f_star = LogPowerProfile(p, alpha, 2.0)
    for t in (1e-8, 1e-3, 0.5, 1.5):
        level = f_star(t)
        assert math.isclose(f_star.distribution(level * (1 - 1e-12)), t, rel_tol=1e-6)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_radial_shells_cover_ball(n):
    edges, weights, mids = rearrangement.radial_shells(BallDomain(n, 2.0), 1000)
    assert edges[0] == 0.0 and edges[-1] == 2.0
    assert math.isclose(np.sum(weights), unit_ball_volume(n) * 2.0 ** n, rel_tol=1e-10)
    assert np.all((mids > edges[:-1]) & (mids < edges[1:]))


def test_radial_shortcut_matches_discretization():
    law = RadialPower(1.0, 1.0)
    exact = rearrangement.rearrange_radial(law, 2, 1.0)
    assert isinstance(exact, PowerProfile)
    discrete = rearrange(rearrangement.radial_field(law, BallDomain(2, 1.0), 100_000))
    t = exact.support_end * np.geomspace(1e-6, 1 - 1e-9, 1000)
    distance = np.max(np.abs(discrete(t) - exact(t)) / exact(t))
    assert distance <= 1e-3


def test_check_monotone_radial():
    rearrangement.check_monotone_radial(lambda s: 1.0 / s, 1.0)
    with pytest.raises(PreconditionError):
        rearrangement.check_monotone_radial(lambda s: s, 1.0)


def test_covers_domain():
    assert all(field.covers_domain() for field in random_fields[:20])
    assert not SampledField(unit, [0.5], [1.0]).covers_domain()
    assert not SampledField.from_cells([(1.0, 2.0)]).covers_domain()


def test_sampled_field_rejects():
    with pytest.raises(DomainError):
        SampledField(unit, [1.0, -1.0], [1.0, 1.0])
    with pytest.raises(DomainError):
        SampledField(unit, [1.0], [np.inf])
    with pytest.raises(DomainError):
        SampledField(unit, [1.0, 1.0], [1.0])
