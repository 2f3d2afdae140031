import json
import math

import numpy as np
import pytest

from .. import util
from ..exceptions import DomainError, PreconditionError
from ..foundations import INFINITY, BallDomain, ExponentPair, Interval1D
from ..gallery import parse_item
from ..lab import checks
from ..lab.checks import CheckReport, Verdict
from ..lab.sampling import PairSampler, Strategy, sample_simple_field
from ..norms import NormValue, quasinorm
from ..rearrangement import IndicatorProfile, SampledField, radial_field, rearrange

unit = Interval1D(0.0, 1.0)
rng = np.random.default_rng(42)
field_pairs = []
for _ in range(50):
    f = sample_simple_field(unit, 30, rng)
    field_pairs.append((f, sample_simple_field(unit, 30, rng, weights=f.weights)))


@pytest.mark.parametrize("pq", [(2, 1), (2, 2), (2, 'inf'), (3, 2), (1.5, 4)])
def test_holder_chain(pq):
    for f, g in field_pairs:
        report = checks.check_holder(f, g, pq)
        assert report.passed
        assert report.details['ordering_gap'] >= -1e-10
        assert report.details['norm_gap'] >= -1e-12 * max(1.0, report.rhs)


@pytest.mark.parametrize("p", [2, 3, 1.5])
def test_holder_equality_for_indicators(p):
    indicator = SampledField(unit, [1.0], [1.0], [0.5])
    report = checks.check_holder(indicator, indicator, (p, p))
    assert report.passed
    assert math.isclose(report.lhs, 1.0)
    assert math.isclose(report.rhs, 1.0, rel_tol=1e-12)


def test_holder_needs_shared_partition():
    f, _ = field_pairs[0]
    with pytest.raises(DomainError):
        checks.check_holder(f, field_pairs[1][0], (2, 2))


def test_general_holder():
    for f, _ in field_pairs:
        assert checks.check_general_holder(f, 2, 2, 4, 4, 4, 4).passed
        assert checks.check_general_holder(f, 2, 2, 4, 'inf', 4, 2).passed
    with pytest.raises(PreconditionError):
        checks.check_general_holder(field_pairs[0][0], 2, 2, 3, 4, 4, 4)
    with pytest.raises(PreconditionError):
        checks.check_general_holder(field_pairs[0][0], 2, 2, 4, 4, 4, 2)


def test_embedding_constant():
    assert checks.embedding_constant(2, 'inf', 1) == 2.0
    assert math.isclose(checks.embedding_constant(3, 'inf', 1), 3 ** 0.5)


def test_embedding_is_sharp_for_power_singularity():
    item = parse_item('power_singularity(r=1,n=1,p=2)')
    report = checks.check_embedding_eps(item, 2, 'inf', 1)
    assert report.passed
    assert math.isclose(report.lhs, 4.0, rel_tol=1e-12)
    assert math.isclose(report.rhs, 4.0, rel_tol=1e-12)


@pytest.mark.parametrize("q,eps", [('inf', 0.5), (4, 0.5), (3, 1.0)])
def test_embedding_random_fields(q, eps):
    for f, _ in field_pairs[:20]:
        assert checks.check_embedding_eps(f, 2, q, eps).passed


@pytest.mark.parametrize("p,q", [(2, 'inf'), (3, 'inf'), (3, 6)])
def test_embedding_accepts_closed_endpoint(p, q):
    f = field_pairs[0][0]
    assert checks.check_embedding_eps(f, p, q, p - 1).passed
    with pytest.raises(PreconditionError):
        checks.check_embedding_eps(f, p, q, (p - 1) * (1 + 1e-9))


@pytest.mark.parametrize("p,q,eps", [(2, 'inf', 1.5),(2, 'inf', 0.0), (2, 2, 0.5), (1, 'inf', 0.5)])
def test_embedding_rejects(p, q, eps):
    with pytest.raises(PreconditionError):
        checks.check_embedding_eps(field_pairs[0][0], p, q, eps)


@pytest.mark.parametrize("q", [1, 2, 4, 'inf'])
def test_equivalence(q):
    for p in (1.5, 2, 3):
        assert checks.check_equivalence(IndicatorProfile(1.0, 1.0), (p, q)).passed
    for f, _ in field_pairs[:20]:
        assert checks.check_equivalence(f, (2, q)).passed
    report = checks.check_equivalence(parse_item('u_radial(r=1,alpha=0.5,n=2,p=3)'), (3, q))
    # alpha q <= 1 diverges
    assert report.verdict is (Verdict.SKIP if q in (1, 2) else Verdict.PASS)


def test_equivalence_skips_infinite_norm():
    report = checks.check_equivalence(parse_item('u_radial(r=1,alpha=0.5,n=2,p=2)'), (2, 1))
    assert report.verdict is Verdict.SKIP
    assert 'LOG_EXPONENT_TEST' in report.reason


@pytest.mark.parametrize("q1,q2,alpha", [(1, 2, 1.0), (2, 4, 0.5), (2, 'inf', 0.5), (4, 'inf', 0.25)])
def test_witness_alpha(q1, q2, alpha):
    assert checks.witness_alpha(q1, q2) == alpha


@pytest.mark.parametrize("q1,q2", [(2, 2), (4, 2), ('inf', 'inf'), (0.5, 2)])
def test_witness_alpha_rejects(q1, q2):
    with pytest.raises(DomainError):
        checks.witness_alpha(q1, q2)


@pytest.mark.parametrize("p", [1.5, 3])
@pytest.mark.parametrize("q1,q2", [(1, 2), (1, 4), (1, 'inf'), (2, 4), (2, 'inf'), (4, 'inf')])
def test_witness_bundle(p, q1, q2):
    bundle = checks.witness_strict_inclusion(p, q1, q2)
    assert bundle.passed, [report.to_dict() for report in bundle.reports if not report.passed]
    assert bundle.norm_q2.is_finite and not bundle.norm_q1.is_finite
    assert not bundle.gradient_norm_q1.is_finite
    assert all(b > a for a, b in zip(bundle.probe[:-1], bundle.probe[1:]))


def test_witness_bundle_to_json():
    bundle = checks.witness_strict_inclusion(2, 2, 'inf')
    payload = json.loads(util.stable_json(bundle.to_dict()))
    assert payload['passed'] is True
    assert payload['q2'] == 'inf'
    assert payload['item'] == 'u_radial(r=1,alpha=0.5,n=2,p=2)'
    assert payload['norm_q1'] == {'infinite': 'LOG_EXPONENT_TEST'}


@pytest.mark.parametrize("n,p", [(1, 2), (2, 2), (3, 4)])
def test_ac_norm_power_singularity_is_constant(n, p):
    report = checks.check_ac_norm(parse_item(f'power_singularity(r=1,n={n},p={p})'), (p, 'inf'))
    assert report.passed
    assert report.details['pattern'] == 'constant'


@pytest.mark.parametrize("n", [1, 2, 3])
def test_ac_norm_decreasing(n):
    report = checks.check_ac_norm(parse_item(f'u_radial(r=1,alpha=1,n={n},p=2)'), (2, 2))
    assert report.passed
    assert report.details['pattern'] == 'decreasing'
    indicator = radial_field(lambda s: np.ones_like(s), BallDomain(n, 1.0), n_shells=1024)
    report = checks.check_ac_norm(indicator, (2, 2), k_max=6)
    assert report.passed
    assert report.params['domain'] == BallDomain(n, 1.0).to_dict()


@pytest.mark.parametrize("k_max,pattern", [(3, 'short'), (4, 'none'), (6, 'none'), (10, 'none')])
def test_ac_norm_rejects_shifted_singularity(k_max, pattern):
    shifted = radial_field(lambda s: s ** -0.5 + 1.0, BallDomain(1, 1.0))
    report = checks.check_ac_norm(shifted, (2, 'inf'), k_max=k_max)
    assert report.failed
    assert report.details['pattern'] == pattern
    sequence = report.details['sequence']
    assert sequence[0] > sequence[1] > sequence[2] > math.sqrt(2)


@pytest.mark.parametrize("k_max", [6, 8, 12])
def test_ac_norm_rejects_geometric_plateau(monkeypatch, k_max):
    plateau = [NormValue.finite(1.5 + 0.5 ** k) for k in range(1, k_max + 1)]
    monkeypatch.setattr(checks, 'tail_norm', lambda *args: plateau)
    report = checks.check_ac_norm(parse_item('u_radial(r=1,alpha=1,n=2,p=2)'), (2, 2), k_max)
    assert report.failed
    assert report.details['pattern'] == 'plateau'
    assert math.isclose(report.details['limit'], 1.5, rel_tol=1e-9)
    vanishing = [NormValue.finite(0.5 ** k) for k in range(1, k_max + 1)]
    monkeypatch.setattr(checks, 'tail_norm', lambda *args: vanishing)
    report = checks.check_ac_norm(parse_item('u_radial(r=1,alpha=1,n=2,p=2)'), (2, 2), k_max)
    assert report.passed
    assert report.details['pattern'] == 'decreasing'


def test_ac_norm_short_window_passes_only_when_constant():
    report = checks.check_ac_norm(parse_item('u_radial(r=1,alpha=1,n=2,p=2)'), (2, 2), k_max=3)
    assert report.failed
    assert report.details['pattern'] == 'short'
    report = checks.check_ac_norm(parse_item('power_singularity(r=1,n=2,p=2)'), (2, 'inf'),
                                  k_max=2)
    assert report.passed
    assert report.details['pattern'] == 'constant'


def test_aitken_limit():
    geometric = 1.5 + 0.5 ** np.arange(1, 8)
    assert math.isclose(checks._aitken_limit(geometric), 1.5, rel_tol=1e-12)
    assert checks._aitken_limit(np.array([3.0, 2.0, 1.0])) == -math.inf
    assert checks._aitken_limit(np.array([2.0, 1.0])) == -math.inf


def test_ac_norm_fails_on_infinite_norms():
    report = checks.check_ac_norm(parse_item('u_radial(r=1,alpha=0.5,n=2,p=2)'), (2, 2), k_max=3)
    assert report.failed
    assert report.details['pattern'] == 'infinite'


@pytest.mark.parametrize("v", [lambda s: np.zeros_like(s), lambda s: np.full_like(s, 10.0),
                               lambda s: np.cos(s)])
@pytest.mark.parametrize("n,p", [(1, 2), (2, 2), (2, 4), (3, 3)])
def test_distance_bound(v, n, p):
    report = checks.check_distance_bound(v, 1.0, n, p, (1.0, 0.5, 0.25))
    assert report.passed
    assert min(report.details['distances']) >= 0.99 * report.lhs


def test_distance_bound_rejects():
    with pytest.raises(DomainError):
        checks.check_distance_bound(np.cos, 1.0, 2, 2, (2.0,))
    with pytest.raises(DomainError):
        checks.check_distance_bound(lambda s: np.full_like(s, np.inf), 1.0, 2, 2, (1.0,))


@pytest.mark.parametrize("pq,constant", [((2, 1), 1.0), ((2, 2), 1.0), ((3, 'inf'), 1.5),
                                         ((2, 4), 1.5 ** 0.75), ((4, 1), 1.0)])
def test_holder_constant_1d(pq, constant):
    assert math.isclose(checks.holder_constant_1d(pq), constant, rel_tol=1e-14)


def test_step_quasinorm_rows_match_profiles():
    values = rng.uniform(0.1, 5.0, size=(20, 12))
    widths = rng.uniform(0.01, 1.0, size=(20, 12))
    for pq in (ExponentPair(2, 2), ExponentPair(3, 'inf'), ExponentPair(1.5, 4)):
        rows = checks.step_quasinorm_rows(values, widths, pq)
        for row, v, w in zip(rows, values, widths):
            expected = quasinorm(rearrange(SampledField.from_cells(zip(w, v))), pq).value
            assert math.isclose(row, expected, rel_tol=1e-12)


@pytest.mark.parametrize("pq", [(2, 2), (2, 4), (3, 2), (3, 'inf')])
@pytest.mark.parametrize("item_id", ['linear(slope=2,a=0,b=1)', 'v(r=1,alpha=1,n=1,p={p})',
                                     'trunc(k=3,v(r=1,alpha=1,n=1,p={p}))'])
def test_morrey_1d(pq, item_id):
    item = parse_item(item_id.format(p=pq[0]))
    sampler = checks.default_sampler(item, 400, 0, Strategy.ENDPOINT)
    report = checks.check_morrey_1d(item, pq, sampler, n_cells=256)
    assert report.passed, report.to_dict()
    assert report.details['failures'] == 0
    assert checks.check_holder_global_1d(item, pq, sampler).passed


def test_morrey_1d_is_sharp_for_linear():
    item = parse_item('linear(slope=2,a=0,b=1)')
    sampler = PairSampler.from_pairs(item.domain, [[0.1], [0.0]], [[0.6], [1.0]])
    report = checks.check_morrey_1d(item, (2, 2), sampler)
    assert abs(report.margin) < 1e-12
    with pytest.raises(DomainError):
        checks.check_morrey_1d(parse_item('up(n=2,p=4)'), (4, 'inf'), sampler)


@pytest.mark.parametrize("n,p", [(1, 2), (2, 4), (3, 6)])
def test_holder_corollary(n, p):
    item = parse_item(f'up(n={n},p={p})')
    estimate = checks.estimate_holder_seminorm(item, item.domain, 1 - n / p,
                                               checks.default_sampler(item, 2048, 0))
    assert abs(estimate - 1.0) <= 1e-6


def test_morrey_nd_stable():
    item = parse_item('up(n=2,p=4)')
    report = checks.check_morrey_nd(item, (4, 'inf'), checks.default_sampler(item, 2048, 0))
    assert report.check_id == 'morrey_nd'
    assert report.passed
    assert report.details['ratio'] is not None


def test_morrey_blowup():
    item = parse_item('v(r=1,alpha=1,n=2,p=2)')
    report = checks.check_morrey_nd(item, (2, 'inf'), checks.default_sampler(item, 4096, 0))
    assert report.check_id == 'morrey_blowup'
    assert report.passed
    estimates = report.details['estimates']
    assert estimates[-1] >= 10 * estimates[0]


def test_seminorm_rejects():
    item = parse_item('up(n=2,p=4)')
    with pytest.raises(DomainError):
        checks.estimate_holder_seminorm(item, item.domain, 0.0, checks.default_sampler(item, 10))
    with pytest.raises(DomainError):
        checks.estimate_holder_seminorm(item, BallDomain(2, 0.5), 0.5, checks.default_sampler(item, 10))


def test_poincare_ratio_is_scale_invariant():
    items = [parse_item('v(r=1,alpha=1,n=2,p=3)'), parse_item('v(r=1,alpha=0.5,n=1,p=3)')]
    report = checks.check_poincare_ratio(items, (3, 'inf'))
    assert report.passed
    assert math.isfinite(report.details['max_ratio'])
    assert report.details['max_ratio'] > 0


def test_poincare_needs_zero_boundary_values():
    with pytest.raises(PreconditionError):
        checks.check_poincare_ratio([parse_item('up(n=2,p=4)')], (4, 'inf'))


def test_poincare_ratio_of_zero_field():
    assert checks.poincare_ratio(parse_item('linear(slope=0,a=0,b=1)'), (2, 2)) == 0.0


def test_report_verdicts():
    assert CheckReport.judge('x', {}, 1.0, 1.0 - 1e-13, 1e-12).passed
    assert CheckReport.judge('x', {}, 1.0, 0.5, 1e-12).failed
    assert CheckReport.predicate('x', {}, True).rhs == 1.0
    assert CheckReport.predicate('x', {}, False).failed
    skipped = CheckReport.skipped('x', {'a': 1}, 'because')
    assert skipped.verdict is Verdict.SKIP and skipped.reason == 'because'


def test_worst_of():
    reports = [CheckReport.judge('x', {'i': i}, 1.0, 1.0 + i, 0.0) for i in range(3)]
    reports.append(CheckReport.skipped('x', {'i': 9}, 'no'))
    worst = checks.worst_of(reports, params={'all': True})
    assert worst.margin == 0.0
    assert worst.details['trials'] == 4
    assert worst.details['skipped'] == 1
    assert worst.details['worst_params'] == {'i': 0}
    only_skipped = checks.worst_of([CheckReport.skipped('x', {}, 'no')])
    assert only_skipped.verdict is Verdict.SKIP
