''' Property checks of the Lorentz-space inequalities.

Every check returns a CheckReport. Its margin is rhs - lhs unless the check
says otherwise, and the verdict is PASS when margin >= -slack. Checks on
exact step arithmetic use a relative slack of 1e-12, checks resting on
quadrature 10 x the quadrature tolerance.
'''
import logging
import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from ..exceptions import DomainError, LorentzLabError, PreconditionError
from ..foundations import (
    INFINITY, BallDomain, ExponentPair, Interval1D, as_exponent, conjugate_exponent, reciprocal,
    unit_ball_volume,
)
from ..gallery import DEFAULT_CELLS, GalleryItem, LogPowerAntiderivative, make_u_radial, make_v
from ..norms import (
    DEFAULT_QUAD, NormValue, head_divergence_probe, lebesgue_norm, quasinorm,
    starstar_norm, tail_norm,
)
from ..rearrangement import (
    AnalyticProfile, IndicatorProfile, PowerProfile, SampledField, StepProfile, radial_shells,
    rearrange,
)
from ..util import stable_json
from .sampling import PairSampler, Strategy

logger = logging.getLogger(__name__)

EXACT_SLACK = 1e-12
DISTANCE_SLACK = 1e-2
AC_DECAY = 1e-3
AC_CONSTANT = 1e-9
AC_MIN_WINDOW = 6
AC_PLATEAU = 0.8
STABILITY = 0.05
BLOWUP_BETA = 0.5
BLOWUP_LEVELS = 5
BLOWUP_FACTOR = 10.0
SCALE_TOLERANCE = 1e-3
WITNESS_REL_TOL = 1e-8
PROBE_GROWTH = 0.1
GRADIENT_INNER = 1e-8


class Verdict(Enum):
    PASS = 'PASS'
    FAIL = 'FAIL'
    SKIP = 'SKIP'


@dataclass
class CheckReport:
    ''' Outcome of one check.

    Attributes
    ----------
    check_id : str
    params : dict
        JSON-ready parameters identifying the check instance.
    lhs, rhs : float
    margin : float
        rhs - lhs, or the margin the check defines.
    slack : float
        Absolute slack; PASS iff margin >= -slack.
    verdict : Verdict
    samples : int
        Trials, pairs or profiles the report covers.
    reason : str/None
        Why a check was skipped.
    details : dict
        Intermediate quantities (middle terms, sequences, ratios).
    '''
    check_id: str
    params: dict
    lhs: float
    rhs: float
    margin: float
    slack: float
    verdict: Verdict
    samples: int = 1
    reason: str = None
    details: dict = field(default_factory=dict)

    @classmethod
    def judge(cls, check_id, params, lhs, rhs, slack, samples=1, margin=None, details=None):
        lhs, rhs = float(lhs), float(rhs)
        if margin is None:
            margin = rhs - lhs
        margin = float(margin)
        verdict = Verdict.PASS if margin >= -slack else Verdict.FAIL
        if verdict is Verdict.FAIL:
            logger.warning('%s %s FAIL: lhs=%.12g rhs=%.12g margin=%.3g', check_id,
                           stable_json(params), lhs, rhs, margin)
        return cls(check_id, dict(params), lhs, rhs, margin, float(slack), verdict, int(samples),
                   None, dict(details or {}))

    @classmethod
    def predicate(cls, check_id, params, holds, samples=1, details=None):
        ''' A yes/no property, reported as lhs = 0 against rhs = +1 or -1.'''
        return cls.judge(check_id, params, 0.0, 1.0 if holds else -1.0, 0.0, samples,
                         details=details)

    @classmethod
    def skipped(cls, check_id, params, reason, details=None):
        logger.info('%s %s skipped: %s', check_id, stable_json(params), reason)
        return cls(check_id, dict(params), math.nan, math.nan, math.nan, 0.0, Verdict.SKIP, 0,
                   str(reason), dict(details or {}))

    @property
    def passed(self):
        return self.verdict is Verdict.PASS

    @property
    def failed(self):
        return self.verdict is Verdict.FAIL

    def sort_key(self):
        return (self.check_id, stable_json(self.params))

    def to_dict(self):
        return {'check_id': self.check_id, 'params': self.params, 'lhs': self.lhs,
                'rhs': self.rhs, 'margin': self.margin, 'slack': self.slack,
                'verdict': self.verdict.value, 'samples': self.samples, 'reason': self.reason,
                'details': self.details}


def worst_of(reports, check_id=None, params=None):
    ''' Fold many reports of one check into the report of its worst trial.'''
    reports = list(reports)
    judged = [report for report in reports if report.verdict is not Verdict.SKIP]
    if check_id is None:
        check_id = reports[0].check_id
    if params is None:
        params = reports[0].params
    if not judged:
        reasons = sorted({report.reason for report in reports})
        return CheckReport.skipped(check_id, params, '; '.join(reasons))
    worst = min(judged, key=lambda report: report.margin + report.slack)
    details = {'trials': len(reports), 'skipped': len(reports) - len(judged),
               'failures': sum(report.failed for report in judged),
               'worst_params': worst.params, 'worst_details': worst.details}
    return CheckReport(check_id, dict(params), worst.lhs, worst.rhs, worst.margin, worst.slack,
                       worst.verdict, sum(report.samples for report in judged), None, details)


def exact_slack(rhs):
    return EXACT_SLACK * max(1.0, abs(rhs)) if math.isfinite(rhs) else 0.0


def quadrature_slack(rhs, quad=DEFAULT_QUAD):
    return quad.slack * max(1.0, abs(rhs)) if math.isfinite(rhs) else 0.0


def _pair(pq):
    if isinstance(pq, ExponentPair):
        return pq
    return ExponentPair(*pq)


def _profile(f, n_cells=DEFAULT_CELLS):
    if isinstance(f, (StepProfile, AnalyticProfile)):
        return f
    if isinstance(f, SampledField):
        return rearrange(f)
    if isinstance(f, GalleryItem):
        return f.rearrangement(n_cells)
    msg = f'cannot rearrange {type(f).__name__}'
    raise DomainError(msg)


def _exact_profile(profile):
    return isinstance(profile, (StepProfile, IndicatorProfile, PowerProfile))


def _measure(f):
    if getattr(f, 'domain', None) is not None:
        return f.domain.measure
    if isinstance(f, SampledField):
        return f.total_measure
    return f.support_end


# Hoelder inequalities

def rearranged_product_integral(f_star, g_star):
    ''' int_0^inf f*(t) g*(t) dt of two step profiles.'''
    end = min(f_star.support_end, g_star.support_end)
    if end == 0:
        return 0.0
    points = np.union1d(f_star.breakpoints, g_star.breakpoints)
    points = points[points <= end]
    left = points[:-1]
    return float(np.sum(f_star(left) * g_star(left) * np.diff(points)))


def check_holder(f, g, pq, quad=DEFAULT_QUAD):
    ''' int |fg| <= int f* g* <= ||f||_{p,q} ||g||_{p',q'} for two fields
    on one cell partition; the margin is the smaller of the two gaps.'''
    pq = _pair(pq)
    if f.domain != g.domain or len(f) != len(g) or not np.array_equal(f.weights, g.weights):
        raise DomainError('the Hoelder chain needs two fields on one cell partition')
    params = {'pq': pq.to_dict(), 'cells': len(f)}
    f_star, g_star = rearrange(f), rearrange(g)
    dual = pq.conjugate()
    f_norm, g_norm = quasinorm(f_star, pq, quad), quasinorm(g_star, dual, quad)
    for norm in (f_norm, g_norm):
        if not norm.is_finite:
            return CheckReport.skipped('holder', params, f'infinite norm ({norm.reason.value})')
    lhs = float(np.sum(f.weights * f.magnitudes * g.magnitudes))
    middle = rearranged_product_integral(f_star, g_star)
    rhs = f_norm.value * g_norm.value
    return CheckReport.judge('holder', params, lhs, rhs, exact_slack(rhs),
                             margin=min(middle - lhs, rhs - middle),
                             details={'middle': middle, 'ordering_gap': middle - lhs,
                                      'norm_gap': rhs - middle})


def check_general_holder(f, p1, q1, p2, q2, p3, q3, quad=DEFAULT_QUAD):
    ''' ||f||_{p1,q1} <= ||f||_{p2,q2} ||chi_Omega||_{p3,q3} on a finite
    measure domain, for 1/p1 = 1/p2 + 1/p3 and 1/q1 = 1/q2 + 1/q3.'''
    p1, p2, p3 = float(p1), float(p2), float(p3)
    q1, q2, q3 = as_exponent(q1), as_exponent(q2), as_exponent(q3)
    if not math.isclose(1 / p1, 1 / p2 + 1 / p3, rel_tol=1e-12, abs_tol=1e-12):
        msg = f'need 1/p1 = 1/p2 + 1/p3, got p = ({p1}, {p2}, {p3})'
        raise PreconditionError(msg)
    if not math.isclose(reciprocal(q1), reciprocal(q2) + reciprocal(q3), rel_tol=1e-12, abs_tol=1e-12):
        msg = f'need 1/q1 = 1/q2 + 1/q3, got q = ({q1}, {q2}, {q3})'
        raise PreconditionError(msg)
    first, second, third = ExponentPair(p1, q1), ExponentPair(p2, q2), ExponentPair(p3, q3)
    params = {'p1q1': first.to_dict(), 'p2q2': second.to_dict(), 'p3q3': third.to_dict()}
    f_star = _profile(f)
    measure = _measure(f)
    lhs = quasinorm(f_star, first, quad)
    factor = quasinorm(f_star, second, quad)
    if not factor.is_finite:
        return CheckReport.skipped('general_holder', params, f'infinite norm ({factor.reason.value})')
    chi = quasinorm(IndicatorProfile(1.0, measure), third, quad).value
    rhs = factor.value * chi
    slack = exact_slack(rhs) if _exact_profile(f_star) else quadrature_slack(rhs, quad)
    return CheckReport.judge('general_holder', params, float(lhs), rhs, slack,
                             details={'measure': measure, 'indicator_norm': chi})


def embedding_constant(p, q, eps):
    ''' C(p, q, eps) of ||f||_{p-eps} <= C |Omega|^{eps/(p(p-eps))} ||f||_{p,q}.'''
    p, q, eps = float(p), as_exponent(q), float(eps)
    s = p - eps
    if q is INFINITY:
        return p ** (1.0 / s) * eps ** (-1.0 / s)
    return (p * (q - p + eps) / q) ** (1.0 / s - 1.0 / q) * eps ** (1.0 / q - 1.0 / s)


def check_embedding_eps(f, p, q, eps, omega_measure=None, quad=DEFAULT_QUAD):
    ''' L^{p,q}(Omega) embeds in L^{p-eps}(Omega) with the explicit constant.

    Parameters
    ----------
    f : SampledField/GalleryItem/profile
    p, q : exponents with 1 < p < q <= inf
    eps : float
        In (0, p - 1]. The endpoint eps = p - 1 is admitted: the constant stays
        finite there and is sharp for the power singularity, C(2, inf, 1) = 2.
    omega_measure : float/None
        |Omega|; the measure of f's domain by default.
    '''
    p, q, eps = float(p), as_exponent(q), float(eps)
    if not (1 < p and q > p):
        msg = f'need 1 < p < q <= inf, got p={p}, q={q}'
        raise PreconditionError(msg)
    if not 0 < eps <= p - 1:
        msg = f'eps must lie in (0, p - 1] = (0, {p - 1:g}], got {eps}'
        raise PreconditionError(msg)
    pq = ExponentPair(p, q)
    params = {'pq': pq.to_dict(), 'eps': eps}
    if isinstance(f, GalleryItem):
        params['item'] = f.id
    f_star = _profile(f)
    measure = _measure(f) if omega_measure is None else float(omega_measure)
    norm = quasinorm(f_star, pq, quad)
    if not norm.is_finite:
        return CheckReport.skipped('embedding_eps', params, f'infinite norm ({norm.reason.value})')
    lhs = lebesgue_norm(f_star, p - eps, quad)
    constant = embedding_constant(p, q, eps)
    rhs = constant * measure ** (eps / (p * (p - eps))) * norm.value
    slack = exact_slack(rhs) if _exact_profile(f_star) else quadrature_slack(rhs, quad)
    return CheckReport.judge('embedding_eps', params, float(lhs), rhs, slack,
                             details={'constant': constant, 'measure': measure,
                                      'lorentz_norm': norm.value})


def check_equivalence(profile, pq, quad=DEFAULT_QUAD):
    ''' ||f||_{p,q} <= ||f||_{(p,q)} <= p' ||f||_{p,q}.'''
    pq = _pair(pq)
    params = {'pq': pq.to_dict()}
    if isinstance(profile, GalleryItem):
        params['item'] = profile.id
    f_star = _profile(profile)
    quasi = quasinorm(f_star, pq, quad)
    if not quasi.is_finite:
        return CheckReport.skipped('equivalence', params, f'infinite quasinorm ({quasi.reason.value})')
    star = starstar_norm(f_star, pq, quad)
    upper = pq.p_conj * quasi.value
    middle = float(star)
    return CheckReport.judge('equivalence', params, quasi.value, upper, quadrature_slack(upper, quad),
                             margin=min(middle - quasi.value, upper - middle),
                             details={'starstar': middle})


# strict inclusions

def witness_alpha(q1, q2):
    ''' The log exponent alpha with q1 <= 1/alpha < q2: 1/q1, or
    2/(q1+q2) clamped to (0, 1] when 1/q1 is not admissible.'''
    q1, q2 = as_exponent(q1), as_exponent(q2)
    if q1 is INFINITY or not 1 <= q1 < q2:
        msg = f'need 1 <= q1 < q2 <= inf, got q1={q1}, q2={q2}'
        raise DomainError(msg)

    def admissible(alpha):
        return 0 < alpha <= 1 and q1 <= (1.0 / alpha) * (1 + 1e-12) and 1.0 / alpha < q2

    alpha = 1.0 / q1
    if admissible(alpha):
        return alpha
    if q2 is not INFINITY:
        alpha = min(1.0, 2.0 / (q1 + q2))
        if admissible(alpha):
            return alpha
    msg = f'no admissible alpha for q1={q1}, q2={q2}'
    raise LorentzLabError(msg)


@dataclass
class WitnessBundle:
    ''' The function and gradient witnesses separating L^{p,q1} from L^{p,q2}.'''
    p: float
    q1: object
    q2: object
    alpha: float
    item_id: str
    gradient_item_id: str
    norm_q2: NormValue
    norm_q1: NormValue
    closed_q2: NormValue
    closed_q1: NormValue
    gradient_norm_q2: NormValue
    gradient_norm_q1: NormValue
    probe: list
    reports: list

    @property
    def passed(self):
        return all(report.passed for report in self.reports)

    def to_dict(self):
        return {'p': self.p, 'q1': self.q1, 'q2': self.q2, 'alpha': self.alpha,
                'item': self.item_id, 'gradient_item': self.gradient_item_id,
                'norm_q2': self.norm_q2, 'norm_q1': self.norm_q1,
                'closed_q2': self.closed_q2, 'closed_q1': self.closed_q1,
                'gradient_norm_q2': self.gradient_norm_q2,
                'gradient_norm_q1': self.gradient_norm_q1,
                'probe': self.probe, 'passed': self.passed, 'reports': self.reports}


def _agreement_report(check_id, params, computed, expected):
    if not (computed.is_finite and expected.is_finite):
        return CheckReport.predicate(check_id, params, False,
                                     details={'computed': computed, 'expected': expected})
    difference = abs(computed.value - expected.value)
    return CheckReport.judge(check_id, params, difference, WITNESS_REL_TOL * expected.value, 0.0,
                             details={'computed': computed.value, 'expected': expected.value})


def witness_strict_inclusion(p, q1, q2, r=1.0, n=2, quad=DEFAULT_QUAD):
    ''' Build and verify the strict-inclusion witnesses for q1 < q2.

    u_{r,alpha,n,p} lies in L^{p,q2} and not in L^{p,q1}; the antiderivative
    v_{r,alpha,n,p} has the same split for its gradient.

    Return
    ------
    bundle : WitnessBundle
    '''
    q1, q2 = as_exponent(q1), as_exponent(q2)
    alpha = witness_alpha(q1, q2)
    upper, lower = ExponentPair(p, q2), ExponentPair(p, q1)
    item = make_u_radial(r, alpha, n, p)
    gradient_item = make_v(r, alpha, n, p, quad)
    params = {'p': float(p), 'q1': lower.to_dict()['q'], 'q2': upper.to_dict()['q'],
              'alpha': alpha, 'r': float(r), 'n': int(n)}

    norm_q2, norm_q1 = item.norm(upper, quad), item.norm(lower, quad)
    closed_q2, closed_q1 = item.closed_form_norm(upper), item.closed_form_norm(lower)
    gradient_q2 = gradient_item.gradient_norm(upper, quad)
    gradient_q1 = gradient_item.gradient_norm(lower, quad)
    probe = head_divergence_probe(item.rearrangement(), lower, quad=quad)
    growth = [b / a - 1.0 if a > 0 else math.inf for a, b in zip(probe[:-1], probe[1:])]

    reports = [
        _agreement_report('witness.value_finite', params, norm_q2, closed_q2),
        CheckReport.predicate('witness.value_infinite', params,
                              not norm_q1.is_finite and not closed_q1.is_finite,
                              details={'norm': norm_q1}),
        _agreement_report('witness.gradient_finite', params, gradient_q2,
                          gradient_item.closed_form_gradient_norm(upper)),
        CheckReport.predicate('witness.gradient_infinite', params, not gradient_q1.is_finite,
                              details={'norm': gradient_q1}),
        CheckReport.judge('witness.head_probe', params, PROBE_GROWTH, min(growth), 0.0,
                          samples=len(probe), details={'probe': probe, 'growth': growth}),
    ]
    logger.debug('witness p=%g q1=%s q2=%s alpha=%g', p, q1, q2, alpha)
    return WitnessBundle(float(p), params['q1'], params['q2'], alpha, item.id, gradient_item.id,
                         norm_q2, norm_q1, closed_q2, closed_q1, gradient_q2, gradient_q1,
                         probe, reports)


# absolute continuity of the norm

def _sub_domain(domain, fraction):
    if isinstance(domain, Interval1D):
        c, half = domain.center[0], domain.r * fraction
        return Interval1D(c - half, c + half)
    return BallDomain(domain.n, domain.r * fraction, domain.center)


def check_ac_norm(item, pq, k_max=10, quad=DEFAULT_QUAD):
    ''' Tail norms ||f chi_{E_k}||_{p,q} on E_k = B(center, r/2^k), k = 1..k_max.

    PASS when the sequence is constant within 1e-9 (relative) or decays to 0.
    Decay needs a strictly decreasing sequence whose last entry lies at least
    1e-3 below the first, and a window of at least AC_MIN_WINDOW sets unless the
    last entry is already 0. The limit is extrapolated from the last three
    entries with an Aitken step; a limit above AC_PLATEAU * last means the
    sequence is levelling off at a positive value (pattern 'plateau'), which
    fails. Shorter windows fail with pattern 'short'. The margin is the better
    of the constant and the decay criteria.
    '''
    pq = _pair(pq)
    params = {'pq': pq.to_dict(), 'k_max': int(k_max)}
    if isinstance(item, GalleryItem):
        params['item'] = item.id
    else:
        params['domain'] = item.domain.to_dict()
    sets = [_sub_domain(item.domain, 2.0 ** -k) for k in range(1, int(k_max) + 1)]
    norms = tail_norm(item, pq, sets, quad)
    sequence = [norm.to_json() for norm in norms]
    if not all(norm.is_finite for norm in norms):
        return CheckReport.judge('ac_norm', params, math.inf, 0.0, 0.0, samples=len(norms),
                                 margin=-math.inf,
                                 details={'sequence': sequence, 'pattern': 'infinite'})
    values = np.array([norm.value for norm in norms])
    first, last = values[0], values[-1]
    if first == 0:
        deviation = float(np.max(values))
    else:
        deviation = float(np.max(np.abs(values - first)) / first)
    constant_margin = AC_CONSTANT - deviation
    limit = _aitken_limit(values)
    if first > 0 and np.all(np.diff(values) < 0):
        drop_margin = (1.0 - last / first) - AC_DECAY
        if last == 0:
            decay_margin, pattern = drop_margin, 'decreasing'
        elif len(values) < AC_MIN_WINDOW:
            decay_margin, pattern = -math.inf, 'short'
        else:
            plateau = max(limit, 0.0) / last
            decay_margin = min(drop_margin, AC_PLATEAU - plateau)
            pattern = 'decreasing' if AC_PLATEAU >= plateau else 'plateau'
        if drop_margin < 0:
            pattern = 'none'
    else:
        decay_margin, pattern = -math.inf, 'none'
    if constant_margin >= 0:
        pattern = 'constant'
    return CheckReport.judge('ac_norm', params, last, first, 0.0, samples=len(norms),
                             margin=max(constant_margin, decay_margin),
                             details={'sequence': values.tolist(), 'pattern': pattern,
                                      'limit': limit})


def _aitken_limit(values):
    ''' Limit of the sequence extrapolated from its last three entries; -inf when
    the steps are not shrinking.'''
    if len(values) < 3:
        return -math.inf
    d1, d2 = values[-2] - values[-3], values[-1] - values[-2]
    curvature = d2 - d1
    if curvature <= 0:
        return -math.inf
    return float(values[-1] - d2 * d2 / curvature)


def check_distance_bound(v, r, n, p, alpha_list, n_shells=DEFAULT_CELLS, name=None):
    ''' ||u_r - v||_{L^{p,inf}(B(0,a))} >= Omega_n^{1/p} for bounded v.

    Parameters
    ----------
    v : callable
        Radial test function of the radius, bounded near 0.
    r : float
        Radius of the ball of u_r.
    n : int
    p : float
    alpha_list : list of float
        Radii a in (0, r] of the balls the distance is measured on.
    n_shells : int
        Shells geometric in the radius down to 1e-8 a, sampled at their outer
        radius where |u_r| is smallest.
    '''
    p = float(p)
    target = unit_ball_volume(n) ** (1.0 / p)
    params = {'n': int(n), 'p': p, 'r': float(r), 'radii': [float(a) for a in alpha_list]}
    if name is not None:
        params['v'] = name
    weak = ExponentPair(p, INFINITY)
    distances = []
    for a in alpha_list:
        if not 0 < a <= r:
            msg = f'distance radii must lie in (0, {r}], got {a}'
            raise DomainError(msg)
        domain = BallDomain(int(n), float(a))
        edges, weights, _ = radial_shells(domain, n_shells, 1e-8)
        outer = edges[1:]
        values = np.abs(outer ** (-n / p) - np.asarray(v(outer), dtype=float))
        if not np.all(np.isfinite(values)):
            msg = f'test function is not bounded on B(0, {a})'
            raise DomainError(msg)
        field_ = SampledField(domain, weights, values, outer)
        distances.append(quasinorm(rearrange(field_), weak).value)
    return CheckReport.judge('distance_bound', params, target, min(distances),
                             DISTANCE_SLACK * target, samples=len(distances),
                             details={'distances': distances})


# Hoelder seminorms and Morrey estimates

def default_sampler(item, count=4096, seed=0, strategy=Strategy.RADIAL_GEOMETRIC, include_focus=True):
    ''' A pair sampler on the item's domain with rays through its singular
    point.'''
    return PairSampler(item.domain, count, strategy, seed, focus=item.origin,
                       include_focus=include_focus)


def estimate_holder_seminorm(u, domain, beta, sampler):
    ''' max |u(x) - u(y)| / |x - y|^beta over the sampled pairs, a lower
    bound of the Hoelder seminorm. Pairs where u is not finite are dropped.'''
    if not 0 < beta <= 1:
        msg = f'Hoelder exponent must lie in (0, 1], got {beta}'
        raise DomainError(msg)
    if sampler.domain != domain and not domain.contains_domain(sampler.domain):
        msg = f'sampler domain {sampler.domain} is not inside {domain}'
        raise DomainError(msg)
    x, y = sampler.pairs()
    with np.errstate(divide='ignore', invalid='ignore', over='ignore'):
        ux = np.asarray(u(x), dtype=float).reshape(-1)
        uy = np.asarray(u(y), dtype=float).reshape(-1)
    distance = np.linalg.norm(x - y, axis=1)
    ok = (distance > 0) & np.isfinite(ux) & np.isfinite(uy)
    if not np.any(ok):
        raise DomainError('every sampled pair is degenerate')
    return float(np.max(np.abs(ux[ok] - uy[ok]) / distance[ok] ** beta))


def holder_constant_1d(pq):
    ''' C(p, q) = ||chi_(0,1)||_{p',q'} = (p'/q')^{1/q'}, 1 for q = 1.'''
    pq = _pair(pq)
    if pq.q == 1:
        return 1.0
    p_conj, q_conj = pq.p_conj, conjugate_exponent(pq.q)
    return (p_conj / q_conj) ** (1.0 / q_conj)


def _ladder(start, end, m):
    ''' m + 1 points from start to end, geometric towards start.'''
    g = np.concatenate([[0.0], np.geomspace(GRADIENT_INNER, 1.0, m)])
    return start[:, np.newaxis] + (end - start)[:, np.newaxis] * g


def _cell_edges(lo, hi, focus, n_cells):
    half = n_cells // 2
    left = _ladder(np.full_like(lo, focus), lo, half)[:, ::-1]
    right = _ladder(np.full_like(lo, focus), hi, n_cells - half)[:, 1:]
    split = np.concatenate([left, right], axis=1)
    lo_near = np.abs(lo - focus) <= np.abs(hi - focus)
    from_lo = _ladder(lo, hi, n_cells)
    from_hi = _ladder(hi, lo, n_cells)[:, ::-1]
    one_sided = np.where(lo_near[:, np.newaxis], from_lo, from_hi)
    inside = (lo < focus) & (focus < hi)
    edges = np.where(inside[:, np.newaxis], split, one_sided)
    edges[:, 0], edges[:, -1] = lo, hi
    return edges


def step_quasinorm_rows(values, widths, pq):
    ''' ||.||_{p,q} of each row's step function (cell values, cell widths).'''
    p, q = pq.p, pq.q
    order = np.argsort(-values, axis=1, kind='stable')
    v = np.take_along_axis(values, order, axis=1)
    w = np.take_along_axis(widths, order, axis=1)
    t = np.cumsum(w, axis=1)
    t_prev = np.concatenate([np.zeros((len(w), 1)), t[:, :-1]], axis=1)
    out = np.zeros(len(values))
    top = v[:, 0]
    positive = top > 0
    if q is INFINITY:
        out[positive] = np.max(v[positive] * t[positive] ** (1.0 / p), axis=1)
        return out
    vp, tp, tq = v[positive], t[positive], t_prev[positive]
    terms = (vp / top[positive, np.newaxis]) ** q * (p / q) * (tp ** (q / p) - tq ** (q / p))
    out[positive] = top[positive] * np.sum(terms, axis=1) ** (1.0 / q)
    return out


def _subinterval_norms(item, lo, hi, pq, n_cells, quad):
    ''' ||u'||_{L^{p,q}((lo, hi))} and |u(hi) - u(lo)| for each pair.'''
    focus = item.origin[0]
    edges = _cell_edges(lo, hi, focus, n_cells)
    with np.errstate(divide='ignore', invalid='ignore', over='ignore'):
        values = np.asarray(item(edges.reshape(-1, 1)), dtype=float).reshape(edges.shape)
    widths = np.diff(edges, axis=1)
    jumps = np.abs(np.diff(values, axis=1))
    with np.errstate(divide='ignore', invalid='ignore'):
        averages = np.where(widths > 0, jumps / np.where(widths > 0, widths, 1.0), 0.0)
    finite = np.all(np.isfinite(averages), axis=1)
    norms = np.full(len(lo), math.inf)
    if np.any(finite):
        norms[finite] = step_quasinorm_rows(averages[finite], widths[finite], pq)
    lhs = np.abs(values[:, -1] - values[:, 0])

    # exact restrictions: constant derivative, or (lo, hi) a sublevel set of the coordinate
    profile = item.exact_gradient_rearrangement
    if profile is not None and item.gradient_decreasing:
        for i in range(len(lo)):
            length = hi[i] - lo[i]
            radius = max(abs(lo[i] - focus), abs(hi[i] - focus))
            constant = isinstance(profile, IndicatorProfile)
            sublevel = (lo[i] <= focus <= hi[i]
                        and math.isclose(item.sub_measure(radius), length, rel_tol=1e-12))
            if constant or sublevel:
                exact = quasinorm(profile.restrict(min(length, profile.support_end)), pq, quad)
                norms[i] = exact.value if exact.is_finite else math.inf
    return norms, lhs


def check_morrey_1d(item, pq, sampler, quad=DEFAULT_QUAD, n_cells=DEFAULT_CELLS):
    ''' |u(x) - u(y)| <= C(p,q) |x - y|^{1-1/p} ||u'||_{L^{p,q}((x,y))} for
    every sampled pair of a one-dimensional item.

    Subinterval norms come from the exact gradient profile when (x, y) is
    a sublevel set of the coordinate or the derivative is constant, and from
    exact cell averages of |u'| on ``n_cells`` cells refined towards the
    singular point otherwise. The report carries the worst pair.
    '''
    pq = _pair(pq)
    if item.domain.n != 1:
        msg = f'the one-dimensional estimate needs n = 1, got n={item.domain.n}'
        raise DomainError(msg)
    params = {'item': item.id, 'pq': pq.to_dict(), 'pairs': len(sampler)}
    total = item.gradient_norm(pq, quad)
    if not total.is_finite:
        return CheckReport.skipped('morrey_1d', params, f'infinite derivative norm ({total.reason.value})')
    constant = holder_constant_1d(pq)
    x, y = sampler.pairs()
    lo, hi = np.minimum(x[:, 0], y[:, 0]), np.maximum(x[:, 0], y[:, 0])
    with np.errstate(divide='ignore', invalid='ignore', over='ignore'):
        usable = (hi > lo) & np.isfinite(item(lo[:, np.newaxis])) & np.isfinite(item(hi[:, np.newaxis]))
    lo, hi = lo[usable], hi[usable]
    if len(lo) == 0:
        return CheckReport.skipped('morrey_1d', params, 'no usable pair')

    chunk = max(1, 2 ** 20 // (n_cells + 1))
    margins, slacks, lhs_all, rhs_all = [], [], [], []
    for start in range(0, len(lo), chunk):
        a, b = lo[start:start + chunk], hi[start:start + chunk]
        norms, lhs = _subinterval_norms(item, a, b, pq, n_cells, quad)
        rhs = constant * (b - a) ** (1.0 - 1.0 / pq.p) * norms
        lhs_all.append(lhs)
        rhs_all.append(rhs)
        margins.append(rhs - lhs)
        slacks.append(np.where(np.isfinite(rhs), EXACT_SLACK * np.maximum(1.0, np.abs(rhs)), 0.0))
    margins, slacks = np.concatenate(margins), np.concatenate(slacks)
    lhs_all, rhs_all = np.concatenate(lhs_all), np.concatenate(rhs_all)
    worst = int(np.argmin(margins + slacks))
    failures = int(np.sum(margins < -slacks))
    return CheckReport.judge('morrey_1d', params, lhs_all[worst], rhs_all[worst], slacks[worst],
                             samples=len(lo), margin=margins[worst],
                             details={'constant': constant, 'failures': failures,
                                      'dropped': int(np.sum(~usable)),
                                      'worst_pair': [float(lo[worst]), float(hi[worst])]})


def check_holder_global_1d(item, pq, sampler, quad=DEFAULT_QUAD):
    ''' [u]_{0,1-1/p} <= C(p,q) ||u'||_{L^{p,q}(Omega)}, the seminorm
    estimated from the sampled pairs.'''
    pq = _pair(pq)
    params = {'item': item.id, 'pq': pq.to_dict(), 'pairs': len(sampler)}
    total = item.gradient_norm(pq, quad)
    if not total.is_finite:
        return CheckReport.skipped('holder_global_1d', params,
                                   f'infinite derivative norm ({total.reason.value})')
    estimate = estimate_holder_seminorm(item, item.domain, 1.0 - 1.0 / pq.p, sampler)
    constant = holder_constant_1d(pq)
    rhs = constant * total.value
    return CheckReport.judge('holder_global_1d', params, estimate, rhs, quadrature_slack(rhs, quad),
                             samples=len(sampler),
                             details={'constant': constant, 'derivative_norm': total.value})


def check_morrey_nd(item, pq, sampler, quad=DEFAULT_QUAD):
    ''' For p > n: the seminorm estimate with beta = 1 - n/p is finite and
    moves by less than 5% when the sample doubles; estimate / ||grad u||_{p,q}
    is recorded. For p <= n the blow-up variant runs instead.'''
    pq = _pair(pq)
    n = item.domain.n
    if pq.p <= n:
        return check_morrey_blowup(item, pq, sampler)
    params = {'item': item.id, 'pq': pq.to_dict(), 'pairs': len(sampler)}
    beta = 1.0 - n / pq.p
    coarse = estimate_holder_seminorm(item, item.domain, beta, sampler)
    fine = estimate_holder_seminorm(item, item.domain, beta, sampler.refined(2))
    gradient = item.gradient_norm(pq, quad)
    ratio = None
    if gradient.is_finite and gradient.value > 0:
        ratio = fine / gradient.value
    if not math.isfinite(fine):
        return CheckReport.judge('morrey_nd', params, math.inf, 0.0, 0.0, margin=-math.inf,
                                 details={'estimate': fine})
    return CheckReport.judge('morrey_nd', params, abs(fine - coarse), STABILITY * coarse, 0.0,
                             samples=2 * len(sampler),
                             details={'beta': beta, 'estimate': fine, 'coarse_estimate': coarse,
                                      'gradient_norm': gradient, 'ratio': ratio})


def check_morrey_blowup(item, pq, sampler, beta=BLOWUP_BETA):
    ''' Seminorm estimates on clusters of radii [rho_k/10, rho_k],
    rho_k = r/2 10^-k, k = 0..4; blow-up when the last is >= 10x the first.'''
    pq = _pair(pq)
    params = {'item': item.id, 'pq': pq.to_dict(), 'beta': beta, 'pairs': len(sampler)}
    estimates = []
    for k in range(BLOWUP_LEVELS):
        rho = 0.5 * item.extent * 10.0 ** -k
        window = PairSampler(item.domain, sampler.count, Strategy.RADIAL_GEOMETRIC, sampler.seed,
                             focus=tuple(sampler.focus), include_focus=False,
                             radial_window=(rho / 10, rho))
        estimates.append(estimate_holder_seminorm(item, item.domain, beta, window))
    return CheckReport.judge('morrey_blowup', params, BLOWUP_FACTOR * estimates[0], estimates[-1],
                             0.0, samples=BLOWUP_LEVELS * len(sampler),
                             details={'estimates': estimates})


# Poincare

def poincare_ratio(item, pq, quad=DEFAULT_QUAD):
    ''' ||u||_{p,q} / (|Omega|^{1/n} ||grad u||_{p,q}); None when the gradient
    norm is infinite, 0 for the zero field.'''
    pq = _pair(pq)
    gradient = item.gradient_norm(pq, quad)
    if not gradient.is_finite:
        return None
    value = item.norm(pq, quad)
    if gradient.value == 0:
        return 0.0 if value.is_finite and value.value == 0 else math.inf
    if not value.is_finite:
        return math.inf
    scale = item.domain.measure ** (1.0 / item.domain.n)
    return value.value / (scale * gradient.value)


def check_poincare_ratio(items, pq, quad=DEFAULT_QUAD):
    ''' Every ratio rho(item) is finite and, for the v family, unchanged by
    r -> 2r within 1e-3. The margin is 1e-3 minus the largest relative
    drift; max rho is reported.'''
    pq = _pair(pq)
    items = list(items)
    params = {'pq': pq.to_dict(), 'items': [item.id for item in items]}
    rows, drifts = [], []
    for item in items:
        if not item.vanishes_on_boundary:
            msg = f'{item.id} does not vanish on the boundary'
            raise PreconditionError(msg)
        rho = poincare_ratio(item, pq, quad)
        if rho is None:
            logger.info('%s skipped in the Poincare study: infinite gradient norm', item.id)
            rows.append({'item': item.id, 'ratio': None, 'reason': 'infinite gradient norm'})
            continue
        row = {'item': item.id, 'ratio': rho}
        if isinstance(item, LogPowerAntiderivative) and math.isfinite(rho) and rho > 0:
            twin = make_v(2 * item.r, item.alpha, item.n, item.p, quad)
            twin_rho = poincare_ratio(twin, pq, quad)
            drift = abs(twin_rho - rho) / rho
            row.update({'scaled_ratio': twin_rho, 'drift': drift})
            drifts.append(drift)
        rows.append(row)
    ratios = [row['ratio'] for row in rows if row['ratio'] is not None]
    if not ratios:
        return CheckReport.skipped('poincare', params, 'every gradient norm is infinite',
                                   details={'rows': rows})
    max_ratio = max(ratios)
    max_drift = max(drifts, default=0.0)
    margin = SCALE_TOLERANCE - max_drift if math.isfinite(max_ratio) else -math.inf
    return CheckReport.judge('poincare', params, max_drift, SCALE_TOLERANCE, 0.0,
                             samples=len(ratios), margin=margin,
                             details={'max_ratio': max_ratio, 'rows': rows})
