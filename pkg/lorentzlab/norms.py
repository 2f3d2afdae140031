''' Lorentz quasinorms ||f||_{p,q}, norms ||f||_{(p,q)} and their
convergence classification.

Both functionals are evaluated on a profile (the nonincreasing
rearrangement). Step profiles are integrated panel by panel in closed form,
the analytic families are classified first and then integrated in the
logarithmic variable u = ln(T/t), which turns the measure dt/t into du.
'''
import logging
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy import integrate

from .exceptions import DomainError, PreconditionError, QuadratureError, UnsupportedFamilyError
from .foundations import INFINITY, BallDomain, ExponentPair, Interval1D, as_exponent, conjugate_exponent
from .rearrangement import (
    AnalyticProfile, IndicatorProfile, LogPowerProfile, PowerProfile, SampledField, StepProfile,
    rearrange,
)
from .util import format_number

logger = logging.getLogger(__name__)

# q alpha within this of 1 counts as the divergent boundary case
LOG_EXPONENT_TOL = 1e-12


class Divergence(Enum):
    HEAD_DIVERGENCE = 'HEAD_DIVERGENCE'
    TAIL_DIVERGENCE = 'TAIL_DIVERGENCE'
    LOG_EXPONENT_TEST = 'LOG_EXPONENT_TEST'


@dataclass(frozen=True)
class NormValue:
    ''' A norm that is either FINITE(value) or INFINITE(reason).'''
    value: float = None
    reason: Divergence = None

    def __post_init__(self):
        if (self.value is None) == (self.reason is None):
            raise DomainError('a NormValue is either finite with a value or infinite with a reason')
        if self.value is not None:
            value = float(self.value)
            if not value >= 0 or math.isinf(value):
                msg = f'finite norm values must be finite and >= 0, got {value}'
                raise DomainError(msg)
            object.__setattr__(self, 'value', value)
        else:
            object.__setattr__(self, 'reason', Divergence(self.reason))

    @classmethod
    def finite(cls, value):
        return cls(value=value)

    @classmethod
    def infinite(cls, reason):
        return cls(reason=reason)

    @property
    def is_finite(self):
        return self.reason is None

    def __float__(self):
        return self.value if self.is_finite else math.inf

    def scaled(self, c):
        return NormValue.finite(c * self.value) if self.is_finite else self

    def to_json(self):
        if self.is_finite:
            return {'finite': self.value}
        return {'infinite': self.reason.value}

    @classmethod
    def from_json(cls, data):
        if 'finite' in data:
            return cls.finite(data['finite'])
        return cls.infinite(data['infinite'])

    def __str__(self):
        if self.is_finite:
            return format_number(self.value)
        return f'INFINITE({self.reason.value})'


class Expectation(Enum):
    FINITE_EXPECTED = 'FINITE_EXPECTED'
    INFINITE_EXPECTED = 'INFINITE_EXPECTED'


@dataclass(frozen=True)
class Classification:
    expected: Expectation
    reason: Divergence = None

    @property
    def is_finite(self):
        return self.expected is Expectation.FINITE_EXPECTED

    def to_json(self):
        if self.is_finite:
            return self.expected.value
        return f'{self.expected.value}({self.reason.value})'


FINITE_EXPECTED = Classification(Expectation.FINITE_EXPECTED)


def _infinite_expected(reason):
    return Classification(Expectation.INFINITE_EXPECTED, reason)


@dataclass(frozen=True)
class QuadratureSpec:
    ''' Tolerances of every adaptive integral in the package.

    Attributes
    ----------
    rel_tol : float
        Relative tolerance handed to scipy.integrate.quad.
    abs_tol : float
        Absolute tolerance handed to scipy.integrate.quad.
    max_subdivisions : int
        quad's ``limit``; running out raises QuadratureError.
    tail_cutoff_decades : int
        Logarithmic integrals are split into decade panels up to
        u = 10**tail_cutoff_decades, the rest is a closed-form tail.
    '''
    rel_tol: float = 1e-10
    abs_tol: float = 1e-14
    max_subdivisions: int = 2000
    tail_cutoff_decades: int = 12

    def __post_init__(self):
        if not self.rel_tol > 0 or not self.abs_tol > 0:
            msg = f'quadrature tolerances must be > 0, got {self.rel_tol}, {self.abs_tol}'
            raise DomainError(msg)
        if int(self.max_subdivisions) < 10:
            msg = f'max_subdivisions must be >= 10, got {self.max_subdivisions}'
            raise DomainError(msg)
        if int(self.tail_cutoff_decades) < 1:
            raise DomainError('tail_cutoff_decades must be >= 1')
        object.__setattr__(self, 'max_subdivisions', int(self.max_subdivisions))
        object.__setattr__(self, 'tail_cutoff_decades', int(self.tail_cutoff_decades))

    @property
    def slack(self):
        ''' Relative slack of checks that rest on quadrature.'''
        return 10 * self.rel_tol

    def to_dict(self):
        return {'rel_tol': self.rel_tol, 'abs_tol': self.abs_tol,
                'max_subdivisions': self.max_subdivisions,
                'tail_cutoff_decades': self.tail_cutoff_decades}

    @classmethod
    def from_dict(cls, data):
        return cls(**data)


DEFAULT_QUAD = QuadratureSpec()


def integrate_adaptive(func, a, b, quad=DEFAULT_QUAD, epsabs=None):
    ''' scipy.integrate.quad with the package's error contract.

    A warning from quad is tolerated when the reported error still meets the
    tolerance within a factor 100; otherwise QuadratureError is raised.
    '''
    epsabs = quad.abs_tol if epsabs is None else epsabs
    result = integrate.quad(func, a, b, epsabs=epsabs, epsrel=quad.rel_tol,
                            limit=quad.max_subdivisions, full_output=1)
    value, error = result[0], result[1]
    if len(result) > 3:
        tolerance = max(epsabs, quad.rel_tol * abs(value))
        if not np.isfinite(value) or error > 100 * tolerance:
            msg = (f'quadrature on [{a:g}, {b:g}] did not converge '
                   f'(value {value:.6g}, error {error:.3g}): {result[3]}')
            raise QuadratureError(msg)
        logger.debug('quad warning on [%g, %g] accepted, error %.3g', a, b, error)
    return value


def _log_panels(integrand, u0, quad, tail):
    ''' int_{u0}^inf integrand(u) du over decade panels plus ``tail(u_end)``.'''
    offsets = np.concatenate([[0.0], 10.0 ** np.arange(quad.tail_cutoff_decades + 1)])
    total = 0.0
    for lo, hi in zip(offsets[:-1], offsets[1:]):
        total += integrate_adaptive(integrand, u0 + lo, u0 + hi, quad, epsabs=0.0)
    return total + tail(u0 + offsets[-1])


def _exponents(pq):
    if isinstance(pq, ExponentPair):
        return pq.p, pq.q
    p, q = pq
    return float(p), as_exponent(q)


def _power_exponent_gap(profile, p):
    ''' delta with t^{1/p} f*(t) proportional to t^delta near the origin.'''
    if isinstance(profile, PowerProfile):
        gap = 1.0 / p - profile.beta
    else:
        gap = 1.0 / p - 1.0 / profile.p
    return 0.0 if abs(gap) < 1e-14 else gap


def classify_convergence(f_star, pq):
    ''' Analytic finite/infinite classification of ||f*||_{p,q}.

    Parameters
    ----------
    f_star : AnalyticProfile
        A POWER, LOGPOWER or INDICATOR profile.
    pq : ExponentPair/tuple

    Return
    ------
    classification : Classification
    '''
    if not isinstance(f_star, AnalyticProfile):
        msg = f'no analytic classification for {type(f_star).__name__}'
        raise UnsupportedFamilyError(msg)
    p, q = _exponents(pq)
    if isinstance(f_star, IndicatorProfile):
        return FINITE_EXPECTED
    if isinstance(f_star, PowerProfile):
        if f_star.c == 0:
            return FINITE_EXPECTED
        gap = _power_exponent_gap(f_star, p)
        if gap < 0:
            return _infinite_expected(Divergence.HEAD_DIVERGENCE)
        if gap == 0:
            return FINITE_EXPECTED if q is INFINITY else _infinite_expected(Divergence.HEAD_DIVERGENCE)
        if math.isinf(f_star.support_end):
            return _infinite_expected(Divergence.TAIL_DIVERGENCE)
        return FINITE_EXPECTED
    if isinstance(f_star, LogPowerProfile):
        if f_star.c == 0:
            return FINITE_EXPECTED
        gap = _power_exponent_gap(f_star, p)
        if gap < 0:
            return _infinite_expected(Divergence.HEAD_DIVERGENCE)
        if gap > 0 or q is INFINITY or q * f_star.alpha > 1 + LOG_EXPONENT_TOL:
            return FINITE_EXPECTED
        return _infinite_expected(Divergence.LOG_EXPONENT_TEST)
    msg = f'no analytic classification for family {f_star.family}'
    raise UnsupportedFamilyError(msg)


def _check_profile(f_star):
    if isinstance(f_star, SampledField):
        msg = 'norms take a rearranged profile, call rearrange() first'
        raise PreconditionError(msg)
    if not isinstance(f_star, (StepProfile, AnalyticProfile)):
        msg = f'cannot take the norm of {type(f_star).__name__}'
        raise UnsupportedFamilyError(msg)


# step profiles

def _step_quasi(f_star, p, q):
    if f_star.is_zero:
        return 0.0
    t, v = f_star.breakpoints, f_star.values
    if q is INFINITY:
        return float(np.max(v * t[1:] ** (1.0 / p)))
    top = v[0]
    # factor out the largest value against overflow of v**q
    terms = (v / top) ** q * (p / q) * (t[1:] ** (q / p) - t[:-1] ** (q / p))
    return top * float(np.sum(terms)) ** (1.0 / q)


def _step_starstar(f_star, p, q, quad):
    if f_star.is_zero:
        return 0.0
    t, v = f_star.breakpoints, f_star.values
    p_conj = conjugate_exponent(p)
    cumulative = np.concatenate([[0.0], np.cumsum(v * np.diff(t))])
    total = cumulative[-1]
    # on panel i, f**(s) = v_i + d_i / s
    offsets = cumulative[:-1] - v * t[:-1]
    if q is INFINITY:
        candidates = [float(np.max(cumulative[1:] / t[1:] * t[1:] ** (1.0 / p)))]
        with np.errstate(divide='ignore', invalid='ignore'):
            critical = offsets * (p - 1.0) / v
        inside = (critical > t[:-1]) & (critical < t[1:])
        if np.any(inside):
            s = critical[inside]
            candidates.append(float(np.max(s ** (1.0 / p) * (v[inside] + offsets[inside] / s))))
        return max(candidates)

    top = v[0]
    integral = (p / q) * t[1] ** (q / p)
    for i in range(1, len(v)):
        vi, di = v[i] / top, offsets[i] / top

        def integrand(x, vi=vi, di=di):
            s = math.exp(x)
            return (s ** (1.0 / p) * (vi + di / s)) ** q

        integral += integrate_adaptive(integrand, math.log(t[i]), math.log(t[i + 1]), quad, epsabs=0.0)
    integral += (total / top) ** q * t[-1] ** (-q / p_conj) * p_conj / q
    return top * integral ** (1.0 / q)


# analytic families

def _power_quasi(f_star, p, q):
    c, T = f_star.c, f_star.support_end
    gap = _power_exponent_gap(f_star, p)
    if q is INFINITY:
        return c if gap == 0 else c * T ** gap
    return c * (T ** (q * gap) / (q * gap)) ** (1.0 / q)


def _power_starstar(f_star, p, q):
    if f_star.beta >= 1:
        return NormValue.infinite(Divergence.HEAD_DIVERGENCE)
    c, T, beta = f_star.c, f_star.support_end, f_star.beta
    gap = _power_exponent_gap(f_star, p)
    lead = c / (1.0 - beta)
    if math.isinf(T):
        if q is INFINITY and gap == 0:
            return NormValue.finite(lead)
        reason = Divergence.TAIL_DIVERGENCE if gap > 0 else Divergence.HEAD_DIVERGENCE
        return NormValue.infinite(reason)
    if q is INFINITY:
        return NormValue.finite(lead if gap == 0 else lead * T ** gap)
    p_conj = conjugate_exponent(p)
    head = lead ** q * T ** (q * gap) / (q * gap)
    tail = (lead * T ** (1.0 - beta)) ** q * T ** (-q / p_conj) * p_conj / q
    return NormValue.finite((head + tail) ** (1.0 / q))


def _indicator_quasi(f_star, p, q):
    h, T = f_star.height, f_star.support_end
    if q is INFINITY:
        return h * T ** (1.0 / p)
    return (p / q) ** (1.0 / q) * h * T ** (1.0 / p)


def _indicator_starstar(f_star, p, q):
    h, T = f_star.height, f_star.support_end
    if q is INFINITY:
        return h * T ** (1.0 / p)
    p_conj = conjugate_exponent(p)
    return h * T ** (1.0 / p) * (p * p_conj / q) ** (1.0 / q)


def _logpower_quasi(f_star, p, q, quad):
    c, alpha, S = f_star.c, f_star.alpha, f_star.support_end
    pa, u0 = f_star.p * alpha, f_star.log_offset
    gap = _power_exponent_gap(f_star, p)
    if q is INFINITY:
        return c * S ** gap * (pa + u0) ** (-alpha)
    if gap == 0:
        qa = q * alpha

        def integrand(u):
            return (pa + u) ** (-qa)

        def tail(u_end):
            return (pa + u_end) ** (1.0 - qa) / (qa - 1.0)

        return c * _log_panels(integrand, u0, quad, tail) ** (1.0 / q)

    def decaying(w):
        return math.exp(-q * gap * w) * (pa + u0 + w) ** (-q * alpha)

    return c * S ** gap * integrate_adaptive(decaying, 0.0, np.inf, quad) ** (1.0 / q)


def _logpower_starstar(f_star, p, q, quad):
    c, alpha, S = f_star.c, f_star.alpha, f_star.support_end
    pa, u0 = f_star.p * alpha, f_star.log_offset
    gap = _power_exponent_gap(f_star, p)
    head_value = float(f_star.average_kernel(u0))
    if q is INFINITY:
        return c * S ** gap * head_value
    p_conj = conjugate_exponent(p)
    # f** = M / t beyond the support, M = int_0^S f*
    mass = S ** (1.0 / f_star.p_conj) * head_value
    outer = mass ** q * S ** (-q / p_conj) * p_conj / q

    if gap == 0:
        qa = q * alpha
        kernel_conj = f_star.p_conj

        def integrand(u):
            return float(f_star.average_kernel(u)) ** q

        def tail(u_end):
            x = pa + u_end
            return kernel_conj ** q * (x ** (1.0 - qa) / (qa - 1.0) - kernel_conj * x ** (-qa))

        head = _log_panels(integrand, u0, quad, tail)
    else:
        def decaying(w):
            return math.exp(-q * gap * w) * float(f_star.average_kernel(u0 + w)) ** q

        head = S ** (q * gap) * integrate_adaptive(decaying, 0.0, np.inf, quad)
    return c * (head + outer) ** (1.0 / q)


def _quasinorm(f_star, p, q, quad):
    if isinstance(f_star, StepProfile):
        return NormValue.finite(_step_quasi(f_star, p, q))
    classification = classify_convergence(f_star, (p, q))
    if not classification.is_finite:
        return NormValue.infinite(classification.reason)
    if isinstance(f_star, IndicatorProfile):
        return NormValue.finite(_indicator_quasi(f_star, p, q))
    if f_star.c == 0:
        return NormValue.finite(0.0)
    if isinstance(f_star, PowerProfile):
        return NormValue.finite(_power_quasi(f_star, p, q))
    return NormValue.finite(_logpower_quasi(f_star, p, q, quad))


def quasinorm(f_star, pq, quad=DEFAULT_QUAD):
    ''' The Lorentz quasinorm ||f||_{p,q} of a rearranged profile.

    Parameters
    ----------
    f_star : StepProfile/AnalyticProfile
        The nonincreasing rearrangement.
    pq : ExponentPair
    quad : QuadratureSpec

    Return
    ------
    norm : NormValue
    '''
    _check_profile(f_star)
    p, q = _exponents(pq)
    return _quasinorm(f_star, p, q, quad)


def starstar_norm(f_star, pq, quad=DEFAULT_QUAD):
    ''' The Lorentz norm ||f||_{(p,q)}, the q-average of t^{1/p} f**(t).

    The tail of f** beyond the support behaves like (int f*)/t and is
    integrated in closed form.
    '''
    _check_profile(f_star)
    p, q = _exponents(pq)
    if isinstance(f_star, StepProfile):
        return NormValue.finite(_step_starstar(f_star, p, q, quad))
    classification = classify_convergence(f_star, (p, q))
    if not classification.is_finite:
        return NormValue.infinite(classification.reason)
    if isinstance(f_star, IndicatorProfile):
        return NormValue.finite(_indicator_starstar(f_star, p, q))
    if f_star.c == 0:
        return NormValue.finite(0.0)
    if isinstance(f_star, PowerProfile):
        return _power_starstar(f_star, p, q)
    return NormValue.finite(_logpower_starstar(f_star, p, q, quad))


def lebesgue_norm(f_star, s, quad=DEFAULT_QUAD):
    ''' (int_0^inf f*(t)^s dt)^{1/s}, s >= 1; this is ||f||_{s,s}.'''
    s = float(s)
    if not s >= 1:
        msg = f'Lebesgue exponent must be >= 1, got {s}'
        raise DomainError(msg)
    _check_profile(f_star)
    return _quasinorm(f_star, s, s, quad)


def vector_magnitude(fields):
    ''' Cellwise Euclidean magnitude of vector components sharing one cell
    partition.'''
    fields = list(fields)
    if len(fields) == 0:
        raise DomainError('need at least one component')
    first = fields[0]
    for other in fields[1:]:
        if other.domain != first.domain or not np.array_equal(other.weights, first.weights):
            raise DomainError('vector components must share domain and cell partition')
    magnitudes = np.linalg.norm(np.stack([f.magnitudes for f in fields]), axis=0)
    return SampledField(first.domain, first.weights, magnitudes, first.radii)


def _check_nested(sets):
    for outer, inner in zip(sets[:-1], sets[1:]):
        if not outer.contains_domain(inner):
            msg = f'{inner} is not contained in {outer}, sets must shrink'
            raise DomainError(msg)


def _concentric(domain, subset):
    if domain is None:
        return True
    return np.allclose(domain.center, subset.center, atol=1e-12)


def tail_norm(f, pq, shrinking_sets, quad=DEFAULT_QUAD):
    ''' ||f chi_{E_k}||_{p,q} along nested, concentric sets E_k.

    Parameters
    ----------
    f : SampledField/GalleryItem
        Sampled fields need cell radii; gallery items supply the rearrangement
        of their restriction to a concentric sub-ball.
    pq : ExponentPair
    shrinking_sets : list of BallDomain/Interval1D
        Descending sequence, each set containing the next.

    Return
    ------
    norms : list of NormValue
    '''
    sets = list(shrinking_sets)
    _check_nested(sets)
    norms = []
    for subset in sets:
        if not isinstance(subset, (BallDomain, Interval1D)):
            msg = f'tail sets must be balls or intervals, got {subset!r}'
            raise DomainError(msg)
        domain = f.domain
        if not _concentric(domain, subset):
            raise DomainError('tail sets must share the center of the function domain')
        if isinstance(f, SampledField):
            if f.radii is None:
                raise DomainError('field carries no cell radii')
            mask = f.radii < subset.r
            if not np.any(mask) or not np.any(f.magnitudes[mask] > 0):
                norms.append(NormValue.finite(0.0))
                continue
            profile = rearrange(f.restrict(mask, subset))
        else:
            profile = f.restricted_rearrangement(subset.r)
        norms.append(quasinorm(profile, pq, quad))
    return norms


def head_divergence_probe(f_star, pq, cutoffs=(1e-6, 1e-9, 1e-12), window=1e-3, quad=DEFAULT_QUAD):
    ''' Truncated head integrals int_{eps T}^{window T} (t^{1/p} f*)^q dt/t.

    Divergent heads show up as a sequence that keeps growing as eps -> 0;
    the cutoffs are relative to the support end T.
    '''
    _check_profile(f_star)
    p, q = _exponents(pq)
    if q is INFINITY:
        raise DomainError('the head probe integrates a q-th power, q must be finite')
    T = f_star.support_end
    if math.isinf(T):
        T = 1.0
    if isinstance(f_star, LogPowerProfile):
        gap = _power_exponent_gap(f_star, p)

        def integrand(u):
            return (f_star.c * T ** gap * math.exp(-gap * u)
                    * (f_star.p * f_star.alpha + f_star.log_offset + u) ** (-f_star.alpha)) ** q

        # u measured from the support end
        lower = math.log(1.0 / window)
        return [integrate_adaptive(integrand, lower, math.log(1.0 / eps), quad, epsabs=0.0)
                for eps in cutoffs]

    def log_integrand(x):
        t = math.exp(x)
        return (t ** (1.0 / p) * float(f_star(t))) ** q

    upper = math.log(window * T)
    return [integrate_adaptive(log_integrand, math.log(eps * T), upper, quad, epsabs=0.0)
            for eps in cutoffs]


def inclusion_ratio(f_star, p, r, s, quad=DEFAULT_QUAD):
    ''' ||f||_{p,s} / ||f||_{p,r} for r < s.

    When ||f||_{p,r} is INFINITE the ratio is undefined and that INFINITE
    value is returned.
    '''
    r, s = as_exponent(r), as_exponent(s)
    if not r < s:
        msg = f'inclusion ratio needs r < s, got r={r}, s={s}'
        raise DomainError(msg)
    lower = quasinorm(f_star, ExponentPair(p, r), quad)
    if not lower.is_finite:
        return lower
    upper = quasinorm(f_star, ExponentPair(p, s), quad)
    if lower.value == 0:
        return NormValue.finite(0.0)
    return NormValue.finite(upper.value / lower.value)


class NormKind(Enum):
    QUASI = 'QUASI'
    STARSTAR = 'STARSTAR'


def profile_norm(f_star, pq, kind=NormKind.QUASI, quad=DEFAULT_QUAD):
    ''' quasinorm or starstar_norm, selected by ``kind``.'''
    if NormKind(kind) is NormKind.STARSTAR:
        return starstar_norm(f_star, pq, quad)
    return quasinorm(f_star, pq, quad)
