''' Distribution functions, nonincreasing rearrangements and maximal
functions.

A function enters this module either as a ``SampledField`` (measure-weighted
cells, magnitudes only), as a ``StepProfile`` (an already rearranged step
function) or as one of the closed-form ``AnalyticProfile`` families. Radial
functions on balls are lifted to profiles by ``rearrange_radial``.
'''
import logging
import math
from enum import Enum

import numpy as np
from scipy.optimize import brentq
from scipy.special import exp1, gamma, gammaincc

from .exceptions import DomainError, PreconditionError
from .foundations import BallDomain, Interval1D, unit_ball_volume

logger = logging.getLogger(__name__)

MONOTONE_GRID_POINTS = 64
# series length for e^y Gamma(a, y) once y >= ASYMPTOTIC_SWITCH
ASYMPTOTIC_TERMS = 25
ASYMPTOTIC_SWITCH = 40.0


def _check_level(t, name='t'):
    t = np.asarray(t, dtype=float)
    if np.any(np.isnan(t)) or np.any(t < 0):
        msg = f'{name} must be >= 0, got {t}'
        raise DomainError(msg)
    return t


def _scalar_or_array(values, like):
    if np.ndim(like) == 0:
        return float(np.asarray(values).reshape(()))
    return values


class SampledField:
    ''' A function given by measure-weighted cells (weight_i, |value_i|).

    Attributes
    ----------
    domain : BallDomain/Interval1D/None
        The domain the cells discretize.
    weights : numpy.ndarray
        Cell measures, all > 0.
    magnitudes : numpy.ndarray
        |f| on each cell, all finite and >= 0.
    radii : numpy.ndarray/None
        Distance of each cell's sample point to the domain center; needed to
        restrict the field to sub-balls.
    '''
    def __init__(self, domain, weights, magnitudes, radii=None):
        weights = np.atleast_1d(np.asarray(weights, dtype=float))
        magnitudes = np.atleast_1d(np.asarray(magnitudes, dtype=float))
        if weights.ndim != 1 or weights.shape != magnitudes.shape:
            msg = (f'weights and magnitudes must be matching 1-d arrays, got '
                   f'{weights.shape} and {magnitudes.shape}')
            raise DomainError(msg)
        if not np.all(np.isfinite(weights)) or np.any(weights <= 0):
            raise DomainError('every cell weight must be finite and > 0')
        if not np.all(np.isfinite(magnitudes)) or np.any(magnitudes < 0):
            raise DomainError('every cell magnitude must be finite and >= 0')
        if radii is not None:
            radii = np.asarray(radii, dtype=float)
            if radii.shape != weights.shape:
                msg = f'radii shape {radii.shape} does not match {weights.shape}'
                raise DomainError(msg)
        self.domain = domain
        self.weights = weights
        self.magnitudes = magnitudes
        self.radii = radii

    @classmethod
    def from_cells(cls, cells, domain=None, radii=None):
        ''' Build a field from a list of (weight, magnitude) tuples.'''
        cells = list(cells)
        if len(cells) == 0:
            raise DomainError('a sampled field needs at least one cell')
        weights, magnitudes = zip(*cells)
        return cls(domain, weights, np.abs(np.asarray(magnitudes, dtype=float)), radii=radii)

    @property
    def cells(self):
        return list(zip(self.weights.tolist(), self.magnitudes.tolist()))

    @property
    def total_measure(self):
        return float(np.sum(self.weights))

    def __len__(self):
        return len(self.weights)

    def covers_domain(self, rtol=1e-9):
        if self.domain is None:
            return False
        return math.isclose(self.total_measure, self.domain.measure, rel_tol=rtol)

    def power(self, a):
        if not a > 0:
            msg = f'power exponent must be > 0, got {a}'
            raise DomainError(msg)
        return SampledField(self.domain, self.weights, self.magnitudes ** a, self.radii)

    def scaled(self, c):
        return SampledField(self.domain, self.weights, abs(c) * self.magnitudes, self.radii)

    def restrict(self, mask, domain=None):
        ''' Keep the cells selected by a boolean mask. No zero cell is added for
        the removed measure, the result lives on ``domain``.'''
        mask = np.asarray(mask, dtype=bool)
        radii = None if self.radii is None else self.radii[mask]
        if not np.any(mask):
            raise DomainError('restriction removes every cell')
        return SampledField(domain, self.weights[mask], self.magnitudes[mask], radii)

    def restrict_to_ball(self, radius):
        ''' Cells whose sample point lies within ``radius`` of the center.'''
        if self.radii is None:
            raise DomainError('field carries no cell radii, it cannot be restricted to a ball')
        return self.restrict(self.radii < radius)

    def __repr__(self):
        return f'SampledField(cells={len(self)}, measure={self.total_measure:g})'


class StepProfile:
    ''' A nonincreasing, right-continuous step function on [0, inf).

    The value ``values[i]`` is taken on ``[breakpoints[i], breakpoints[i+1])``
    and the profile vanishes on ``[breakpoints[-1], inf)``. Construction
    canonicalizes: equal neighbours merge and zero steps at the end are
    dropped, so two profiles describing the same function compare equal.
    '''
    def __init__(self, breakpoints, values):
        breakpoints = np.atleast_1d(np.asarray(breakpoints, dtype=float))
        values = np.atleast_1d(np.asarray(values, dtype=float))
        if breakpoints.ndim != 1 or len(breakpoints) == 0 or breakpoints[0] != 0:
            raise DomainError('breakpoints must start at t_0 = 0')
        if len(values) != len(breakpoints) - 1:
            msg = f'{len(breakpoints)} breakpoints need {len(breakpoints) - 1} values, got {len(values)}'
            raise DomainError(msg)
        if not np.all(np.isfinite(breakpoints)) or np.any(np.diff(breakpoints) <= 0):
            raise DomainError('breakpoints must be finite and strictly increasing')
        if not np.all(np.isfinite(values)) or np.any(values < 0):
            raise DomainError('step values must be finite and >= 0')
        if np.any(np.diff(values) > 0):
            raise PreconditionError('step values must be nonincreasing')

        # canonical form
        keep = np.ones(len(values), dtype=bool)
        if len(values) > 1:
            keep[:-1] = values[:-1] != values[1:]
        values = values[keep]
        breakpoints = np.concatenate([[0.0], breakpoints[1:][keep]])
        positive = values > 0
        values = values[positive]
        breakpoints = breakpoints[:len(values) + 1]

        self.breakpoints = breakpoints
        self.values = values

    @property
    def family(self):
        return 'STEP'

    @property
    def support_end(self):
        return float(self.breakpoints[-1])

    @property
    def widths(self):
        return np.diff(self.breakpoints)

    @property
    def is_zero(self):
        return len(self.values) == 0

    @property
    def total_integral(self):
        return float(np.sum(self.values * self.widths))

    def __len__(self):
        return len(self.values)

    def __eq__(self, other):
        if not isinstance(other, StepProfile):
            return NotImplemented
        return (np.array_equal(self.breakpoints, other.breakpoints)
                and np.array_equal(self.values, other.values))

    def __call__(self, t):
        t = _check_level(t)
        if self.is_zero:
            return _scalar_or_array(np.zeros_like(t), t)
        idx = np.searchsorted(self.breakpoints, t, side='right') - 1
        inside = idx < len(self.values)
        out = np.where(inside, self.values[np.minimum(idx, len(self.values) - 1)], 0.0)
        return _scalar_or_array(out, t)

    def distribution(self, s):
        ''' lambda(s) = |{f* > s}|.'''
        s = _check_level(s, 's')
        # values are decreasing, count those above s
        count = np.searchsorted(-self.values, -s, side='left')
        return _scalar_or_array(self.breakpoints[count], s)

    def integral(self, t):
        ''' int_0^t f*(s) ds.'''
        t = _check_level(t)
        if self.is_zero:
            return _scalar_or_array(np.zeros_like(t), t)
        cumulative = np.concatenate([[0.0], np.cumsum(self.values * self.widths)])
        idx = np.clip(np.searchsorted(self.breakpoints, t, side='right') - 1, 0, len(self.values))
        partial = np.where(idx < len(self.values),
                           self.values[np.minimum(idx, len(self.values) - 1)]
                           * (np.minimum(t, self.support_end) - self.breakpoints[idx]),
                           0.0)
        return _scalar_or_array(cumulative[idx] + partial, t)

    def average(self, t):
        ''' f**(t) = (1/t) int_0^t f*.'''
        t = np.asarray(t, dtype=float)
        if np.any(t <= 0):
            raise DomainError('the maximal function is defined for t > 0')
        return _scalar_or_array(self.integral(t) / t, t)

    def power(self, a):
        if not a > 0:
            msg = f'power exponent must be > 0, got {a}'
            raise DomainError(msg)
        return StepProfile(self.breakpoints, self.values ** a)

    def scaled(self, c):
        if c < 0:
            raise DomainError('profiles scale by nonnegative factors only')
        if c == 0:
            return StepProfile([0.0], [])
        return StepProfile(self.breakpoints, c * self.values)

    def restrict(self, support_end):
        ''' The rearrangement of the restriction to the set where f* is
        largest, of measure ``support_end``.'''
        if support_end >= self.support_end:
            return self
        cut = np.searchsorted(self.breakpoints, support_end, side='left')
        return StepProfile(np.concatenate([self.breakpoints[:cut], [support_end]]),
                           self.values[:cut])

    def to_field(self):
        ''' The profile as a SampledField on (0, support_end).'''
        if self.is_zero:
            raise DomainError('the zero profile has no cells')
        return SampledField(Interval1D(0.0, self.support_end), self.widths, self.values)

    def to_json(self):
        return {'breakpoints': self.breakpoints.tolist(), 'values': self.values.tolist()}

    @classmethod
    def from_json(cls, data):
        ''' Rebuild a profile from ``to_json`` output; any payload that is not a
        nonincreasing step profile raises DomainError.'''
        try:
            breakpoints, values = data['breakpoints'], data['values']
        except (KeyError, TypeError) as error:
            raise DomainError(f'step profile payload needs breakpoints and values: {error}') from error
        try:
            return cls(breakpoints, values)
        except PreconditionError as error:
            raise DomainError(str(error)) from error

    def __repr__(self):
        return f'StepProfile(steps={len(self)}, support_end={self.support_end:g})'


class Family(Enum):
    POWER = 'POWER'
    LOGPOWER = 'LOGPOWER'
    INDICATOR = 'INDICATOR'


class AnalyticProfile:
    ''' A closed-form nonincreasing profile, vanishing on [support_end, inf).

    Subclasses implement ``_value``, ``distribution``, ``integral`` and
    ``restrict``; ``family`` tags the closed form for the norm code.
    '''
    family = None

    def __init__(self, support_end):
        if not support_end > 0:
            msg = f'support end must be > 0, got {support_end}'
            raise DomainError(msg)
        self.support_end = float(support_end)

    def __call__(self, t):
        t = _check_level(t)
        with np.errstate(divide='ignore', invalid='ignore', over='ignore'):
            out = np.where(t < self.support_end, self._value(np.where(t > 0, t, np.nan)), 0.0)
        out = np.where((t == 0) & (self.support_end > 0), self.head_value, out)
        return _scalar_or_array(out, t)

    @property
    def head_value(self):
        ''' f*(0+), +inf for unbounded families.'''
        return math.inf

    def average(self, t):
        t = np.asarray(t, dtype=float)
        if np.any(t <= 0):
            raise DomainError('the maximal function is defined for t > 0')
        with np.errstate(divide='ignore', invalid='ignore'):
            out = self.integral(t) / t
        return _scalar_or_array(out, t)

    def to_dict(self):
        raise NotImplementedError


class PowerProfile(AnalyticProfile):
    ''' POWER(c, beta): t -> c t^{-beta} on [0, T), 0 after. T may be inf.'''
    family = Family.POWER

    def __init__(self, c, beta, support_end):
        super().__init__(support_end)
        if c < 0 or not beta > 0:
            msg = f'POWER needs c >= 0 and beta > 0, got c={c}, beta={beta}'
            raise DomainError(msg)
        self.c = float(c)
        self.beta = float(beta)

    @property
    def head_value(self):
        return math.inf if self.c > 0 else 0.0

    def _value(self, t):
        return self.c * t ** (-self.beta)

    def distribution(self, s):
        s = _check_level(s, 's')
        with np.errstate(divide='ignore'):
            level = np.where(s > 0, (self.c / np.where(s > 0, s, 1.0)) ** (1.0 / self.beta), math.inf)
        out = np.minimum(self.support_end, level) if self.c > 0 else np.zeros_like(s)
        return _scalar_or_array(out, s)

    def integral(self, t):
        t = _check_level(t)
        if self.c == 0:
            return _scalar_or_array(np.zeros_like(t), t)
        if self.beta >= 1:
            return _scalar_or_array(np.where(t > 0, math.inf, 0.0), t)
        upper = np.minimum(t, self.support_end)
        out = self.c * upper ** (1 - self.beta) / (1 - self.beta)
        return _scalar_or_array(out, t)

    def restrict(self, support_end):
        return PowerProfile(self.c, self.beta, min(support_end, self.support_end))

    def scaled(self, k):
        if k < 0:
            raise DomainError('profiles scale by nonnegative factors only')
        return PowerProfile(k * self.c, self.beta, self.support_end)

    def to_dict(self):
        return {'family': self.family.value, 'c': self.c, 'beta': self.beta,
                'support_end': self.support_end}

    def __repr__(self):
        return f'POWER(c={self.c:g}, beta={self.beta:g}, T={self.support_end:g})'


class IndicatorProfile(AnalyticProfile):
    ''' INDICATOR(h, T): t -> h on [0, T), 0 after.'''
    family = Family.INDICATOR

    def __init__(self, height, support_end):
        super().__init__(support_end)
        if height < 0 or math.isinf(support_end):
            msg = f'INDICATOR needs h >= 0 and finite T, got h={height}, T={support_end}'
            raise DomainError(msg)
        self.height = float(height)

    @property
    def head_value(self):
        return self.height

    def _value(self, t):
        return np.full_like(t, self.height)

    def distribution(self, s):
        s = _check_level(s, 's')
        return _scalar_or_array(np.where(s < self.height, self.support_end, 0.0), s)

    def integral(self, t):
        t = _check_level(t)
        return _scalar_or_array(self.height * np.minimum(t, self.support_end), t)

    def restrict(self, support_end):
        return IndicatorProfile(self.height, min(support_end, self.support_end))

    def scaled(self, k):
        if k < 0:
            raise DomainError('profiles scale by nonnegative factors only')
        return IndicatorProfile(k * self.height, self.support_end)

    def to_dict(self):
        return {'family': self.family.value, 'h': self.height, 'support_end': self.support_end}

    def __repr__(self):
        return f'INDICATOR(h={self.height:g}, T={self.support_end:g})'


def exp_gamma_tail(a, y):
    ''' e^y Gamma(a, y) for a <= 1 and y > 0 (upper incomplete gamma).

    a = 0 uses the exponential integral; large y switch to the asymptotic
    series y^{a-1} sum_k (a-1)(a-2)...(a-k) y^{-k}.
    '''
    shape = np.shape(y)
    y = np.atleast_1d(np.asarray(y, dtype=float))
    out = np.empty_like(y)
    large = y >= ASYMPTOTIC_SWITCH
    small = ~large
    if np.any(small):
        ys = y[small]
        if a == 0:
            out[small] = np.exp(ys) * exp1(ys)
        else:
            out[small] = np.exp(ys) * gamma(a) * gammaincc(a, ys)
    if np.any(large):
        yl = y[large]
        term = np.ones_like(yl)
        total = np.ones_like(yl)
        for k in range(1, ASYMPTOTIC_TERMS):
            term = term * (a - k) / yl
            total = total + term
        out[large] = yl ** (a - 1) * total
    return out.reshape(shape)


class LogPowerProfile(AnalyticProfile):
    ''' LOGPOWER(p, alpha, T): t -> c t^{-1/p} ln^{-alpha}(T e^{p alpha} / t).

    ``scale`` is the T inside the logarithm; ``support_end`` (<= T) is where
    the profile is cut off, which is T itself unless the profile is the
    rearrangement of a restriction to a smaller ball.
    '''
    family = Family.LOGPOWER

    def __init__(self, p, alpha, scale, support_end=None, c=1.0):
        support_end = scale if support_end is None else support_end
        super().__init__(support_end)
        if not p > 1 or not 0 < alpha <= 1:
            msg = f'LOGPOWER needs p > 1 and alpha in (0, 1], got p={p}, alpha={alpha}'
            raise DomainError(msg)
        if not 0 < scale < math.inf or support_end > scale * (1 + 1e-12):
            msg = f'LOGPOWER needs 0 < support_end <= T < inf, got {support_end} and {scale}'
            raise DomainError(msg)
        if c < 0:
            raise DomainError('LOGPOWER coefficient must be >= 0')
        self.p = float(p)
        self.alpha = float(alpha)
        self.scale = float(scale)
        self.c = float(c)
        self.support_end = min(self.support_end, self.scale)

    @property
    def p_conj(self):
        return self.p / (self.p - 1.0)

    @property
    def head_value(self):
        return math.inf if self.c > 0 else 0.0

    @property
    def log_offset(self):
        ''' u_0 = ln(T / support_end) >= 0.'''
        return math.log(self.scale / self.support_end)

    def _value(self, t):
        return self.c * t ** (-1.0 / self.p) * (self.p * self.alpha + np.log(self.scale / t)) ** (-self.alpha)

    def value_at_log(self, u):
        ''' The profile at t = T e^{-u}, computed without forming t.'''
        u = np.asarray(u, dtype=float)
        return self.c * np.exp(u / self.p) * self.scale ** (-1.0 / self.p) * (self.p * self.alpha + u) ** (-self.alpha)

    def _solve_level(self, s):
        # ln f*(t) - ln s, decreasing in x = ln t
        log_s = math.log(s / self.c)
        log_scale = math.log(self.scale)
        pa = self.p * self.alpha

        def g(x):
            return -x / self.p - self.alpha * math.log(pa + log_scale - x) - log_s

        x_hi = math.log(self.support_end)
        step = 1.0
        x_lo = x_hi - step
        while g(x_lo) <= 0:
            step *= 2
            x_lo = x_hi - step
            if step > 1e6:
                return 0.0
        return math.exp(brentq(g, x_lo, x_hi, xtol=1e-15, rtol=4 * np.finfo(float).eps))

    def distribution(self, s):
        s = _check_level(s, 's')
        if self.c == 0:
            return _scalar_or_array(np.zeros_like(s), s)
        floor_value = float(self._value(np.asarray(self.support_end)))
        flat = np.atleast_1d(s)
        out = np.empty_like(flat)
        for i, level in enumerate(flat):
            if level < floor_value:
                out[i] = self.support_end
            else:
                out[i] = self._solve_level(level)
        return _scalar_or_array(out.reshape(np.shape(s)), s)

    def average_kernel(self, u):
        ''' H(u) = int_0^inf e^{-w/p'} (p alpha + u + w)^{-alpha} dw, so that
        f**(t) = c t^{-1/p} H(ln(T/t)) on the support.'''
        u = np.asarray(u, dtype=float)
        pc = self.p_conj
        y = (self.p * self.alpha + u) / pc
        return pc ** (1.0 - self.alpha) * exp_gamma_tail(1.0 - self.alpha, y)

    def integral(self, t):
        t = _check_level(t)
        upper = np.minimum(t, self.support_end)
        out = np.zeros_like(upper)
        positive = upper > 0
        if np.any(positive):
            tp = upper[positive] if upper.ndim else upper
            u = np.log(self.scale / tp)
            val = self.c * tp ** (1.0 / self.p_conj) * self.average_kernel(u)
            if upper.ndim:
                out[positive] = val
            else:
                out = val
        return _scalar_or_array(out, t)

    def restrict(self, support_end):
        return LogPowerProfile(self.p, self.alpha, self.scale,
                               min(support_end, self.support_end), self.c)

    def scaled(self, k):
        if k < 0:
            raise DomainError('profiles scale by nonnegative factors only')
        return LogPowerProfile(self.p, self.alpha, self.scale, self.support_end, k * self.c)

    def to_dict(self):
        return {'family': self.family.value, 'p': self.p, 'alpha': self.alpha,
                'scale': self.scale, 'support_end': self.support_end, 'c': self.c}

    def __repr__(self):
        return (f'LOGPOWER(p={self.p:g}, alpha={self.alpha:g}, T={self.scale:g}, '
                f'support_end={self.support_end:g})')


class RadialLaw:
    ''' A radial profile phi(s), s = |x|, with a known rearrangement once
    lifted to a ball in R^n.'''
    def __call__(self, s):
        s = np.asarray(s, dtype=float)
        with np.errstate(divide='ignore', invalid='ignore', over='ignore'):
            return _scalar_or_array(self._phi(s), s)

    def rearrangement(self, n, r):
        raise NotImplementedError


class RadialPower(RadialLaw):
    ''' phi(s) = c s^{-gamma}.'''
    def __init__(self, c, gamma_):
        self.c = float(c)
        self.gamma = float(gamma_)

    def _phi(self, s):
        return self.c * s ** (-self.gamma)

    def rearrangement(self, n, r):
        omega = unit_ball_volume(n)
        return PowerProfile(self.c * omega ** (self.gamma / n), self.gamma / n, omega * r ** n)


class RadialLogPower(RadialLaw):
    ''' phi(s) = u_{r, alpha, p}(Omega_n s^n), the radial log-power family of
    the ball B(0, r) in R^n.'''
    def __init__(self, r, alpha, n, p):
        self.r = float(r)
        self.alpha = float(alpha)
        self.n = int(n)
        self.p = float(p)
        self.omega = unit_ball_volume(self.n)
        self.profile = LogPowerProfile(self.p, self.alpha, self.omega * self.r ** self.n)

    def _phi(self, s):
        out = np.zeros_like(s)
        inside = s < self.r
        # logarithmic variable u = n ln(r/s) avoids underflow of Omega s^n
        with np.errstate(divide='ignore'):
            u = self.n * np.log(self.r / np.where(inside, s, self.r))
        out[inside] = self.profile.value_at_log(u[inside])
        out[inside & (s == 0)] = math.inf
        return out

    def rearrangement(self, n, r):
        if n != self.n or r > self.r * (1 + 1e-12):
            msg = (f'log-power law of B(0,{self.r}) in R^{self.n} cannot be lifted to '
                   f'B(0,{r}) in R^{n}')
            raise DomainError(msg)
        return self.profile.restrict(self.omega * min(r, self.r) ** n)


def check_monotone_radial(phi, r, points=MONOTONE_GRID_POINTS):
    ''' Spot check that phi is nonincreasing on (0, r) along a geometric grid.'''
    grid = r * np.geomspace(1e-6, 1.0 - 1e-9, points)
    with np.errstate(divide='ignore', invalid='ignore', over='ignore'):
        values = np.abs(np.asarray([phi(s) for s in grid], dtype=float))
    finite = np.isfinite(values)
    increments = np.diff(values[finite])
    scale = np.maximum(np.abs(values[finite][:-1]), 1.0)
    if np.any(increments > 1e-12 * scale):
        msg = f'radial profile is not nonincreasing on (0, {r})'
        raise PreconditionError(msg)


def radial_shells(domain, n_shells=4096, inner_fraction=1e-8):
    ''' Spherical shells discretizing a ball, geometric in the radius.

    The innermost cell is the ball B(0, inner_fraction * r), the others are
    shells [s_i, s_{i+1}) with s_{i+1}/s_i constant.

    Return
    ------
    edges : numpy.ndarray
        n_shells + 1 radii, edges[0] = 0 and edges[-1] = r.
    weights : numpy.ndarray
        Shell measures Omega_n (s_{i+1}^n - s_i^n).
    mids : numpy.ndarray
        Sample radius of each shell (geometric mid-radius, half the radius
        for the innermost ball).
    '''
    if isinstance(domain, Interval1D):
        domain = domain.as_ball()
    if n_shells < 2:
        raise DomainError('need at least two shells')
    n, r = domain.n, domain.r
    omega = unit_ball_volume(n)
    outer = r * np.geomspace(inner_fraction, 1.0, n_shells)
    edges = np.concatenate([[0.0], outer])
    ratio = outer[1:] / outer[:-1]
    weights = np.empty(n_shells)
    weights[0] = omega * outer[0] ** n
    weights[1:] = -omega * outer[1:] ** n * np.expm1(-n * np.log(ratio))
    mids = np.empty(n_shells)
    mids[0] = 0.5 * outer[0]
    mids[1:] = np.sqrt(outer[:-1] * outer[1:])
    return edges, weights, mids


def radial_field(phi, domain, n_shells=4096, inner_fraction=1e-8):
    ''' Discretize the radial lift x -> |phi(|x - center|)| into shells.'''
    _, weights, mids = radial_shells(domain, n_shells, inner_fraction)
    with np.errstate(divide='ignore', invalid='ignore', over='ignore'):
        values = np.abs(np.asarray(phi(mids), dtype=float))
    if not np.all(np.isfinite(values)):
        raise DomainError('radial profile is not finite at the shell sample radii')
    return SampledField(domain, weights, values, radii=mids)


def distribution_function(f, t):
    ''' lambda_f(t), the measure of {|f| > t}.

    Parameters
    ----------
    f : SampledField/StepProfile/AnalyticProfile
    t : float
        Level, t >= 0.
    '''
    t_arr = _check_level(t)
    if isinstance(f, SampledField):
        levels = np.atleast_1d(t_arr)
        out = np.array([np.sum(f.weights[f.magnitudes > level]) for level in levels])
        return _scalar_or_array(out.reshape(np.shape(t_arr)), t_arr)
    return f.distribution(t)


def rearrange(f):
    ''' The nonincreasing rearrangement f* of a sampled field.

    Magnitudes are sorted in descending order, tied magnitudes merge into a
    single step and zero cells are dropped.
    '''
    if isinstance(f, StepProfile):
        f = f.to_field()
    if len(f) == 0:
        raise DomainError('cannot rearrange an empty field')
    positive = f.magnitudes > 0
    if not np.any(positive):
        return StepProfile([0.0], [])
    levels, inverse = np.unique(f.magnitudes[positive], return_inverse=True)
    widths = np.bincount(inverse, weights=f.weights[positive], minlength=len(levels))
    levels = levels[::-1]
    widths = widths[::-1]
    return StepProfile(np.concatenate([[0.0], np.cumsum(widths)]), levels)


def rearrange_radial(phi, n, r, n_shells=4096):
    ''' The rearrangement of x -> phi(|x|) on B(0, r) in R^n.

    For a RadialLaw the exact profile t -> phi((t/Omega_n)^{1/n}) is returned
    as an AnalyticProfile; a plain callable is spot-checked for monotonicity
    and rearranged from a shell discretization.
    '''
    check_monotone_radial(phi, r)
    if isinstance(phi, RadialLaw):
        return phi.rearrangement(n, r)
    logger.debug('untagged radial profile, rearranging %d shells', n_shells)
    return rearrange(radial_field(phi, BallDomain(n, r), n_shells))


def maximal_profile(f_star, t):
    ''' f**(t) = (1/t) int_0^t f*(s) ds; +inf when f* is not integrable at 0.'''
    t_arr = np.asarray(t, dtype=float)
    if np.any(np.isnan(t_arr)) or np.any(t_arr <= 0):
        msg = f'the maximal function needs t > 0, got {t}'
        raise DomainError(msg)
    out = f_star.average(t)
    if np.any(np.isinf(out)):
        logger.debug('non-integrable head in %r, maximal function is infinite', f_star)
    return out
