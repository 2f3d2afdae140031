''' Exponent arithmetic and Euclidean ball geometry.

Everything here is an immutable value; the functions are pure and can be
called from any number of workers.
'''
import math
from dataclasses import dataclass, field
from numbers import Real

import numpy as np
from scipy.special import gamma, gammaln

from .exceptions import DomainError


class Infinity:
    ''' The exponent value q = infinity.

    A singleton that compares greater than every real number. It selects the
    sup functional in the norm code, so it is kept apart from ``math.inf``
    which is only ever used for norm *values*.
    '''
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return 'inf'

    __str__ = __repr__

    def __float__(self):
        return math.inf

    def __eq__(self, other):
        if other is self:
            return True
        if isinstance(other, Real):
            return math.isinf(other) and other > 0
        return NotImplemented

    def __hash__(self):
        return hash(math.inf)

    def __lt__(self, other):
        if isinstance(other, (Real, Infinity)):
            return False
        return NotImplemented

    def __le__(self, other):
        if isinstance(other, (Real, Infinity)):
            return self == other
        return NotImplemented

    def __gt__(self, other):
        if isinstance(other, (Real, Infinity)):
            return not self == other
        return NotImplemented

    def __ge__(self, other):
        if isinstance(other, (Real, Infinity)):
            return True
        return NotImplemented

    def __reduce__(self):
        return (Infinity, ())


INFINITY = Infinity()


def is_infinite(value):
    return value is INFINITY or (isinstance(value, Real) and math.isinf(value) and value > 0)


def as_exponent(value):
    ''' Normalize an exponent given as a number, a string or INFINITY.

    Parameters
    ----------
    value : int/float/str/Infinity
        ``'inf'``, ``'infinity'``, ``math.inf`` and INFINITY all map to
        INFINITY. Anything else is converted to float.

    Return
    ------
    exponent : float/Infinity
    '''
    if isinstance(value, str):
        text = value.strip().lower()
        if text in ('inf', 'infinity', '+inf', '∞'):
            return INFINITY
        try:
            value = float(text)
        except ValueError:
            msg = f'cannot read an exponent from {value!r}'
            raise DomainError(msg) from None
    if is_infinite(value):
        return INFINITY
    value = float(value)
    if math.isnan(value):
        raise DomainError('exponent is NaN')
    return value


def reciprocal(value):
    ''' 1/value with 1/INFINITY = 0.'''
    value = as_exponent(value)
    if value is INFINITY:
        return 0.0
    return 1.0 / value


def conjugate_exponent(p):
    ''' The Hoelder conjugate p' of p in [1, inf].

    1 maps to INFINITY, INFINITY maps to 1 and 1 < p < inf maps to p/(p-1).
    '''
    p = as_exponent(p)
    if p is INFINITY:
        return 1.0
    if p < 1:
        msg = f'conjugate exponent needs p >= 1, got {p}'
        raise DomainError(msg)
    if p == 1:
        return INFINITY
    return p / (p - 1.0)


def unit_ball_volume(n):
    ''' Lebesgue measure Omega_n of the unit ball of R^n,
    pi^{n/2} / Gamma(n/2 + 1).'''
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 1:
        msg = f'dimension must be a positive integer, got {n!r}'
        raise DomainError(msg)
    half = n / 2.0
    if n <= 300:
        return float(np.pi ** half / gamma(half + 1.0))
    return float(np.exp(half * np.log(np.pi) - gammaln(half + 1.0)))


def sphere_area(n):
    ''' Surface measure omega_{n-1} = n Omega_n of the unit sphere in R^n.'''
    return n * unit_ball_volume(n)


@dataclass(frozen=True)
class ExponentPair:
    ''' A validated Lorentz exponent pair (p, q).

    Attributes
    ----------
    p : float
        Primary exponent, 1 < p < inf.
    q : float/Infinity
        Secondary exponent, 1 <= q <= inf.
    '''
    p: float
    q: object

    def __post_init__(self):
        p = as_exponent(self.p)
        q = as_exponent(self.q)
        if p is INFINITY or not 1 < p:
            msg = f'p must lie in (1, inf), got {p}'
            raise DomainError(msg)
        if q is not INFINITY and q < 1:
            msg = f'q must lie in [1, inf], got {q}'
            raise DomainError(msg)
        object.__setattr__(self, 'p', p)
        object.__setattr__(self, 'q', q)

    @property
    def p_conj(self):
        return conjugate_exponent(self.p)

    @property
    def q_conj(self):
        return conjugate_exponent(self.q)

    @property
    def weak(self):
        ''' True for q = inf (the sup functional).'''
        return self.q is INFINITY

    def conjugate(self):
        ''' The pair (p', q') of the dual space.'''
        return ExponentPair(self.p_conj, self.q_conj)

    def to_dict(self):
        return {'p': self.p, 'q': 'inf' if self.weak else self.q}

    @classmethod
    def from_dict(cls, data):
        return cls(data['p'], data['q'])

    def __str__(self):
        return f'(p={self.p:g}, q={"inf" if self.weak else format(self.q, "g")})'


@dataclass(frozen=True)
class BallDomain:
    ''' The open ball B(center, r) in R^n.'''
    n: int
    r: float
    center: tuple = field(default=None)

    def __post_init__(self):
        if isinstance(self.n, bool) or not isinstance(self.n, (int, np.integer)) or self.n < 1:
            msg = f'ball dimension must be a positive integer, got {self.n!r}'
            raise DomainError(msg)
        if not self.r > 0 or math.isinf(self.r):
            msg = f'ball radius must be positive and finite, got {self.r!r}'
            raise DomainError(msg)
        center = self.center
        if center is None:
            center = (0.0,) * int(self.n)
        center = tuple(float(c) for c in np.atleast_1d(center))
        if len(center) != self.n:
            msg = f'center {center} does not live in R^{self.n}'
            raise DomainError(msg)
        object.__setattr__(self, 'n', int(self.n))
        object.__setattr__(self, 'r', float(self.r))
        object.__setattr__(self, 'center', center)

    @property
    def volume(self):
        return unit_ball_volume(self.n) * self.r ** self.n

    measure = volume

    def contains_domain(self, other):
        ''' True if ``other`` (ball or interval) lies inside this ball.'''
        if isinstance(other, Interval1D):
            if self.n != 1:
                return False
            other = other.as_ball()
        if other.n != self.n:
            return False
        offset = np.linalg.norm(np.subtract(other.center, self.center))
        return offset + other.r <= self.r * (1 + 1e-12)

    def as_interval(self):
        if self.n != 1:
            msg = f'only one-dimensional balls are intervals, n={self.n}'
            raise DomainError(msg)
        c = self.center[0]
        return Interval1D(c - self.r, c + self.r)

    def radii(self, points):
        ''' |x - center| for an array of points of shape (..., n).'''
        points = np.asarray(points, dtype=float)
        if self.n == 1 and (points.ndim == 0 or points.shape[-1] != 1):
            points = points[..., np.newaxis]
        return np.linalg.norm(points - np.asarray(self.center), axis=-1)

    def contains(self, points):
        return self.radii(points) < self.r

    def to_dict(self):
        return {'kind': 'ball', 'n': self.n, 'r': self.r, 'center': list(self.center)}


@dataclass(frozen=True)
class Interval1D:
    ''' The open interval (a, b).'''
    a: float
    b: float

    def __post_init__(self):
        a, b = float(self.a), float(self.b)
        if not a < b:
            msg = f'interval needs a < b, got ({a}, {b})'
            raise DomainError(msg)
        if math.isinf(a) and math.isinf(b):
            msg = 'an interval may be unbounded on one side only'
            raise DomainError(msg)
        object.__setattr__(self, 'a', a)
        object.__setattr__(self, 'b', b)

    @property
    def n(self):
        return 1

    @property
    def length(self):
        return self.b - self.a

    measure = length
    volume = length

    @property
    def bounded(self):
        return not (math.isinf(self.a) or math.isinf(self.b))

    @property
    def center(self):
        return (0.5 * (self.a + self.b),)

    @property
    def r(self):
        return 0.5 * self.length

    def as_ball(self):
        if not self.bounded:
            msg = f'unbounded interval ({self.a}, {self.b}) is not a ball'
            raise DomainError(msg)
        return BallDomain(1, self.r, self.center)

    def contains_domain(self, other):
        if isinstance(other, BallDomain):
            if other.n != 1:
                return False
            other = other.as_interval()
        tol = 1e-12 * max(1.0, abs(self.a), abs(self.b))
        return self.a - tol <= other.a and other.b <= self.b + tol

    def radii(self, points):
        points = np.asarray(points, dtype=float)
        if points.ndim and points.shape[-1] == 1:
            points = points[..., 0]
        return np.abs(points - self.center[0])

    def contains(self, points):
        points = np.asarray(points, dtype=float)
        if points.ndim and points.shape[-1] == 1:
            points = points[..., 0]
        return (points > self.a) & (points < self.b)

    def to_dict(self):
        return {'kind': 'interval', 'a': self.a, 'b': self.b}


def domain_from_dict(data):
    if data['kind'] == 'ball':
        return BallDomain(data['n'], data['r'], tuple(data['center']))
    return Interval1D(data['a'], data['b'])
