''' The function gallery: log-power families, their antiderivatives, power
singularities, the u_p family and the fields derived from them.

Every item is radial in a coordinate (distance to the ball center, or the
offset from the left end for interval items), exposes its value and gradient
magnitude in closed form and, where one exists, the exact rearrangement of
both.
'''
import logging
import math
from enum import Enum

import numpy as np
from scipy.special import roots_legendre

from ..exceptions import DomainError, PreconditionError
from ..foundations import INFINITY, BallDomain, ExponentPair, Interval1D, unit_ball_volume
from ..norms import (
    DEFAULT_QUAD, LOG_EXPONENT_TOL, Divergence, NormKind, NormValue, integrate_adaptive, profile_norm,
)
from ..rearrangement import (
    IndicatorProfile, RadialLogPower, RadialPower, SampledField, radial_shells, rearrange,
)
from ..util import format_number

logger = logging.getLogger(__name__)

DEFAULT_CELLS = 4096
INNER_FRACTION = 1e-8


class Tag(Enum):
    U_SLICE = 'U_SLICE'
    U_RADIAL = 'U_RADIAL'
    V_ANTIDERIVATIVE = 'V_ANTIDERIVATIVE'
    POWER_SINGULARITY = 'POWER_SINGULARITY'
    UP_FAMILY = 'UP_FAMILY'
    TRUNCATION = 'TRUNCATION'
    SHIFTED = 'SHIFTED'
    LINEAR = 'LINEAR'
    ZERO_EXTENSION = 'ZERO_EXTENSION'


class SignedField:
    ''' A discretized item: cells with signed values and gradient magnitudes.

    Attributes
    ----------
    domain : BallDomain/Interval1D
    weights : numpy.ndarray
        Cell measures.
    values : numpy.ndarray
        Signed values at the cell sample points.
    gradients : numpy.ndarray
        Gradient magnitudes at the cell sample points.
    radii : numpy.ndarray
        Radial coordinate of the sample points.
    '''
    def __init__(self, domain, weights, values, gradients, radii):
        self.domain = domain
        self.weights = np.asarray(weights, dtype=float)
        self.values = np.asarray(values, dtype=float)
        self.gradients = np.asarray(gradients, dtype=float)
        self.radii = np.asarray(radii, dtype=float)
        shapes = {self.weights.shape, self.values.shape, self.gradients.shape, self.radii.shape}
        if len(shapes) != 1:
            raise DomainError('signed field arrays must have one common shape')
        if not np.all(np.isfinite(self.values)) or not np.all(np.isfinite(self.gradients)):
            raise DomainError('signed field values and gradients must be finite')

    def __len__(self):
        return len(self.weights)

    def same_partition(self, other):
        return (self.domain == other.domain and len(self) == len(other)
                and np.array_equal(self.weights, other.weights))

    def magnitude(self):
        return SampledField(self.domain, self.weights, np.abs(self.values), self.radii)

    def gradient_field(self):
        return SampledField(self.domain, self.weights, self.gradients, self.radii)

    def __repr__(self):
        return f'SignedField(cells={len(self)}, domain={self.domain})'


def interval_cells(length, n_cells=DEFAULT_CELLS, geometric=True, inner_fraction=INNER_FRACTION):
    ''' Cells of (0, length): geometric towards 0, or uniform.

    Return
    ------
    weights, mids : numpy.ndarray
    '''
    if geometric:
        outer = length * np.geomspace(inner_fraction, 1.0, n_cells)
        edges = np.concatenate([[0.0], outer])
        mids = np.concatenate([[0.5 * outer[0]], np.sqrt(outer[:-1] * outer[1:])])
    else:
        edges = np.linspace(0.0, length, n_cells + 1)
        mids = 0.5 * (edges[:-1] + edges[1:])
    return np.diff(edges), mids


def _log_power_closed_form(p, alpha, q):
    ''' ||u_{r,alpha,p}||_{p,q} in closed form, independent of r and n.'''
    pa = p * alpha
    if q is INFINITY:
        return NormValue.finite(pa ** (-alpha))
    if q * alpha > 1 + LOG_EXPONENT_TOL:
        return NormValue.finite((pa ** (1.0 - q * alpha) / (q * alpha - 1.0)) ** (1.0 / q))
    return NormValue.infinite(Divergence.LOG_EXPONENT_TEST)


def _same_p(pq, p):
    return math.isclose(pq.p, p, rel_tol=1e-14)


class GalleryItem:
    ''' Base class of the gallery.

    Subclasses define ``radial_value`` and ``radial_gradient`` on the radial
    coordinate; everything else (pointwise evaluation, discretization,
    rearrangements, norms) is derived here.
    '''
    tag = None
    name = None

    def __init__(self, domain):
        self.domain = domain

    # identification

    @property
    def params(self):
        return {}

    @property
    def id(self):
        args = ','.join(f'{k}={format_number(v)}' for k, v in self.params.items())
        return f'{self.name}({args})'

    def __repr__(self):
        return self.id

    def to_dict(self):
        return {'id': self.id, 'tag': self.tag.value, 'domain': self.domain.to_dict()}

    # geometry

    @property
    def extent(self):
        ''' The largest radial coordinate inside the domain.'''
        return self.domain.r

    @property
    def origin(self):
        ''' The point where the radial coordinate vanishes.'''
        return tuple(self.domain.center)

    def coordinate(self, points):
        return self.domain.radii(points)

    def sub_measure(self, radius):
        ''' Measure of {coordinate < radius} inside the domain.'''
        radius = min(radius, self.extent)
        return unit_ball_volume(self.domain.n) * radius ** self.domain.n

    def cells(self, n_cells=DEFAULT_CELLS):
        ''' (weights, sample coordinates) of the default discretization.'''
        _, weights, mids = radial_shells(self.domain, n_cells, INNER_FRACTION)
        return weights, mids

    # pointwise

    def radial_value(self, s):
        raise NotImplementedError

    def radial_gradient(self, s):
        raise NotImplementedError

    def evaluator(self, points):
        ''' u at the given points (+-inf at isolated singularities).'''
        with np.errstate(divide='ignore', invalid='ignore', over='ignore'):
            return self.radial_value(self.coordinate(points))

    __call__ = evaluator

    def gradient_magnitude(self, points):
        with np.errstate(divide='ignore', invalid='ignore', over='ignore'):
            return self.radial_gradient(self.coordinate(points))

    def value_at_origin(self):
        return float(self.radial_value(np.asarray(0.0)))

    @property
    def vanishes_on_boundary(self):
        edge = float(self.radial_value(np.asarray(self.extent * (1 - 1e-12))))
        return abs(edge) < 1e-6

    # monotonicity of |u| and |grad u| in the radial coordinate

    @property
    def decreasing(self):
        return False

    @property
    def gradient_decreasing(self):
        return False

    # rearrangements

    @property
    def exact_rearrangement(self):
        return None

    @property
    def exact_gradient_rearrangement(self):
        return None

    def discretize(self, n_cells=DEFAULT_CELLS):
        weights, mids = self.cells(n_cells)
        with np.errstate(divide='ignore', invalid='ignore', over='ignore'):
            values = np.asarray(self.radial_value(mids), dtype=float)
            gradients = np.asarray(self.radial_gradient(mids), dtype=float)
        return SignedField(self.domain, weights, values, gradients, mids)

    def rearrangement(self, n_cells=DEFAULT_CELLS):
        ''' The exact rearrangement when known, otherwise that of the
        discretization.'''
        exact = self.exact_rearrangement
        if exact is not None:
            return exact
        return rearrange(self.discretize(n_cells).magnitude())

    def gradient_rearrangement(self, n_cells=DEFAULT_CELLS):
        exact = self.exact_gradient_rearrangement
        if exact is not None:
            return exact
        return rearrange(self.discretize(n_cells).gradient_field())

    def restricted_rearrangement(self, radius, n_cells=DEFAULT_CELLS):
        ''' Rearrangement of u restricted to {coordinate < radius}.'''
        exact = self.exact_rearrangement
        if exact is not None and self.decreasing:
            return exact.restrict(self.sub_measure(radius))
        return rearrange(self.discretize(n_cells).magnitude().restrict_to_ball(radius))

    # norms

    def norm(self, pq, quad=DEFAULT_QUAD, kind=NormKind.QUASI):
        return profile_norm(self.rearrangement(), pq, kind, quad)

    def gradient_norm(self, pq, quad=DEFAULT_QUAD, kind=NormKind.QUASI):
        return profile_norm(self.gradient_rearrangement(), pq, kind, quad)

    def closed_form_norm(self, pq):
        ''' ||u||_{p,q} from a closed form, None when there is none.'''
        return None

    def closed_form_gradient_norm(self, pq):
        return None

    def truncation_radius(self, k):
        return self.extent / (k + 1)


class LogPowerSlice(GalleryItem):
    ''' u_{r,alpha,p}(t) = t^{-1/p} ln^{-alpha}(T e^{p alpha} / t) on
    (0, T), T = Omega_n r^n.'''
    tag = Tag.U_SLICE
    name = 'u_slice'

    def __init__(self, r, alpha, p, n=1):
        _check_log_params(r, alpha, n, p)
        self.r, self.alpha, self.p, self.n = float(r), float(alpha), float(p), int(n)
        self.scale = unit_ball_volume(self.n) * self.r ** self.n
        super().__init__(Interval1D(0.0, self.scale))
        self.profile = RadialLogPower(self.r, self.alpha, self.n, self.p).profile

    @property
    def params(self):
        return {'r': self.r, 'alpha': self.alpha, 'p': self.p, 'n': self.n}

    @property
    def extent(self):
        return self.scale

    @property
    def origin(self):
        return (self.domain.a,)

    def coordinate(self, points):
        points = np.asarray(points, dtype=float)
        if points.ndim and points.shape[-1] == 1:
            points = points[..., 0]
        return points - self.domain.a

    def sub_measure(self, radius):
        return min(radius, self.scale)

    def cells(self, n_cells=DEFAULT_CELLS):
        return interval_cells(self.scale, n_cells)

    def radial_value(self, t):
        t = np.asarray(t, dtype=float)
        inside = (t >= 0) & (t < self.scale)
        return np.where(inside, self.profile(np.where(inside, t, 0.0)), 0.0)

    def radial_gradient(self, t):
        t = np.asarray(t, dtype=float)
        inside = (t > 0) & (t < self.scale)
        safe = np.where(inside, t, 1.0)
        x = self.p * self.alpha + np.log(self.scale / safe)
        slope = self.profile(safe) / safe * (1.0 / self.p - self.alpha / x)
        return np.where(inside, slope, np.where(t == 0, math.inf, 0.0))

    @property
    def decreasing(self):
        return True

    @property
    def exact_rearrangement(self):
        return self.profile

    def closed_form_norm(self, pq):
        if not _same_p(pq, self.p):
            return None
        return _log_power_closed_form(self.p, self.alpha, pq.q)


class LogPowerRadial(GalleryItem):
    ''' u_{r,alpha,n,p}(x) = u_{r,alpha,p}(Omega_n |x|^n) on B(0, r).'''
    tag = Tag.U_RADIAL
    name = 'u_radial'

    def __init__(self, r, alpha, n, p):
        _check_log_params(r, alpha, n, p)
        super().__init__(BallDomain(int(n), float(r)))
        self.r, self.alpha, self.n, self.p = float(r), float(alpha), int(n), float(p)
        self.law = RadialLogPower(self.r, self.alpha, self.n, self.p)

    @property
    def params(self):
        return {'r': self.r, 'alpha': self.alpha, 'n': self.n, 'p': self.p}

    def radial_value(self, s):
        return self.law(s)

    def radial_gradient(self, s):
        s = np.asarray(s, dtype=float)
        inside = (s > 0) & (s < self.r)
        safe = np.where(inside, s, self.r)
        x = self.p * self.alpha + self.n * np.log(self.r / safe)
        slope = self.n / safe * self.law(safe) * (1.0 / self.p - self.alpha / x)
        return np.where(inside, slope, np.where(s == 0, math.inf, 0.0))

    @property
    def decreasing(self):
        return True

    @property
    def exact_rearrangement(self):
        return self.law.profile

    def closed_form_norm(self, pq):
        if not _same_p(pq, self.p):
            return None
        return _log_power_closed_form(self.p, self.alpha, pq.q)

    def pointwise_upper_bound(self, s):
        ''' (p alpha)^{-alpha} (Omega_n s^n)^{-1/p}, a majorant of u_rad.'''
        s = np.asarray(s, dtype=float)
        omega = unit_ball_volume(self.n)
        return (self.p * self.alpha) ** (-self.alpha) * (omega * s ** self.n) ** (-1.0 / self.p)


class AntiderivativeTable:
    ''' f_rad(s) = int_s^r u_rad(sigma) d sigma for the log-power law.

    In w = ln(r/sigma) the integral reads
    Omega_n^{-1/p} r^{1-n/p} int_0^{ln(r/s)} e^{-kappa w} (p alpha + n w)^{-alpha} dw
    with kappa = 1 - n/p. Cumulative values are stored on a 4096-point grid,
    uniform in w and so geometric in s down to ``inner_fraction * r``; each
    lookup completes the integral from the nearest grid point with
    Gauss-Legendre nodes, which keeps the table monotone.
    '''
    ORDER = 12

    def __init__(self, r, alpha, n, p, points=DEFAULT_CELLS, inner_fraction=1e-12, quad=DEFAULT_QUAD):
        self.r, self.alpha, self.n, self.p = r, alpha, n, p
        self.kappa = 1.0 - n / p
        self.prefactor = unit_ball_volume(n) ** (-1.0 / p) * r ** self.kappa
        self.quad = quad
        self.nodes, self.node_weights = roots_legendre(self.ORDER)
        self.grid = np.linspace(0.0, math.log(1.0 / inner_fraction), points)
        panels = self._gauss(self.grid[:-1], self.grid[1:])
        self.cumulative = np.concatenate([[0.0], np.cumsum(panels)])
        self._origin = None

    def integrand(self, w):
        return np.exp(-self.kappa * w) * (self.p * self.alpha + self.n * w) ** (-self.alpha)

    def _gauss(self, lo, hi):
        lo, hi = np.asarray(lo, dtype=float), np.asarray(hi, dtype=float)
        half = 0.5 * (hi - lo)
        mid = 0.5 * (hi + lo)
        nodes = mid[..., np.newaxis] + half[..., np.newaxis] * self.nodes
        return half * np.sum(self.node_weights * self.integrand(nodes), axis=-1)

    def integral(self, w):
        ''' int_0^w of the integrand, w >= 0 (array).'''
        w = np.atleast_1d(np.asarray(w, dtype=float))
        out = np.empty_like(w)
        w_max = self.grid[-1]
        on_grid = w <= w_max
        if np.any(on_grid):
            wg = w[on_grid]
            j = np.clip(np.searchsorted(self.grid, wg, side='right') - 1, 0, len(self.grid) - 2)
            out[on_grid] = self.cumulative[j] + self._gauss(self.grid[j], wg)
        for i in np.flatnonzero(~on_grid):
            if math.isinf(w[i]):
                out[i] = self.origin_integral()
            else:
                out[i] = self.cumulative[-1] + integrate_adaptive(
                    lambda x: float(self.integrand(x)), w_max, w[i], self.quad, epsabs=0.0)
        return out

    def origin_integral(self):
        ''' int_0^inf, finite iff p > n.'''
        if self.kappa <= 0:
            return math.inf
        if self._origin is None:
            self._origin = self.cumulative[-1] + integrate_adaptive(
                lambda x: float(self.integrand(x)), self.grid[-1], np.inf, self.quad)
        return self._origin

    def __call__(self, s):
        s = np.asarray(s, dtype=float)
        flat = np.atleast_1d(s)
        out = np.zeros_like(flat)
        inside = (flat < self.r) & (flat >= 0)
        if np.any(inside):
            with np.errstate(divide='ignore'):
                w = np.log(self.r / flat[inside])
            out[inside] = self.prefactor * self.integral(w)
        return out.reshape(s.shape)

    def by_quadrature(self, s):
        ''' Direct adaptive quadrature of f_rad at a single radius.'''
        if s >= self.r:
            return 0.0
        if s == 0:
            return self.prefactor * self.origin_integral()
        upper = math.log(self.r / s)
        return self.prefactor * integrate_adaptive(
            lambda x: float(self.integrand(x)), 0.0, upper, self.quad, epsabs=0.0)


class LogPowerAntiderivative(GalleryItem):
    ''' v_{r,alpha,n,p}(x) = f_rad(|x|), with |grad v| = u_rad(|x|).'''
    tag = Tag.V_ANTIDERIVATIVE
    name = 'v'

    def __init__(self, r, alpha, n, p, quad=DEFAULT_QUAD):
        _check_log_params(r, alpha, n, p)
        super().__init__(BallDomain(int(n), float(r)))
        self.r, self.alpha, self.n, self.p = float(r), float(alpha), int(n), float(p)
        self.law = RadialLogPower(self.r, self.alpha, self.n, self.p)
        self.table = None if self.critical else AntiderivativeTable(
            self.r, self.alpha, self.n, self.p, quad=quad)
        self.quad = quad

    @property
    def params(self):
        return {'r': self.r, 'alpha': self.alpha, 'n': self.n, 'p': self.p}

    @property
    def critical(self):
        ''' p = n, where f_rad has a closed form.'''
        return math.isclose(self.p, self.n, rel_tol=1e-14)

    def closed_form_value(self, s):
        ''' f_rad for p = n: logarithmic for alpha = 1, a power of the
        logarithm for alpha < 1.'''
        if not self.critical:
            raise DomainError('f_rad has a closed form only for p = n')
        s = np.asarray(s, dtype=float)
        n, alpha = self.n, self.alpha
        lead = unit_ball_volume(n) ** (-1.0 / n)
        inside = (s < self.r) & (s >= 0)
        with np.errstate(divide='ignore'):
            w = np.log(self.r / np.where(inside, s, self.r))
        if alpha == 1:
            out = lead / n * np.log1p(w)
        else:
            out = lead * n ** (-alpha) * ((alpha + w) ** (1.0 - alpha) - alpha ** (1.0 - alpha)) / (1.0 - alpha)
        return np.where(inside, out, 0.0)

    def radial_value(self, s):
        if self.critical:
            return self.closed_form_value(s)
        return self.table(s)

    def radial_value_quadrature(self, s):
        ''' f_rad(s) by direct adaptive quadrature (no table).'''
        table = self.table or AntiderivativeTable(self.r, self.alpha, self.n, self.p,
                                                  points=2, quad=self.quad)
        return table.by_quadrature(float(s))

    def radial_gradient(self, s):
        return self.law(s)

    def origin_bound(self):
        ''' (p alpha)^{-alpha} Omega_n^{-1/p} (1 - n/p)^{-1} r^{1-n/p}, a bound
        for v(0) when p > n.'''
        if not self.p > self.n:
            msg = f'v(0) is finite only for p > n, got n={self.n}, p={self.p}'
            raise DomainError(msg)
        kappa = 1.0 - self.n / self.p
        return ((self.p * self.alpha) ** (-self.alpha) * unit_ball_volume(self.n) ** (-1.0 / self.p)
                / kappa * self.r ** kappa)

    @property
    def decreasing(self):
        return True

    @property
    def gradient_decreasing(self):
        return True

    @property
    def vanishes_on_boundary(self):
        return True

    @property
    def exact_gradient_rearrangement(self):
        return self.law.profile

    def closed_form_gradient_norm(self, pq):
        if not _same_p(pq, self.p):
            return None
        return _log_power_closed_form(self.p, self.alpha, pq.q)


class PowerSingularity(GalleryItem):
    ''' u_r(x) = |x|^{-n/p} on B(0, r).'''
    tag = Tag.POWER_SINGULARITY
    name = 'power_singularity'

    def __init__(self, r, n, p):
        _check_ball_params(r, n, p)
        super().__init__(BallDomain(int(n), float(r)))
        self.r, self.n, self.p = float(r), int(n), float(p)
        self.law = RadialPower(1.0, self.n / self.p)
        self.gradient_law = RadialPower(self.n / self.p, self.n / self.p + 1.0)

    @property
    def params(self):
        return {'r': self.r, 'n': self.n, 'p': self.p}

    def radial_value(self, s):
        s = np.asarray(s, dtype=float)
        return np.where(s < self.r, self.law(s), 0.0)

    def radial_gradient(self, s):
        s = np.asarray(s, dtype=float)
        return np.where(s <= self.r, self.gradient_law(s), 0.0)

    @property
    def decreasing(self):
        return True

    @property
    def gradient_decreasing(self):
        return True

    @property
    def exact_rearrangement(self):
        return self.law.rearrangement(self.n, self.r)

    @property
    def exact_gradient_rearrangement(self):
        return self.gradient_law.rearrangement(self.n, self.r)

    def closed_form_norm(self, pq):
        if not _same_p(pq, self.p):
            return None
        if pq.q is INFINITY:
            return NormValue.finite(unit_ball_volume(self.n) ** (1.0 / self.p))
        return NormValue.infinite(Divergence.HEAD_DIVERGENCE)


def gradient_coefficient(n, p):
    ''' C(n, p): 1 for p = n > 1, 1 - n/p otherwise.'''
    return 1.0 if math.isclose(p, n, rel_tol=1e-14) else 1.0 - n / p


def boundary_constant(n, p, r):
    ''' c(n, p, r): ln r for p = n, r^{1-n/p} otherwise.'''
    if math.isclose(p, n, rel_tol=1e-14):
        return math.log(r)
    return r ** (1.0 - n / p)


class PowerFamily(GalleryItem):
    ''' u_p(x) = ln|x| for p = n > 1, |x|^{1-n/p} otherwise, observed on
    B(0, r).'''
    tag = Tag.UP_FAMILY
    name = 'up'

    def __init__(self, n, p, r=1.0):
        _check_ball_params(r, n, p)
        if int(n) == 1 and math.isclose(p, 1.0):
            raise DomainError('u_p is not defined for p = n = 1')
        super().__init__(BallDomain(int(n), float(r)))
        self.n, self.p, self.r = int(n), float(p), float(r)
        self.log_branch = math.isclose(self.p, self.n, rel_tol=1e-14)
        self.coefficient = gradient_coefficient(self.n, self.p)
        self.gradient_law = RadialPower(abs(self.coefficient), self.n / self.p)

    @property
    def params(self):
        return {'n': self.n, 'p': self.p, 'r': self.r}

    def radial_value(self, s):
        s = np.asarray(s, dtype=float)
        if self.log_branch:
            out = np.log(s)
        else:
            out = s ** (1.0 - self.n / self.p)
        return np.where(s <= self.r, out, 0.0)

    def radial_gradient(self, s):
        s = np.asarray(s, dtype=float)
        return np.where(s <= self.r, self.gradient_law(s), 0.0)

    @property
    def decreasing(self):
        if self.log_branch:
            return self.r <= 1
        return self.p < self.n

    @property
    def gradient_decreasing(self):
        return True

    @property
    def vanishes_on_boundary(self):
        return False

    @property
    def exact_rearrangement(self):
        if not self.log_branch and self.p < self.n:
            return RadialPower(1.0, self.n / self.p - 1.0).rearrangement(self.n, self.r)
        return None

    @property
    def exact_gradient_rearrangement(self):
        return self.gradient_law.rearrangement(self.n, self.r)

    def closed_form_gradient_norm(self, pq):
        if not _same_p(pq, self.p):
            return None
        if pq.q is INFINITY:
            return NormValue.finite(abs(self.coefficient) * unit_ball_volume(self.n) ** (1.0 / self.p))
        return NormValue.infinite(Divergence.HEAD_DIVERGENCE)

    def truncation_radius(self, k):
        return 1.0 / (k + 1)


class Shifted(GalleryItem):
    ''' u - c for a gallery item u and a constant c.'''
    tag = Tag.SHIFTED
    name = 'shift'

    def __init__(self, parent, constant, alias=None):
        super().__init__(parent.domain)
        self.parent = parent
        self.constant = float(constant)
        self.alias = alias

    @property
    def id(self):
        if self.alias is not None:
            return self.alias
        return f'shift(c={format_number(self.constant)},{self.parent.id})'

    @property
    def p(self):
        return getattr(self.parent, 'p', None)

    @property
    def extent(self):
        return self.parent.extent

    @property
    def origin(self):
        return self.parent.origin

    def coordinate(self, points):
        return self.parent.coordinate(points)

    def sub_measure(self, radius):
        return self.parent.sub_measure(radius)

    def cells(self, n_cells=DEFAULT_CELLS):
        return self.parent.cells(n_cells)

    def radial_value(self, s):
        s = np.asarray(s, dtype=float)
        return np.where(s < self.extent, self.parent.radial_value(s) - self.constant, 0.0)

    def radial_gradient(self, s):
        return self.parent.radial_gradient(s)

    @property
    def gradient_decreasing(self):
        return self.parent.gradient_decreasing

    @property
    def exact_gradient_rearrangement(self):
        return self.parent.exact_gradient_rearrangement

    def closed_form_gradient_norm(self, pq):
        return self.parent.closed_form_gradient_norm(pq)

    def truncation_radius(self, k):
        return self.parent.truncation_radius(k)


class Truncation(GalleryItem):
    ''' The item frozen at its value on the sphere of radius rho_k.

    rho_k = 1/(k+1) for the u_p family (shifted or not) and extent/(k+1) for
    every other item.
    '''
    tag = Tag.TRUNCATION
    name = 'trunc'

    def __init__(self, parent, k):
        if isinstance(k, bool) or int(k) != k or k < 1:
            msg = f'truncation index must be an integer >= 1, got {k!r}'
            raise DomainError(msg)
        super().__init__(parent.domain)
        self.parent = parent
        self.k = int(k)
        self.radius = parent.truncation_radius(self.k)

    @property
    def id(self):
        return f'trunc(k={self.k},{self.parent.id})'

    @property
    def extent(self):
        return self.parent.extent

    @property
    def origin(self):
        return self.parent.origin

    def coordinate(self, points):
        return self.parent.coordinate(points)

    def sub_measure(self, radius):
        return self.parent.sub_measure(radius)

    def cells(self, n_cells=DEFAULT_CELLS):
        return self.parent.cells(n_cells)

    def radial_value(self, s):
        s = np.asarray(s, dtype=float)
        return self.parent.radial_value(np.maximum(s, self.radius))

    def radial_gradient(self, s):
        s = np.asarray(s, dtype=float)
        return np.where(s < self.radius, 0.0, self.parent.radial_gradient(np.maximum(s, self.radius)))

    @property
    def decreasing(self):
        return self.parent.decreasing

    @property
    def vanishes_on_boundary(self):
        return self.parent.vanishes_on_boundary

    def truncation_radius(self, k):
        return self.parent.truncation_radius(k)


class Linear(GalleryItem):
    ''' u(x) = slope (x - a) on (a, b).'''
    tag = Tag.LINEAR
    name = 'linear'

    def __init__(self, slope, a, b):
        super().__init__(Interval1D(float(a), float(b)))
        if not self.domain.bounded:
            raise DomainError('linear items live on bounded intervals')
        self.slope = float(slope)

    @property
    def params(self):
        return {'slope': self.slope, 'a': self.domain.a, 'b': self.domain.b}

    @property
    def extent(self):
        return self.domain.length

    @property
    def origin(self):
        return (self.domain.a,)

    def coordinate(self, points):
        points = np.asarray(points, dtype=float)
        if points.ndim and points.shape[-1] == 1:
            points = points[..., 0]
        return points - self.domain.a

    def sub_measure(self, radius):
        return min(radius, self.extent)

    def cells(self, n_cells=DEFAULT_CELLS):
        return interval_cells(self.extent, n_cells, geometric=False)

    def radial_value(self, s):
        s = np.asarray(s, dtype=float)
        return np.where((s >= 0) & (s <= self.extent), self.slope * s, 0.0)

    def radial_gradient(self, s):
        s = np.asarray(s, dtype=float)
        return np.where((s >= 0) & (s <= self.extent), abs(self.slope), 0.0)

    @property
    def vanishes_on_boundary(self):
        return self.slope == 0

    @property
    def gradient_decreasing(self):
        return True

    @property
    def exact_gradient_rearrangement(self):
        return IndicatorProfile(abs(self.slope), self.extent)

    def closed_form_gradient_norm(self, pq):
        length = self.extent
        if pq.q is INFINITY:
            return NormValue.finite(abs(self.slope) * length ** (1.0 / pq.p))
        return NormValue.finite((pq.p / pq.q) ** (1.0 / pq.q) * abs(self.slope) * length ** (1.0 / pq.p))


class ZeroExtension(GalleryItem):
    ''' The parent item on its domain and 0 on the rest of a larger domain.'''
    tag = Tag.ZERO_EXTENSION
    name = 'extend'

    def __init__(self, parent, bigger):
        if not bigger.contains_domain(parent.domain):
            msg = f'{bigger} does not contain {parent.domain}'
            raise DomainError(msg)
        super().__init__(bigger)
        self.parent = parent

    @property
    def id(self):
        if isinstance(self.domain, Interval1D):
            args = f'a={format_number(self.domain.a)},b={format_number(self.domain.b)}'
        else:
            args = f'r={format_number(self.domain.r)}'
        return f'extend({args},{self.parent.id})'

    @property
    def extent(self):
        return self.parent.extent

    @property
    def origin(self):
        return self.parent.origin

    def coordinate(self, points):
        return self.parent.coordinate(points)

    def sub_measure(self, radius):
        return self.parent.sub_measure(radius)

    def radial_value(self, s):
        return self.parent.radial_value(s)

    def radial_gradient(self, s):
        return self.parent.radial_gradient(s)

    def evaluator(self, points):
        inside = self.parent.domain.contains(points)
        with np.errstate(divide='ignore', invalid='ignore', over='ignore'):
            values = self.parent.evaluator(points)
        return np.where(inside, values, 0.0)

    __call__ = evaluator

    def gradient_magnitude(self, points):
        inside = self.parent.domain.contains(points)
        with np.errstate(divide='ignore', invalid='ignore', over='ignore'):
            values = self.parent.gradient_magnitude(points)
        return np.where(inside, values, 0.0)

    def discretize(self, n_cells=DEFAULT_CELLS):
        inner = self.parent.discretize(n_cells)
        extra = self.domain.measure - self.parent.domain.measure
        if extra <= 1e-12 * self.domain.measure:
            return SignedField(self.domain, inner.weights, inner.values, inner.gradients, inner.radii)
        return SignedField(
            self.domain,
            np.append(inner.weights, extra),
            np.append(inner.values, 0.0),
            np.append(inner.gradients, 0.0),
            np.append(inner.radii, self.parent.extent),
        )

    @property
    def decreasing(self):
        return self.parent.decreasing

    @property
    def gradient_decreasing(self):
        return self.parent.gradient_decreasing

    @property
    def vanishes_on_boundary(self):
        return True

    @property
    def exact_rearrangement(self):
        return self.parent.exact_rearrangement

    @property
    def exact_gradient_rearrangement(self):
        return self.parent.exact_gradient_rearrangement

    def rearrangement(self, n_cells=DEFAULT_CELLS):
        return self.parent.rearrangement(n_cells)

    def gradient_rearrangement(self, n_cells=DEFAULT_CELLS):
        return self.parent.gradient_rearrangement(n_cells)

    def closed_form_norm(self, pq):
        return self.parent.closed_form_norm(pq)

    def closed_form_gradient_norm(self, pq):
        return self.parent.closed_form_gradient_norm(pq)


def _check_ball_params(r, n, p):
    if not r > 0 or math.isinf(r):
        msg = f'radius must be positive and finite, got {r}'
        raise DomainError(msg)
    if isinstance(n, bool) or int(n) != n or n < 1:
        msg = f'dimension must be a positive integer, got {n!r}'
        raise DomainError(msg)
    if not 1 < p < math.inf:
        msg = f'p must lie in (1, inf), got {p}'
        raise DomainError(msg)


def _check_log_params(r, alpha, n, p):
    _check_ball_params(r, n, p)
    if not 0 < alpha <= 1:
        msg = f'alpha must lie in (0, 1], got {alpha}'
        raise DomainError(msg)


def make_u_slice(r, alpha, p, n=1):
    return LogPowerSlice(r, alpha, p, n)


def make_u_radial(r, alpha, n, p):
    ''' The radial log-power witness u_{r,alpha,n,p} on B(0, r).

    Parameters
    ----------
    r : float
        Ball radius, r > 0.
    alpha : float
        Log exponent in (0, 1]; the function lies in L^{p,q} iff q > 1/alpha.
    n : int
        Dimension.
    p : float
        Primary exponent in (1, inf).

    Return
    ------
    item : LogPowerRadial
    '''
    return LogPowerRadial(r, alpha, n, p)


def make_v(r, alpha, n, p, quad=DEFAULT_QUAD):
    ''' The antiderivative v_{r,alpha,n,p}, vanishing on the sphere |x| = r,
    whose gradient magnitude is u_{r,alpha,n,p}.'''
    return LogPowerAntiderivative(r, alpha, n, p, quad)


def make_power_singularity(r, n, p):
    return PowerSingularity(r, n, p)


def make_up(n, p, r=1.0):
    return PowerFamily(n, p, r)


def make_up_shifted(n, p, r):
    ''' u_{r,p} = u_p - c(n,p,r), which vanishes on the sphere |x| = r.'''
    parent = PowerFamily(n, p, r)
    alias = f'urp(n={int(n)},p={format_number(p)},r={format_number(r)})'
    return Shifted(parent, boundary_constant(int(n), float(p), float(r)), alias=alias)


def make_linear(slope, a, b):
    return Linear(slope, a, b)


def lower_envelope_profile(r, alpha, n, p):
    ''' h(t) = t^{-1/p1} ln^{-alpha}(Omega_n r^n e^{p alpha} / t) with
    p1 = np/(n-p).'''
    p1 = n * p / (n - p)
    scale = unit_ball_volume(n) * r ** n

    def h(t):
        t = np.asarray(t, dtype=float)
        return t ** (-1.0 / p1) * (p * alpha + np.log(scale / t)) ** (-alpha)

    return h


def lower_envelope_constant(r, alpha, n, p, grid_points=10_000):
    ''' The minimum point and value of h for 1 < p < n.

    t_crit = Omega_n r^n e^{p alpha - p1 alpha} and m = h(t_crit). The
    minimum is confirmed on a log-spaced grid of (0, Omega_n r^n), together
    with the lower bound u_rad(s) >= m (Omega_n s^n)^{-1/n}.

    Return
    ------
    t_crit : float
    m : float
    '''
    _check_log_params(r, alpha, n, p)
    if not p < n:
        msg = f'the lower envelope needs 1 < p < n, got n={n}, p={p}'
        raise DomainError(msg)
    p1 = n * p / (n - p)
    omega = unit_ball_volume(n)
    scale = omega * r ** n
    t_crit = scale * math.exp(p * alpha - p1 * alpha)
    m = t_crit ** (-1.0 / p1) * (p1 * alpha) ** (-alpha)

    h = lower_envelope_profile(r, alpha, n, p)
    grid = scale * np.geomspace(1e-8, 1.0 - 1e-12, grid_points)
    if np.any(h(grid) < m * (1 - 1e-12)):
        raise PreconditionError('h falls below h(t_crit) on the grid')
    radii = (grid / omega) ** (1.0 / n)
    law = RadialLogPower(r, alpha, n, p)
    if np.any(law(radii) < m * grid ** (-1.0 / n) * (1 - 1e-12)):
        raise PreconditionError('u_rad falls below the lower envelope on the grid')
    logger.debug('lower envelope r=%g alpha=%g n=%d p=%g: t_crit=%g m=%g', r, alpha, n, p, t_crit, m)
    return t_crit, m


def sobolev_norm(item, pq, kind=NormKind.STARSTAR, quad=DEFAULT_QUAD):
    ''' The Sobolev-Lorentz norm (||u||^s + ||grad u||^s)^{1/s}, s = min(p, q).

    ``kind`` selects ||.||_{(p,q)} (STARSTAR) or ||.||_{p,q} (QUASI) for both
    parts. An INFINITE part makes the result INFINITE with its reason.
    '''
    if not isinstance(pq, ExponentPair):
        pq = ExponentPair(*pq)
    value = item.norm(pq, quad, kind)
    gradient = item.gradient_norm(pq, quad, kind)
    for part in (value, gradient):
        if not part.is_finite:
            return part
    s = pq.p if pq.q is INFINITY else min(pq.p, pq.q)
    return NormValue.finite((value.value ** s + gradient.value ** s) ** (1.0 / s))

