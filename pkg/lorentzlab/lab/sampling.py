''' Point pairs for Hoelder seminorm estimates and random simple fields.'''
import logging
from enum import Enum

import numpy as np

from ..exceptions import DomainError
from ..foundations import BallDomain, Interval1D
from ..rearrangement import SampledField

logger = logging.getLogger(__name__)

BLOCK_SIZE = 256
GEOMETRIC_LEVELS = 41
WINDOW_LEVELS = 16


class Strategy(Enum):
    UNIFORM = 'UNIFORM'
    RADIAL_GEOMETRIC = 'RADIAL_GEOMETRIC'
    ENDPOINT = 'ENDPOINT'


class PairSampler:
    ''' Deterministic pairs (x, y) of points in the closure of a domain.

    Pairs are produced in blocks, block b drawn from
    ``numpy.random.default_rng([seed, b])``, so a sampler with a larger count
    yields a superset of the pairs of a smaller one.

    Attributes
    ----------
    domain : BallDomain/Interval1D
    count : int
        Number of pairs.
    strategy : Strategy/str
        UNIFORM draws independent uniform points. RADIAL_GEOMETRIC puts both
        points on rays through ``focus`` at radii reach*2^-j, j=0..40 (first
        block: every pair of levels on one ray, later blocks jittered levels).
        ENDPOINT mixes boundary points, near-focus points and uniform points.
    seed : int
    focus : tuple
        The singular point of the function under study, the domain center by
        default.
    include_focus : bool
        Add pairs (x, focus); callers drop them where the function is not
        finite at the focus.
    radial_window : tuple/None
        (lo, hi): restrict RADIAL_GEOMETRIC radii to [lo, hi].
    '''
    def __init__(self, domain, count=4096, strategy=Strategy.RADIAL_GEOMETRIC, seed=0,
                 focus=None, include_focus=True, radial_window=None):
        if not isinstance(domain, (BallDomain, Interval1D)):
            msg = f'pairs are sampled in balls or intervals, got {domain!r}'
            raise DomainError(msg)
        if isinstance(domain, Interval1D) and not domain.bounded:
            raise DomainError('pairs are sampled in bounded intervals only')
        if int(count) < 1:
            msg = f'need at least one pair, got count={count}'
            raise DomainError(msg)
        if int(seed) < 0:
            msg = f'seed must be >= 0, got {seed}'
            raise DomainError(msg)
        self.domain = domain
        self.count = int(count)
        self.strategy = Strategy(strategy)
        self.seed = int(seed)
        self.focus = np.asarray(domain.center if focus is None else focus, dtype=float).reshape(domain.n)
        self.include_focus = include_focus
        if radial_window is not None:
            lo, hi = float(radial_window[0]), float(radial_window[1])
            if not 0 < lo < hi:
                msg = f'radial window needs 0 < lo < hi, got {radial_window}'
                raise DomainError(msg)
            radial_window = (lo, hi)
        self.radial_window = radial_window
        self._explicit = None
        self._pairs = None

    @classmethod
    def from_pairs(cls, domain, x, y):
        ''' A sampler returning exactly the given pairs.'''
        x = np.asarray(x, dtype=float).reshape(-1, domain.n)
        y = np.asarray(y, dtype=float).reshape(-1, domain.n)
        if x.shape != y.shape or len(x) == 0:
            raise DomainError('explicit pairs need two nonempty arrays of equal shape')
        sampler = cls(domain, len(x))
        sampler._explicit = (x, y)
        return sampler

    @classmethod
    def all_pairs(cls, domain, points):
        ''' Every unordered pair of distinct points.'''
        points = np.asarray(points, dtype=float).reshape(-1, domain.n)
        i, j = np.triu_indices(len(points), k=1)
        return cls.from_pairs(domain, points[i], points[j])

    def refined(self, factor=2):
        ''' The same sampler with ``factor`` times as many pairs.'''
        sampler = PairSampler(self.domain, self.count * int(factor), self.strategy, self.seed,
                              tuple(self.focus), self.include_focus, self.radial_window)
        return sampler

    def to_dict(self):
        return {'count': self.count, 'strategy': self.strategy.value, 'seed': self.seed,
                'focus': self.focus.tolist(), 'include_focus': self.include_focus,
                'radial_window': None if self.radial_window is None else list(self.radial_window)}

    def __len__(self):
        return self.count

    # geometry

    def _directions(self, rng, size):
        n = self.domain.n
        if n == 1:
            signs = np.array([1.0, -1.0])
            valid = signs[self._reach(signs[:, np.newaxis]) > 0]
            return rng.choice(valid, size=size)[:, np.newaxis]
        d = rng.standard_normal((size, n))
        return d / np.linalg.norm(d, axis=1, keepdims=True)

    def _reach(self, directions):
        ''' Distance from the focus to the boundary along each direction.'''
        if isinstance(self.domain, Interval1D):
            d = directions[:, 0]
            return np.where(d > 0, self.domain.b - self.focus[0], self.focus[0] - self.domain.a)
        offset = self.focus - np.asarray(self.domain.center)
        b = directions @ offset
        c = offset @ offset - self.domain.r ** 2
        return -b + np.sqrt(np.maximum(b ** 2 - c, 0.0))

    def _levels(self, reach):
        ''' Radii of the geometric ladder along a ray of length ``reach``.'''
        if self.radial_window is None:
            return reach * 2.0 ** -np.arange(GEOMETRIC_LEVELS)
        lo, hi = self.radial_window
        hi = min(hi, reach)
        return np.geomspace(hi, min(lo, hi), WINDOW_LEVELS)

    def _uniform_points(self, rng, size):
        if isinstance(self.domain, Interval1D):
            return rng.uniform(self.domain.a, self.domain.b, size=(size, 1))
        n = self.domain.n
        d = rng.standard_normal((size, n))
        d /= np.linalg.norm(d, axis=1, keepdims=True)
        radii = self.domain.r * rng.uniform(size=size) ** (1.0 / n)
        return np.asarray(self.domain.center) + radii[:, np.newaxis] * d

    # blocks

    def _grid_block(self, rng):
        direction = self._directions(rng, 1)
        levels = self._levels(float(self._reach(direction)[0]))
        i, j = np.triu_indices(len(levels), k=1)
        x = self.focus + levels[i, np.newaxis] * direction
        y = self.focus + levels[j, np.newaxis] * direction
        if self.include_focus:
            x = np.concatenate([x, self.focus + levels[:, np.newaxis] * direction])
            y = np.concatenate([y, np.repeat(self.focus[np.newaxis], len(levels), axis=0)])
        return x, y

    def _radial_block(self, rng):
        size = BLOCK_SIZE
        first = self._directions(rng, size)
        reach = self._reach(first)
        if self.radial_window is None:
            depth = rng.uniform(0, GEOMETRIC_LEVELS - 1, size=(2, size))
            radii = reach * 2.0 ** -depth
        else:
            lo, hi = self.radial_window
            hi = np.minimum(hi, reach)
            lo = np.minimum(lo, hi)
            radii = np.exp(rng.uniform(np.log(lo), np.log(hi), size=(2, size)))
        # half of the pairs leave the ray for a second random direction
        second = self._directions(rng, size)
        off_ray = rng.uniform(size=size) < 0.5
        second = np.where(off_ray[:, np.newaxis], second, first)
        radii[1] = np.minimum(radii[1], self._reach(second))
        x = self.focus + radii[0, :, np.newaxis] * first
        y = self.focus + radii[1, :, np.newaxis] * second
        return x, y

    def _endpoint_block(self, rng):
        size = BLOCK_SIZE
        kind = rng.integers(0, 4, size=size)
        d1, d2 = self._directions(rng, size), self._directions(rng, size)
        r1, r2 = self._reach(d1), self._reach(d2)
        boundary = self.focus + r1[:, np.newaxis] * d1
        near = self.focus + (r2 * 10.0 ** -rng.integers(1, 13, size=size))[:, np.newaxis] * d2
        other_boundary = self.focus + r2[:, np.newaxis] * d2
        uniform_x, uniform_y = self._uniform_points(rng, size), self._uniform_points(rng, size)
        focus = np.repeat(self.focus[np.newaxis], size, axis=0)
        if not self.include_focus:
            focus = near
        x = np.select([kind[:, np.newaxis] == k for k in range(4)],
                      [boundary, boundary, uniform_x, uniform_x])
        y = np.select([kind[:, np.newaxis] == k for k in range(4)],
                      [near, other_boundary, focus, uniform_y])
        return x, y

    def _block(self, index):
        rng = np.random.default_rng([self.seed, index])
        if self.strategy is Strategy.UNIFORM:
            return self._uniform_points(rng, BLOCK_SIZE), self._uniform_points(rng, BLOCK_SIZE)
        if self.strategy is Strategy.ENDPOINT:
            return self._endpoint_block(rng)
        if index == 0:
            return self._grid_block(rng)
        return self._radial_block(rng)

    def pairs(self):
        ''' (x, y), two arrays of shape (count, n).'''
        if self._explicit is not None:
            return self._explicit
        if self._pairs is None:
            xs, ys, total, index = [], [], 0, 0
            while total < self.count:
                x, y = self._block(index)
                xs.append(x)
                ys.append(y)
                total += len(x)
                index += 1
            x = np.concatenate(xs)[:self.count]
            y = np.concatenate(ys)[:self.count]
            logger.debug('sampled %d %s pairs in %d blocks', self.count, self.strategy.value, index)
            self._pairs = (x, y)
        return self._pairs


def sample_simple_field(domain, cells, rng, weights=None, tie_fraction=0.2, zero_fraction=0.1):
    ''' A random simple function on ``domain``.

    Parameters
    ----------
    domain : BallDomain/Interval1D
    cells : int
        Number of cells.
    rng : numpy.random.Generator
    weights : numpy.ndarray/None
        Reuse a cell partition (weights summing to the domain measure);
        drawn from a flat Dirichlet distribution when None.
    tie_fraction, zero_fraction : float
        Share of cells copying another cell's magnitude, and of zero cells.

    Return
    ------
    field : SampledField
        Magnitudes in [0, 10), cell radii uniform in (0, r).
    '''
    cells = int(cells)
    if cells < 1:
        msg = f'need at least one cell, got {cells}'
        raise DomainError(msg)
    if weights is None:
        weights = rng.dirichlet(np.ones(cells)) * domain.measure
        # dirichlet may underflow for tiny shares
        weights = np.maximum(weights, 1e-300)
    weights = np.asarray(weights, dtype=float)
    if len(weights) != cells:
        msg = f'{len(weights)} weights given for {cells} cells'
        raise DomainError(msg)
    magnitudes = rng.uniform(0.0, 10.0, size=cells)
    if cells > 1:
        ties = rng.uniform(size=cells) < tie_fraction
        magnitudes[ties] = magnitudes[rng.integers(0, cells, size=int(ties.sum()))]
    magnitudes[rng.uniform(size=cells) < zero_fraction] = 0.0
    radii = rng.uniform(0.0, domain.r, size=cells)
    return SampledField(domain, weights, magnitudes, radii)
