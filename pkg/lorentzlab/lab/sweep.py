''' Parameter sweeps of a gallery family, tabulated for external plotting.'''
from enum import Enum
import itertools
import logging

import pandas as pd

from ..exceptions import DomainError
from ..foundations import INFINITY, ExponentPair, as_exponent
from ..gallery import parse_item, sobolev_norm
from ..gallery.parser import SIGNATURES
from ..norms import DEFAULT_QUAD, NormKind, NormValue, inclusion_ratio
from ..util import format_number
from .checks import poincare_ratio

logger = logging.getLogger(__name__)

EXPONENT_KEYS = ('q', 's')


class Functional(Enum):
    NORM = 'norm'
    STARSTAR = 'starstar'
    GRADIENT = 'gradient'
    SOBOLEV = 'sobolev'
    POINCARE_RATIO = 'poincare-ratio'
    INCLUSION_RATIO = 'inclusion-ratio'


def parse_grid(text):
    ''' "alpha=0.25,0.5,1;q=1,2,inf" -> {'alpha': [0.25, 0.5, 1.0], 'q': [1.0, 2.0, inf]}.'''
    grid = {}
    for part in filter(None, (chunk.strip() for chunk in text.split(';'))):
        key, sep, values = part.partition('=')
        key = key.strip()
        if not sep or not key:
            msg = f'grid entries look like key=v1,v2,..., got {part!r}'
            raise DomainError(msg)
        if key in grid:
            msg = f'grid key {key!r} given twice'
            raise DomainError(msg)
        try:
            grid[key] = [float(as_exponent(value)) for value in values.split(',') if value.strip()]
        except ValueError:
            msg = f'grid values of {key!r} must be numbers or inf, got {values!r}'
            raise DomainError(msg) from None
        if not grid[key]:
            msg = f'grid key {key!r} has no values'
            raise DomainError(msg)
    if not grid:
        raise DomainError('empty parameter grid')
    return grid


def _item_id(family, params):
    args = ','.join(f'{key}={format_number(value)}' for key, value in params.items())
    return f'{family}({args})'


def _split_grid(family, grid):
    if family not in SIGNATURES:
        msg = f'unknown gallery family {family!r}, known: {", ".join(sorted(SIGNATURES))}'
        raise DomainError(msg)
    required, optional, n_children = SIGNATURES[family]
    if n_children:
        msg = f'{family} wraps another item and cannot be swept directly'
        raise DomainError(msg)
    item_keys = required + optional
    exponent_keys = EXPONENT_KEYS + (() if 'p' in item_keys else ('p',))
    unknown = [key for key in grid if key not in item_keys + exponent_keys]
    if unknown:
        msg = f'grid keys {unknown} are neither parameters of {family} nor exponents {exponent_keys}'
        raise DomainError(msg)
    empty = [key for key, values in grid.items() if len(values) == 0]
    if empty:
        msg = f'grid keys {empty} have no values'
        raise DomainError(msg)
    return item_keys


def _evaluate(item, p, q, s, functional, quad):
    ''' (value, reason): one of them is None.'''
    if functional is Functional.POINCARE_RATIO:
        rho = poincare_ratio(item, ExponentPair(p, q), quad)
        if rho is None:
            return None, 'infinite gradient norm'
        return rho, None
    if functional is Functional.INCLUSION_RATIO:
        if s is None:
            raise DomainError('the inclusion ratio needs a second exponent s in the grid')
        result = inclusion_ratio(item.rearrangement(), p, q, s, quad)
    elif functional is Functional.GRADIENT:
        result = item.gradient_norm(ExponentPair(p, q), quad)
    elif functional is Functional.SOBOLEV:
        result = sobolev_norm(item, ExponentPair(p, q), NormKind.STARSTAR, quad)
    elif functional is Functional.STARSTAR:
        result = item.norm(ExponentPair(p, q), quad, NormKind.STARSTAR)
    else:
        result = item.norm(ExponentPair(p, q), quad)
    if isinstance(result, NormValue) and not result.is_finite:
        return None, result.reason.value
    return float(result), None


def sweep(family, grid, functional='norm', quad=DEFAULT_QUAD):
    ''' Evaluate a functional over the Cartesian product of a parameter grid.

    Parameters
    ----------
    family : str
        A gallery family without nested items, e.g. 'u_radial' or 'v'.
    grid : dict
        Parameter name -> list of values. Keys are the family's parameters
        plus the exponents 'q' (secondary exponent, default inf) and 's'
        (second exponent of the inclusion ratio); 'p' is a grid key only for
        families without their own p, and defaults to the item's p.
    functional : str/Functional
        norm, starstar, gradient, sobolev, poincare-ratio or inclusion-ratio.
    quad : QuadratureSpec

    Return
    ------
    table : pandas.DataFrame
        One row per grid point in product order with the grid values, the item
        id, 'status' (FINITE/INFINITE), 'value' and 'reason'.
    '''
    functional = Functional(functional)
    item_keys = _split_grid(family, grid)
    keys = list(grid.keys())
    rows = []
    for point in itertools.product(*(grid[key] for key in keys)):
        point = dict(zip(keys, point))
        params = {key: value for key, value in point.items() if key in item_keys}
        item_id = _item_id(family, params)
        item = parse_item(item_id)
        p = point.get('p', getattr(item, 'p', None))
        if p is None:
            msg = f'{family} has no exponent of its own, add p to the grid'
            raise DomainError(msg)
        q = as_exponent(point.get('q', INFINITY))
        s = point.get('s')
        value, reason = _evaluate(item, p, q, None if s is None else as_exponent(s), functional, quad)
        row = dict(point)
        row.update({'item': item_id, 'functional': functional.value,
                    'status': 'FINITE' if reason is None else 'INFINITE',
                    'value': value, 'reason': reason})
        rows.append(row)
        logger.debug('%s %s -> %s', functional.value, item_id, value if reason is None else reason)
    return pd.DataFrame(rows, columns=keys + ['item', 'functional', 'status', 'value', 'reason'])
