''' Truncation, lattice operations and extension by zero.'''
from enum import Enum

import numpy as np

from ..exceptions import DomainError
from ..rearrangement import SampledField
from .items import DEFAULT_CELLS, GalleryItem, SignedField, Truncation, ZeroExtension


class LatticeOp(Enum):
    MAX = 'MAX'
    MIN = 'MIN'
    POS = 'POS'
    NEG = 'NEG'


def truncate(item, k):
    ''' Freeze ``item`` inside the ball of radius 1/(k+1) (u_p family) or
    r/(k+1) (every other item); k >= 1.'''
    return Truncation(item, k)


def _as_signed(operand, n_cells):
    if isinstance(operand, SignedField):
        return operand
    if isinstance(operand, GalleryItem):
        return operand.discretize(n_cells)
    if isinstance(operand, SampledField):
        # magnitudes only, no gradient information
        return SignedField(operand.domain, operand.weights, operand.magnitudes,
                           np.zeros_like(operand.magnitudes),
                           operand.radii if operand.radii is not None else np.zeros_like(operand.weights))
    msg = f'cannot take lattice operations of {type(operand).__name__}'
    raise DomainError(msg)


def lattice(op, a, b=None, n_cells=DEFAULT_CELLS):
    ''' Cellwise max(a, b), min(a, b), a^+ = max(a, 0) or a^- = min(a, 0).

    Gradient cells take the gradient of the active branch: for MAX the
    gradient of a where a >= b and of b elsewhere, for MIN of a where a <= b,
    for POS the gradient of a where a > 0 and 0 elsewhere, for NEG where a < 0.

    Parameters
    ----------
    op : LatticeOp/str
    a : GalleryItem/SignedField/SampledField
    b : same kind as a, required for MAX and MIN
    n_cells : int
        Discretization used for gallery items.

    Return
    ------
    field : SignedField
    '''
    op = LatticeOp(op)
    left = _as_signed(a, n_cells)
    if op in (LatticeOp.POS, LatticeOp.NEG):
        if op is LatticeOp.POS:
            active = left.values > 0
            values = np.where(active, left.values, 0.0)
        else:
            active = left.values < 0
            values = np.where(active, left.values, 0.0)
        gradients = np.where(active, left.gradients, 0.0)
        return SignedField(left.domain, left.weights, values, gradients, left.radii)

    if b is None:
        msg = f'{op.value} needs two operands'
        raise DomainError(msg)
    right = _as_signed(b, n_cells)
    if not left.same_partition(right):
        raise DomainError('lattice operands must share domain and discretization')
    if op is LatticeOp.MAX:
        take_left = left.values >= right.values
    else:
        take_left = left.values <= right.values
    values = np.where(take_left, left.values, right.values)
    gradients = np.where(take_left, left.gradients, right.gradients)
    return SignedField(left.domain, left.weights, values, gradients, left.radii)


def extend_by_zero(f, bigger):
    ''' Extend a field or gallery item by 0 to a larger domain.

    Sampled fields get one zero cell covering the added measure; gallery items
    become a ZERO_EXTENSION item.
    '''
    if isinstance(f, GalleryItem):
        return ZeroExtension(f, bigger)
    if f.domain is None or not bigger.contains_domain(f.domain):
        msg = f'{bigger} does not contain {f.domain}'
        raise DomainError(msg)
    extra = bigger.measure - f.total_measure
    if extra <= 1e-12 * bigger.measure:
        return SampledField(bigger, f.weights, f.magnitudes, f.radii)
    radii = None
    if f.radii is not None:
        radii = np.append(f.radii, f.domain.r)
    return SampledField(bigger, np.append(f.weights, extra), np.append(f.magnitudes, 0.0), radii)
