''' Closed-form norms of the gallery, for lookup and for cross-checking the
profile pipeline.'''
import math
from dataclasses import dataclass

from ..foundations import INFINITY, ExponentPair
from ..norms import DEFAULT_QUAD, NormValue
from .parser import parse_item

DEFAULT_ITEM_IDS = (
    'u_radial(r=1,alpha=1,n=2,p=2)',
    'u_radial(r=1,alpha=0.5,n=1,p=2)',
    'u_radial(r=2,alpha=0.25,n=3,p=3)',
    'u_slice(r=1,alpha=0.5,p=3,n=1)',
    'v(r=1,alpha=1,n=2,p=2)',
    'v(r=1,alpha=0.5,n=1,p=2)',
    'v(r=1,alpha=1,n=2,p=4)',
    'power_singularity(r=1,n=1,p=2)',
    'power_singularity(r=1,n=2,p=2)',
    'up(n=2,p=4)',
    'up(n=2,p=2)',
    'up(n=3,p=1.5)',
    'urp(n=2,p=3,r=1)',
    'linear(slope=2,a=0,b=1)',
)
DEFAULT_Q = (1.0, 2.0, 4.0, INFINITY)
# exponent p for items without one of their own (linear)
DEFAULT_EXPONENT = 2.0
TARGETS = ('value', 'gradient')


@dataclass(frozen=True)
class CatalogEntry:
    item_id: str
    target: str
    pq: ExponentPair
    norm: NormValue

    def to_dict(self):
        return {'item': self.item_id, 'target': self.target, 'pq': self.pq.to_dict(),
                'norm': self.norm.to_json()}


def agree(expected, computed, rel_tol=1e-8):
    ''' Two NormValues agree: both INFINITE with the same reason, or both
    finite within ``rel_tol``.'''
    if expected.is_finite != computed.is_finite:
        return False
    if not expected.is_finite:
        return expected.reason == computed.reason
    return math.isclose(expected.value, computed.value, rel_tol=rel_tol, abs_tol=1e-300)


class ClosedFormCatalog:
    ''' Map (item, exponent pair, value/gradient) to a closed-form norm.

    Attributes
    ----------
    items : list of GalleryItem
    q_values : tuple
        Secondary exponents tabulated for each item (p is the item's own).
    '''
    def __init__(self, items=None, q_values=DEFAULT_Q):
        if items is None:
            items = [parse_item(item_id) for item_id in DEFAULT_ITEM_IDS]
        self.items = list(items)
        self.q_values = tuple(q_values)

    @staticmethod
    def lookup(item, pq, target='value'):
        if target == 'gradient':
            return item.closed_form_gradient_norm(pq)
        return item.closed_form_norm(pq)

    @staticmethod
    def item_exponent(item):
        return getattr(item, 'p', None) or DEFAULT_EXPONENT

    def entries(self):
        out = []
        for item in self.items:
            p = self.item_exponent(item)
            for q in self.q_values:
                pq = ExponentPair(p, q)
                for target in TARGETS:
                    norm = self.lookup(item, pq, target)
                    if norm is not None:
                        out.append(CatalogEntry(item.id, target, pq, norm))
        return out

    def by_item(self):
        grouped = {}
        for entry in self.entries():
            grouped.setdefault(entry.item_id, []).append(entry)
        return grouped

    def pipeline_value(self, entry, quad=DEFAULT_QUAD):
        ''' The same norm computed through the rearrangement pipeline.'''
        item = next(item for item in self.items if item.id == entry.item_id)
        if entry.target == 'gradient':
            return item.gradient_norm(entry.pq, quad)
        return item.norm(entry.pq, quad)

    def verify(self, quad=DEFAULT_QUAD, rel_tol=1e-8):
        ''' (entry, pipeline value, agreement) for every entry.'''
        return [(entry, computed, agree(entry.norm, computed, rel_tol))
                for entry in self.entries()
                for computed in [self.pipeline_value(entry, quad)]]
