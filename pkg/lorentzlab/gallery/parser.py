''' Gallery item ids.

Grammar::

    item    := NAME '(' arg (',' arg)* ')'
    arg     := NAME '=' NUMBER | item

for example ``u_radial(r=1,alpha=0.5,n=2,p=3)`` or
``trunc(k=7, up(n=2,p=2))``. Numbers accept 'inf'.
'''
import re

from ..exceptions import GalleryIdError
from ..foundations import BallDomain, Interval1D
from .items import (
    Shifted, make_linear, make_power_singularity, make_u_radial, make_u_slice, make_up,
    make_up_shifted, make_v,
)
from .transforms import extend_by_zero, truncate

TOKEN = re.compile(r'\s*(?:(?P<number>[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)'
                   r'|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<punct>[(),=]))')


def _tokenize(text):
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        match = TOKEN.match(text, pos)
        if match is None or match.end() == pos:
            msg = f'unexpected character {text[pos]!r} at position {pos} in {text!r}'
            raise GalleryIdError(msg)
        kind = match.lastgroup
        tokens.append((kind, match.group(kind)))
        pos = match.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    return tokens


class _Parser:
    def __init__(self, text):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self, offset=0):
        index = self.pos + offset
        return self.tokens[index] if index < len(self.tokens) else (None, None)

    def expect(self, value):
        kind, token = self.peek()
        if token != value:
            msg = f'expected {value!r} in {self.text!r}, got {token!r}'
            raise GalleryIdError(msg)
        self.pos += 1

    def parse(self):
        node = self.item()
        if self.pos != len(self.tokens):
            msg = f'trailing input after item in {self.text!r}'
            raise GalleryIdError(msg)
        return node

    def item(self):
        kind, name = self.peek()
        if kind != 'name':
            msg = f'expected an item name in {self.text!r}, got {name!r}'
            raise GalleryIdError(msg)
        self.pos += 1
        self.expect('(')
        kwargs, children = {}, []
        while True:
            kind, token = self.peek()
            next_kind, next_token = self.peek(1)
            if kind == 'name' and next_token == '=':
                self.pos += 2
                kwargs[token] = self.number()
            elif kind == 'name' and next_token == '(':
                children.append(self.item())
            else:
                msg = f'malformed argument {token!r} in {self.text!r}'
                raise GalleryIdError(msg)
            kind, token = self.peek()
            if token == ',':
                self.pos += 1
                continue
            self.expect(')')
            break
        return name, kwargs, children

    def number(self):
        kind, token = self.peek()
        self.pos += 1
        if kind == 'number':
            return float(token)
        if kind == 'name' and token.lower() in ('inf', 'infinity'):
            return float('inf')
        msg = f'expected a number in {self.text!r}, got {token!r}'
        raise GalleryIdError(msg)


def _integer(value, key):
    if value != int(value):
        msg = f'{key} must be an integer, got {value}'
        raise GalleryIdError(msg)
    return int(value)


SIGNATURES = {
    'u_slice': (('r', 'alpha', 'p'), ('n',), 0),
    'u_radial': (('r', 'alpha', 'n', 'p'), (), 0),
    'v': (('r', 'alpha', 'n', 'p'), (), 0),
    'power_singularity': (('r', 'n', 'p'), (), 0),
    'up': (('n', 'p'), ('r',), 0),
    'urp': (('n', 'p', 'r'), (), 0),
    'linear': (('slope', 'a', 'b'), (), 0),
    'trunc': (('k',), (), 1),
    'shift': (('c',), (), 1),
    'extend': ((), ('r', 'a', 'b'), 1),
}


def _build(node):
    name, kwargs, children = node
    if name not in SIGNATURES:
        msg = f'unknown gallery item {name!r}, known: {", ".join(sorted(SIGNATURES))}'
        raise GalleryIdError(msg)
    required, optional, n_children = SIGNATURES[name]
    missing = [key for key in required if key not in kwargs]
    unknown = [key for key in kwargs if key not in required + optional]
    if missing or unknown:
        msg = f'{name}: missing {missing}, unknown {unknown}'
        raise GalleryIdError(msg)
    if len(children) != n_children:
        msg = f'{name} takes {n_children} nested item(s), got {len(children)}'
        raise GalleryIdError(msg)
    for key in ('n', 'k'):
        if key in kwargs:
            kwargs[key] = _integer(kwargs[key], key)
    inner = [_build(child) for child in children]

    if name == 'u_slice':
        return make_u_slice(kwargs['r'], kwargs['alpha'], kwargs['p'], kwargs.get('n', 1))
    if name == 'u_radial':
        return make_u_radial(kwargs['r'], kwargs['alpha'], kwargs['n'], kwargs['p'])
    if name == 'v':
        return make_v(kwargs['r'], kwargs['alpha'], kwargs['n'], kwargs['p'])
    if name == 'power_singularity':
        return make_power_singularity(kwargs['r'], kwargs['n'], kwargs['p'])
    if name == 'up':
        return make_up(kwargs['n'], kwargs['p'], kwargs.get('r', 1.0))
    if name == 'urp':
        return make_up_shifted(kwargs['n'], kwargs['p'], kwargs['r'])
    if name == 'linear':
        return make_linear(kwargs['slope'], kwargs['a'], kwargs['b'])
    if name == 'trunc':
        return truncate(inner[0], kwargs['k'])
    if name == 'shift':
        return Shifted(inner[0], kwargs['c'])
    # extend
    parent = inner[0]
    if 'r' in kwargs:
        bigger = BallDomain(parent.domain.n, kwargs['r'], parent.domain.center)
    elif 'a' in kwargs and 'b' in kwargs:
        bigger = Interval1D(kwargs['a'], kwargs['b'])
    else:
        raise GalleryIdError('extend needs r=... or a=...,b=...')
    return extend_by_zero(parent, bigger)


def parse_item(text):
    ''' Build the gallery item named by an id string.

    Raises GalleryIdError for malformed ids and DomainError for parameters out
    of range.
    '''
    if not isinstance(text, str) or not text.strip():
        raise GalleryIdError('empty gallery id')
    return _build(_Parser(text).parse())
