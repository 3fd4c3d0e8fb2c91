"""String diagrams over the combinators sigma, delta and epsilon.

A diagram with n input wires (top) and m output wires (bottom) denotes a
function {0..m-1} -> {0..n-1}: each output wire is traced upwards to the
input it comes from. Normal forms are computed by that interpretation,
threading base-category morphisms (`gen(name)` boxes) along the wires.

Grammar (';' is vertical, top to bottom, and binds looser than '*'):

    term := par (';' par)*
    par  := atom ('*' atom)*
    atom := 'sigma' | 'delta' | 'eps' | 'id' '[' nat ']' | 'gen' '(' ident ')' | '(' term ')'

'#' starts a comment running to the end of the line.
"""

import logging
import re
from collections import OrderedDict
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Iterable, List, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np

from opkit import conf
from opkit.errors import CapExceeded, DiagramSyntaxError, DiagramTypeError, MalformedInput, VariantError
from opkit.fincat import CheckReport

logger = logging.getLogger(__name__)

SIGMA, DELTA, EPSILON = 'sigma', 'delta', 'epsilon'
COMBINATORS = (SIGMA, DELTA, EPSILON)
_SYMBOLS = {SIGMA: 'σ', DELTA: 'δ', EPSILON: 'ε'}
_ALIASES = {
    'sigma': SIGMA, 's': SIGMA, 'σ': SIGMA,
    'delta': DELTA, 'd': DELTA, 'δ': DELTA,
    'epsilon': EPSILON, 'eps': EPSILON, 'e': EPSILON, 'ε': EPSILON,
}
_EMPTY = ('empty', '∅', '0', 'none', '{}', '')
_FULL = ('f', 'cart', 'clone', 'cartesian', 'all')


@dataclass(frozen=True, order=True)
class FiniteFunction:
    dom: int
    cod: int
    table: Tuple[int, ...]

    def __post_init__(self):
        if len(self.table) != self.dom or any(not 0 <= x < self.cod for x in self.table):
            raise MalformedInput(f"not a function {self.dom} -> {self.cod}: {self.table}")

    def __call__(self, i: int) -> int:
        return self.table[i]

    def __str__(self):
        return ' '.join(f"{i}↦{x}" for i, x in enumerate(self.table)) or '∅'

    def sort_key(self):
        return (self.dom, self.cod, self.table)

    @classmethod
    def identity(cls, n: int) -> 'FiniteFunction':
        return cls(n, n, tuple(range(n)))

    @classmethod
    def of(cls, table: Sequence[int], cod: Optional[int] = None) -> 'FiniteFunction':
        table = tuple(table)
        return cls(len(table), max(table, default=-1) + 1 if cod is None else cod, table)

    @classmethod
    def from_descriptor(cls, text: str) -> 'FiniteFunction':
        """Parse "m>n:t0,t1,..." (e.g. "2>2:1,0")."""
        try:
            head, _, body = text.partition(':')
            m, n = (int(x) for x in head.split('>'))
            table = tuple(int(x) for x in body.split(',')) if body.strip() else ()
        except ValueError:
            raise MalformedInput(f"bad function descriptor {text!r}")
        if len(table) != m:
            raise MalformedInput(f"descriptor {text!r} lists {len(table)} values for domain {m}")
        return cls(m, n, table)

    def descriptor(self) -> str:
        return f"{self.dom}>{self.cod}:" + ','.join(str(x) for x in self.table)

    def compose(self, other: 'FiniteFunction') -> 'FiniteFunction':
        """self∘other."""
        if other.cod != self.dom:
            raise MalformedInput(f"cannot compose {self.descriptor()} after {other.descriptor()}")
        return FiniteFunction(other.dom, self.cod, tuple(self.table[x] for x in other.table))

    def sum(self, other: 'FiniteFunction') -> 'FiniteFunction':
        return FiniteFunction(self.dom + other.dom, self.cod + other.cod,
                              self.table + tuple(x + self.cod for x in other.table))

    def fibre(self, t: int) -> Tuple[int, ...]:
        return tuple(i for i, x in enumerate(self.table) if x == t)

    def is_injective(self) -> bool:
        return len(set(self.table)) == self.dom

    def is_surjective(self) -> bool:
        return len(set(self.table)) == self.cod

    def is_bijective(self) -> bool:
        return self.dom == self.cod and self.is_injective()

    def is_monotone(self) -> bool:
        return all(a <= b for a, b in zip(self.table, self.table[1:]))

    def is_identity(self) -> bool:
        return self.dom == self.cod and self.table == tuple(range(self.dom))

    def inverse(self) -> 'FiniteFunction':
        if not self.is_bijective():
            raise MalformedInput(f"{self.descriptor()} is not a bijection")
        table = [0] * self.dom
        for i, x in enumerate(self.table):
            table[x] = i
        return FiniteFunction(self.dom, self.dom, tuple(table))


@dataclass(frozen=True)
class Variant:
    combinators: frozenset

    @classmethod
    def parse(cls, text: Union[str, Iterable[str], 'Variant']) -> 'Variant':
        """Accepts "sigma,delta", "{σ,δ,ε}", "f" (all three) or "empty"."""
        if isinstance(text, Variant):
            return text
        if not isinstance(text, str):
            words = list(text)
        else:
            stripped = text.strip().strip('{}').strip()
            if stripped.lower() in _EMPTY:
                return cls(frozenset())
            if stripped.lower() in _FULL:
                return cls(frozenset(COMBINATORS))
            words = [w for w in re.split(r'[\s,+]+', stripped) if w]
        chosen = set()
        for word in words:
            key = _ALIASES.get(word.lower())
            if key is None:
                raise MalformedInput(f"unknown combinator {word!r} in variant")
            chosen.add(key)
        return cls(frozenset(chosen))

    @classmethod
    def all(cls) -> List['Variant']:
        subsets = [frozenset(c for c, bit in zip(COMBINATORS, bits) if bit)
                   for bits in product((0, 1), repeat=3)]
        return sorted((cls(s) for s in subsets), key=lambda v: v.sort_key())

    def sort_key(self):
        return (len(self.combinators), tuple(c for c in COMBINATORS if c in self.combinators))

    def __contains__(self, combinator: str) -> bool:
        return combinator in self.combinators

    @property
    def name(self) -> str:
        return ','.join(c for c in COMBINATORS if c in self.combinators) or 'empty'

    @property
    def label(self) -> str:
        return '{' + ','.join(_SYMBOLS[c] for c in COMBINATORS if c in self.combinators) + '}'

    def __str__(self):
        return self.label

    @property
    def is_cartesian(self) -> bool:
        return self.combinators == frozenset(COMBINATORS)

    @property
    def monad_enabled(self) -> bool:
        return self.combinators not in (frozenset({DELTA}), frozenset({DELTA, EPSILON}))

    @property
    def classification_enabled(self) -> bool:
        return self.combinators not in (frozenset({DELTA}), frozenset({EPSILON}))

    def require_monad(self) -> None:
        if not self.monad_enabled:
            raise VariantError(f"variant {self.label} has no free monad (excluded variants: {{δ}}, {{δ,ε}})")

    def require_classification(self) -> None:
        if not self.classification_enabled:
            raise VariantError(f"variant {self.label} is not a row of the classification table")

    @property
    def function_class(self) -> str:
        s, d, e = SIGMA in self, DELTA in self, EPSILON in self
        if s:
            return {(False, False): 'bijection', (True, False): 'surjection',
                    (False, True): 'injection', (True, True): 'any'}[(d, e)]
        return {(False, False): 'identity', (True, False): 'monotone surjection',
                (False, True): 'monotone injection', (True, True): 'monotone'}[(d, e)]

    def contains(self, f: FiniteFunction) -> bool:
        """Membership of f in the variant's function class."""
        s, d, e = SIGMA in self, DELTA in self, EPSILON in self
        if not d and not f.is_injective():
            return False
        if not e and not f.is_surjective():
            return False
        if not s and not f.is_monotone():
            return False
        return True

    def functions(self, m: int, n: int) -> Tuple[FiniteFunction, ...]:
        """All class functions {0..m-1} -> {0..n-1}, sorted."""
        s, d, e = SIGMA in self, DELTA in self, EPSILON in self
        if (not d and m > n) or (not e and m < n) or (m and not n):
            return ()
        if not s and not d and not e:
            return (FiniteFunction.identity(n),)
        size = n ** m
        limit = conf.cap()
        if size > limit:
            raise CapExceeded(f"functions {m}->{n}", size, limit)
        return _class_functions(self, m, n)


@lru_cache(maxsize=4096)
def _class_functions(variant: Variant, m: int, n: int) -> Tuple[FiniteFunction, ...]:
    found = []
    for table in product(range(n), repeat=m):
        f = FiniteFunction(m, n, table)
        if variant.contains(f):
            found.append(f)
    return tuple(found)


# AST

@dataclass(frozen=True)
class Sigma:
    pass


@dataclass(frozen=True)
class Delta:
    pass


@dataclass(frozen=True)
class Epsilon:
    pass


@dataclass(frozen=True)
class Id:
    width: int


@dataclass(frozen=True)
class Gen:
    name: str


@dataclass(frozen=True)
class Vert:
    upper: 'Diagram'
    lower: 'Diagram'


@dataclass(frozen=True)
class Horiz:
    left: 'Diagram'
    right: 'Diagram'


Diagram = Union[Sigma, Delta, Epsilon, Id, Gen, Vert, Horiz]


# Parsing

TOKENS = OrderedDict([
    ('COMMENT', r'\#[^\n]*'),
    ('SPACE', r'\s+'),
    ('NAT', r'\d+'),
    ('IDENT', r"[A-Za-z_][\w.']*"),
    ('SEMI', r';'),
    ('STAR', r'\*'),
    ('LPAR', r'\('),
    ('RPAR', r'\)'),
    ('LBRACK', r'\['),
    ('RBRACK', r'\]'),
])
_TOKEN_RE = re.compile('|'.join(f"(?P<{name}>{rx})" for name, rx in TOKENS.items()))
_KEYWORDS = {'sigma': Sigma(), 'delta': Delta(), 'eps': Epsilon(), 'epsilon': Epsilon()}


class Token(NamedTuple):
    kind: str
    text: str
    pos: int


def tokenize(text: str) -> List[Token]:
    tokens, pos = [], 0
    while pos < len(text):
        match = _TOKEN_RE.match(text, pos)
        if match is None:
            raise DiagramSyntaxError(f"unexpected character {text[pos]!r}", pos)
        if match.lastgroup not in ('COMMENT', 'SPACE'):
            tokens.append(Token(match.lastgroup, match.group(), pos))
        pos = match.end()
    tokens.append(Token('END', '', len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def expect(self, kind: str) -> Token:
        tok = self.tok
        if tok.kind != kind:
            found = 'end of input' if tok.kind == 'END' else repr(tok.text)
            raise DiagramSyntaxError(f"expected {kind.lower()}, found {found}", tok.pos)
        self.i += 1
        return tok

    def term(self) -> Diagram:
        node = self.par()
        while self.tok.kind == 'SEMI':
            self.i += 1
            node = Vert(node, self.par())
        return node

    def par(self) -> Diagram:
        node = self.atom()
        while self.tok.kind == 'STAR':
            self.i += 1
            node = Horiz(node, self.atom())
        return node

    def atom(self) -> Diagram:
        tok = self.tok
        if tok.kind == 'LPAR':
            self.i += 1
            node = self.term()
            self.expect('RPAR')
            return node
        if tok.kind == 'IDENT':
            word = tok.text
            if word in _KEYWORDS:
                self.i += 1
                return _KEYWORDS[word]
            if word == 'id':
                self.i += 1
                self.expect('LBRACK')
                width = int(self.expect('NAT').text)
                self.expect('RBRACK')
                return Id(width)
            if word == 'gen':
                self.i += 1
                self.expect('LPAR')
                name = self.tok
                if name.kind not in ('IDENT', 'NAT'):
                    raise DiagramSyntaxError("expected a morphism name", name.pos)
                self.i += 1
                self.expect('RPAR')
                return Gen(name.text)
            raise DiagramSyntaxError(f"unknown combinator {word!r}", tok.pos)
        found = 'end of input' if tok.kind == 'END' else repr(tok.text)
        raise DiagramSyntaxError(f"expected a diagram, found {found}", tok.pos)


def parse(text: str) -> Diagram:
    parser = _Parser(text)
    node = parser.term()
    if parser.tok.kind != 'END':
        raise DiagramSyntaxError(f"unexpected {parser.tok.text!r}", parser.tok.pos)
    return node


def render(d: Diagram) -> str:
    """Printer with minimal parentheses; `parse(render(d)) == d`."""
    if isinstance(d, Sigma):
        return 'sigma'
    if isinstance(d, Delta):
        return 'delta'
    if isinstance(d, Epsilon):
        return 'eps'
    if isinstance(d, Id):
        return f"id[{d.width}]"
    if isinstance(d, Gen):
        return f"gen({d.name})"
    if isinstance(d, Vert):
        lower = render(d.lower)
        if isinstance(d.lower, Vert):
            lower = f"({lower})"
        return f"{render(d.upper)} ; {lower}"
    left, right = render(d.left), render(d.right)
    if isinstance(d.left, Vert):
        left = f"({left})"
    if isinstance(d.right, (Vert, Horiz)):
        right = f"({right})"
    return f"{left} * {right}"


# Semantics

_NODE_COMBINATOR = {Sigma: SIGMA, Delta: DELTA, Epsilon: EPSILON}


@lru_cache(maxsize=4096)
def _interface(d: Diagram) -> Tuple[int, int]:
    if isinstance(d, Sigma):
        return (2, 2)
    if isinstance(d, Delta):
        return (1, 2)
    if isinstance(d, Epsilon):
        return (1, 0)
    if isinstance(d, Id):
        return (d.width, d.width)
    if isinstance(d, Gen):
        return (1, 1)
    if isinstance(d, Vert):
        top, bottom = _interface(d.upper), _interface(d.lower)
        if top[1] != bottom[0]:
            raise DiagramTypeError(
                f"arity mismatch in '{render(d)}': upper part has {top[1]} outputs, lower part has {bottom[0]} inputs"
            )
        return (top[0], bottom[1])
    if isinstance(d, Horiz):
        a, b = _interface(d.left), _interface(d.right)
        return (a[0] + b[0], a[1] + b[1])
    raise MalformedInput(f"not a diagram: {d!r}")


def combinators_of(d: Diagram) -> frozenset:
    if isinstance(d, (Vert, Horiz)):
        a, b = (d.upper, d.lower) if isinstance(d, Vert) else (d.left, d.right)
        return combinators_of(a) | combinators_of(b)
    name = _NODE_COMBINATOR.get(type(d))
    return frozenset({name}) if name else frozenset()


def typecheck(d: Diagram, variant=None) -> Tuple[int, int]:
    """(inputs, outputs); refuses combinators outside `variant` when given."""
    if variant is not None:
        variant = Variant.parse(variant)
        for name in COMBINATORS:
            if name in combinators_of(d) and name not in variant:
                raise VariantError(f"{name} not in variant {variant.label}")
    return _interface(d)


def to_function(d: Diagram) -> FiniteFunction:
    """Outputs to inputs; `gen` boxes act as plain wires."""
    typecheck(d)
    return _function(d)


def _function(d: Diagram) -> FiniteFunction:
    if isinstance(d, Sigma):
        return FiniteFunction(2, 2, (1, 0))
    if isinstance(d, Delta):
        return FiniteFunction(2, 1, (0, 0))
    if isinstance(d, Epsilon):
        return FiniteFunction(0, 1, ())
    if isinstance(d, Id):
        return FiniteFunction.identity(d.width)
    if isinstance(d, Gen):
        return FiniteFunction.identity(1)
    if isinstance(d, Vert):
        return _function(d.upper).compose(_function(d.lower))
    return _function(d.left).sum(_function(d.right))


def classify(f: FiniteFunction, variant) -> bool:
    variant = Variant.parse(variant)
    variant.require_classification()
    return variant.contains(f)


# Normal forms

@dataclass(frozen=True)
class NormalForm:
    """Shape function (outputs to inputs) plus one base morphism per output.

    Over no base, `base_family` holds the words of `gen` names along each
    output wire, or is empty when the diagram has no boxes.
    """
    variant: Variant
    shape: FiniteFunction
    base_family: Tuple = ()
    sources: Tuple = ()
    targets: Tuple = ()

    def to_dict(self):
        return {
            'variant': self.variant.name,
            'shape': list(self.shape.table),
            'inputs': self.shape.cod,
            'outputs': self.shape.dom,
            'base_family': [list(w) if isinstance(w, tuple) else w for w in self.base_family],
            'sources': list(self.sources),
            'targets': list(self.targets),
        }


def _trace(d: Diagram) -> List[Tuple[int, Tuple[str, ...]]]:
    """For each output wire: the input it comes from and the boxes met on the way down."""
    if isinstance(d, Sigma):
        return [(1, ()), (0, ())]
    if isinstance(d, Delta):
        return [(0, ()), (0, ())]
    if isinstance(d, Epsilon):
        return []
    if isinstance(d, Id):
        return [(i, ()) for i in range(d.width)]
    if isinstance(d, Gen):
        return [(0, (d.name,))]
    if isinstance(d, Vert):
        upper = _trace(d.upper)
        return [(upper[j][0], upper[j][1] + path) for j, path in _trace(d.lower)]
    shift = _interface(d.left)[0]
    return _trace(d.left) + [(i + shift, path) for i, path in _trace(d.right)]


def normalize(d: Diagram, variant, base=None, sources: Optional[Sequence] = None) -> NormalForm:
    """Canonical form of `d` in the free construction of `variant` over `base`.

    `sources` fixes the objects on the input wires; otherwise they are read
    off the boxes (or the single object of a one-object base).
    """
    variant = Variant.parse(variant)
    if not variant.monad_enabled and not variant.classification_enabled:
        raise VariantError(f"variant {variant.label} has no normal forms")
    inputs, outputs = typecheck(d, variant)
    traced = _trace(d)
    shape = FiniteFunction(outputs, inputs, tuple(i for i, _ in traced))
    assert variant.contains(shape), f"shape {shape} outside {variant.function_class}"
    if base is None:
        if all(not path for _, path in traced):
            return NormalForm(variant, shape)
        return NormalForm(variant, shape, tuple(path for _, path in traced))

    objs: List = list(sources) if sources is not None else [None] * inputs
    if len(objs) != inputs:
        raise DiagramTypeError(f"{len(objs)} source objects given for {inputs} input wires")
    for i, path in traced:
        for name in path:
            if name not in base.morphisms:
                raise DiagramTypeError(f"gen({name}) is not a morphism of the base")
        if path:
            start = base.src(path[0])
            if objs[i] is None:
                objs[i] = start
            elif objs[i] != start:
                raise DiagramTypeError(f"input wire {i} carries both {objs[i]} and {start}")
    if len(base.objects) == 1:
        objs = [base.objects[0] if o is None else o for o in objs]
    missing = [i for i, o in enumerate(objs) if o is None]
    if missing:
        raise DiagramTypeError(f"cannot infer the object on input wire {missing[0]}; pass sources")
    family, targets = [], []
    for i, path in traced:
        h = base.id(objs[i])
        for name in path:
            if base.src(name) != base.tgt(h):
                raise DiagramTypeError(f"gen({name}) does not start at {base.tgt(h)}")
            h = base.compose(name, h)
        family.append(h)
        targets.append(base.tgt(h))
    logger.debug("normalized %s to shape %s", render(d), shape)
    return NormalForm(variant, shape, tuple(family), tuple(objs), tuple(targets))


class Layer(NamedTuple):
    combinator: str
    position: int
    width: int
    function: FiniteFunction


def _layer(combinator: str, position: int, width: int) -> Layer:
    """One combinator at `position` on `width` input wires, wires elsewhere."""
    if combinator == SIGMA:
        table = list(range(width))
        table[position], table[position + 1] = position + 1, position
        return Layer(SIGMA, position, width, FiniteFunction(width, width, tuple(table)))
    if combinator == DELTA:
        table = tuple(j if j <= position else j - 1 for j in range(width + 1))
        return Layer(DELTA, position, width, FiniteFunction(width + 1, width, table))
    table = tuple(j if j < position else j + 1 for j in range(width - 1))
    return Layer(EPSILON, position, width, FiniteFunction(width - 1, width, table))


def elementary_factors(f: FiniteFunction) -> List[Layer]:
    """Layers L1, L2, ... from top to bottom with f = L1∘L2∘...

    Epsilon layers come first, then delta layers, then transpositions.
    Every layer belongs to any variant whose class contains f.
    """
    layers: List[Layer] = []
    width = f.cod
    image = sorted(set(f.table))
    for i in reversed(range(f.cod)):
        if i not in image:
            layers.append(_layer(EPSILON, i, width))
            width -= 1
    counts = [len(f.fibre(t)) for t in image]
    offsets = [sum(counts[:k]) for k in range(len(counts))]
    for k in reversed(range(len(image))):
        for _ in range(counts[k] - 1):
            layers.append(_layer(DELTA, k, width))
            width += 1
    block = {t: k for k, t in enumerate(image)}
    seen = {t: 0 for t in image}
    target = []
    for j, t in enumerate(f.table):
        target.append(offsets[block[t]] + seen[t])
        seen[t] += 1
    rank = {label: j for j, label in enumerate(target)}
    current = list(range(width))
    swapped = True
    while swapped:
        swapped = False
        for i in range(width - 1):
            if rank[current[i]] > rank[current[i + 1]]:
                current[i], current[i + 1] = current[i + 1], current[i]
                layers.append(_layer(SIGMA, i, width))
                swapped = True
    return layers


def compose_layers(layers: Sequence[Layer], n: int) -> FiniteFunction:
    result = FiniteFunction.identity(n)
    for layer in layers:
        result = result.compose(layer.function)
    return result


def _layer_diagram(layer: Layer) -> Diagram:
    node = {SIGMA: Sigma(), DELTA: Delta(), EPSILON: Epsilon()}[layer.combinator]
    span = 2 if layer.combinator == SIGMA else 1
    rest = layer.width - layer.position - span
    if layer.position:
        node = Horiz(Id(layer.position), node)
    if rest:
        node = Horiz(node, Id(rest))
    return node


def realize(f: FiniteFunction, variant) -> Diagram:
    """A diagram using only `variant`'s combinators whose function is f."""
    variant = Variant.parse(variant)
    if not variant.contains(f):
        raise VariantError(f"{f.descriptor()} is not a {variant.function_class} (variant {variant.label})")
    node = None
    for layer in elementary_factors(f):
        piece = _layer_diagram(layer)
        node = piece if node is None else Vert(node, piece)
    return Id(f.cod) if node is None else node


def _column(entry, base) -> Diagram:
    if base is None:
        if not entry:
            return Id(1)
        node = Gen(entry[0])
        for name in entry[1:]:
            node = Vert(node, Gen(name))
        return node
    return Id(1) if entry == base.id(base.src(entry)) else Gen(str(entry))


def to_diagram(nf: NormalForm, base=None) -> Diagram:
    """Printed normal form: the realized shape over a layer of boxes."""
    node = realize(nf.shape, nf.variant)
    if not nf.base_family:
        return node
    columns = [_column(h, base) for h in nf.base_family]
    if all(c == Id(1) for c in columns):
        return node
    layer = columns[0]
    for c in columns[1:]:
        layer = Horiz(layer, c)
    return Vert(node, layer)


def diagrams_equal(d1: Diagram, d2: Diagram, variant, base=None, sources: Optional[Sequence] = None) -> bool:
    i1, i2 = typecheck(d1), typecheck(d2)
    if i1 != i2:
        raise DiagramTypeError(f"interfaces differ: {i1} vs {i2}")
    return normalize(d1, variant, base, sources) == normalize(d2, variant, base, sources)


class Equation(NamedTuple):
    name: str
    lhs: str
    rhs: str
    needs: frozenset


def _eq(name, lhs, rhs, *needs):
    return Equation(name, lhs, rhs, frozenset(needs))


# The defining equations of the free constructions; `needs` is the set of
# combinators an equation mentions.
EQUATIONS = (
    _eq('involution', 'sigma ; sigma', 'id[2]', SIGMA),
    _eq('yang-baxter', '(sigma * id[1]) ; (id[1] * sigma) ; (sigma * id[1])',
        '(id[1] * sigma) ; (sigma * id[1]) ; (id[1] * sigma)', SIGMA),
    _eq('coassociativity', 'delta ; (delta * id[1])', 'delta ; (id[1] * delta)', DELTA),
    _eq('cocommutativity', 'delta ; sigma', 'delta', SIGMA, DELTA),
    _eq('left counit', 'delta ; (eps * id[1])', 'id[1]', DELTA, EPSILON),
    _eq('right counit', 'delta ; (id[1] * eps)', 'id[1]', DELTA, EPSILON),
    _eq('sigma-delta naturality', '(delta * id[1]) ; (id[1] * sigma) ; (sigma * id[1])',
        'sigma ; (id[1] * delta)', SIGMA, DELTA),
    _eq('sigma-eps naturality', 'sigma ; (id[1] * eps)', 'eps * id[1]', SIGMA, EPSILON),
    _eq('box-sigma naturality', '(gen(f) * id[1]) ; sigma', 'sigma ; (id[1] * gen(f))', SIGMA),
    _eq('box-delta naturality', 'gen(f) ; delta', 'delta ; (gen(f) * gen(f))', DELTA),
    _eq('box-eps naturality', 'gen(f) ; eps', 'eps', EPSILON),
)


# Classification

def random_diagram(gen, variant, inputs: int, layers: int = 3, max_width: int = 4) -> Diagram:
    """A well-typed diagram of `layers` random layers on `inputs` wires.

    `gen` is a numpy Generator. Only the variant's combinators and plain
    wires are used; delta is not chosen once a layer would exceed `max_width`.
    """
    variant = Variant.parse(variant)
    node: Optional[Diagram] = None
    width = inputs
    for _ in range(layers):
        pieces: List[Diagram] = []
        remaining, out = width, 0
        while remaining:
            choices: List[Diagram] = [Id(1)]
            if SIGMA in variant and remaining >= 2:
                choices.append(Sigma())
            if DELTA in variant and out + remaining + 1 <= max_width:
                choices.append(Delta())
            if EPSILON in variant:
                choices.append(Epsilon())
            piece = choices[int(gen.integers(len(choices)))]
            pieces.append(piece)
            used, produced = _interface(piece)
            remaining -= used
            out += produced
        layer: Diagram = Id(0)
        for i, piece in enumerate(pieces):
            layer = piece if i == 0 else Horiz(layer, piece)
        node = layer if node is None else Vert(node, layer)
        width = out
    return Id(inputs) if node is None else node


def check_classification(variant, max_arity: int = 4, samples: int = 200, seed: Optional[int] = None) -> CheckReport:
    """Well-typed diagrams denote exactly the variant's function class.

    Every class function m -> n with m, n <= max_arity is realized by a
    diagram over the variant whose function and normal form shape are f;
    `samples` random diagrams over the variant denote class functions.
    """

    variant = Variant.parse(variant)
    variant.require_classification()
    report = CheckReport(f"classification[{variant.name}]")
    for m in range(max_arity + 1):
        for n in range(max_arity + 1):
            for f in variant.functions(m, n):
                report.instances += 1
                d = realize(f, variant)
                if not combinators_of(d) <= variant.combinators or to_function(d) != f:
                    report.witness('not-realized', function=f.descriptor(), diagram=render(d))
                    return report
                if normalize(d, variant).shape != f:
                    report.witness('normal-form-mismatch', function=f.descriptor(), diagram=render(d))
                    return report
    gen = np.random.default_rng(conf.default_seed() if seed is None else seed)
    for _ in range(samples):
        inputs = int(gen.integers(0, max_arity + 1))
        d = random_diagram(gen, variant, inputs, layers=int(gen.integers(1, 4)), max_width=max_arity)
        report.instances += 1
        f = to_function(d)
        if not variant.contains(f):
            report.witness('outside-class', function=f.descriptor(), diagram=render(d))
            break
    if not report.passed:
        logger.warning("classification check for %s failed: %s", variant.label, report.witnesses[0])
    return report
