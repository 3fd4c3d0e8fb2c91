"""The free constructions !C and ?C = (!(C^op))^op on a finite category.

Objects are tuples of base objects. A morphism a -> b of !C is stored in
normal form: a shape function from target positions to source positions
(in the variant's class) and one base morphism a[shape(j)] -> b[j] per
target position. Hom-sets are enumerated on demand and cached;
`restrict()` materializes a full subcategory on short lists so that
coends can run over it.
"""

import logging
from dataclasses import dataclass
from itertools import chain, product
from typing import Dict, List, Optional, Sequence, Tuple

from opkit import conf
from opkit.diagrams import FiniteFunction, Variant, elementary_factors
from opkit.errors import BoundaryMismatch, CapExceeded, MalformedInput, ValidationFailed
from opkit.fincat import FinCategory, FinFunctor, render, sort_key

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BangMorphism:
    variant: Variant
    src: Tuple
    tgt: Tuple
    shape: FiniteFunction
    family: Tuple

    def sort_key(self):
        return (sort_key(self.src), sort_key(self.tgt), self.shape.table, sort_key(self.family))

    def __str__(self):
        wires = ' '.join(f"{j}<-{self.shape(j)}:{render(h)}" for j, h in enumerate(self.family))
        return f"[{render(self.src)} => {render(self.tgt)} | {wires}]"

    def to_dict(self):
        return {'src': list(self.src), 'tgt': list(self.tgt), 'shape': list(self.shape.table),
                'family': [render(h) for h in self.family]}


def _check_list(base, a) -> None:
    if isinstance(base, BangCategory):
        for x in a:
            if not isinstance(x, tuple):
                raise MalformedInput(f"{render(x)} is not a list object")
            _check_list(base.base, x)
        return
    objects = set(base.objects)
    for x in a:
        if x not in objects:
            raise MalformedInput(f"{render(x)} is not an object of the base")


def hom_size(variant: Variant, base, a: Tuple, b: Tuple) -> int:
    total = 0
    for shape in variant.functions(len(b), len(a)):
        count = 1
        for j in range(len(b)):
            count *= len(base.hom(a[shape(j)], b[j]))
        total += count
    return total


def bang_hom(variant, base, a: Sequence, b: Sequence) -> Tuple[BangMorphism, ...]:
    """The hom-set !C[a, b] in normal form, sorted."""
    variant = Variant.parse(variant)
    variant.require_monad()
    a, b = tuple(a), tuple(b)
    _check_list(base, a)
    _check_list(base, b)
    size = hom_size(variant, base, a, b)
    limit = conf.cap()
    if size > limit:
        raise CapExceeded(f"hom {render(a)} -> {render(b)}", size, limit)
    found = []
    for shape in variant.functions(len(b), len(a)):
        options = [base.hom(a[shape(j)], b[j]) for j in range(len(b))]
        for family in product(*options):
            found.append(BangMorphism(variant, a, b, shape, tuple(family)))
    found.sort(key=lambda m: m.sort_key())
    logger.debug("hom %s -> %s over %s: %d morphisms", render(a), render(b), variant.label, len(found))
    return tuple(found)


def identity_nf(variant, base, a: Sequence) -> BangMorphism:
    a = tuple(a)
    return BangMorphism(Variant.parse(variant), a, a, FiniteFunction.identity(len(a)),
                        tuple(base.id(x) for x in a))


def compose_nf(g: BangMorphism, f: BangMorphism, base) -> BangMorphism:
    """g∘f: shapes compose contravariantly, families along the connected wires."""
    if f.tgt != g.src:
        raise BoundaryMismatch(f"cannot compose: {render(f.tgt)} != {render(g.src)}")
    shape = f.shape.compose(g.shape)
    family = tuple(base.compose(g.family[k], f.family[g.shape(k)]) for k in range(len(g.tgt)))
    return BangMorphism(g.variant, f.src, g.tgt, shape, family)


def reindex(variant, base, a: Sequence, shape: FiniteFunction) -> BangMorphism:
    """a -> (a[shape(j)])_j with identity components."""
    a = tuple(a)
    b = tuple(a[shape(j)] for j in range(shape.dom))
    return BangMorphism(Variant.parse(variant), a, b, shape, tuple(base.id(x) for x in b))


def as_bang(variant, base, family: Sequence) -> BangMorphism:
    """The identity-shaped morphism carrying `family` slot by slot."""
    family = tuple(family)
    return BangMorphism(Variant.parse(variant), tuple(base.src(h) for h in family),
                        tuple(base.tgt(h) for h in family), FiniteFunction.identity(len(family)), family)


def block_sum(morphisms: Sequence[BangMorphism]) -> BangMorphism:
    """Horizontal juxtaposition of morphisms."""
    if not morphisms:
        raise MalformedInput("block_sum needs a variant; pass at least one morphism")
    shape = FiniteFunction.identity(0)
    for m in morphisms:
        shape = shape.sum(m.shape)
    return BangMorphism(
        morphisms[0].variant,
        tuple(chain.from_iterable(m.src for m in morphisms)),
        tuple(chain.from_iterable(m.tgt for m in morphisms)),
        shape,
        tuple(chain.from_iterable(m.family for m in morphisms)),
    )


def block_shape(shape: FiniteFunction, lengths: Sequence[int]) -> FiniteFunction:
    """Expand an outer shape to flattened positions, blocks of `lengths`."""
    offsets = [sum(lengths[:i]) for i in range(len(lengths))]
    table = tuple(offsets[shape(j)] + k for j in range(shape.dom) for k in range(lengths[shape(j)]))
    return FiniteFunction(len(table), sum(lengths), table)


def flatten_obj(ll: Sequence[Sequence]) -> Tuple:
    return tuple(chain.from_iterable(ll))


def unit_obj(c) -> Tuple:
    return (c,)


def unit_mor(variant, base, h) -> BangMorphism:
    return BangMorphism(Variant.parse(variant), (base.src(h),), (base.tgt(h),), FiniteFunction.identity(1), (h,))


def expand_mor(m: BangMorphism) -> BangMorphism:
    """Flatten a morphism of !!C whose family consists of morphisms of !C."""
    src_lengths = [len(x) for x in m.src]
    offsets = [sum(src_lengths[:i]) for i in range(len(src_lengths))]
    table, family = [], []
    for j, inner in enumerate(m.family):
        for k in range(len(inner.tgt)):
            table.append(offsets[m.shape(j)] + inner.shape(k))
            family.append(inner.family[k])
    shape = FiniteFunction(len(table), sum(src_lengths), tuple(table))
    assert m.variant.contains(shape), f"expanded shape {shape} leaves {m.variant.function_class}"
    return BangMorphism(m.variant, flatten_obj(m.src), flatten_obj(m.tgt), shape, tuple(family))


class BangCategory:
    """!C over `base`, or its opposite (!C)^op when `dual` is set.

    Morphisms are always stored as !C morphisms; the dual flag swaps their
    direction. ?C is `question_of(variant, C)`.
    """

    def __init__(self, variant, base, dual: bool = False):
        self.variant = Variant.parse(variant)
        self.variant.require_monad()
        self.base = base
        self.dual = dual
        self._homs: Dict = {}
        self._opposite = None
        self._restrictions: Dict = {}

    def __repr__(self):
        sign = '?' if self.dual else '!'
        return f"BangCategory({sign}{self.variant.label} over {getattr(self.base, 'name', '') or self.base!r})"

    def __eq__(self, other):
        if not isinstance(other, BangCategory):
            return NotImplemented
        return (self.variant, self.base, self.dual) == (other.variant, other.base, other.dual)

    def __hash__(self):
        return hash((self.variant, self.dual))

    def sort_key(self):
        return (self.variant.sort_key(), self.dual)

    @property
    def objects(self):
        raise MalformedInput("!C has infinitely many objects; use restrict()")

    def hom(self, a, b) -> Tuple[BangMorphism, ...]:
        if self.dual:
            a, b = b, a
        key = (tuple(a), tuple(b))
        if key not in self._homs:
            self._homs[key] = bang_hom(self.variant, self.base, a, b)
        return self._homs[key]

    def src(self, m: BangMorphism):
        return m.tgt if self.dual else m.src

    def tgt(self, m: BangMorphism):
        return m.src if self.dual else m.tgt

    def id(self, a) -> BangMorphism:
        return identity_nf(self.variant, self.base, a)

    def compose(self, g: BangMorphism, f: BangMorphism) -> BangMorphism:
        if self.dual:
            return compose_nf(f, g, self.base)
        return compose_nf(g, f, self.base)

    def opposite(self) -> 'BangCategory':
        if self._opposite is None:
            op = BangCategory(self.variant, self.base, not self.dual)
            op._opposite = self
            self._opposite = op
        return self._opposite

    def lists(self, max_len: int) -> List[Tuple]:
        found = [tuple(x) for n in range(max_len + 1) for x in product(self.base.objects, repeat=n)]
        return sorted(found, key=lambda a: (len(a), sort_key(a)))

    def is_generator(self, m: BangMorphism) -> bool:
        """One elementary layer of the shape, or one base generator in one slot."""
        ids = tuple(self.base.id(x) for x in m.tgt)
        if m.family == ids:
            return len(elementary_factors(m.shape)) == 1
        if not m.shape.is_identity():
            return False
        moved = [j for j, (h, i) in enumerate(zip(m.family, ids)) if h != i]
        return len(moved) == 1 and m.family[moved[0]] in set(self.base.generating_morphisms())

    def restrict(self, max_len: Optional[int] = None, objects: Optional[Sequence] = None) -> FinCategory:
        """The full subcategory on the given lists (default: all of length <= max_len).

        Lists up to a length bound are closed under elementary factorization,
        so elementary morphisms generate. For arbitrary object sets every
        morphism is a generator.
        """
        if objects is None:
            max_len = conf.nesting_bound() if max_len is None else max_len
            key = ('len', max_len)
            chosen = self.lists(max_len)
        else:
            chosen = sorted({tuple(a) for a in objects}, key=lambda a: (len(a), sort_key(a)))
            key = ('objects', tuple(chosen))
        if key in self._restrictions:
            return self._restrictions[key]
        morphisms = {}
        for a in chosen:
            for b in chosen:
                for m in self.hom(a, b):
                    morphisms[m] = (a, b)
        limit = conf.cap()
        if len(morphisms) > limit:
            raise CapExceeded('restricted bang category', len(morphisms), limit)
        generators = list(morphisms) if objects is not None else [m for m in morphisms if self.is_generator(m)]
        sign = '?' if self.dual else '!'
        restricted = FinCategory(
            chosen, morphisms, {a: self.id(a) for a in chosen}, self.compose,
            generators=generators, name=f"{sign}{self.variant.label}[{getattr(self.base, 'name', '')}]",
        )
        logger.debug("restricted %r to %d objects, %d morphisms, %d generators",
                     self, len(chosen), len(morphisms), len(generators))
        self._restrictions[key] = restricted
        return restricted


def question_of(variant, c) -> BangCategory:
    """?C = (!(C^op))^op."""
    return BangCategory(variant, c.opposite(), dual=True)


class ArityCategory:
    """?1 presented by arities: hom(m, n) is the variant's class of functions m -> n."""

    def __init__(self, variant):
        self.variant = Variant.parse(variant)
        self._restrictions: Dict = {}
        self.name = f"?{self.variant.label}1"

    def __eq__(self, other):
        return isinstance(other, ArityCategory) and other.variant == self.variant

    def __hash__(self):
        return hash(('arity', self.variant))

    def hom(self, m: int, n: int) -> Tuple[FiniteFunction, ...]:
        return self.variant.functions(m, n)

    def src(self, f: FiniteFunction) -> int:
        return f.dom

    def tgt(self, f: FiniteFunction) -> int:
        return f.cod

    def id(self, n: int) -> FiniteFunction:
        return FiniteFunction.identity(n)

    def compose(self, g: FiniteFunction, f: FiniteFunction) -> FiniteFunction:
        return g.compose(f)

    def restrict(self, max_arity: Optional[int] = None, arities: Optional[Sequence[int]] = None) -> FinCategory:
        if arities is None:
            max_arity = conf.nesting_bound() if max_arity is None else max_arity
            arities = range(max_arity + 1)
        arities = tuple(sorted(set(arities)))
        if arities in self._restrictions:
            return self._restrictions[arities]
        morphisms = {f: (f.dom, f.cod) for m in arities for n in arities for f in self.hom(m, n)}
        contiguous = arities == tuple(range(len(arities)))
        generators = [f for f in morphisms if len(elementary_factors(f)) == 1] if contiguous else list(morphisms)
        restricted = FinCategory(
            arities, morphisms, {n: self.id(n) for n in arities}, self.compose,
            generators=generators, name=f"{self.name}[<={max(arities, default=0)}]",
        )
        self._restrictions[arities] = restricted
        return restricted


def bang_functor(variant, f: FinFunctor) -> FinFunctor:
    """!f: !C -> !D, elementwise on lists and slotwise on families."""
    variant = Variant.parse(variant)
    problems = f.validate()
    if problems:
        raise ValidationFailed("not a functor", problems)
    source, target = BangCategory(variant, f.src), BangCategory(variant, f.tgt)

    def on_objects(a):
        return tuple(f.obj(x) for x in a)

    def on_morphisms(m: BangMorphism):
        return BangMorphism(variant, on_objects(m.src), on_objects(m.tgt), m.shape, tuple(f.mor(h) for h in m.family))

    return FinFunctor(source, target, on_objects, on_morphisms, name=f"!{f.name}")


def unit_functor(variant, base, max_len: Optional[int] = None) -> FinFunctor:
    """η_!: C -> !C restricted to lists of length <= max_len."""
    target = BangCategory(variant, base).restrict(max_len)
    return FinFunctor(base, target, unit_obj, lambda h: unit_mor(variant, base, h), name='eta!')

