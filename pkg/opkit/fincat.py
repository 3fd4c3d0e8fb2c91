"""Finite categories, set-valued functors and the coend engine.

Everything else in `opkit` computes a colimit or a coend at some point and
funnels it through `tensor()` / `coend()` here. Those functions build the
disjoint union of raw elements, union the pairs related by the generating
morphisms of the index category and return a `QuotientSet` whose canonical
representatives are the least raw elements of their classes under
`sort_key()`.

Notes for contributors:
- Categories may be explicit (`FinCategory`) or lazy (`opkit.bang`); anything
  exposing `hom`, `compose`, `id`, `src` and `tgt` works as a functor base.
  Coends always run over an explicit `FinCategory` (use `restrict()` on lazy
  categories first).
- Relations are only generated for `generating_morphisms()`. The relation for
  a composite follows from the relations of its factors, so this is exact.
- Element ids are arbitrary hashable values; tuples are used for everything
  the library builds.
"""

import logging
from dataclasses import dataclass, field
from itertools import product as cartesian
from typing import Any, Callable, Dict, Hashable, Iterable, List, Optional, Sequence, Tuple

from opkit import conf
from opkit.errors import (
    BoundaryMismatch, CapExceeded, CoherenceError, MalformedInput, ValidationFailed,
)

logger = logging.getLogger(__name__)


def sort_key(value) -> tuple:
    """Total order over the values the library uses as ids."""
    if value is None:
        return (0,)
    if isinstance(value, bool):
        return (1, int(value))
    if isinstance(value, int):
        return (1, value)
    if isinstance(value, str):
        return (2, value)
    if isinstance(value, (tuple, list)):
        return (3, tuple(sort_key(v) for v in value))
    if isinstance(value, frozenset):
        return (4, tuple(sorted(sort_key(v) for v in value)))
    if hasattr(value, 'sort_key'):
        return (5, type(value).__name__, value.sort_key())
    return (6, repr(value))


def render(value) -> str:
    """Short printable form of an element, used in witnesses and reports."""
    if isinstance(value, tuple):
        return '(' + ', '.join(render(v) for v in value) + ')'
    return str(value)


class UnionFind:
    """Disjoint sets over 0..size-1; the root of a set is its least index."""

    def __init__(self, size: int):
        self.parent = list(range(size))

    def find(self, i: int) -> int:
        root = i
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[i] != root:
            self.parent[i], i = root, self.parent[i]
        return root

    def union(self, i: int, j: int) -> None:
        ri, rj = self.find(i), self.find(j)
        if ri < rj:
            self.parent[rj] = ri
        elif rj < ri:
            self.parent[ri] = rj


@dataclass(frozen=True, eq=False)
class QuotientSet:
    raw: Tuple
    class_of: Dict
    classes: Tuple
    _members: Dict = field(default=None, repr=False)

    def __len__(self):
        return len(self.classes)

    def __iter__(self):
        return iter(self.classes)

    def __contains__(self, item):
        return item in self.class_of

    def canonical(self, element):
        try:
            return self.class_of[element]
        except KeyError:
            raise CoherenceError(f"{render(element)} is not a raw element of this quotient")

    def members(self, representative) -> Tuple:
        if self._members is None:
            grouped: Dict = {}
            for element in self.raw:
                grouped.setdefault(self.class_of[element], []).append(element)
            object.__setattr__(self, '_members', {k: tuple(v) for k, v in grouped.items()})
        return self._members.get(representative, ())

    @classmethod
    def discrete(cls, elements: Iterable) -> 'QuotientSet':
        raw = tuple(sorted(set(elements), key=sort_key))
        return cls(raw=raw, class_of={x: x for x in raw}, classes=raw)


def quotient(raw_elements: Iterable, relations: Iterable[Tuple[Any, Any]], what: str = 'quotient') -> QuotientSet:
    """Quotient `raw_elements` by the equivalence generated by `relations`.

    Pairs mentioning an element outside `raw_elements` are ignored.
    """
    raw = tuple(sorted(set(raw_elements), key=sort_key))
    limit = conf.cap()
    if len(raw) > limit:
        raise CapExceeded(what, len(raw), limit)
    index = {x: i for i, x in enumerate(raw)}
    uf = UnionFind(len(raw))
    for a, b in relations:
        ia, ib = index.get(a), index.get(b)
        if ia is not None and ib is not None:
            uf.union(ia, ib)
    class_of = {x: raw[uf.find(i)] for i, x in enumerate(raw)}
    classes = tuple(x for i, x in enumerate(raw) if uf.find(i) == i)
    logger.debug("%s: %d raw elements, %d classes", what, len(raw), len(classes))
    return QuotientSet(raw=raw, class_of=class_of, classes=classes)


def induced(source: Optional[QuotientSet], target: QuotientSet, raw_map: Callable, representative):
    """Act on a class through one representative and re-canonicalize.

    With OPKIT_DEBUG_CHECKS on, every member of the class is mapped and the
    results must agree.
    """
    image = target.class_of.get(raw_map(representative))
    if image is None:
        raise CoherenceError(f"action sends {render(representative)} outside the target value set")
    if source is not None and conf.debug_checks():
        for member in source.members(representative):
            if target.class_of.get(raw_map(member)) != image:
                raise CoherenceError(
                    f"action is not well defined on the class of {render(representative)}: "
                    f"{render(member)} lands elsewhere"
                )
    return image


class FinCategory:
    """An explicit finite category.

    `compose` is either a table {(g, f): g∘f} or a callable `(g, f) -> g∘f`.
    The constructor does not validate; call `validate_category()`.
    """

    def __init__(
        self,
        objects: Sequence[Hashable],
        morphisms: Dict[Hashable, Tuple[Hashable, Hashable]],
        identity: Dict[Hashable, Hashable],
        compose,
        generators: Optional[Sequence[Hashable]] = None,
        name: str = '',
    ):
        self.objects = tuple(objects)
        self.morphisms = dict(morphisms)
        self.identity = dict(identity)
        self._table = None if callable(compose) else dict(compose)
        self._compose_fn = compose if callable(compose) else None
        self.name = name
        self._homs: Dict = {}
        for m in sorted(self.morphisms, key=sort_key):
            self._homs.setdefault(self.morphisms[m], []).append(m)
        self._homs = {k: tuple(v) for k, v in self._homs.items()}
        identities = set(self.identity.values())
        if generators is None:
            generators = [m for m in self.morphisms if m not in identities]
        self._generators = tuple(sorted(generators, key=sort_key))
        self._opposite = None

    def __repr__(self):
        return f"FinCategory({self.name or len(self.objects)} objects, {len(self.morphisms)} morphisms)"

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, FinCategory):
            return NotImplemented
        if set(self.objects) != set(other.objects) or self.morphisms != other.morphisms:
            return False
        if self.identity != other.identity:
            return False
        return all(
            self.compose(g, f) == other.compose(g, f)
            for f in self.morphisms for g in self.hom(self.tgt(f), None)
        )

    def __hash__(self):
        return hash((len(self.objects), len(self.morphisms)))

    def sort_key(self):
        return (self.name, len(self.objects), len(self.morphisms))

    def src(self, m):
        return self.morphisms[m][0]

    def tgt(self, m):
        return self.morphisms[m][1]

    def id(self, obj):
        return self.identity[obj]

    def hom(self, a, b) -> Tuple:
        if b is None:
            return tuple(m for m in sorted(self.morphisms, key=sort_key) if self.src(m) == a)
        return self._homs.get((a, b), ())

    def compose(self, g, f):
        if self.tgt(f) != self.src(g):
            raise BoundaryMismatch(f"cannot compose {render(g)} after {render(f)}: {render(self.tgt(f))} != {render(self.src(g))}")
        if self._compose_fn is not None:
            return self._compose_fn(g, f)
        try:
            return self._table[(g, f)]
        except KeyError:
            if f == self.identity.get(self.src(f)):
                return g
            if g == self.identity.get(self.tgt(g)):
                return f
            raise MalformedInput(f"composition table has no entry for ({render(g)}, {render(f)})")

    def generating_morphisms(self) -> Tuple:
        return self._generators

    def opposite(self) -> 'FinCategory':
        if self._opposite is None:
            op = FinCategory(
                self.objects,
                {m: (t, s) for m, (s, t) in self.morphisms.items()},
                self.identity,
                lambda g, f: self.compose(f, g),
                generators=self._generators,
                name=f"{self.name}^op" if self.name else '',
            )
            op._opposite = self
            self._opposite = op
        return self._opposite

    # Factories

    @classmethod
    def terminal(cls) -> 'FinCategory':
        return cls(['*'], {'id*': ('*', '*')}, {'*': 'id*'}, {('id*', 'id*'): 'id*'}, name='1')

    @classmethod
    def discrete(cls, objects: Sequence[Hashable], name: str = '') -> 'FinCategory':
        ids = {o: ('id', o) for o in objects}
        return cls(
            objects, {m: (o, o) for o, m in ids.items()}, ids,
            {(m, m): m for m in ids.values()}, name=name or f"discrete{len(ids)}",
        )

    @classmethod
    def arrow(cls) -> 'FinCategory':
        """Two objects A, B and one non-identity arrow f: A -> B."""
        return cls(
            ['A', 'B'],
            {'idA': ('A', 'A'), 'idB': ('B', 'B'), 'f': ('A', 'B')},
            {'A': 'idA', 'B': 'idB'},
            {('idA', 'idA'): 'idA', ('idB', 'idB'): 'idB', ('f', 'idA'): 'f', ('idB', 'f'): 'f'},
            name='arrow',
        )

    @classmethod
    def parallel_pair(cls) -> 'FinCategory':
        """Two objects A, B and two arrows f, g: A -> B."""
        table = {('idA', 'idA'): 'idA', ('idB', 'idB'): 'idB'}
        for m in ('f', 'g'):
            table[(m, 'idA')] = m
            table[('idB', m)] = m
        return cls(
            ['A', 'B'],
            {'idA': ('A', 'A'), 'idB': ('B', 'B'), 'f': ('A', 'B'), 'g': ('A', 'B')},
            {'A': 'idA', 'B': 'idB'}, table, name='parallel',
        )

    @classmethod
    def product(cls, categories: Sequence['FinCategory']) -> 'FinCategory':
        """Finite product; the empty product is the one-object category on ()."""
        categories = tuple(categories)
        objects = list(cartesian(*(c.objects for c in categories)))
        morphisms = {}
        for a in objects:
            for b in objects:
                for ms in cartesian(*(c.hom(x, y) for c, x, y in zip(categories, a, b))):
                    morphisms[ms] = (a, b)
        identity = {o: tuple(c.id(x) for c, x in zip(categories, o)) for o in objects}
        generators = []
        for o in objects:
            for i, c in enumerate(categories):
                for g in c.generating_morphisms():
                    if c.src(g) != o[i]:
                        continue
                    generators.append(tuple(g if j == i else categories[j].id(o[j]) for j in range(len(categories))))

        def compose(g, f):
            return tuple(c.compose(x, y) for c, x, y in zip(categories, g, f))

        return cls(objects, morphisms, identity, compose, generators=generators,
                   name='x'.join(c.name for c in categories) or '1')

    @classmethod
    def from_table(cls, data: Dict, name: str = '') -> 'FinCategory':
        """Build from the JSON category format (already structurally validated).

        Composites with an identity may be omitted from "compose".
        """
        morphisms = {m['id']: (m['src'], m['tgt']) for m in data['morphisms']}
        table = {(g, f): gf for g, f, gf in data.get('compose', [])}
        for o, i in data['identity'].items():
            for m, (s, t) in morphisms.items():
                if s == o:
                    table.setdefault((m, i), m)
                if t == o:
                    table.setdefault((i, m), m)
        return cls(data['objects'], morphisms, data['identity'], table,
                   generators=data.get('generators'), name=name or data.get('name', ''))


class ProductIndex:
    """A product of categories given by its objects and coordinate generators.

    This is all `tensor()` needs; hom-sets of the product are never built.
    """

    def __init__(self, categories: Sequence, name: str = ''):
        self.categories = tuple(categories)
        self.objects = tuple(cartesian(*(c.objects for c in self.categories)))
        generators = []
        for o in self.objects:
            for i, c in enumerate(self.categories):
                for g in c.generating_morphisms():
                    if c.src(g) == o[i]:
                        generators.append(tuple(g if j == i else self.categories[j].id(o[j])
                                                for j in range(len(o))))
        self._generators = tuple(generators)
        self.name = name or 'x'.join(getattr(c, 'name', '') for c in self.categories)

    def __repr__(self):
        return f"ProductIndex({len(self.objects)} objects, {len(self._generators)} generators)"

    def generating_morphisms(self) -> Tuple:
        return self._generators

    def src(self, ms):
        return tuple(c.src(m) for c, m in zip(self.categories, ms))

    def tgt(self, ms):
        return tuple(c.tgt(m) for c, m in zip(self.categories, ms))

    def id(self, obj):
        return tuple(c.id(x) for c, x in zip(self.categories, obj))

    def compose(self, g, f):
        return tuple(c.compose(x, y) for c, x, y in zip(self.categories, g, f))


def validate_category(c: FinCategory) -> List[str]:
    """Every violated axiom instance; empty iff `c` is a category."""
    report: List[str] = []
    objects = set(c.objects)
    for m, (s, t) in sorted(c.morphisms.items(), key=lambda kv: sort_key(kv[0])):
        if s not in objects or t not in objects:
            report.append(f"morphism {render(m)} has endpoints outside the objects: {render(s)} -> {render(t)}")
    for o in c.objects:
        i = c.identity.get(o)
        if i is None or i not in c.morphisms:
            report.append(f"object {render(o)} has no identity")
        elif c.morphisms[i] != (o, o):
            report.append(f"identity {render(i)} of {render(o)} is typed {render(c.morphisms[i])}")
    if report:
        return report
    if c._table is not None:
        for (g, f), h in sorted(c._table.items(), key=lambda kv: sort_key(kv[0])):
            if g not in c.morphisms or f not in c.morphisms:
                report.append(f"composition entry ({render(g)}, {render(f)}) names an unknown morphism")
            elif c.tgt(f) != c.src(g):
                report.append(f"composition entry ({render(g)}, {render(f)}) is defined on a non-composable pair")
    ordered = sorted(c.morphisms, key=sort_key)

    def comp(g, f):
        try:
            return c.compose(g, f), None
        except (MalformedInput, KeyError) as exc:
            return None, str(exc)

    composites = {}
    for f in ordered:
        for g in c.hom(c.tgt(f), None):
            h, problem = comp(g, f)
            if problem:
                report.append(f"composite of ({render(g)}, {render(f)}) is undefined")
                continue
            if h not in c.morphisms:
                report.append(f"composite of ({render(g)}, {render(f)}) is {render(h)}, not a morphism")
                continue
            expected = (c.src(f), c.tgt(g))
            if c.morphisms[h] != expected:
                report.append(
                    f"composite of ({render(g)}, {render(f)}) is {render(h)} typed "
                    f"{render(c.morphisms[h])}, expected {render(expected)}"
                )
                continue
            composites[(g, f)] = h
    for f in ordered:
        if composites.get((c.id(c.tgt(f)), f), f) != f:
            report.append(f"identity of {render(c.tgt(f))} is not left neutral on {render(f)}")
        if composites.get((f, c.id(c.src(f))), f) != f:
            report.append(f"identity of {render(c.src(f))} is not right neutral on {render(f)}")
    for f in ordered:
        for g in c.hom(c.tgt(f), None):
            if (g, f) not in composites:
                continue
            for h in c.hom(c.tgt(g), None):
                gf, hg = composites.get((g, f)), composites.get((h, g))
                if hg is None:
                    continue
                left, right = composites.get((h, gf)), composites.get((hg, f))
                if left is not None and right is not None and left != right:
                    report.append(f"associativity fails on ({render(h)}, {render(g)}, {render(f)})")
    return report


class FinFunctor:
    """A functor between categories, given by tables or callables."""

    def __init__(self, src, tgt, on_objects, on_morphisms, name: str = ''):
        self.src = src
        self.tgt = tgt
        self._obj = on_objects if callable(on_objects) else dict(on_objects).__getitem__
        self._mor = on_morphisms if callable(on_morphisms) else dict(on_morphisms).__getitem__
        self.name = name

    def obj(self, x):
        try:
            return self._obj(x)
        except KeyError:
            raise MalformedInput(f"functor {self.name} is undefined on object {render(x)}")

    def mor(self, m):
        try:
            return self._mor(m)
        except KeyError:
            raise MalformedInput(f"functor {self.name} is undefined on morphism {render(m)}")

    def validate(self, category: Optional[FinCategory] = None) -> List[str]:
        base = category or self.src
        report = []
        for m in sorted(base.morphisms, key=sort_key):
            try:
                image = self.mor(m)
                expected = (self.obj(base.src(m)), self.obj(base.tgt(m)))
                if (self.tgt.src(image), self.tgt.tgt(image)) != expected:
                    report.append(f"{render(m)} is sent to {render(image)} with the wrong endpoints")
            except (MalformedInput, KeyError) as exc:
                report.append(str(exc))
        if report:
            return report
        for o in base.objects:
            if self.mor(base.id(o)) != self.tgt.id(self.obj(o)):
                report.append(f"identity of {render(o)} is not preserved")
        for f in sorted(base.morphisms, key=sort_key):
            for g in base.hom(base.tgt(f), None):
                if self.mor(base.compose(g, f)) != self.tgt.compose(self.mor(g), self.mor(f)):
                    report.append(f"composite ({render(g)}, {render(f)}) is not preserved")
        return report

    @classmethod
    def identity(cls, c) -> 'FinFunctor':
        return cls(c, c, lambda x: x, lambda m: m, name='id')

    def then(self, other: 'FinFunctor') -> 'FinFunctor':
        """`other` after `self`."""
        return FinFunctor(self.src, other.tgt, lambda x: other.obj(self.obj(x)),
                          lambda m: other.mor(self.mor(m)), name=f"{other.name}.{self.name}")


def identity_functor(c) -> FinFunctor:
    return FinFunctor.identity(c)


def compose_functors(g: FinFunctor, f: FinFunctor) -> FinFunctor:
    """g∘f; raises BoundaryMismatch when the middle categories differ."""
    if f.tgt != g.src:
        raise BoundaryMismatch(f"cannot compose {g.name or 'functor'} after {f.name or 'functor'}")
    return f.then(g)


class FunctorLike:
    """A finite-set-valued functor on `base`.

    For a morphism u: a -> b, `act(u, x)` sends x in F(a) to F(b) when
    covariant, and x in F(b) to F(a) when contravariant.
    """

    variance = 'covariant'
    base = None

    def at(self, obj) -> Tuple:
        raise NotImplementedError

    def act(self, u, x):
        raise NotImplementedError

    @property
    def contravariant(self) -> bool:
        return self.variance == 'contravariant'

    def domain_of(self, u):
        return self.base.tgt(u) if self.contravariant else self.base.src(u)

    def codomain_of(self, u):
        return self.base.src(u) if self.contravariant else self.base.tgt(u)

    def validate(self, category: Optional[FinCategory] = None) -> List[str]:
        """Functoriality on every morphism and composable pair of `category`."""
        base = category or self.base
        report = []
        for u in sorted(base.morphisms, key=sort_key):
            source, target = (base.tgt(u), base.src(u)) if self.contravariant else (base.src(u), base.tgt(u))
            values = set(self.at(target))
            for x in self.at(source):
                try:
                    y = self.act(u, x)
                except (MalformedInput, KeyError) as exc:
                    report.append(f"action of {render(u)} on {render(x)} fails: {exc}")
                    continue
                if y not in values:
                    report.append(f"action of {render(u)} sends {render(x)} to {render(y)}, outside F({render(target)})")
        if report:
            return report
        for o in base.objects:
            for x in self.at(o):
                if self.act(base.id(o), x) != x:
                    report.append(f"identity of {render(o)} moves {render(x)}")
        for f in sorted(base.morphisms, key=sort_key):
            for g in base.hom(base.tgt(f), None):
                gf = base.compose(g, f)
                if self.contravariant:
                    for x in self.at(base.tgt(g)):
                        if self.act(gf, x) != self.act(f, self.act(g, x)):
                            report.append(f"composite ({render(g)}, {render(f)}) is not preserved at {render(x)}")
                else:
                    for x in self.at(base.src(f)):
                        if self.act(gf, x) != self.act(g, self.act(f, x)):
                            report.append(f"composite ({render(g)}, {render(f)}) is not preserved at {render(x)}")
        return report


class SetFunctor(FunctorLike):
    """Explicit data: `sets[obj]` and `maps[morphism][element]`.

    Identity morphisms may be left out of `maps`.
    """

    def __init__(self, base: FinCategory, variance: str, sets: Dict, maps: Dict, name: str = ''):
        if variance not in ('covariant', 'contravariant'):
            raise MalformedInput(f"unknown variance {variance!r}")
        self.base = base
        self.variance = variance
        self.sets = {o: tuple(sorted(v, key=sort_key)) for o, v in sets.items()}
        self.maps = {m: dict(v) for m, v in maps.items()}
        self.name = name

    def at(self, obj):
        return self.sets.get(obj, ())

    def act(self, u, x):
        table = self.maps.get(u)
        if table is None:
            if u == self.base.identity.get(self.base.src(u)):
                return x
            raise MalformedInput(f"{self.name or 'functor'} gives no action for {render(u)}")
        try:
            return table[x]
        except KeyError:
            raise MalformedInput(f"action of {render(u)} is undefined on {render(x)}")


class LazyFunctor(FunctorLike):
    """Values computed on demand by `at_fn` and memoized."""

    def __init__(self, base, variance: str, at_fn: Callable, act_fn: Callable, name: str = ''):
        self.base = base
        self.variance = variance
        self._at = at_fn
        self._act = act_fn
        self._cache: Dict = {}
        self.name = name

    def at(self, obj):
        if obj not in self._cache:
            self._cache[obj] = tuple(self._at(obj))
        return self._cache[obj]

    def act(self, u, x):
        return self._act(u, x)


class CoendFunctor(FunctorLike):
    """A functor whose value at each object is the class set of a quotient.

    `raw_act(u, raw)` maps a raw element at the domain of `u` to a raw
    element of the quotient at the codomain.
    """

    def __init__(self, base, variance: str, quotient_at: Callable, raw_act: Callable, name: str = ''):
        self.base = base
        self.variance = variance
        self._quotient_at = quotient_at
        self._raw_act = raw_act
        self._cache: Dict = {}
        self.name = name

    def quotient(self, obj) -> QuotientSet:
        if obj not in self._cache:
            self._cache[obj] = self._quotient_at(obj)
        return self._cache[obj]

    def at(self, obj):
        return self.quotient(obj).classes

    def act(self, u, x):
        return induced(self.quotient(self.domain_of(u)), self.quotient(self.codomain_of(u)),
                       lambda r: self._raw_act(u, r), x)


def representable(c, a, variance: str = 'contravariant') -> LazyFunctor:
    """C[-, a] (contravariant) or C[a, -] (covariant)."""
    if variance == 'contravariant':
        return LazyFunctor(c, variance, lambda x: c.hom(x, a), lambda u, h: c.compose(h, u), name=f"y({render(a)})")
    return LazyFunctor(c, variance, lambda x: c.hom(a, x), lambda u, h: c.compose(u, h), name=f"C[{render(a)},-]")


class ProductFunctor(FunctorLike):
    """Pointwise product of functors on the product of their bases."""

    def __init__(self, factors: Sequence[FunctorLike], base: FinCategory):
        self.factors = tuple(factors)
        self.base = base
        self.variance = self.factors[0].variance if self.factors else 'contravariant'

    def at(self, obj):
        return tuple(cartesian(*(f.at(o) for f, o in zip(self.factors, obj))))

    def act(self, u, x):
        return tuple(f.act(m, y) for f, m, y in zip(self.factors, u, x))


class NatTrans:
    """A natural transformation between functors on the same base."""

    def __init__(self, source: FunctorLike, target: FunctorLike, components):
        self.source = source
        self.target = target
        self._component = components if callable(components) else (lambda o, x: components[o][x])

    def __call__(self, obj, x):
        try:
            return self._component(obj, x)
        except KeyError:
            raise MalformedInput(f"transformation is undefined at {render(obj)} on {render(x)}")

    def validate(self, category: Optional[FinCategory] = None) -> List[str]:
        base = category or self.source.base
        report = []
        for o in base.objects:
            values = set(self.target.at(o))
            for x in self.source.at(o):
                if self(o, x) not in values:
                    report.append(f"component at {render(o)} sends {render(x)} outside the target")
        if report:
            return report
        for u in sorted(base.morphisms, key=sort_key):
            dom = self.source.domain_of(u)
            cod = self.source.codomain_of(u)
            for x in self.source.at(dom):
                if self(cod, self.source.act(u, x)) != self.target.act(u, self(dom, x)):
                    report.append(f"naturality fails for {render(u)} at {render(x)}")
        return report


def tensor(contra: FunctorLike, co: FunctorLike, index: FinCategory, what: str = 'coend') -> QuotientSet:
    """∫^c contra(c) × co(c) over the objects of `index`.

    Raw elements are `(c, (a, b))`. For each generator u: c -> c',
    a in contra(c') and b in co(c):
    (c, (contra(u)(a), b)) ~ (c', (a, co(u)(b))).
    """
    sizes = {c: (contra.at(c), co.at(c)) for c in index.objects}
    total = sum(len(a) * len(b) for a, b in sizes.values())
    limit = conf.cap()
    if total > limit:
        raise CapExceeded(what, total, limit)
    raw = [(c, (a, b)) for c in index.objects for a in sizes[c][0] for b in sizes[c][1]]

    def relations():
        for u in index.generating_morphisms():
            c, c2 = index.src(u), index.tgt(u)
            for a in sizes[c2][0]:
                left = contra.act(u, a)
                for b in sizes[c][1]:
                    yield (c, (left, b)), (c2, (a, co.act(u, b)))

    return quotient(raw, relations(), what=what)


class BiFunctor:
    """H: C^op × C -> Set, contravariant in the first argument.

    `act_contra(u, c2, x)` for u: a -> b sends H(b, c2) to H(a, c2);
    `act_co(c1, u, x)` for u: a -> b sends H(c1, a) to H(c1, b).
    """

    def __init__(self, base: FinCategory, at: Callable, act_contra: Callable, act_co: Callable):
        self.base = base
        self._at = at
        self.act_contra = act_contra
        self.act_co = act_co
        self._cache: Dict = {}

    def at(self, c1, c2):
        key = (c1, c2)
        if key not in self._cache:
            self._cache[key] = tuple(self._at(c1, c2))
        return self._cache[key]

    @classmethod
    def product(cls, contra: FunctorLike, co: FunctorLike) -> 'BiFunctor':
        return cls(
            contra.base,
            lambda c1, c2: tuple(cartesian(contra.at(c1), co.at(c2))),
            lambda u, c2, x: (contra.act(u, x[0]), x[1]),
            lambda c1, u, x: (x[0], co.act(u, x[1])),
        )

    def validate(self) -> List[str]:
        report = []
        base = self.base
        for u in sorted(base.morphisms, key=sort_key):
            for v in sorted(base.morphisms, key=sort_key):
                # u acts on the first argument, v on the second
                for x in self.at(base.tgt(u), base.src(v)):
                    one = self.act_co(base.src(u), v, self.act_contra(u, base.src(v), x))
                    two = self.act_contra(u, base.tgt(v), self.act_co(base.tgt(u), v, x))
                    if one != two:
                        report.append(f"actions of {render(u)} and {render(v)} do not commute at {render(x)}")
        return report


def coend(h: BiFunctor, index: Optional[FinCategory] = None, check: bool = False) -> QuotientSet:
    """∫^c H(c, c): raw elements (c, x) for x in H(c, c)."""
    index = index or h.base
    if check:
        problems = h.validate()
        if problems:
            raise ValidationFailed("integrand is not a bifunctor", problems)
    raw = [(c, x) for c in index.objects for x in h.at(c, c)]

    def relations():
        for u in index.generating_morphisms():
            c, c2 = index.src(u), index.tgt(u)
            for x in h.at(c2, c):
                yield (c, h.act_contra(u, c, x)), (c2, h.act_co(c2, u, x))

    return quotient(raw, relations(), what='coend')


def colimit(d: FunctorLike, index: Optional[FinCategory] = None) -> QuotientSet:
    """Colimit of a covariant functor: (a, x) ~ (b, d(u)(x)) for u: a -> b."""
    if d.contravariant:
        raise MalformedInput("colimit needs a covariant functor")
    index = index or d.base
    if isinstance(d, SetFunctor):
        problems = d.validate(index)
        if problems:
            raise ValidationFailed("diagram is not a functor", problems)
    raw = [(c, x) for c in index.objects for x in d.at(c)]
    relations = ((((index.src(u), x), (index.tgt(u), d.act(u, x)))
                  for u in index.generating_morphisms() for x in d.at(index.src(u))))
    return quotient(raw, relations, what='colimit')


def lan_along(k: FinFunctor, t: FunctorLike) -> CoendFunctor:
    """Left Kan extension: (Lan_K T)(c) = ∫^m C[K m, c] × T m."""
    if t.contravariant:
        raise MalformedInput("lan_along extends covariant functors")
    problems = k.validate()
    if problems:
        raise ValidationFailed("K is not a functor", problems)
    m_cat, c_cat = k.src, k.tgt

    def quotient_at(c):
        contra = LazyFunctor(m_cat, 'contravariant', lambda m: c_cat.hom(k.obj(m), c),
                             lambda u, h: c_cat.compose(h, k.mor(u)))
        return tensor(contra, t, m_cat, what='lan')

    def raw_act(w, raw):
        m, (h, x) = raw
        return (m, (c_cat.compose(w, h), x))

    return CoendFunctor(c_cat, 'covariant', quotient_at, raw_act, name='lan')


@dataclass
class CheckReport:
    name: str
    instances: int = 0
    witnesses: List[Dict] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.witnesses

    def witness(self, kind: str, **detail) -> None:
        self.witnesses.append({'kind': kind, **{k: render(v) for k, v in detail.items()}})

    def absorb(self, other: 'CheckReport', prefix: str = '') -> 'CheckReport':
        self.instances += other.instances
        self.notes.extend(n for n in other.notes if n not in self.notes)
        for w in other.witnesses:
            entry = dict(w)
            entry.setdefault('check', prefix or other.name)
            self.witnesses.append(entry)
        return self

    def to_dict(self) -> Dict:
        data = {'name': self.name, 'instances': self.instances, 'passed': self.passed,
                'witnesses': list(self.witnesses)}
        if self.notes:
            data['notes'] = list(self.notes)
        return data


def compare_quotients(q1: QuotientSet, q2: QuotientSet, fn: Callable, report: Optional[CheckReport] = None,
                      context: str = '') -> CheckReport:
    """Check that raw map `fn` induces a bijection q1/~ -> q2/~.

    Records well-definedness, range, injectivity and surjectivity failures.
    """
    report = report if report is not None else CheckReport('comparison')
    report.instances += 1
    image_of: Dict = {}
    for element in q1.raw:
        target = q2.class_of.get(fn(element))
        if target is None:
            report.witness('out-of-range', element=element, at=context)
            return report
        rep = q1.class_of[element]
        seen = image_of.setdefault(rep, target)
        if seen != target:
            report.witness('not-well-defined', element=element, representative=rep, at=context)
            return report
    hit: Dict = {}
    for rep, target in image_of.items():
        if target in hit:
            report.witness('not-injective', first=hit[target], second=rep, image=target, at=context)
            return report
        hit[target] = rep
    for cls in q2.classes:
        if cls not in hit:
            report.witness('not-surjective', missed=cls, at=context)
            return report
    return report


def natural_on_generators(source: FunctorLike, target: FunctorLike, component: Callable, index: FinCategory,
                          report: Optional[CheckReport] = None, context: str = '') -> CheckReport:
    """Naturality of `component(obj, x)` on the generating morphisms of `index`."""
    report = report if report is not None else CheckReport('naturality')
    for u in index.generating_morphisms():
        dom, cod = source.domain_of(u), source.codomain_of(u)
        report.instances += 1
        for x in source.at(dom):
            if component(cod, source.act(u, x)) != target.act(u, component(dom, x)):
                report.witness('not-natural', morphism=u, element=x, at=context)
                return report
    return report
