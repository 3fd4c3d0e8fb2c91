"""Seeded sample families for the law checks and the acceptance suite.

Every generator takes a `numpy.random.Generator`; `rng(seed)` builds one from
an explicit seed or from OPKIT_DEFAULT_SEED. The same seed always yields the
same samples.

Base categories are kept free of non-trivial composites (terminal, discrete,
arrow, parallel pair), so any choice of maps on the non-identity morphisms is
a functor.
"""

import logging
from math import factorial
from typing import Dict, List, Optional, Sequence

import numpy as np

from opkit import conf
from opkit.diagrams import DELTA, EPSILON, SIGMA, FiniteFunction, Variant
from opkit.distlaw import DistSample
from opkit.errors import MalformedInput
from opkit.fincat import FinCategory, SetFunctor
from opkit.operads import ArityPresheaf
from opkit.prof import FiniteProfunctor, KleisliSample, prof_identity

logger = logging.getLogger(__name__)

CATEGORY_NAMES = ('1', 'discrete2', 'arrow', 'parallel')


def rng(seed: Optional[int] = None) -> np.random.Generator:
    return np.random.default_rng(conf.default_seed() if seed is None else seed)


def category(name: str) -> FinCategory:
    if name == '1':
        return FinCategory.terminal()
    if name == 'discrete2':
        return FinCategory.discrete(['A', 'B'], name='discrete2')
    if name == 'arrow':
        return FinCategory.arrow()
    if name == 'parallel':
        return FinCategory.parallel_pair()
    raise MalformedInput(f"unknown sample category {name!r}; expected one of {', '.join(CATEGORY_NAMES)}")


def _non_identities(cat: FinCategory) -> List:
    found = [m for m in cat.morphisms if m not in cat.identity.values()]
    for g in found:
        for f in found:
            if cat.tgt(f) == cat.src(g):
                raise MalformedInput(f"{cat.name} has composable non-identity morphisms; "
                                     "random functors need a category without composites")
    return found


def _size(gen: np.random.Generator, max_value: int) -> int:
    return int(gen.integers(1, max_value + 1))


def random_functor(gen: np.random.Generator, cat: FinCategory, variance: str = 'contravariant',
                   max_value: int = 2, name: str = '') -> SetFunctor:
    """Non-empty sets of at most `max_value` elements and uniformly random maps."""
    sets = {o: tuple(f"{name or 'x'}{i}{o}" for i in range(_size(gen, max_value))) for o in cat.objects}
    maps: Dict = {}
    for u in _non_identities(cat):
        s, t = cat.src(u), cat.tgt(u)
        dom, cod = (sets[t], sets[s]) if variance == 'contravariant' else (sets[s], sets[t])
        maps[u] = {x: cod[int(gen.integers(len(cod)))] for x in dom}
    return SetFunctor(cat, variance, sets, maps, name=name)


def random_profunctor(gen: np.random.Generator, src: FinCategory, tgt: FinCategory, max_value: int = 2,
                      name: str = 'Phi') -> FiniteProfunctor:
    """The external product A(c) × B(d) of a random functor on `src` and a random presheaf on `tgt`."""
    a = random_functor(gen, src, 'covariant', max_value, name='a')
    b = random_functor(gen, tgt, 'contravariant', max_value, name='b')
    sets = {(c, d): [(x, y) for x in a.at(c) for y in b.at(d)] for c in src.objects for d in tgt.objects}
    left = {(u, d): {(x, y): (a.act(u, x), y) for x in a.at(src.src(u)) for y in b.at(d)}
            for u in a.maps for d in tgt.objects}
    right = {(c, v): {(x, y): (x, b.act(v, y)) for x in a.at(c) for y in b.at(tgt.tgt(v))}
             for c in src.objects for v in b.maps}
    return FiniteProfunctor(src, tgt, sets, left, right, name=name)


def dist_samples(seed: Optional[int] = None, per_category: int = 1, max_value: int = 2,
                 max_len: int = 2) -> List[DistSample]:
    """Two random presheaves on each sample category, with g the identity profunctor."""
    gen = rng(seed)
    samples = []
    for cat_name in CATEGORY_NAMES:
        cat = category(cat_name)
        for i in range(per_category):
            presheaves = tuple(random_functor(gen, cat, max_value=max_value, name=f"X{j}") for j in range(2))
            samples.append(DistSample(f"{cat_name}#{i}", cat, presheaves, max_len, cat, prof_identity(cat)))
    return samples


def kleisli_samples(seed: Optional[int] = None, count: int = 4, max_value: int = 2) -> List[KleisliSample]:
    gen = rng(seed)
    samples = []
    for i in range(count):
        c, d, e = (category(CATEGORY_NAMES[int(gen.integers(len(CATEGORY_NAMES)))]) for _ in range(3))
        samples.append(KleisliSample(
            f"kleisli#{i}:{c.name}>{d.name}>{e.name}", c, d, e,
            random_profunctor(gen, c, d, max_value, name='F'),
            random_profunctor(gen, d, e, max_value, name='G'),
            random_functor(gen, c, max_value=max_value, name='X'),
        ))
    return samples


def _orbit_presheaf(variant: Variant, parts: Sequence, truncation: int, finite: bool, name: str) -> ArityPresheaf:
    """A sum of representables ('free', k) and fixed points ('point', n).

    Fixed points are only presheaves when the variant has no δ and no ε.
    """
    parts = tuple(parts)

    def sets(n):
        found = []
        for j, (kind, k) in enumerate(parts):
            if kind == 'point':
                if k == n:
                    found.append((j, None))
            else:
                found.extend((j, h) for h in variant.functions(k, n))
        return found

    def act(f: FiniteFunction, element):
        j, h = element
        return (j, None) if h is None else (j, f.compose(h))

    return ArityPresheaf(variant, truncation, sets, act, finite, name)


def random_arity_presheaf(variant, gen: np.random.Generator, max_support: int = 3, max_value: int = 3,
                          max_arity: int = 4, truncation: Optional[int] = None, name: str = 'X') -> ArityPresheaf:
    """A random arity presheaf.

    Without δ and ε the result is finitely supported with at most
    `max_support` non-empty arities of at most `max_value` elements. With δ
    it is a small sum of representables. With ε nothing non-empty is finitely
    supported, so the sum of representables is truncated at `truncation`
    (default `max_arity`).
    """
    variant = Variant.parse(variant)
    variant.require_monad()
    if EPSILON in variant or DELTA in variant:
        parts = [('free', int(gen.integers(0, 3))) for _ in range(int(gen.integers(1, 3)))]
        if EPSILON in variant:
            return _orbit_presheaf(variant, parts, max_arity if truncation is None else truncation, False, name)
        return _orbit_presheaf(variant, parts, max(k for _, k in parts), True, name)
    count = int(gen.integers(1, max_support + 1))
    arities = sorted(int(n) for n in gen.choice(max_arity + 1, size=min(count, max_arity + 1), replace=False))
    parts = []
    for n in arities:
        size = _size(gen, max_value)
        if SIGMA in variant and 2 <= n and factorial(n) <= size and gen.integers(2):
            parts.append(('free', n))
            size -= factorial(n)
        parts.extend(('point', n) for _ in range(size))
    presheaf = _orbit_presheaf(variant, parts, max(arities), True, name)
    logger.debug("sample presheaf %s: support %s", name, arities)
    return presheaf


def arity_samples(variant, seed: Optional[int] = None, count: int = 20, **bounds) -> List[ArityPresheaf]:
    gen = rng(seed)
    return [random_arity_presheaf(variant, gen, name=f"X{i}", **bounds) for i in range(count)]


def random_set(gen: np.random.Generator, max_size: int = 3) -> tuple:
    return tuple(f"z{i}" for i in range(int(gen.integers(1, max_size + 1))))
