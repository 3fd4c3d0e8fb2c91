"""Profunctors, their composition and the presheaf Kleisli structure.

A profunctor Φ: C ⇸ C′ is a set Φ(c, c′) for every pair of objects, covariant
in c and contravariant in c′:

    act_left(u, c′, x)   for u: c -> c1 sends Φ(c, c′) to Φ(c1, c′)
    act_right(c, v, x)   for v: c′ -> c1′ sends Φ(c, c1′) to Φ(c, c′)

Composition Ψ∘Φ (c, c″) is the coend over C′ of Φ(c, -) × Ψ(-, c″); the
composite actions act on a representative and re-canonicalize. The
comparisons behind the unit, associativity and Kleisli laws are explicit
maps of raw elements checked with `compare_quotients`.
"""

import logging
from typing import Callable, Dict, List, NamedTuple, Optional

from opkit.errors import BoundaryMismatch, MalformedInput
from opkit.fincat import (
    CheckReport, CoendFunctor, FinCategory, FinFunctor, FunctorLike, LazyFunctor, ProductIndex, QuotientSet, SetFunctor,
    compare_quotients, induced, natural_on_generators, render, representable, sort_key, tensor,
)

logger = logging.getLogger(__name__)


class Profunctor:
    src = None
    tgt = None
    name = ''

    def at(self, c, d):
        raise NotImplementedError

    def act_left(self, u, d, x):
        raise NotImplementedError

    def act_right(self, c, v, x):
        raise NotImplementedError

    def column(self, c) -> LazyFunctor:
        """Φ(c, -), a presheaf on the target."""
        return LazyFunctor(self.tgt, 'contravariant', lambda d: self.at(c, d),
                           lambda v, x: self.act_right(c, v, x), name=f"{self.name}({render(c)},-)")

    def row(self, d) -> LazyFunctor:
        """Φ(-, d), a covariant functor on the source."""
        return LazyFunctor(self.src, 'covariant', lambda c: self.at(c, d),
                           lambda u, x: self.act_left(u, d, x), name=f"{self.name}(-,{render(d)})")

    def dual(self) -> 'Profunctor':
        """Φ^op: C′^op ⇸ C^op with Φ^op(d, c) = Φ(c, d)."""
        return DualProfunctor(self)

    def validate(self, src: Optional[FinCategory] = None, tgt: Optional[FinCategory] = None) -> List[str]:
        """Functoriality of both actions and their commutation."""
        src, tgt = src or self.src, tgt or self.tgt
        report = []
        for c in src.objects:
            report.extend(f"at ({render(c)}, -): {p}" for p in self.column(c).validate(tgt))
        for d in tgt.objects:
            report.extend(f"at (-, {render(d)}): {p}" for p in self.row(d).validate(src))
        if report:
            return report
        for u in sorted(src.morphisms, key=sort_key):
            for v in sorted(tgt.morphisms, key=sort_key):
                for x in self.at(src.src(u), tgt.tgt(v)):
                    one = self.act_right(src.tgt(u), v, self.act_left(u, tgt.tgt(v), x))
                    two = self.act_left(u, tgt.src(v), self.act_right(src.src(u), v, x))
                    if one != two:
                        report.append(f"actions of {render(u)} and {render(v)} do not commute at {render(x)}")
        return report


class DualProfunctor(Profunctor):
    def __init__(self, inner: Profunctor):
        self.inner = inner
        self.src = inner.tgt.opposite()
        self.tgt = inner.src.opposite()
        self.name = f"{inner.name}^op"

    def at(self, d, c):
        return self.inner.at(c, d)

    def act_left(self, u, c, x):
        return self.inner.act_right(c, u, x)

    def act_right(self, d, v, x):
        return self.inner.act_left(v, d, x)

    def dual(self) -> Profunctor:
        return self.inner


class FiniteProfunctor(Profunctor):
    """Explicit tables. Identity morphisms may be left out of the action tables.

    `left[(u, d)]` and `right[(c, v)]` map elements to elements.
    """

    def __init__(self, src: FinCategory, tgt: FinCategory, sets: Dict, left: Dict, right: Dict, name: str = ''):
        self.src = src
        self.tgt = tgt
        self.sets = {k: tuple(sorted(v, key=sort_key)) for k, v in sets.items()}
        self.left = {k: dict(v) for k, v in left.items()}
        self.right = {k: dict(v) for k, v in right.items()}
        self.name = name or 'Phi'

    def at(self, c, d):
        return self.sets.get((c, d), ())

    def _lookup(self, table, key, x, identity: bool, what: str):
        entry = table.get(key)
        if entry is None:
            if identity:
                return x
            raise MalformedInput(f"{self.name}: no {what} action for {render(key)}")
        try:
            return entry[x]
        except KeyError:
            raise MalformedInput(f"{self.name}: {what} action of {render(key)} is undefined on {render(x)}")

    def act_left(self, u, d, x):
        return self._lookup(self.left, (u, d), x, u == self.src.id(self.src.src(u)), 'left')

    def act_right(self, c, v, x):
        return self._lookup(self.right, (c, v), x, v == self.tgt.id(self.tgt.src(v)), 'right')


class LazyProfunctor(Profunctor):
    def __init__(self, src, tgt, at_fn: Callable, left_fn: Callable, right_fn: Callable, name: str = ''):
        self.src = src
        self.tgt = tgt
        self._at = at_fn
        self._left = left_fn
        self._right = right_fn
        self._cache: Dict = {}
        self.name = name

    def at(self, c, d):
        key = (c, d)
        if key not in self._cache:
            self._cache[key] = tuple(self._at(c, d))
        return self._cache[key]

    def act_left(self, u, d, x):
        return self._left(u, d, x)

    def act_right(self, c, v, x):
        return self._right(c, v, x)


class CoendProfunctor(Profunctor):
    """Values are quotients; actions are given on raw elements."""

    def __init__(self, src, tgt, quotient_at: Callable, raw_left: Callable, raw_right: Callable, name: str = ''):
        self.src = src
        self.tgt = tgt
        self._quotient_at = quotient_at
        self._raw_left = raw_left
        self._raw_right = raw_right
        self._cache: Dict = {}
        self.name = name

    def quotient(self, c, d) -> QuotientSet:
        key = (c, d)
        if key not in self._cache:
            self._cache[key] = self._quotient_at(c, d)
        return self._cache[key]

    def at(self, c, d):
        return self.quotient(c, d).classes

    def act_left(self, u, d, x):
        return induced(self.quotient(self.src.src(u), d), self.quotient(self.src.tgt(u), d),
                       lambda r: self._raw_left(u, d, r), x)

    def act_right(self, c, v, x):
        return induced(self.quotient(c, self.tgt.tgt(v)), self.quotient(c, self.tgt.src(v)),
                       lambda r: self._raw_right(c, v, r), x)


def prof_compose(psi: Profunctor, phi: Profunctor, index: Optional[FinCategory] = None) -> CoendProfunctor:
    """Ψ∘Φ; raw elements are (c′, (φ, ψ)).

    `index` is the explicit category the coend runs over; it defaults to the
    middle category and must be given when that category is lazy.
    """
    if index is None:
        if psi.src != phi.tgt:
            raise BoundaryMismatch(f"cannot compose {psi.name} after {phi.name}: middle categories differ")
        index = phi.tgt
    if not isinstance(index, (FinCategory, ProductIndex)):
        raise BoundaryMismatch("composition over a lazy category needs an explicit index")

    def quotient_at(c, e):
        return tensor(phi.column(c), psi.row(e), index, what=f"{psi.name}.{phi.name}")

    def raw_left(u, e, raw):
        m, (x, y) = raw
        return (m, (phi.act_left(u, m, x), y))

    def raw_right(c, v, raw):
        m, (x, y) = raw
        return (m, (x, psi.act_right(m, v, y)))

    return CoendProfunctor(phi.src, psi.tgt, quotient_at, raw_left, raw_right, name=f"{psi.name}.{phi.name}")


def prof_identity(c) -> LazyProfunctor:
    """The hom profunctor: Id(a, b) = C[b, a]."""
    return LazyProfunctor(
        c, c,
        lambda a, b: c.hom(b, a),
        lambda u, b, h: c.compose(u, h),
        lambda a, v, h: c.compose(h, v),
        name='Id',
    )


def prof_of_functor(k: FinFunctor) -> LazyProfunctor:
    """Yoneda after k, as a profunctor C ⇸ D: (c, d) -> D[d, k c]."""
    d_cat = k.tgt
    return LazyProfunctor(
        k.src, d_cat,
        lambda c, d: d_cat.hom(d, k.obj(c)),
        lambda u, d, h: d_cat.compose(k.mor(u), h),
        lambda c, v, h: d_cat.compose(h, v),
        name=f"y.{k.name or 'K'}",
    )


def yoneda_presheaf(c, a) -> LazyFunctor:
    return representable(c, a, 'contravariant')


def sharp(f: Profunctor, x: FunctorLike, index: Optional[FinCategory] = None) -> CoendFunctor:
    """F^# X (d) = ∫^c X c × F(c, d), a presheaf on the target of F."""
    if not x.contravariant:
        raise MalformedInput("sharp extends presheaves (contravariant functors)")
    index = index or f.src
    if not isinstance(index, (FinCategory, ProductIndex)):
        raise BoundaryMismatch("sharp over a lazy category needs an explicit index")

    def quotient_at(d):
        return tensor(x, f.row(d), index, what=f"{f.name}#")

    def raw_act(v, raw):
        c, (a, y) = raw
        return (c, (a, f.act_right(c, v, y)))

    return CoendFunctor(f.tgt, 'contravariant', quotient_at, raw_act, name=f"{f.name}#")


def psh_map(k: FinFunctor, x: FunctorLike, index: Optional[FinCategory] = None) -> CoendFunctor:
    """Psh(K) X (d) = ∫^c X c × D[d, K c]; raw elements (c, (x, h))."""
    return sharp(prof_of_functor(k), x, index or k.src)


def _invalid_inputs(report: CheckReport, named: Dict) -> bool:
    for label, (value, categories) in named.items():
        if isinstance(value, FiniteProfunctor):
            problems = value.validate(*categories)
        elif isinstance(value, SetFunctor):
            problems = value.validate(categories[0])
        else:
            continue
        for problem in problems:
            report.witness('invalid-input', input=label, problem=problem)
    return not report.passed


def compare_presheaves(report: CheckReport, lhs: CoendFunctor, rhs: FunctorLike, fn: Callable,
                        index: FinCategory, context: str) -> None:
    """Classwise bijection at every object plus naturality on generators."""
    for d in index.objects:
        q2 = rhs.quotient(d) if isinstance(rhs, CoendFunctor) else QuotientSet.discrete(rhs.at(d))
        compare_quotients(lhs.quotient(d), q2, lambda raw: fn(d, raw), report, context=f"{context} at {render(d)}")
        if not report.passed:
            return

    def component(d, cls):
        q2 = rhs.quotient(d) if isinstance(rhs, CoendFunctor) else QuotientSet.discrete(rhs.at(d))
        return q2.canonical(fn(d, cls))

    natural_on_generators(lhs, rhs, component, index, report, context=context)


class KleisliSample(NamedTuple):
    """F: C ⇸ D, G: D ⇸ E and a presheaf X on C."""
    name: str
    c: FinCategory
    d: FinCategory
    e: FinCategory
    f: Profunctor
    g: Profunctor
    x: FunctorLike


def kleisli_laws_check(sample: KleisliSample) -> CheckReport:
    """F^#∘η = F, η^# = id and (G^#∘F)^# = G^#∘F^# on one sample."""
    report = CheckReport(f"kleisli[{sample.name}]")
    if _invalid_inputs(report, {'F': (sample.f, (sample.c, sample.d)), 'G': (sample.g, (sample.d, sample.e)),
                                'X': (sample.x, (sample.c,))}):
        return report
    f, g, x = sample.f, sample.g, sample.x

    for c in sample.c.objects:
        lhs = sharp(f, yoneda_presheaf(sample.c, c), sample.c)
        compare_presheaves(report, lhs, f.column(c), lambda d, raw: f.act_left(raw[1][0], d, raw[1][1]),
                            sample.d, f"F#(y {render(c)})")
        if not report.passed:
            return report

    lhs = sharp(prof_identity(sample.c), x, sample.c)
    compare_presheaves(report, lhs, x, lambda d, raw: x.act(raw[1][1], raw[1][0]), sample.c, 'eta#')
    if not report.passed:
        return report

    gf = prof_compose(g, f, sample.d)
    lhs = sharp(gf, x, sample.c)
    fx = sharp(f, x, sample.c)
    rhs = sharp(g, fx, sample.d)

    def transport(e, raw):
        c, (a, (d, (phi, gamma))) = raw
        return (d, (fx.quotient(d).canonical((c, (a, phi))), gamma))

    compare_presheaves(report, lhs, rhs, transport, sample.e, '(G#F)#')
    if not report.passed:
        logger.warning("Kleisli law check %s failed: %s", report.name, report.witnesses[0])
    return report


def compare_profunctors(report: CheckReport, lhs: CoendProfunctor, rhs: Profunctor, fn: Callable,
                         src: FinCategory, tgt: FinCategory, context: str) -> None:
    def target(c, d):
        return rhs.quotient(c, d) if isinstance(rhs, CoendProfunctor) else QuotientSet.discrete(rhs.at(c, d))

    for c in src.objects:
        for d in tgt.objects:
            compare_quotients(lhs.quotient(c, d), target(c, d), lambda raw: fn(c, d, raw), report,
                              context=f"{context} at ({render(c)}, {render(d)})")
            if not report.passed:
                return
    for c in src.objects:
        natural_on_generators(lhs.column(c), rhs.column(c), lambda d, x: target(c, d).canonical(fn(c, d, x)),
                              tgt, report, context=f"{context} right action")
    for d in tgt.objects:
        natural_on_generators(lhs.row(d), rhs.row(d), lambda c, x: target(c, d).canonical(fn(c, d, x)),
                              src, report, context=f"{context} left action")


class CompositionSample(NamedTuple):
    """Φ: C ⇸ C′, Ψ: C′ ⇸ C″ and Θ: C″ ⇸ C‴ over explicit categories."""
    name: str
    cats: tuple
    phi: Profunctor
    psi: Profunctor
    theta: Profunctor


def check_composition_laws(sample: CompositionSample) -> CheckReport:
    """Unit laws, associativity and self-duality of composition, up to the canonical bijections."""
    c0, c1, c2, c3 = sample.cats
    phi, psi, theta = sample.phi, sample.psi, sample.theta
    report = CheckReport(f"composition[{sample.name}]")
    if _invalid_inputs(report, {'Phi': (phi, (c0, c1)), 'Psi': (psi, (c1, c2)), 'Theta': (theta, (c2, c3))}):
        return report

    left_unit = prof_compose(prof_identity(c1), phi, c1)
    compare_profunctors(report, left_unit, phi, lambda c, d, raw: phi.act_right(c, raw[1][1], raw[1][0]),
                         c0, c1, 'Id.Phi')
    right_unit = prof_compose(phi, prof_identity(c0), c0)
    compare_profunctors(report, right_unit, phi, lambda c, d, raw: phi.act_left(raw[1][0], d, raw[1][1]),
                         c0, c1, 'Phi.Id')
    if not report.passed:
        return report

    psi_phi = prof_compose(psi, phi, c1)
    lhs = prof_compose(prof_compose(theta, psi, c2), phi, c1)
    rhs = prof_compose(theta, psi_phi, c2)

    def reassociate(c, d, raw):
        m1, (x, (m2, (y, z))) = raw
        return (m2, (psi_phi.quotient(c, m2).canonical((m1, (x, y))), z))

    compare_profunctors(report, lhs, rhs, reassociate, c0, c3, '(Theta.Psi).Phi')
    if not report.passed:
        return report

    dualized = prof_compose(phi.dual(), psi.dual(), c1.opposite())
    for c in c0.objects:
        for e in c2.objects:
            compare_quotients(psi_phi.quotient(c, e), dualized.quotient(e, c),
                              lambda raw: (raw[0], (raw[1][1], raw[1][0])), report,
                              context=f"self-duality at ({render(c)}, {render(e)})")
    if not report.passed:
        logger.warning("composition law check %s failed: %s", report.name, report.witnesses[0])
    return report
