"""The distributive law λ: !∘Psh -> Psh∘! and its equation checks.

For presheaves F1..Fn on C, λ(F1..Fn) is the presheaf on !C

    λ(F⃗)(C⃗) = ∫^{D⃗ ∈ C^n} F1 D1 × ... × Fn Dn × !C[C⃗, D⃗]

with raw elements (D⃗, (x⃗, k)). !C acts by precomposition on k. A morphism of
lists of presheaves (shape s, components α_j: F_{s(j)} -> G_j) acts by
reindexing D⃗ and x⃗ along s and post-composing k with the reindexing.

Notes:
- The checks compare both sides of each equation at every object of a
  finite restriction of !C (lists up to `max_len`) through an explicit map
  of raw elements, then check naturality on the generators.
- Every check takes a `lam` factory with the signature of `lambda_obj`;
  passing a different one is how a corrupted law is exercised.
"""

import logging
from itertools import product
from typing import Callable, List, NamedTuple, Optional, Sequence, Tuple

from opkit.bang import (
    BangCategory, as_bang, compose_nf, expand_mor, flatten_obj, identity_nf, reindex, unit_functor,
)
from opkit.diagrams import FiniteFunction, Variant
from opkit.errors import MalformedInput, ValidationFailed
from opkit.fincat import (
    CheckReport, CoendFunctor, FinCategory, FinFunctor, FunctorLike, LazyFunctor, NatTrans, ProductFunctor,
    ProductIndex, SetFunctor, compare_quotients, induced, render, representable, tensor,
)
from opkit.prof import LazyProfunctor, Profunctor, compare_presheaves, psh_map, sharp

logger = logging.getLogger(__name__)


class LambdaPresheaf(CoendFunctor):
    """λ(F1..Fn) as a presheaf on !C."""

    def __init__(self, variant: Variant, fs: Sequence[FunctorLike], base):
        self.variant = variant
        self.fs = tuple(fs)
        self.base_category = base
        self.index = ProductIndex([base] * len(self.fs))
        product_of = ProductFunctor(self.fs, self.index)
        bang = BangCategory(variant, base)

        def quotient_at(cs):
            homs = LazyFunctor(self.index, 'covariant', lambda ds: bang.hom(cs, ds),
                               lambda us, k: compose_nf(as_bang(variant, base, us), k, base))
            return tensor(product_of, homs, self.index, what='lambda')

        def raw_act(h, raw):
            ds, (xs, k) = raw
            return (ds, (xs, compose_nf(k, h, base)))

        super().__init__(bang, 'contravariant', quotient_at, raw_act, name=f"lambda[{len(self.fs)}]")


def lambda_obj(variant, fs: Sequence[FunctorLike], base) -> LambdaPresheaf:
    variant = Variant.parse(variant)
    variant.require_monad()
    for i, f in enumerate(fs):
        if not f.contravariant:
            raise MalformedInput(f"input {i} is not a presheaf")
        if isinstance(f, SetFunctor):
            problems = f.validate(base)
            if problems:
                raise ValidationFailed(f"presheaf {i} is not a functor", problems)
    return LambdaPresheaf(variant, fs, base)


def lambda_on_bang(source: LambdaPresheaf, target: LambdaPresheaf, shape: FiniteFunction,
                   alphas: Sequence[Callable]) -> NatTrans:
    """λ applied to a morphism of !Psh(C) from source.fs to target.fs.

    `shape` runs from target slots to source slots; `alphas[j](D, x)` maps
    F_{shape(j)}(D) to G_j(D).
    """
    if shape.dom != len(target.fs) or shape.cod != len(source.fs) or len(alphas) != shape.dom:
        raise MalformedInput("shape and components do not match the two lists of presheaves")
    variant, base = source.variant, source.base_category

    def raw_map(raw):
        ds, (xs, k) = raw
        moved = tuple(ds[shape(j)] for j in range(shape.dom))
        values = tuple(alphas[j](ds[shape(j)], xs[shape(j)]) for j in range(shape.dom))
        return (moved, (values, compose_nf(reindex(variant, base, ds, shape), k, base)))

    def component(cs, cls):
        return induced(source.quotient(cs), target.quotient(cs), raw_map, cls)

    return NatTrans(source, target, component)


def lambda_on_nat(source: LambdaPresheaf, alpha: NatTrans, position: int) -> Tuple[LambdaPresheaf, NatTrans]:
    """The map λ(.., F, ..) -> λ(.., G, ..) induced by α: F -> G in one slot."""
    if not 0 <= position < len(source.fs):
        raise MalformedInput(f"slot {position} out of range")
    problems = alpha.validate(source.base_category)
    if problems:
        raise ValidationFailed("not a natural transformation", problems)
    fs = list(source.fs)
    fs[position] = alpha.target
    target = LambdaPresheaf(source.variant, fs, source.base_category)
    alphas = [alpha if j == position else (lambda d, x: x) for j in range(len(fs))]
    return target, lambda_on_bang(source, target, FiniteFunction.identity(len(fs)), alphas)


class DistSample(NamedTuple):
    """A base category, presheaves on it and a profunctor g: base ⇸ target."""
    name: str
    base: FinCategory
    presheaves: Tuple
    max_len: int = 2
    target: Optional[FinCategory] = None
    g: Optional[Profunctor] = None


def _lists(n: int, max_len: int) -> List[Tuple[int, ...]]:
    return [t for k in range(max_len + 1) for t in product(range(n), repeat=k)]


def check_eta_psh(variant, sample: DistSample, lam=lambda_obj) -> CheckReport:
    """λ(y A1, .., y An) = !C[-, A⃗]."""
    variant = Variant.parse(variant)
    base = sample.base
    bang = BangCategory(variant, base)
    restricted = bang.restrict(sample.max_len)
    report = CheckReport(f"eta_psh[{variant.name}/{sample.name}]")
    for objs in restricted.objects:
        lhs = lam(variant, [representable(base, a) for a in objs], base)
        rhs = representable(bang, objs)

        def transport(cs, raw):
            _, (us, k) = raw
            return compose_nf(as_bang(variant, base, us), k, base)

        compare_presheaves(report, lhs, rhs, transport, restricted, f"at {render(objs)}")
        if not report.passed:
            break
    return _finish(report)


def check_eta_bang(variant, sample: DistSample, lam=lambda_obj) -> CheckReport:
    """λ((F)) = Psh(η_!) F."""
    variant = Variant.parse(variant)
    base = sample.base
    eta = unit_functor(variant, base, sample.max_len)
    report = CheckReport(f"eta_bang[{variant.name}/{sample.name}]")
    for i, f in enumerate(sample.presheaves):
        lhs = lam(variant, [f], base)
        rhs = psh_map(eta, f, base)
        compare_presheaves(report, lhs, rhs, lambda cs, raw: (raw[0][0], (raw[1][0][0], raw[1][1])),
                           eta.tgt, f"F{i}")
        if not report.passed:
            break
    return _finish(report)


def _nestings(n: int, max_total: int) -> List[Tuple[Tuple[int, ...], ...]]:
    found = []
    for outer in range(1, max_total + 1):
        for sizes in product(range(max_total + 1), repeat=outer):
            if sum(sizes) > max_total:
                continue
            for picks in product(*(list(product(range(n), repeat=s)) for s in sizes)):
                found.append(tuple(picks))
    return found


def _nested_objects(inner: Sequence[Tuple], outer: int, total: int) -> List[Tuple]:
    found = []
    for k in range(outer + 1):
        for blocks in product(inner, repeat=k):
            if sum(len(b) for b in blocks) <= total:
                found.append(tuple(blocks))
    return found


def check_mu_bang(variant, sample: DistSample, lam=lambda_obj, max_total: int = 2) -> CheckReport:
    """λ(flatten F⃗⃗) = Psh(μ_!)(λ(λ(F⃗^1), .., λ(F⃗^p)))."""
    variant = Variant.parse(variant)
    base = sample.base
    restricted = BangCategory(variant, base).restrict(sample.max_len)
    report = CheckReport(f"mu_bang[{variant.name}/{sample.name}]")
    fs = sample.presheaves
    nested_cats = {}
    for nesting in _nestings(len(fs), max_total):
        lengths = [len(block) for block in nesting]
        if any(n > sample.max_len for n in lengths):
            continue
        lhs = lam(variant, [fs[i] for block in nesting for i in block], base)
        gs = [lam(variant, [fs[i] for i in block], base) for block in nesting]
        outer = lam(variant, gs, restricted)
        shape_key = (len(nesting), sum(lengths))
        if shape_key not in nested_cats:
            nested_cats[shape_key] = BangCategory(variant, restricted).restrict(
                objects=_nested_objects(restricted.objects, *shape_key))
        nested = nested_cats[shape_key]
        mu = FinFunctor(nested, restricted, flatten_obj, expand_mor, name='mu!')
        rhs = psh_map(mu, outer, nested)

        def transport(cs, raw, lengths=lengths, gs=gs, outer=outer):
            ds, (xs, k) = raw
            blocks, values, start = [], [], 0
            for g, n in zip(gs, lengths):
                d_block, x_block = ds[start:start + n], xs[start:start + n]
                start += n
                blocks.append(d_block)
                values.append(g.quotient(d_block).canonical(
                    (d_block, (x_block, identity_nf(variant, base, d_block)))))
            dd = tuple(blocks)
            u = outer.quotient(dd).canonical((dd, (tuple(values), identity_nf(variant, restricted, dd))))
            return (dd, (u, k))

        compare_presheaves(report, lhs, rhs, transport, restricted, f"nesting {render(nesting)}")
        if not report.passed:
            break
    return _finish(report)


def lambda_profunctor(variant: Variant, g: Profunctor, lam=lambda_obj) -> LazyProfunctor:
    """λ∘!g as a profunctor !A ⇸ !B: (a⃗, B⃗) -> λ(g(a1,-), .., g(ak,-))(B⃗)."""
    source, target = BangCategory(variant, g.src), BangCategory(variant, g.tgt)
    cache = {}

    def lam_at(objs):
        if objs not in cache:
            cache[objs] = lam(variant, [g.column(a) for a in objs], g.tgt)
        return cache[objs]

    def act_left(k, bs, eta):
        alphas = [(lambda d, x, h=h: g.act_left(h, d, x)) for h in k.family]
        return lambda_on_bang(lam_at(k.src), lam_at(k.tgt), k.shape, alphas)(bs, eta)

    return LazyProfunctor(
        source, target,
        lambda objs, bs: lam_at(objs).at(bs),
        act_left,
        lambda objs, h, eta: lam_at(objs).act(h, eta),
        name='lambda.!g',
    )


def check_kleisli_variant(variant, sample: DistSample, lam=lambda_obj) -> CheckReport:
    """λ∘!(g^#) = (λ∘!g)^#∘λ on lists of the sample presheaves."""
    variant = Variant.parse(variant)
    report = CheckReport(f"kleisli_variant[{variant.name}/{sample.name}]")
    if sample.g is None:
        return report
    a_cat, b_cat, g = sample.base, sample.target or sample.base, sample.g
    source_r = BangCategory(variant, a_cat).restrict(sample.max_len)
    target_r = BangCategory(variant, b_cat).restrict(sample.max_len)
    h = lambda_profunctor(variant, g, lam)
    for picks in _lists(len(sample.presheaves), min(sample.max_len, 2)):
        xs = [sample.presheaves[i] for i in picks]
        lam_a = lam(variant, xs, a_cat)
        pushed = [sharp(g, x, a_cat) for x in xs]
        lhs = lam(variant, pushed, b_cat)
        rhs = sharp(h, lam_a, source_r)

        # classes of (λ∘!g)^# λ(X⃗) carry (A⃗, (λ-element at A⃗, λ∘!g element)); slot i
        # of the result sits where k sends it
        def transport(bs, raw, pushed=pushed):
            _, ((ds, (values, k)), (es, (phis, l))) = raw
            kappa = k.shape
            moved = tuple(es[kappa(i)] for i in range(len(ds)))
            ys = tuple(
                pushed[i].quotient(moved[i]).canonical(
                    (ds[i], (values[i], g.act_left(k.family[i], es[kappa(i)], phis[kappa(i)]))))
                for i in range(len(ds))
            )
            return (moved, (ys, compose_nf(reindex(variant, b_cat, es, kappa), l, b_cat)))

        compare_presheaves(report, rhs, lhs, transport, target_r, f"X = {render(picks)}")
        if not report.passed:
            break
    return _finish(report)


def _relabel(sample: DistSample):
    base = sample.base
    obj = {o: ('r', o) for o in base.objects}
    mor = {m: ('r', m) for m in base.morphisms}
    inv_obj = {v: k for k, v in obj.items()}
    inv_mor = {v: k for k, v in mor.items()}
    renamed = FinCategory(
        [obj[o] for o in base.objects],
        {mor[m]: (obj[s], obj[t]) for m, (s, t) in base.morphisms.items()},
        {obj[o]: mor[i] for o, i in base.identity.items()},
        lambda g, f: mor[base.compose(inv_mor[g], inv_mor[f])],
        generators=[mor[m] for m in base.generating_morphisms()],
        name=f"{base.name}'",
    )
    presheaves = tuple(
        LazyFunctor(renamed, 'contravariant', lambda o, f=f: f.at(inv_obj[o]),
                    lambda u, x, f=f: f.act(inv_mor[u], x))
        for f in sample.presheaves
    )
    return renamed, presheaves, obj, mor


def check_naturality(variant, sample: DistSample, lam=lambda_obj) -> CheckReport:
    """λ commutes with renaming the objects and morphisms of the base."""
    variant = Variant.parse(variant)
    report = CheckReport(f"naturality[{variant.name}/{sample.name}]")
    renamed, presheaves, obj, mor = _relabel(sample)
    restricted = BangCategory(variant, sample.base).restrict(sample.max_len)

    def move(m):
        return type(m)(m.variant, tuple(obj[o] for o in m.src), tuple(obj[o] for o in m.tgt),
                       m.shape, tuple(mor[h] for h in m.family))

    for picks in _lists(len(sample.presheaves), min(sample.max_len, 2)):
        lhs = lam(variant, [sample.presheaves[i] for i in picks], sample.base)
        rhs = lam(variant, [presheaves[i] for i in picks], renamed)
        for cs in restricted.objects:
            compare_quotients(lhs.quotient(cs), rhs.quotient(tuple(obj[o] for o in cs)),
                              lambda raw: (tuple(obj[o] for o in raw[0]), (raw[1][0], move(raw[1][1]))),
                              report, context=f"X = {render(picks)} at {render(cs)}")
        if not report.passed:
            break
    return _finish(report)


def check_all(variant, sample: DistSample, lam=lambda_obj) -> List[CheckReport]:
    """The four equations of a distributive law of the Kleisli kind."""
    return [
        check_eta_psh(variant, sample, lam),
        check_eta_bang(variant, sample, lam),
        check_mu_bang(variant, sample, lam),
        check_kleisli_variant(variant, sample, lam),
    ]


def _finish(report: CheckReport) -> CheckReport:
    if report.passed:
        logger.debug("%s passed on %d instances", report.name, report.instances)
    else:
        logger.warning("%s failed: %s", report.name, report.witnesses[0])
    return report
