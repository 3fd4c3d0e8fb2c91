"""coKleisli composition of profunctors out of ?C.

For Φ: ?C ⇸ C′ and Ψ: ?C′ ⇸ C″ the composite is Ψ∘Φ^♭, where the lifting

    Φ^♭(C⃗, C⃗′) = ∫^{D⃗1..D⃗m ∈ ?C} ?C[D⃗1 ++ .. ++ D⃗m, C⃗] × Φ(D⃗1, C′1) × .. × Φ(D⃗m, C′m)

(m = |C⃗′|) never materializes ??C. The unsimplified route ?Φ∘comult is
kept for cross-checks, and is what a `VariantBundle` uses inside
`generalized_compose`.

Morphisms of ?C are stored as morphisms of !(C^op) (see `opkit.bang`): a
morphism C⃗ -> C⃗1 has a shape |C⃗| -> |C⃗1| and a family of C-morphisms
C_j -> C1_{shape(j)}.

Every coend here runs over lists of bounded length: `block_len` bounds
each D⃗i, `max_len` bounds the middle lists C⃗′. Both default to the
configured nesting bound.
"""

import logging
from typing import Callable, Optional

from opkit import conf
from opkit.bang import (
    BangCategory, as_bang, block_shape, block_sum, compose_nf, expand_mor, flatten_obj, question_of, reindex,
    unit_mor,
)
from opkit.diagrams import FiniteFunction, Variant
from opkit.distlaw import DistSample, check_all, lambda_obj, lambda_profunctor
from opkit.errors import BoundaryMismatch, CoherenceError, LawViolation, MalformedInput
from opkit.fincat import (
    CheckReport, FinCategory, LazyFunctor, ProductFunctor, ProductIndex, SetFunctor, compare_quotients, render,
    tensor,
)
from opkit.operads import ArityPresheaf, analytic_eval, subst
from opkit.prof import (
    CoendProfunctor, LazyProfunctor, Profunctor, compare_profunctors, prof_compose, prof_identity,
)

logger = logging.getLogger(__name__)

ONE = FinCategory.terminal()
EMPTY = FinCategory.discrete([], name='0')


def _bound(value: Optional[int]) -> int:
    return conf.nesting_bound() if value is None else value


def _question_source(variant: Variant, phi: Profunctor) -> BangCategory:
    q = phi.src
    if not (isinstance(q, BangCategory) and q.dual):
        raise BoundaryMismatch(f"{phi.name or 'profunctor'} does not start at a category of the form ?C")
    if q.variant != variant:
        raise BoundaryMismatch(f"{phi.name or 'profunctor'} lives over {q.variant.label}, not {variant.label}")
    return q


def _base_of(q: BangCategory) -> FinCategory:
    return q.base.opposite()


def _products(phi: Profunctor, targets, index) -> ProductFunctor:
    values = ProductFunctor([phi.row(c) for c in targets], index)
    values.variance = 'covariant'
    return values


def _pull_family(phi: Profunctor, ds, w, xs):
    """Reindex (D⃗, φ⃗) along the right action of a ?C′ morphism w."""
    s = w.shape
    moved = tuple(ds[s(j)] for j in range(s.dom))
    values = tuple(phi.act_right(ds[s(j)], w.family[j], xs[s(j)]) for j in range(s.dom))
    return moved, values


def bang_prof(variant, phi: Profunctor, lam=lambda_obj) -> LazyProfunctor:
    """!Φ: !C ⇸ !C′ through the distributive law."""
    variant = Variant.parse(variant)
    lifted = lambda_profunctor(variant, phi, lam)
    lifted.name = f"!{phi.name or 'Phi'}"
    return lifted


def question_prof(variant, phi: Profunctor, base: Optional[FinCategory] = None, lam=lambda_obj) -> CoendProfunctor:
    """?Φ = (!(Φ^op))^op: ?C ⇸ ?C′ for Φ: C ⇸ C′.

    `base` is the explicit category standing for C; it defaults to the
    source of Φ. Raw elements are those of the λ-presheaves: (D⃗, (φ⃗, k))
    with k in !(C^op)[C⃗, D⃗].
    """
    variant = Variant.parse(variant)
    base = base or phi.src
    if not isinstance(base, FinCategory):
        raise BoundaryMismatch("?Φ needs an explicit source category; pass `base`")
    base_op = base.opposite()
    dual = phi.dual()
    presheaves = {}

    def lam_at(targets):
        if targets not in presheaves:
            presheaves[targets] = lam(variant, [dual.column(c) for c in targets], base_op)
        return presheaves[targets]

    def raw_left(u, targets, raw):
        ds, (xs, k) = raw
        return ds, (xs, compose_nf(k, u, base_op))

    def raw_right(sources, w, raw):
        ds, (xs, k) = raw
        moved, values = _pull_family(phi, ds, w, xs)
        return moved, (values, compose_nf(reindex(variant, base_op, ds, w.shape), k, base_op))

    return CoendProfunctor(
        question_of(variant, base), question_of(variant, phi.tgt),
        lambda sources, targets: lam_at(targets).quotient(sources),
        raw_left, raw_right, name=f"?{phi.name or 'Phi'}",
    )


def question_display(variant, phi: Profunctor, base: Optional[FinCategory] = None) -> CoendProfunctor:
    """?Φ evaluated from its coend formula over C^m; raw elements (D⃗, (k, φ⃗))."""
    variant = Variant.parse(variant)
    base = base or phi.src
    if not isinstance(base, FinCategory):
        raise BoundaryMismatch("?Φ needs an explicit source category; pass `base`")
    base_op = base.opposite()
    q = question_of(variant, base)

    def quotient_at(sources, targets):
        index = ProductIndex([base] * len(targets))
        weights = LazyFunctor(index, 'contravariant', lambda ds: q.hom(ds, sources),
                              lambda us, k: q.compose(k, as_bang(variant, base_op, us)))
        return tensor(weights, _products(phi, targets, index), index, what=f"?{phi.name}")

    def raw_left(u, targets, raw):
        ds, (k, xs) = raw
        return ds, (q.compose(u, k), xs)

    def raw_right(sources, w, raw):
        ds, (k, xs) = raw
        moved, values = _pull_family(phi, ds, w, xs)
        return moved, (q.compose(k, reindex(variant, base_op, ds, w.shape)), values)

    return CoendProfunctor(q, question_of(variant, phi.tgt), quotient_at, raw_left, raw_right,
                           name=f"?{phi.name or 'Phi'}")


def comult(variant, q: BangCategory, inner: Optional[FinCategory] = None) -> LazyProfunctor:
    """The comultiplication ?C ⇸ ??C: (C⃗, (D⃗1..D⃗n)) -> ?C[D⃗1 ++ .. ++ D⃗n, C⃗].

    ??C is taken over `inner`, a finite restriction of ?C (default: lists
    up to the nesting bound).
    """
    variant = Variant.parse(variant)
    inner = inner if inner is not None else q.restrict()
    return LazyProfunctor(
        q, question_of(variant, inner),
        lambda sources, nested: q.hom(flatten_obj(nested), sources),
        lambda u, nested, h: q.compose(u, h),
        lambda sources, w, h: q.compose(h, expand_mor(w)),
        name='comult',
    )


def flat_lift(variant, phi: Profunctor, block_len: Optional[int] = None) -> CoendProfunctor:
    """Φ^♭: ?C ⇸ ?C′ for Φ: ?C ⇸ C′; raw elements (D⃗⃗, (k, φ⃗))."""
    variant = Variant.parse(variant)
    q = _question_source(variant, phi)
    base_op = q.base
    blocks = q.restrict(_bound(block_len))

    def quotient_at(sources, targets):
        index = ProductIndex([blocks] * len(targets))
        weights = LazyFunctor(
            index, 'contravariant', lambda dd: q.hom(flatten_obj(dd), sources),
            lambda us, k: q.compose(k, block_sum(us)) if us else k,
        )
        return tensor(weights, _products(phi, targets, index), index, what=f"{phi.name}^flat")

    def raw_left(u, targets, raw):
        dd, (k, xs) = raw
        return dd, (q.compose(u, k), xs)

    def raw_right(sources, w, raw):
        dd, (k, xs) = raw
        moved, values = _pull_family(phi, dd, w, xs)
        shape = block_shape(w.shape, [len(d) for d in dd])
        return moved, (q.compose(k, reindex(variant, base_op, flatten_obj(dd), shape)), values)

    return CoendProfunctor(q, question_of(variant, phi.tgt), quotient_at, raw_left, raw_right,
                           name=f"{phi.name or 'Phi'}^flat")


def _middle(variant: Variant, psi: Profunctor, phi: Profunctor) -> BangCategory:
    middle = _question_source(variant, psi)
    if middle != question_of(variant, phi.tgt):
        raise BoundaryMismatch(f"cannot compose {psi.name} after {phi.name}: "
                               f"{psi.name} does not start at ?{getattr(phi.tgt, 'name', '')}")
    return middle


def cokleisli_compose(variant, psi: Profunctor, phi: Profunctor, max_len: Optional[int] = None,
                      block_len: Optional[int] = None) -> CoendProfunctor:
    """Ψ∘Φ^♭: ?C ⇸ C″; raw elements (C⃗′, ((D⃗⃗, (k, φ⃗)), ψ))."""
    variant = Variant.parse(variant)
    middle = _middle(variant, psi, phi)
    composite = prof_compose(psi, flat_lift(variant, phi, block_len), index=middle.restrict(_bound(max_len)))
    composite.name = f"{psi.name or 'Psi'}*{phi.name or 'Phi'}"
    return composite


def cokleisli_identity(variant, c: FinCategory) -> LazyProfunctor:
    """?C ⇸ C: (C⃗, x) -> ?C[(x), C⃗]."""
    variant = Variant.parse(variant)
    q = question_of(variant, c)
    c_op = c.opposite()
    return LazyProfunctor(
        q, c,
        lambda sources, x: q.hom((x,), sources),
        lambda u, x, h: q.compose(u, h),
        lambda sources, v, h: q.compose(h, unit_mor(variant, c_op, v)),
        name='I',
    )


# Adapters to arity presheaves and sets

def arity_profunctor(x: ArityPresheaf) -> LazyProfunctor:
    """An arity presheaf as a profunctor ?1 ⇸ 1."""
    return LazyProfunctor(
        question_of(x.variant, ONE), ONE,
        lambda sources, _: x.at(len(sources)),
        lambda u, _, a: x.act(u.shape, a),
        lambda sources, v, a: a,
        name=x.name or 'X',
    )


def set_profunctor(variant, z) -> LazyProfunctor:
    """A finite set as a profunctor ?0 ⇸ 1."""
    values = tuple(z)
    return LazyProfunctor(
        question_of(variant, EMPTY), ONE,
        lambda sources, _: values,
        lambda u, _, a: a,
        lambda sources, v, a: a,
        name='z',
    )


# Monads with a distributive law

class MonadBundle:
    """What `generalized_compose` needs from a monad with a distributive law.

    `lift(phi)` is the Kleisli lifting of Φ: TC ⇸ C′ to TC ⇸ TC′ and
    `middle(phi)` is the explicit category the final coend runs over.
    """

    name = 'bundle'

    def verify(self) -> None:
        """Raise LawViolation when the bundle's laws fail."""

    def lift(self, phi: Profunctor, max_len: Optional[int] = None, block_len: Optional[int] = None) -> Profunctor:
        raise NotImplementedError

    def middle(self, phi: Profunctor, max_len: Optional[int] = None):
        raise NotImplementedError


class IdentityBundle(MonadBundle):
    name = 'identity'

    def lift(self, phi, max_len=None, block_len=None):
        return phi

    def middle(self, phi, max_len=None):
        return phi.tgt


class VariantBundle(MonadBundle):
    """The built-in monad ? of a variant, lifted through λ and the comultiplication."""

    def __init__(self, variant, lam=lambda_obj):
        self.variant = Variant.parse(variant)
        self.variant.require_monad()
        self.lam = lam
        self.name = f"variant{self.variant.label}"
        self._reports = None

    def verify(self) -> None:
        if self._reports is None:
            presheaf = SetFunctor(ONE, 'contravariant', {'*': ('a', 'b')}, {}, name='F')
            sample = DistSample('terminal', ONE, (presheaf,), max_len=2, target=ONE, g=prof_identity(ONE))
            self._reports = check_all(self.variant, sample, self.lam)
        failed = [r for r in self._reports if not r.passed]
        if failed:
            raise LawViolation(f"{self.name} fails its distributive-law checks ({failed[0].name})", failed[0])

    def lift(self, phi, max_len=None, block_len=None):
        q = _question_source(self.variant, phi)
        blocks = q.restrict(_bound(block_len))
        lifted = question_prof(self.variant, phi, base=blocks, lam=self.lam)
        nested = lifted.src.restrict(_bound(max_len))
        composite = prof_compose(lifted, comult(self.variant, q, inner=blocks), index=nested)
        composite.name = f"?{phi.name}.comult"
        return composite

    def middle(self, phi, max_len=None):
        return question_of(self.variant, phi.tgt).restrict(_bound(max_len))


def generalized_compose(bundle: MonadBundle, psi: Profunctor, phi: Profunctor, max_len: Optional[int] = None,
                        block_len: Optional[int] = None) -> CoendProfunctor:
    """Ψ∘(lift Φ) for an arbitrary bundle; refuses bundles whose laws fail."""
    bundle.verify()
    lifted = bundle.lift(phi, max_len=max_len, block_len=block_len)
    composite = prof_compose(psi, lifted, index=bundle.middle(phi, max_len))
    composite.name = f"{psi.name}*[{bundle.name}]{phi.name}"
    return composite


# Checks

def _finish(report: CheckReport) -> CheckReport:
    if report.passed:
        logger.debug("%s passed on %d instances", report.name, report.instances)
    else:
        logger.warning("%s failed: %s", report.name, report.witnesses[0])
    return report


def _guarded(report: CheckReport, fn: Callable) -> Callable:
    """Turn canonicalization failures inside a comparison map into witnesses."""

    def wrapped(*args):
        try:
            return fn(*args)
        except CoherenceError as exc:
            report.witness('out-of-range', problem=str(exc))
            return None

    return wrapped


def _lists(q: BangCategory, max_len: int):
    return q.restrict(max_len)


def check_question_display(variant, phi: Profunctor, max_len: int = 2) -> CheckReport:
    """The dualized ?Φ agrees with the direct evaluation of its formula."""
    variant = Variant.parse(variant)
    report = CheckReport(f"question_display[{variant.name}/{phi.name}]")
    lhs, rhs = question_prof(variant, phi), question_display(variant, phi)
    compare_profunctors(report, lhs, rhs, lambda c, d, raw: (raw[0], (raw[1][1], raw[1][0])),
                        _lists(lhs.src, max_len), _lists(lhs.tgt, max_len), '?Phi')
    return _finish(report)


def check_question_identity(variant, c: FinCategory, max_len: int = 2) -> CheckReport:
    """?(Id_C) ≅ Id_{?C}."""
    variant = Variant.parse(variant)
    report = CheckReport(f"question_identity[{variant.name}]")
    lhs = question_prof(variant, prof_identity(c))
    q, c_op = lhs.src, c.opposite()

    def collapse(sources, targets, raw):
        ds, (hs, k) = raw
        return q.compose(k, as_bang(variant, c_op, hs))

    compare_profunctors(report, lhs, prof_identity(q), collapse, _lists(q, max_len), _lists(q, max_len), '?Id')
    return _finish(report)


def check_flat_lift(variant, phi: Profunctor, max_len: int = 2, block_len: int = 2) -> CheckReport:
    """Φ^♭ agrees with the unsimplified ?Φ∘comult."""
    variant = Variant.parse(variant)
    report = CheckReport(f"flat_lift[{variant.name}/{phi.name}]")
    flat = flat_lift(variant, phi, block_len)
    route = VariantBundle(variant).lift(phi, max_len=max_len, block_len=block_len)
    q = flat.src

    def simplify(sources, targets, raw):
        nested, (h, (ds, (xs, k))) = raw
        return ds, (q.compose(h, expand_mor(k)), xs)

    compare_profunctors(report, route, flat, _guarded(report, simplify), _lists(q, max_len),
                        _lists(flat.tgt, max_len), 'comult')
    return _finish(report)


def check_generalized(bundle: MonadBundle, psi: Profunctor, phi: Profunctor, max_len: int = 2,
                      block_len: int = 2) -> CheckReport:
    """generalized_compose with a variant bundle agrees with cokleisli_compose."""
    if not isinstance(bundle, VariantBundle):
        raise MalformedInput("only variant bundles have a coKleisli composite to compare with")
    variant = bundle.variant
    report = CheckReport(f"generalized[{bundle.name}]")
    lhs = generalized_compose(bundle, psi, phi, max_len, block_len)
    rhs = cokleisli_compose(variant, psi, phi, max_len, block_len)
    flat = flat_lift(variant, phi, block_len)
    q = flat.src

    def transport(sources, target, raw):
        middle, (lifted, value) = raw
        nested, (h, (ds, (xs, k))) = lifted
        simple = flat.quotient(sources, middle).canonical((ds, (q.compose(h, expand_mor(k)), xs)))
        return middle, (simple, value)

    compare_profunctors(report, lhs, rhs, _guarded(report, transport), _lists(q, max_len), psi.tgt,
                        bundle.name)
    return _finish(report)


def check_subst_agreement(y: ArityPresheaf, x: ArityPresheaf, up_to_arity: Optional[int] = None) -> CheckReport:
    """Over the terminal category the coKleisli composite is the substitution product."""
    variant = x.variant
    top = _bound(up_to_arity)
    report = CheckReport(f"subst_agreement[{variant.name}/{y.name}.{x.name}]")
    composite = cokleisli_compose(variant, arity_profunctor(y), arity_profunctor(x),
                                  max_len=y.truncation, block_len=x.truncation)
    direct = subst(y, x, max_arity=top, form='general', strict=False)

    for p in range(top + 1):
        def to_subst(raw, p=p):
            middle, ((dd, (k, xs)), value) = raw
            m = len(middle)
            power = direct.powers.quotient(m, p).canonical((tuple(len(d) for d in dd), (k.shape, xs)))
            return m, (power, value)

        compare_quotients(composite.quotient(('*',) * p, '*'), direct.quotient(p), _guarded(report, to_subst),
                          report, context=f"arity {p}")
        if not report.passed:
            break
    return _finish(report)


def check_analytic_agreement(x: ArityPresheaf, z) -> CheckReport:
    """From the empty category the coKleisli composite is the analytic functor."""
    z = tuple(z)
    variant = x.variant
    report = CheckReport(f"analytic_agreement[{variant.name}/{x.name}]")
    composite = cokleisli_compose(variant, arity_profunctor(x), set_profunctor(variant, z),
                                  max_len=x.truncation, block_len=0)
    direct = analytic_eval(x, z, strict=False)

    def to_analytic(raw):
        middle, ((dd, (k, xs)), value) = raw
        return len(middle), (tuple(xs), value)

    compare_quotients(composite.quotient((), '*'), direct, to_analytic, report, context=f"z = {render(z)}")
    return _finish(report)


def check_unit_laws(variant, phi: Profunctor, max_len: int = 2, block_len: int = 2) -> CheckReport:
    """Φ∘I^♭ ≅ Φ and I∘Φ^♭ ≅ Φ on lists up to `max_len`."""
    variant = Variant.parse(variant)
    report = CheckReport(f"cokleisli_units[{variant.name}/{phi.name}]")
    q = _question_source(variant, phi)
    c, c2 = _base_of(q), phi.tgt
    if not isinstance(c2, FinCategory):
        raise BoundaryMismatch("unit laws need an explicit target category")
    sources = _lists(q, max_len)

    right = cokleisli_compose(variant, phi, cokleisli_identity(variant, c), max_len, block_len)

    def right_unit(source, target, raw):
        middle, ((dd, (k, hs)), value) = raw
        spread = block_sum(hs) if hs else q.id(())
        return phi.act_left(q.compose(k, spread), target, value)

    left = cokleisli_compose(variant, cokleisli_identity(variant, c2), phi, max_len, block_len)

    def left_unit(source, target, raw):
        middle, ((dd, (k, xs)), h) = raw
        s = h.shape(0)
        lengths = [len(d) for d in dd]
        offset = sum(lengths[:s])
        inclusion = reindex(variant, q.base, flatten_obj(dd),
                            FiniteFunction(lengths[s], sum(lengths), tuple(offset + j for j in range(lengths[s]))))
        pulled = phi.act_right(dd[s], h.family[0], xs[s])
        return phi.act_left(q.compose(k, inclusion), target, pulled)

    compare_profunctors(report, right, phi, _guarded(report, right_unit), sources, c2, 'Phi*I')
    if report.passed:
        compare_profunctors(report, left, phi, _guarded(report, left_unit), sources, c2, 'I*Phi')
    return _finish(report)


def check_associativity(variant, theta: Profunctor, psi: Profunctor, phi: Profunctor, max_len: int = 2,
                        block_len: int = 2, outer_len: Optional[int] = None) -> CheckReport:
    """(Θ∘Ψ^♭)∘Φ^♭ ≅ Θ∘(Ψ∘Φ^♭)^♭.

    The right side lifts blocks that are concatenations of the left side's
    blocks; `outer_len` bounds them (default max_len * block_len).
    """
    variant = Variant.parse(variant)
    report = CheckReport(f"cokleisli_assoc[{variant.name}]")
    q = _question_source(variant, phi)
    mid1, mid2 = _middle(variant, psi, phi), _middle(variant, theta, psi)
    outer_len = max_len * block_len if outer_len is None else outer_len

    phi_flat, psi_flat = flat_lift(variant, phi, block_len), flat_lift(variant, psi, block_len)
    lhs = prof_compose(prof_compose(theta, psi_flat, index=mid2.restrict(max_len)), phi_flat,
                       index=mid1.restrict(max_len))
    psi_phi = prof_compose(psi, phi_flat, index=mid1.restrict(max_len))
    rhs_flat = flat_lift(variant, psi_phi, outer_len)
    rhs = prof_compose(theta, rhs_flat, index=mid2.restrict(max_len))

    def regroup(source, target, raw):
        middle1, (phi_cls, (middle2, ((ee, (l, ys)), value))) = raw
        gg, (k, xs) = phi_flat.act_right(source, l, phi_cls)
        parts, ffs, offset = [], [], 0
        for j, (e, y) in enumerate(zip(ee, ys)):
            block, block_xs = gg[offset:offset + len(e)], xs[offset:offset + len(e)]
            offset += len(e)
            ff = flatten_obj(block)
            inner = phi_flat.quotient(ff, e).canonical((block, (q.id(ff), block_xs)))
            parts.append(psi_phi.quotient(ff, middle2[j]).canonical((e, (inner, y))))
            ffs.append(ff)
        outer = rhs_flat.quotient(source, middle2).canonical((tuple(ffs), (k, tuple(parts))))
        return middle2, (outer, value)

    compare_profunctors(report, lhs, rhs, _guarded(report, regroup), _lists(q, max_len), theta.tgt,
                        '(Theta*Psi)*Phi')
    return _finish(report)
