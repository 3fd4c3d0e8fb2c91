"""Arity presheaves on ?1, the Day tensor and the substitution product.

An arity presheaf X gives a finite set X(n) for every arity n and acts
covariantly with the variant's functions: f: m -> n sends X(m) to X(n).
Data is supplied up to a truncation N. A presheaf is *finite* when it is
known to be empty above N; otherwise its values above N are unknown.

    (X ⊗ Y)(p)  = ∫^{m,n} ?1[m+n, p] × X m × Y n
    X^{⊗m}(p)   = ∫^{n⃗} ?1[n1+..+nm, p] × X n1 × .. × X nm
    (Y • X)(p)  = ∫^m X^{⊗m}(p) × Y m          (clone form: ∫^m X(p)^m × Y m)
    Lan X (z)   = ∫^m z^m × X m

Raw elements: tensor powers (n⃗, (k, x⃗)); substitution (m, (t, y)) where t
is a class of X^{⊗m}(p), or (m, (t⃗, y)) with t⃗ in X(p)^m in the clone form;
analytic functors (m, (s, x)).

Where an index range is not known to be exact the coend is computed at two
consecutive bounds and the two results must agree (`_stabilized`).
"""

import logging
from functools import reduce
from itertools import product
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from opkit import conf
from opkit.bang import ArityCategory, block_shape
from opkit.diagrams import DELTA, EPSILON, FiniteFunction, Variant, elementary_factors
from opkit.errors import (
    MalformedInput, NonStabilization, TruncationError, UnboundedRange, VariantError,
)
from opkit.fincat import (
    CheckReport, CoendFunctor, FunctorLike, LazyFunctor, ProductFunctor, ProductIndex, QuotientSet,
    compare_quotients, induced, render, sort_key, tensor,
)

logger = logging.getLogger(__name__)

GENERAL, CLONE = 'general', 'clone'


class ArityPresheaf(FunctorLike):
    variance = 'covariant'

    def __init__(self, variant, truncation: int, sets_fn: Callable, act_fn: Optional[Callable],
                 finite: bool = True, name: str = ''):
        if truncation < 0:
            raise MalformedInput("truncation must be a natural number")
        self.variant = Variant.parse(variant)
        self.variant.require_monad()
        self.base = ArityCategory(self.variant)
        self.truncation = truncation
        self.finite = finite
        self._sets_fn = sets_fn
        self._act_fn = act_fn
        self._cache: Dict = {}
        self.name = name

    def __repr__(self):
        flag = 'finite' if self.finite else 'truncated'
        return f"ArityPresheaf({self.name or '?'}, {self.variant.label}, {flag} at {self.truncation})"

    def at(self, n: int) -> Tuple:
        if n > self.truncation:
            if self.finite:
                return ()
            raise TruncationError(f"{self.name or 'presheaf'} is only known up to arity {self.truncation}, "
                                  f"arity {n} was requested")
        if n not in self._cache:
            self._cache[n] = tuple(sorted(self._sets_fn(n), key=sort_key))
        return self._cache[n]

    def act(self, f: FiniteFunction, x):
        if f.is_identity():
            return x
        return self._act_fn(f, x)

    def support(self) -> List[int]:
        return [n for n in range(self.truncation + 1) if self.at(n)]

    def validate(self) -> List[str]:
        """Functoriality on every class function between arities up to the truncation."""
        return FunctorLike.validate(self, self.base.restrict(self.truncation))

    def to_dict(self) -> Dict:
        return {
            'variant': self.variant.name,
            'truncation': self.truncation,
            'finite': self.finite,
            'sets': {str(n): [render(x) for x in self.at(n)] for n in range(self.truncation + 1)},
        }


class QuotientPresheaf(ArityPresheaf):
    """An arity presheaf whose value at each arity is the class set of a coend."""

    def __init__(self, variant, truncation: int, quotient_at: Callable, raw_act: Callable,
                 finite: bool = True, name: str = ''):
        super().__init__(variant, truncation, lambda n: self.quotient(n).classes, None, finite, name)
        self._quotient_at = quotient_at
        self._raw_act = raw_act
        self._quotients: Dict = {}
        self.inexact = set()

    def quotient(self, n: int) -> QuotientSet:
        if n > self.truncation:
            if self.finite:
                return QuotientSet.discrete(())
            raise TruncationError(f"{self.name or 'presheaf'} is only computed up to arity {self.truncation}")
        if n not in self._quotients:
            self._quotients[n] = self._quotient_at(n)
        return self._quotients[n]

    def act(self, f: FiniteFunction, x):
        if f.is_identity():
            return x
        return induced(self.quotient(f.dom), self.quotient(f.cod), lambda r: self._raw_act(f, r), x)


def truncated_from_data(variant, sets: Dict, actions: Dict, truncation: Optional[int] = None,
                        finite: bool = False, name: str = '') -> ArityPresheaf:
    """An arity presheaf from explicit tables.

    `actions` maps function descriptors ("m>n:t0,..") to element tables. Only
    generators need to be given: other functions act through their
    elementary factorization.
    """
    variant = Variant.parse(variant)
    sets = {int(n): tuple(v) for n, v in sets.items()}
    truncation = max(sets, default=0) if truncation is None else truncation
    if any(n > truncation for n, v in sets.items() if v):
        raise MalformedInput(f"values given above the truncation {truncation}")
    tables: Dict = {}
    for key, mapping in actions.items():
        f = key if isinstance(key, FiniteFunction) else FiniteFunction.from_descriptor(key)
        if not variant.contains(f):
            raise VariantError(f"action given for {f.descriptor()}, outside the {variant.function_class} class")
        tables[f] = dict(mapping)

    def lookup(f, x):
        try:
            return tables[f][x]
        except KeyError:
            raise MalformedInput(f"action of {f.descriptor()} is undefined on {render(x)}")

    def act(f, x):
        if f in tables:
            return lookup(f, x)
        for layer in reversed(elementary_factors(f)):
            if layer.function not in tables:
                raise MalformedInput(f"no action given for the generator {layer.function.descriptor()}")
            x = lookup(layer.function, x)
        return x

    return ArityPresheaf(variant, truncation, lambda n: sets.get(n, ()), act, finite, name)


def representable(variant, k: int, truncation: Optional[int] = None, name: str = '') -> ArityPresheaf:
    """?1[k, -]; finitely supported unless the variant can insert wires."""
    variant = Variant.parse(variant)
    finite = EPSILON not in variant
    if finite:
        truncation = k
    elif truncation is None:
        truncation = max(k, conf.nesting_bound())
    return ArityPresheaf(variant, truncation, lambda n: variant.functions(k, n), lambda f, h: f.compose(h),
                         finite, name or f"?1[{k},-]")


def subst_unit(variant, truncation: Optional[int] = None) -> ArityPresheaf:
    """I n = ?1[1, n]."""
    return representable(variant, 1, truncation, name='I')


def _same_variant(*presheaves: ArityPresheaf) -> Variant:
    variants = {p.variant for p in presheaves}
    if len(variants) != 1:
        raise VariantError("presheaves live over different variants: "
                           + ', '.join(sorted(v.label for v in variants)))
    return presheaves[0].variant


def sum_presheaves(x: ArityPresheaf, y: ArityPresheaf) -> ArityPresheaf:
    """X ⊕ Y, elements tagged 0 and 1."""
    variant = _same_variant(x, y)
    finite = x.finite and y.finite
    if finite:
        truncation = max(x.truncation, y.truncation)
    else:
        truncation = min(p.truncation for p in (x, y) if not p.finite)
    parts = (x, y)
    return ArityPresheaf(
        variant, truncation,
        lambda n: [(0, a) for a in x.at(n)] + [(1, b) for b in y.at(n)],
        lambda f, tagged: (tagged[0], parts[tagged[0]].act(f, tagged[1])),
        finite, name=f"{x.name}+{y.name}",
    )


# Index ranges

def _index_bound(x: ArityPresheaf, p: int) -> Tuple[int, bool]:
    """Arity bound for the factors of a tensor power at output arity p, and whether it is exact."""
    if x.finite:
        return x.truncation, True
    if DELTA not in x.variant and p <= x.truncation:
        # class functions are injective, so n1 + .. + nm <= p
        return p, True
    return x.truncation, False


def _m_bound(y: ArityPresheaf, x: ArityPresheaf, p: int, form: str, strict: bool) -> Tuple[int, bool]:
    if y.finite:
        return y.truncation, True
    if form == CLONE:
        # image factorization: every element has a representative with distinct t⃗
        s = len(x.at(p))
        return (s, True) if s <= y.truncation else (y.truncation, False)
    if DELTA not in x.variant:
        if x.at(0):
            if strict:
                raise UnboundedRange(f"{x.name or 'X'} has nullary elements and {y.name or 'Y'} is truncated: "
                                     "the substitution coend ranges over unboundedly many arities")
            return y.truncation, False
        return (p, True) if p <= y.truncation else (y.truncation, False)
    return y.truncation, False


def _stabilized(compute: Callable, bounds: Sequence[Tuple[int, bool]], what: str,
                strict: bool = True) -> Tuple[QuotientSet, bool]:
    """Compute at the given bounds; inexact bounds are re-run one lower and must agree."""
    high = [b for b, _ in bounds]
    result = compute(high)
    if all(exact for _, exact in bounds):
        return result, True
    if not strict:
        return result, False
    low = [b if exact else max(b - 1, 0) for b, exact in bounds]
    if low != high:
        report = compare_quotients(compute(low), result, lambda raw: raw)
        if not report.passed:
            raise NonStabilization(f"{what} changes between index bounds {low} and {high} "
                                   f"({report.witnesses[0]['kind']})")
    logger.debug("%s stabilized between bounds %s and %s", what, low, high)
    return result, True


# Tensor products

def _sum(fs: Sequence[FiniteFunction]) -> FiniteFunction:
    return reduce(FiniteFunction.sum, fs, FiniteFunction.identity(0))


def _convolution(variant: Variant, factors: Sequence[ArityPresheaf], p: int, bounds: Sequence[int]) -> QuotientSet:
    arity = ArityCategory(variant)
    index = ProductIndex([arity.restrict(b) for b in bounds])
    wiring = LazyFunctor(index, 'contravariant', lambda ns: variant.functions(sum(ns), p),
                         lambda us, k: k.compose(_sum(us)))
    values = ProductFunctor(factors, index)
    values.variance = 'covariant'
    return tensor(wiring, values, index, what=f"tensor at arity {p}")


class _Powers:
    """X^{⊗m}(p) at the default index bound, cached per (m, p, bound)."""

    def __init__(self, x: ArityPresheaf):
        self.x = x
        self._cache: Dict = {}

    def quotient(self, m: int, p: int, bound: Optional[int] = None) -> QuotientSet:
        if bound is None:
            bound = _index_bound(self.x, p)[0]
        key = (m, p, bound)
        if key not in self._cache:
            self._cache[key] = _convolution(self.x.variant, [self.x] * m, p, [bound] * m)
        return self._cache[key]

    def push(self, g: FiniteFunction, m: int, t):
        """The covariant action of g: p -> p′ on a class of X^{⊗m}(p)."""
        return induced(self.quotient(m, g.dom), self.quotient(m, g.cod),
                       lambda raw: (raw[0], (g.compose(raw[1][0]), raw[1][1])), t)


def _pull(f: FiniteFunction, raw):
    """The contravariant action of f: m -> m′ on a raw element of X^{⊗m′}(p)."""
    ns, (k, xs) = raw
    moved = tuple(ns[f(i)] for i in range(f.dom))
    return moved, (k.compose(block_shape(f, ns)), tuple(xs[f(i)] for i in range(f.dom)))


def day_tensor(x: ArityPresheaf, y: ArityPresheaf, max_arity: Optional[int] = None) -> QuotientPresheaf:
    """X ⊗ Y; raw elements ((m, n), (k, (a, b)))."""
    variant = _same_variant(x, y)
    finite = x.finite and y.finite and EPSILON not in variant
    top = x.truncation + y.truncation if max_arity is None else max_arity

    def quotient_at(p):
        compute = lambda bs: _convolution(variant, [x, y], p, bs)  # noqa: E731
        return _stabilized(compute, [_index_bound(x, p), _index_bound(y, p)], f"day tensor at {p}")[0]

    def raw_act(g, raw):
        ns, (k, xs) = raw
        return ns, (g.compose(k), xs)

    return QuotientPresheaf(variant, top, quotient_at, raw_act, finite, name=f"{x.name}(x){y.name}")


def tensor_power(x: ArityPresheaf, m: int, max_arity: Optional[int] = None) -> QuotientPresheaf:
    """X^{⊗m}; m = 0 gives the unit J p = ?1[0, p]."""
    if m < 0:
        raise MalformedInput("tensor powers are indexed by natural numbers")
    variant = x.variant
    finite = x.finite and EPSILON not in variant
    if max_arity is None:
        max_arity = m * x.truncation if finite else conf.nesting_bound()
    powers = _Powers(x)

    def quotient_at(p):
        bound = _index_bound(x, p)
        compute = lambda bs: powers.quotient(m, p, bs[0])  # noqa: E731
        return _stabilized(compute, [bound], f"tensor power {m} at {p}")[0]

    def raw_act(g, raw):
        ns, (k, xs) = raw
        return ns, (g.compose(k), xs)

    presheaf = QuotientPresheaf(variant, max_arity, quotient_at, raw_act, finite, name=f"{x.name}^{m}")
    presheaf.powers = powers
    return presheaf


# Substitution

def _form(variant: Variant, form: Optional[str]) -> str:
    form = form or (CLONE if variant.is_cartesian else GENERAL)
    if form not in (GENERAL, CLONE):
        raise MalformedInput(f"unknown substitution form {form!r}")
    if form == CLONE and not variant.is_cartesian:
        raise VariantError(f"the clone form of substitution needs the cartesian variant, not {variant.label}")
    return form


def subst(y: ArityPresheaf, x: ArityPresheaf, max_arity: Optional[int] = None, form: Optional[str] = None,
          strict: bool = True) -> QuotientPresheaf:
    """Y • X.

    The cartesian variant uses the clone form unless `form='general'`.
    With `strict=False` index ranges that cannot be made exact are used as
    they are and the affected arities are listed in `inexact`.
    """
    variant = _same_variant(x, y)
    form = _form(variant, form)
    finite = x.finite and y.finite and EPSILON not in variant
    if max_arity is None:
        max_arity = y.truncation * x.truncation if finite else conf.nesting_bound()
    arity = ArityCategory(variant)
    powers = _Powers(x)
    result = None

    def general(p, bounds):
        mb, nb = bounds
        contra = CoendFunctor(arity, 'contravariant', lambda m: powers.quotient(m, p, nb), _pull)
        return tensor(contra, y, arity.restrict(mb), what=f"substitution at {p}")

    def clone(p, bounds):
        values = x.at(p)
        contra = LazyFunctor(arity, 'contravariant', lambda m: product(values, repeat=m),
                             lambda f, ts: tuple(ts[f(i)] for i in range(f.dom)))
        return tensor(contra, y, arity.restrict(bounds[0]), what=f"substitution at {p}")

    def quotient_at(p):
        bounds = [_m_bound(y, x, p, form, strict)]
        if form == GENERAL:
            bounds.append(_index_bound(x, p))
            compute = lambda bs: general(p, bs)  # noqa: E731
        else:
            compute = lambda bs: clone(p, bs)  # noqa: E731
        q, exact = _stabilized(compute, bounds, f"{y.name}•{x.name} at {p}", strict)
        if not exact:
            result.inexact.add(p)
        return q

    def raw_act(g, raw):
        m, (t, value) = raw
        if form == CLONE:
            return m, (tuple(x.act(g, s) for s in t), value)
        return m, (powers.push(g, m, t), value)

    result = QuotientPresheaf(variant, max_arity, quotient_at, raw_act, finite, name=f"{y.name}•{x.name}")
    result.form = form
    result.powers = powers
    return result


# Operads

def _inclusion(ns: Sequence[int], i: int) -> FiniteFunction:
    offset = sum(ns[:i])
    return FiniteFunction(ns[i], sum(ns), tuple(offset + j for j in range(ns[i])))


def _codiagonal(m: int, p: int) -> FiniteFunction:
    return FiniteFunction(m * p, p, tuple(j for _ in range(m) for j in range(p)))


def _arity_of(carrier: ArityPresheaf, x) -> int:
    found = [n for n in range(carrier.truncation + 1) if x in carrier.at(n)]
    if len(found) != 1:
        raise MalformedInput(f"cannot tell the arity of {render(x)}; give it explicitly")
    return found[0]


class OperadCandidate:
    """A carrier with a unit in X(1) and a multiplication to be checked.

    The multiplication is given in one of two forms:
    - operad form `compose(y, xs, ns)`: y in X(m), x_i in X(n_i), result in X(n1+..+nm);
    - clone form `clone_compose(y, ts, p)`: y in X(m), t⃗ in X(p)^m, result in X(p).
    Each form determines the other.
    """

    def __init__(self, carrier: ArityPresheaf, unit, compose: Optional[Callable] = None,
                 clone_compose: Optional[Callable] = None, name: str = ''):
        if (compose is None) == (clone_compose is None):
            raise MalformedInput("give exactly one of compose and clone_compose")
        if clone_compose is not None and not carrier.variant.is_cartesian:
            raise VariantError("clone-form multiplication needs the cartesian variant")
        if unit not in carrier.at(1):
            raise MalformedInput(f"unit {render(unit)} is not an element of arity 1")
        self.carrier = carrier
        self.unit = unit
        self._compose = compose
        self._clone_compose = clone_compose
        self.name = name or carrier.name

    def __repr__(self):
        return f"OperadCandidate({self.name})"

    def gamma(self, y, xs: Sequence, ns: Sequence[int]):
        if self._compose is not None:
            return self._compose(y, tuple(xs), tuple(ns))
        ts = tuple(self.carrier.act(_inclusion(ns, i), x) for i, x in enumerate(xs))
        return self._clone_compose(y, ts, sum(ns))

    def clone_gamma(self, y, ts: Sequence, p: int):
        if self._clone_compose is not None:
            return self._clone_compose(y, tuple(ts), p)
        value = self._compose(y, tuple(ts), (p,) * len(ts))
        return self.carrier.act(_codiagonal(len(ts), p), value)

    def multiply(self, p: int, raw, form: str):
        """m on a raw element of (X • X)(p)."""
        m, (t, y) = raw
        if form == CLONE:
            return self.clone_gamma(y, t, p)
        ns, (k, xs) = t
        return self.carrier.act(k, self.gamma(y, xs, ns))

    @classmethod
    def from_table(cls, carrier: ArityPresheaf, unit, entries: Sequence[Dict], clone: bool = False,
                   name: str = '') -> 'OperadCandidate':
        """Multiplication from explicit entries {"outer", "inner", "result"}.

        Operad entries may give "arities" for the inner elements; clone
        entries give "arity" when it cannot be read off the inner elements.
        """
        table: Dict = {}
        for entry in entries:
            outer, inner = entry['outer'], tuple(entry['inner'])
            if clone:
                if 'arity' in entry:
                    p = entry['arity']
                elif inner:
                    p = _arity_of(carrier, inner[0])
                else:
                    p = _arity_of(carrier, entry['result'])
                table[(outer, inner, p)] = entry['result']
            else:
                ns = tuple(entry.get('arities') or (_arity_of(carrier, x) for x in inner))
                table[(outer, inner, ns)] = entry['result']

        def look(key):
            try:
                return table[key]
            except KeyError:
                raise MalformedInput(f"no composite given for {render(key[0])} with {render(key[1])}")

        if clone:
            return cls(carrier, unit, clone_compose=lambda y, ts, p: look((y, ts, p)), name=name)
        return cls(carrier, unit, compose=lambda y, xs, ns: look((y, xs, ns)), name=name)


def _instances(pools: Sequence[Sequence], limit: int, rng) -> Tuple[List[Tuple], int]:
    """All tuples from the pools, or `limit` of them drawn with `rng` when there are more."""
    total = 1
    for pool in pools:
        total *= len(pool)
    if total <= limit:
        return list(product(*pools)), total
    draws = [rng.integers(0, len(pool), size=limit) for pool in pools]
    return [tuple(pool[d[i]] for pool, d in zip(pools, draws)) for i in range(limit)], total


def _compositions(total: int, parts: int, bound: int) -> List[Tuple[int, ...]]:
    return [t for t in product(range(bound + 1), repeat=parts) if sum(t) <= total]


def monoid_check(cand: OperadCandidate, up_to_arity: Optional[int] = None, limit: int = 20000,
                 seed: Optional[int] = None) -> CheckReport:
    """Monoid laws of (I, •) for a candidate, at arities up to the bound.

    Checks that m is defined and well defined on classes of X • X, natural,
    unital and associative. Associativity instances above `limit` are
    sampled with a seeded generator.
    """
    x = cand.carrier
    variant = x.variant
    top = x.truncation if up_to_arity is None else min(up_to_arity, x.truncation)
    form = CLONE if variant.is_cartesian else GENERAL
    report = CheckReport(f"monoid[{cand.name}]")
    xx = subst(x, x, max_arity=top, form=form, strict=False)

    images: Dict = {}
    for p in range(top + 1):
        q = xx.quotient(p)
        values = set(x.at(p))
        image = images.setdefault(p, {})
        for raw in q.raw:
            report.instances += 1
            try:
                value = cand.multiply(p, raw, form)
            except MalformedInput as exc:
                report.witness('undefined', element=raw, problem=str(exc))
                return _finish(report)
            if value not in values:
                report.witness('out-of-range', element=raw, value=value, arity=p)
                return _finish(report)
            seen = image.setdefault(q.class_of[raw], value)
            if seen != value:
                report.witness('not-well-defined', element=raw, representative=q.class_of[raw],
                               first=seen, second=value)
                return _finish(report)
    if xx.inexact:
        report.notes.append(f"substitution index ranges truncated at arities {sorted(xx.inexact)}")

    for g in ArityCategory(variant).restrict(top).generating_morphisms():
        for cls in xx.quotient(g.dom).classes:
            report.instances += 1
            if images[g.cod][xx.act(g, cls)] != x.act(g, images[g.dom][cls]):
                report.witness('not-natural', morphism=g.descriptor(), element=cls)
                return _finish(report)

    try:
        _unit_laws(cand, top, form, report)
        if report.passed:
            _associativity(cand, top, form, report, limit, seed)
    except MalformedInput as exc:
        report.witness('undefined', problem=str(exc))
    return _finish(report)


def _unit_laws(cand: OperadCandidate, top: int, form: str, report: CheckReport) -> None:
    x, e = cand.carrier, cand.unit
    for p in range(top + 1):
        projections = tuple(x.act(FiniteFunction(1, p, (i,)), e) for i in range(p)) if form == CLONE else ()
        for a in x.at(p):
            report.instances += 1
            if form == CLONE:
                left, right = cand.clone_gamma(e, (a,), p), cand.clone_gamma(a, projections, p)
            else:
                left, right = cand.gamma(e, (a,), (p,)), cand.gamma(a, (e,) * p, (1,) * p)
            if left != a:
                report.witness('left-unit', element=a, value=left)
                return
            if right != a:
                report.witness('right-unit', element=a, value=right)
                return


def _associativity(cand: OperadCandidate, top: int, form: str, report: CheckReport, limit: int,
                   seed: Optional[int]) -> None:
    x = cand.carrier
    rng = np.random.default_rng(conf.default_seed() if seed is None else seed)
    sampled = False
    if form == CLONE:
        for m in range(top + 1):
            for k in range(top + 1):
                for p in range(top + 1):
                    pools = [x.at(m)] + [x.at(k)] * m + [x.at(p)] * k
                    cases, total = _instances(pools, limit, rng)
                    sampled |= total > limit
                    for case in cases:
                        z, ys, xs = case[0], case[1:1 + m], case[1 + m:]
                        report.instances += 1
                        lhs = cand.clone_gamma(cand.clone_gamma(z, ys, k), xs, p)
                        rhs = cand.clone_gamma(z, tuple(cand.clone_gamma(y, xs, p) for y in ys), p)
                        if lhs != rhs:
                            report.witness('not-associative', outer=z, middle=ys, inner=xs, lhs=lhs, rhs=rhs)
                            return
    else:
        for m in range(top + 1):
            for ks in _compositions(top, m, top):
                for ns in _compositions(top, sum(ks), top):
                    pools = [x.at(m)] + [x.at(k) for k in ks] + [x.at(n) for n in ns]
                    cases, total = _instances(pools, limit, rng)
                    sampled |= total > limit
                    for case in cases:
                        z, ys, xs = case[0], case[1:1 + m], case[1 + m:]
                        report.instances += 1
                        lhs = cand.gamma(cand.gamma(z, ys, ks), xs, ns)
                        inner, start = [], 0
                        for y, k in zip(ys, ks):
                            inner.append(cand.gamma(y, xs[start:start + k], ns[start:start + k]))
                            start += k
                        blocks = [sum(ns[sum(ks[:i]):sum(ks[:i + 1])]) for i in range(m)]
                        rhs = cand.gamma(z, inner, blocks)
                        if lhs != rhs:
                            report.witness('not-associative', outer=z, middle=ys, inner=xs, lhs=lhs, rhs=rhs)
                            return
    if sampled:
        report.notes.append(f"associativity sampled at most {limit} instances per arity profile")


def unary_table(cand: OperadCandidate) -> Tuple[Tuple, List[List]]:
    """Labels and rows of the arity-1 multiplication: rows[i][j] = m(a_i; a_j)."""
    ones = cand.carrier.at(1)
    return ones, [[cand.clone_gamma(a, (b,), 1) for b in ones] for a in ones]


def end_clone(a: Sequence, up_to_arity: int = 2) -> OperadCandidate:
    """The clone of all operations a^n -> a, for n up to the bound.

    An n-ary operation is the tuple of its values on a^n in lexicographic
    order, with entries indexing into `a`.
    """
    elements = tuple(a)
    size = len(elements)
    if size < 1:
        raise MalformedInput("the endomorphism clone needs a non-empty set")
    count = size ** (size ** up_to_arity)
    if count > conf.cap():
        raise MalformedInput(f"{count} operations of arity {up_to_arity} exceed the cap")
    points: Dict[int, List[Tuple[int, ...]]] = {}

    def tuples(n):
        if n not in points:
            points[n] = list(product(range(size), repeat=n))
        return points[n]

    def position(values: Sequence[int]) -> int:
        return reduce(lambda acc, v: acc * size + v, values, 0)

    def act(f, op):
        return tuple(op[position([v[f(i)] for i in range(f.dom)])] for v in tuples(f.cod))

    def clone_compose(y, ts, p):
        return tuple(y[position([t[i] for t in ts])] for i in range(size ** p))

    carrier = ArityPresheaf('f', up_to_arity, lambda n: product(range(size), repeat=size ** n), act,
                            finite=False, name=f"End{render(elements)}")
    return OperadCandidate(carrier, tuple(range(size)), clone_compose=clone_compose, name=carrier.name)


def associative_operad(variant, up_to_arity: int = 4) -> OperadCandidate:
    """One operation per arity ({}) or the linear orders of the inputs ({σ})."""
    variant = Variant.parse(variant)
    if not variant.combinators:
        carrier = ArityPresheaf(variant, up_to_arity, lambda n: [f"m{n}"], lambda f, x: x,
                                finite=False, name='Ass')
        return OperadCandidate(carrier, 'm1', compose=lambda y, xs, ns: f"m{sum(ns)}", name='Ass')
    if variant.combinators == frozenset({'sigma'}):
        def compose(word, words, ns):
            offsets = [sum(ns[:i]) for i in range(len(ns))]
            return tuple(offsets[i] + j for i in word for j in words[i])

        carrier = ArityPresheaf(
            variant, up_to_arity,
            lambda n: [tuple(w) for w in product(range(n), repeat=n) if len(set(w)) == n],
            lambda f, word: tuple(f(i) for i in word),
            finite=False, name='Ass',
        )
        return OperadCandidate(carrier, (0,), compose=compose, name='Ass')
    raise VariantError(f"the associative operad is provided for {{}} and {{σ}}, not {variant.label}")


def terminal_operad(variant, up_to_arity: int = 3) -> OperadCandidate:
    carrier = ArityPresheaf(variant, up_to_arity, lambda n: ['*'], lambda f, x: x, finite=False, name='Com')
    return OperadCandidate(carrier, '*', compose=lambda y, xs, ns: '*', name='terminal')


# Analytic functors

def analytic_eval(x: ArityPresheaf, z: Sequence, strict: bool = True) -> QuotientSet:
    """Lan X (z) = ∫^m z^m × X m."""
    z = tuple(z)
    variant = x.variant
    arity = ArityCategory(variant)
    if x.finite:
        bound = (x.truncation, True)
    elif variant.is_cartesian and len(z) <= x.truncation:
        bound = (len(z), True)
    else:
        bound = (x.truncation, False)

    def compute(bs):
        contra = LazyFunctor(arity, 'contravariant', lambda m: product(z, repeat=m),
                             lambda f, s: tuple(s[f(i)] for i in range(f.dom)))
        return tensor(contra, x, arity.restrict(bs[0]), what=f"Lan {x.name}")

    return _stabilized(compute, [bound], f"Lan {x.name} at {len(z)} points", strict)[0]


def analytic_comp_check(y: ArityPresheaf, x: ArityPresheaf, z: Sequence,
                        report: Optional[CheckReport] = None) -> CheckReport:
    """Lan (Y • X) z ≅ Lan Y (Lan X z) through the canonical map of raw elements."""
    z = tuple(z)
    variant = _same_variant(x, y)
    report = report if report is not None else CheckReport(f"analytic[{variant.name}]")
    yx = subst(y, x, max_arity=None if not variant.is_cartesian else max(len(z), conf.nesting_bound()))
    inner = analytic_eval(x, z)
    lhs = analytic_eval(yx, z)
    rhs = analytic_eval(y, inner.classes)

    def transport(raw):
        p, (s, w) = raw
        m, (t, value) = w
        if yx.form == CLONE:
            return m, (tuple(inner.canonical((p, (s, u))) for u in t), value)
        ns, (k, xs) = t
        parts, start = [], 0
        for n, a in zip(ns, xs):
            parts.append(inner.canonical((n, (tuple(s[k(start + j)] for j in range(n)), a))))
            start += n
        return m, (tuple(parts), value)

    compare_quotients(lhs, rhs, transport, report, context=f"z = {render(z)}")
    return _finish(report)


# Laws of the substitution product

def check_unit_laws(x: ArityPresheaf, up_to_arity: Optional[int] = None) -> CheckReport:
    """I • X ≅ X and X • I ≅ X at every arity up to the bound."""
    variant = x.variant
    top = x.truncation if up_to_arity is None else up_to_arity
    width = max([1, top] + [len(x.at(p)) for p in range(top + 1)])
    unit = subst_unit(variant, truncation=width)
    report = CheckReport(f"subst_unit[{variant.name}/{x.name}]")
    left, right = subst(unit, x, max_arity=top), subst(x, unit, max_arity=top)
    clone = left.form == CLONE

    def left_map(raw):
        m, (t, i) = raw
        if clone:
            return t[i(0)]
        ns, (k, xs) = t
        return x.act(k.compose(_inclusion(ns, i(0))), xs[i(0)])

    def right_map(p, raw):
        m, (t, value) = raw
        if clone:
            return x.act(FiniteFunction(m, p, tuple(s(0) for s in t)), value)
        ns, (k, js) = t
        offsets = [sum(ns[:r]) for r in range(m)]
        return x.act(FiniteFunction(m, p, tuple(k(offsets[r] + js[r](0)) for r in range(m))), value)

    for p in range(top + 1):
        target = QuotientSet.discrete(x.at(p))
        compare_quotients(left.quotient(p), target, left_map, report, context=f"I•X at {p}")
        compare_quotients(right.quotient(p), target, lambda raw: right_map(p, raw), report, context=f"X•I at {p}")
        if not report.passed:
            break
    return _finish(report)


def check_associativity(z: ArityPresheaf, y: ArityPresheaf, x: ArityPresheaf,
                        up_to_arity: Optional[int] = None) -> CheckReport:
    """(Z • Y) • X ≅ Z • (Y • X) at every arity up to the bound."""
    variant = _same_variant(x, y, z)
    zy, yx = subst(z, y), subst(y, x)
    lhs, rhs = subst(zy, x), subst(z, yx)
    top = min(lhs.truncation, rhs.truncation) if up_to_arity is None else up_to_arity
    report = CheckReport(f"subst_assoc[{variant.name}]")
    clone = lhs.form == CLONE

    def transport(p, raw):
        m, (t, w) = raw
        l, (s, value) = w
        if clone:
            return l, (tuple(yx.quotient(p).canonical((m, (t, column))) for column in s), value)
        ks, (g, ys) = s
        ns, (h, xs) = _pull(g, t)
        parts, qs, start = [], [], 0
        for k, y_value in zip(ks, ys):
            block_ns, block_xs = ns[start:start + k], xs[start:start + k]
            start += k
            q = sum(block_ns)
            power = yx.powers.quotient(k, q).canonical((block_ns, (FiniteFunction.identity(q), block_xs)))
            parts.append(yx.quotient(q).canonical((k, (power, y_value))))
            qs.append(q)
        outer = rhs.powers.quotient(l, p).canonical((tuple(qs), (h, tuple(parts))))
        return l, (outer, value)

    for p in range(top + 1):
        compare_quotients(lhs.quotient(p), rhs.quotient(p), lambda raw: transport(p, raw), report,
                          context=f"arity {p}")
        if not report.passed:
            break
    return _finish(report)


def check_day_cocontinuity(x: ArityPresheaf, x2: ArityPresheaf, y: ArityPresheaf,
                           up_to_arity: Optional[int] = None) -> CheckReport:
    """(X ⊕ X′) ⊗ Y ≅ (X ⊗ Y) ⊕ (X′ ⊗ Y)."""
    variant = _same_variant(x, x2, y)
    lhs = day_tensor(sum_presheaves(x, x2), y)
    parts = (day_tensor(x, y), day_tensor(x2, y))
    top = min(lhs.truncation, *(d.truncation for d in parts)) if up_to_arity is None else up_to_arity
    report = CheckReport(f"day_cocontinuity[{variant.name}]")
    for p in range(top + 1):
        target = QuotientSet.discrete([(tag, c) for tag, d in enumerate(parts) for c in d.at(p)])

        def split(raw, p=p):
            ns, (k, ((tag, a), b)) = raw
            return tag, parts[tag].quotient(p).canonical((ns, (k, (a, b))))

        compare_quotients(lhs.quotient(p), target, split, report, context=f"arity {p}")
        if not report.passed:
            break
    return _finish(report)


def _finish(report: CheckReport) -> CheckReport:
    if report.passed:
        logger.debug("%s passed on %d instances", report.name, report.instances)
    else:
        logger.warning("%s failed: %s", report.name, report.witnesses[0])
    return report
