"""The fixed acceptance suite run by `opkit suite run`.

Each entry returns one `CheckReport` aggregating its sub-checks. Sizes are
fixed per `SUITE_VERSION`; change the version whenever a size, a sample
family or an expected value changes, so stored run reports stay comparable.
"""

import logging
import time
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence

from opkit import cokleisli, diagrams, distlaw, operads, properads, samples
from opkit.diagrams import FiniteFunction, Variant
from opkit.errors import OpkitError
from opkit.fincat import CheckReport, QuotientSet, compare_quotients, representable, tensor
from opkit.prof import CompositionSample, check_composition_laws, kleisli_laws_check

logger = logging.getLogger(__name__)

SUITE_VERSION = '1'

FIGURE = '(sigma * id[1]) ; (delta * id[1] * eps)'
FIGURE_FUNCTION = FiniteFunction(3, 3, (1, 1, 0))

# |functions 3 -> 3| in each row of the classification table
CLASS_COUNTS_3 = {
    'empty': 1,
    'sigma': 6,
    'sigma,delta,epsilon': 27,
    'delta,epsilon': 10,
    'sigma,delta': 6,
    'sigma,epsilon': 6,
}

SUBST_COUNTS_4 = {'empty': 1, 'sigma': 3}

LAMBDA_COUNTS = (
    ((1,), (1,), 1),
    ((1, 1), (1, 1), 0),
    ((2,), (1, 1), 2),
    ((2, 1), (1, 2), 4),
)

MONAD_VARIANTS = [v for v in Variant.all() if v.monad_enabled]
SMALL_VARIANTS = [Variant.parse('empty'), Variant.parse('sigma')]


@dataclass(frozen=True)
class SuiteEntry:
    number: int
    title: str
    run: Callable[[int], CheckReport]


def _merge(name: str, reports: Sequence[CheckReport]) -> CheckReport:
    merged = CheckReport(name)
    for r in reports:
        merged.absorb(r)
    return merged


def figure_semantics(seed: int) -> CheckReport:
    report = CheckReport('figure_semantics')
    report.instances += 1
    f = diagrams.to_function(diagrams.parse(FIGURE))
    if f != FIGURE_FUNCTION:
        report.witness('wrong-function', expected=str(FIGURE_FUNCTION), got=str(f))
    return report


def classification(seed: int) -> CheckReport:
    reports = []
    for name, expected in CLASS_COUNTS_3.items():
        variant = Variant.parse(name)
        count = CheckReport(f"class_count[{variant.name}]", instances=1)
        got = len(variant.functions(3, 3))
        if got != expected:
            count.witness('wrong-count', variant=variant.label, expected=expected, got=got)
        reports.append(count)
        reports.append(diagrams.check_classification(variant, max_arity=3, samples=100, seed=seed))
    return _merge('classification', reports)


def _one_point_at_two(variant: Variant):
    actions = {'2>2:1,0': {'a': 'a'}} if 'sigma' in variant else {}
    return operads.truncated_from_data(variant, {2: ['a']}, actions, finite=True, name='X')


def substitution_counts(seed: int) -> CheckReport:
    report = CheckReport('substitution_counts')
    for name, expected in SUBST_COUNTS_4.items():
        variant = Variant.parse(name)
        x = _one_point_at_two(variant)
        report.instances += 1
        got = len(operads.subst(x, x, max_arity=4).at(4))
        if got != expected:
            report.witness('wrong-count', variant=variant.label, expected=expected, got=got)
    return report


def cokleisli_vs_subst(seed: int) -> CheckReport:
    reports = []
    for variant in MONAD_VARIANTS:
        count = 4 if variant in SMALL_VARIANTS else 2
        pool = samples.arity_samples(variant, seed=seed, count=2 * count, max_support=2, max_value=2,
                                     max_arity=2)
        for y, x in zip(pool[::2], pool[1::2]):
            reports.append(cokleisli.check_subst_agreement(y, x, up_to_arity=2))
    return _merge('cokleisli_vs_subst', reports)


def analytic_law(seed: int) -> CheckReport:
    reports = []
    gen = samples.rng(seed)
    for variant in SMALL_VARIANTS:
        for i in range(4):
            y = samples.random_arity_presheaf(variant, gen, max_support=2, max_value=2, max_arity=2, name=f"Y{i}")
            x = samples.random_arity_presheaf(variant, gen, max_support=2, max_value=2, max_arity=2, name=f"X{i}")
            reports.append(operads.analytic_comp_check(y, x, samples.random_set(gen, 2)))
    return _merge('analytic_law', reports)


def clone_laws(seed: int) -> CheckReport:
    cand = operads.end_clone(('0', '1'), up_to_arity=2)
    report = operads.monoid_check(cand, up_to_arity=2, seed=seed)
    labels, rows = operads.unary_table(cand)
    table = CheckReport('unary_table')
    for i, a in enumerate(labels):
        for j, b in enumerate(labels):
            table.instances += 1
            direct = tuple(a[b[v]] for v in range(2))
            if rows[i][j] != direct:
                table.witness('wrong-entry', outer=a, inner=b, got=rows[i][j], expected=direct)
    if len(labels) != 4:
        table.witness('wrong-size', expected=4, got=len(labels))
    return _merge('clone_laws', [report, table])


def distributive_law(seed: int) -> CheckReport:
    reports = []
    family = samples.dist_samples(seed, max_value=2, max_len=2)
    for variant in MONAD_VARIANTS:
        for sample in family[:2] if variant not in SMALL_VARIANTS else family:
            reports.extend(distlaw.check_all(variant, sample))
    return _merge('distributive_law', reports)


def kleisli_structure(seed: int) -> CheckReport:
    return _merge('kleisli_structure', [kleisli_laws_check(s) for s in samples.kleisli_samples(seed, count=4)])


def properad_lambda(seed: int) -> CheckReport:
    counts = CheckReport('lambda_counts')
    for ms, ns, expected in LAMBDA_COUNTS:
        counts.instances += 1
        got = len(properads.connected_perms(ms, ns))
        if got != expected:
            counts.witness('wrong-count', ms=ms, ns=ns, expected=expected, got=got)
    return _merge('properad_lambda', [counts, properads.check_oracle(5), properads.check_inverse_symmetry(4)])


def _coyoneda(cat, x, report: CheckReport) -> None:
    for a in cat.objects:
        q = tensor(x, representable(cat, a, 'covariant'), cat, what='co-Yoneda')
        compare_quotients(q, QuotientSet.discrete(x.at(a)), lambda raw: x.act(raw[1][1], raw[1][0]), report,
                          context=f"{x.name} at {a}")


def unit_laws(seed: int) -> CheckReport:
    gen = samples.rng(seed)
    coyoneda = CheckReport('co_yoneda')
    for name in samples.CATEGORY_NAMES:
        cat = samples.category(name)
        _coyoneda(cat, samples.random_functor(gen, cat, name='X'), coyoneda)
    reports = [coyoneda]
    c0, c1 = samples.category('arrow'), samples.category('1')
    c2, c3 = samples.category('parallel'), samples.category('1')
    reports.append(check_composition_laws(CompositionSample(
        'random', (c0, c1, c2, c3),
        samples.random_profunctor(gen, c0, c1, name='Phi'),
        samples.random_profunctor(gen, c1, c2, name='Psi'),
        samples.random_profunctor(gen, c2, c3, name='Theta'),
    )))
    for variant in MONAD_VARIANTS:
        if 'epsilon' in variant:
            # nullary elements would leave I • X unbounded
            pool = [operads.representable(variant, k, truncation=3) for k in (1, 2)]
        else:
            pool = samples.arity_samples(variant, seed=seed, count=2, max_support=2, max_value=2, max_arity=2)
        for x in pool:
            reports.append(operads.check_unit_laws(x, up_to_arity=2))
    return _merge('unit_laws', reports)


SUITE = (
    SuiteEntry(1, 'figure semantics', figure_semantics),
    SuiteEntry(2, 'classification table', classification),
    SuiteEntry(3, 'substitution counts', substitution_counts),
    SuiteEntry(4, 'coKleisli composite vs substitution', cokleisli_vs_subst),
    SuiteEntry(5, 'analytic composition', analytic_law),
    SuiteEntry(6, 'endomorphism clone', clone_laws),
    SuiteEntry(7, 'distributive law', distributive_law),
    SuiteEntry(8, 'Kleisli structure', kleisli_structure),
    SuiteEntry(9, 'connected permutations', properad_lambda),
    SuiteEntry(10, 'co-Yoneda and unit laws', unit_laws),
)


def _errored(entry: SuiteEntry, exc: Exception) -> CheckReport:
    report = CheckReport(entry.run.__name__)
    report.witness('error', error=type(exc).__name__, message=str(exc))
    return report


def run_suite(seed: int = 0, only: Optional[Sequence[int]] = None) -> List[Dict]:
    """Run the suite (or the entries numbered in `only`); one row per entry."""
    rows = []
    for entry in SUITE:
        if only and entry.number not in only:
            continue
        start = time.perf_counter()
        outcome = None
        try:
            report = entry.run(seed)
        except OpkitError as exc:
            logger.error("suite entry %d (%s) raised %s", entry.number, entry.title, exc)
            report, outcome = _errored(entry, exc), 'error'
        except Exception as exc:
            logger.exception("suite entry %d (%s) crashed", entry.number, entry.title)
            report, outcome = _errored(entry, exc), 'error'
        seconds = time.perf_counter() - start
        outcome = outcome or ('pass' if report.passed else 'fail')
        logger.info("suite entry %d %s: %s in %.2fs", entry.number, entry.title, outcome, seconds)
        rows.append({'number': entry.number, 'title': entry.title, 'report': report, 'outcome': outcome,
                     'seconds': seconds})
    return rows
