"""coKleisli composition out of ?C.

Bounds stay at lists of length 2: every check below enumerates coends over
products of restricted list categories.
"""

import unittest

from opkit.bang import BangCategory, question_of
from opkit.cokleisli import (
    VariantBundle, arity_profunctor, bang_prof, check_analytic_agreement, check_flat_lift, check_generalized,
    check_question_identity, check_subst_agreement, check_unit_laws, cokleisli_compose, comult, generalized_compose,
)
from opkit.distlaw import lambda_obj
from opkit.errors import BoundaryMismatch, LawViolation
from opkit.fincat import FinCategory
from opkit.operads import representable, truncated_from_data
from opkit.prof import FiniteProfunctor, prof_identity

ONE = FinCategory.terminal()


def binary(variant='sigma', name='X'):
    actions = {'2>2:1,0': {'a': 'a'}} if variant == 'sigma' else {}
    return truncated_from_data(variant, {1: ['u'], 2: ['a']}, actions, finite=True, name=name)


def corrupt(variant, fs, base):
    return lambda_obj(variant, fs[:-1], base)


class TestCompose(unittest.TestCase):
    def test_agrees_with_substitution(self):
        for variant in ('empty', 'sigma'):
            x = binary(variant)
            report = check_subst_agreement(binary(variant, 'Y'), x, up_to_arity=2)
            self.assertTrue(report.passed, (variant, report.witnesses))

    def test_agrees_with_substitution_with_copies(self):
        x = representable('sigma,delta', 1, name='I')
        y = representable('sigma,delta', 2, name='P')
        self.assertTrue(check_subst_agreement(y, x, up_to_arity=2).passed)

    def test_analytic_functor(self):
        self.assertTrue(check_analytic_agreement(binary(), ('z0', 'z1')).passed)

    def test_unit_laws(self):
        self.assertTrue(check_unit_laws('sigma', arity_profunctor(binary()), max_len=2, block_len=2).passed)

    def test_source_must_be_a_question_category(self):
        with self.assertRaises(BoundaryMismatch):
            cokleisli_compose('sigma', arity_profunctor(binary()), prof_identity(ONE))

    def test_variant_must_match(self):
        with self.assertRaises(BoundaryMismatch):
            cokleisli_compose('sigma', arity_profunctor(binary()), arity_profunctor(binary('empty')))


class TestLifting(unittest.TestCase):
    def test_question_of_identity(self):
        self.assertTrue(check_question_identity('sigma', FinCategory.arrow(), max_len=2).passed)

    def test_flat_lift_matches_the_unsimplified_route(self):
        self.assertTrue(check_flat_lift('sigma', arity_profunctor(binary()), max_len=2, block_len=2).passed)

    def test_bang_of_a_profunctor(self):
        arrow = FinCategory.arrow()
        phi = FiniteProfunctor(arrow, ONE, {('A', '*'): ['p0'], ('B', '*'): ['p1', 'p2']},
                               {('f', '*'): {'p0': 'p1'}}, {}, name='Phi')
        lifted = bang_prof('sigma', phi)
        self.assertEqual(len(lifted.at(('B',), ('*',))), 2)
        self.assertEqual(len(lifted.at(('A', 'B'), ('*', '*'))), 4)
        self.assertEqual(lifted.at(('A',), ('*', '*')), ())
        restricted = (BangCategory('sigma', arrow).restrict(2), BangCategory('sigma', ONE).restrict(2))
        self.assertEqual(lifted.validate(*restricted), [])

    def test_comultiplication(self):
        q = question_of('sigma', ONE)
        delta = comult('sigma', q, inner=q.restrict(2))
        self.assertEqual(len(delta.at(('*',), (('*',),))), 1)
        self.assertEqual(len(delta.at(('*', '*'), (('*',), ('*',)))), 2)
        self.assertEqual(len(delta.at(('*', '*'), (('*', '*'),))), 2)
        self.assertEqual(delta.at(('*',), (('*', '*'),)), ())


class TestBundles(unittest.TestCase):
    def test_variant_bundle_matches_cokleisli(self):
        report = check_generalized(VariantBundle('sigma'), arity_profunctor(binary(name='Y')),
                                   arity_profunctor(binary()), max_len=2, block_len=2)
        self.assertTrue(report.passed, report.witnesses)

    def test_corrupted_bundle_is_refused(self):
        bundle = VariantBundle('sigma', lam=corrupt)
        with self.assertRaises(LawViolation):
            bundle.verify()
        with self.assertRaises(LawViolation):
            generalized_compose(bundle, arity_profunctor(binary(name='Y')), arity_profunctor(binary()))
