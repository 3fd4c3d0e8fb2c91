"""Arity presheaves, the substitution product and operad laws."""

import unittest

from hypothesis import given, settings, strategies as st

from opkit import operads, samples
from opkit.diagrams import FiniteFunction
from opkit.errors import MalformedInput, UnboundedRange, VariantError
from opkit.operads import OperadCandidate, monoid_check, subst, truncated_from_data

Z2_TABLE = [
    {'outer': 'e', 'inner': ['e'], 'result': 'e'},
    {'outer': 'e', 'inner': ['g'], 'result': 'g'},
    {'outer': 'g', 'inner': ['e'], 'result': 'g'},
    {'outer': 'g', 'inner': ['g'], 'result': 'e'},
]


def one_point_at_two(variant):
    actions = {'2>2:1,0': {'a': 'a'}} if variant == 'sigma' else {}
    return truncated_from_data(variant, {2: ['a']}, actions, finite=True, name='X')


def z2(entries=Z2_TABLE):
    carrier = truncated_from_data('sigma', {1: ['e', 'g']}, {}, truncation=1, finite=True, name='Z2')
    return OperadCandidate.from_table(carrier, 'e', entries, name='Z2')


class TestArityPresheaves(unittest.TestCase):
    def test_actions_through_factorization(self):
        x = truncated_from_data('sigma', {3: ['a', 'b']}, {'3>3:1,0,2': {'a': 'b', 'b': 'a'},
                                                            '3>3:0,2,1': {'a': 'b', 'b': 'a'}}, finite=True)
        self.assertEqual(x.validate(), [])
        self.assertEqual(x.at(3), ('a', 'b'))
        # a 3-cycle is an even permutation
        self.assertEqual(x.act(FiniteFunction(3, 3, (1, 2, 0)), 'a'), 'a')

    def test_non_functorial_actions_are_reported(self):
        x = truncated_from_data('sigma', {2: ['a', 'b']}, {'2>2:1,0': {'a': 'b', 'b': 'b'}}, finite=True)
        self.assertTrue(x.validate())

    def test_actions_outside_the_class_are_refused(self):
        with self.assertRaises(VariantError):
            truncated_from_data('sigma', {2: ['a']}, {'2>1:0,0': {'a': 'a'}}, finite=True)
        with self.assertRaises(MalformedInput):
            truncated_from_data('sigma', {3: ['a']}, {}, truncation=2)

    def test_representable(self):
        rep = operads.representable('sigma', 2)
        self.assertEqual(len(rep.at(2)), 2)
        self.assertEqual(rep.at(1), ())
        self.assertEqual(rep.validate(), [])

    def test_sum(self):
        total = operads.sum_presheaves(one_point_at_two('sigma'), operads.representable('sigma', 2))
        self.assertEqual(len(total.at(2)), 3)
        self.assertEqual(total.truncation, 2)
        swap = FiniteFunction(2, 2, (1, 0))
        self.assertEqual(total.act(swap, (0, 'a')), (0, 'a'))
        self.assertEqual(total.validate(), [])
        with self.assertRaises(VariantError):
            operads.sum_presheaves(one_point_at_two('sigma'), one_point_at_two('empty'))

    def test_day_tensor_of_units(self):
        unit = operads.subst_unit('sigma')
        square = operads.day_tensor(unit, unit)
        self.assertEqual(len(square.at(2)), 2)
        self.assertEqual(square.at(1), ())
        plain = operads.subst_unit('empty')
        self.assertEqual(len(operads.day_tensor(plain, plain).at(2)), 1)

    def test_tensor_powers(self):
        unit = operads.subst_unit('sigma')
        empty_power = operads.tensor_power(unit, 0)
        self.assertEqual(len(empty_power.at(0)), 1)
        self.assertEqual(empty_power.at(1), ())
        self.assertEqual(len(operads.tensor_power(unit, 3).at(3)), 6)
        with self.assertRaises(MalformedInput):
            operads.tensor_power(unit, -1)


class TestSubstitution(unittest.TestCase):
    def test_counts_at_arity_four(self):
        self.assertEqual(len(subst(one_point_at_two('empty'), one_point_at_two('empty')).at(4)), 1)
        self.assertEqual(len(subst(one_point_at_two('sigma'), one_point_at_two('sigma')).at(4)), 3)

    def test_only_arity_four_is_inhabited(self):
        x = one_point_at_two('sigma')
        yx = subst(x, x)
        self.assertEqual([len(yx.at(p)) for p in range(5)], [0, 0, 0, 0, 3])
        self.assertEqual(yx.validate(), [])

    def test_variants_must_match(self):
        with self.assertRaises(VariantError):
            subst(one_point_at_two('sigma'), one_point_at_two('empty'))

    def test_clone_form_needs_the_cartesian_variant(self):
        with self.assertRaises(VariantError):
            subst(one_point_at_two('sigma'), one_point_at_two('sigma'), form=operads.CLONE)

    def test_unbounded_range(self):
        unit = operads.subst_unit('sigma,epsilon', truncation=2)
        nullary = operads.representable('sigma,epsilon', 0, truncation=2)
        with self.assertRaises(UnboundedRange):
            subst(unit, nullary, max_arity=1).at(0)
        lenient = subst(unit, nullary, max_arity=1, strict=False)
        lenient.at(0)
        self.assertIn(0, lenient.inexact)

    def test_unit_laws(self):
        for variant in ('empty', 'sigma', 'sigma,delta'):
            for x in samples.arity_samples(variant, seed=8, count=3, max_support=2, max_value=2, max_arity=2):
                report = operads.check_unit_laws(x, up_to_arity=2)
                self.assertTrue(report.passed, (variant, report.witnesses))

    def test_associativity(self):
        x = one_point_at_two('sigma')
        unit = operads.representable('sigma', 1, name='I')
        self.assertTrue(operads.check_associativity(unit, x, x, up_to_arity=4).passed)

    def test_day_tensor_distributes_over_sums(self):
        a, b = one_point_at_two('sigma'), operads.representable('sigma', 1)
        self.assertTrue(operads.check_day_cocontinuity(a, b, a).passed)


class TestAnalytic(unittest.TestCase):
    def test_one_binary_operation(self):
        self.assertEqual(len(operads.analytic_eval(one_point_at_two('sigma'), ('z0', 'z1'))), 3)
        self.assertEqual(len(operads.analytic_eval(one_point_at_two('empty'), ('z0', 'z1'))), 4)

    @settings(max_examples=10)
    @given(st.integers(0, 2 ** 31 - 1))
    def test_composition_law(self, seed):
        gen = samples.rng(seed)
        for variant in ('empty', 'sigma'):
            y = samples.random_arity_presheaf(variant, gen, max_support=2, max_value=2, max_arity=2, name='Y')
            x = samples.random_arity_presheaf(variant, gen, max_support=2, max_value=2, max_arity=2, name='X')
            report = operads.analytic_comp_check(y, x, samples.random_set(gen, 2))
            self.assertTrue(report.passed, report.witnesses)


class TestOperadCandidates(unittest.TestCase):
    def test_group_of_order_two(self):
        report = monoid_check(z2(), up_to_arity=1, seed=0)
        self.assertTrue(report.passed, report.witnesses)

    def test_broken_unit_is_caught(self):
        entries = [dict(e) for e in Z2_TABLE]
        entries[1]['result'] = 'e'
        self.assertFalse(monoid_check(z2(entries), up_to_arity=1, seed=0).passed)

    def test_missing_entry(self):
        report = monoid_check(z2(Z2_TABLE[:3]), up_to_arity=1, seed=0)
        self.assertFalse(report.passed)

    def test_unit_must_be_unary(self):
        carrier = truncated_from_data('sigma', {1: ['e']}, {}, finite=True)
        with self.assertRaises(MalformedInput):
            OperadCandidate.from_table(carrier, 'x', [])

    def test_endomorphism_clone(self):
        clone = operads.end_clone(('0', '1'), up_to_arity=2)
        self.assertEqual([len(clone.carrier.at(n)) for n in range(3)], [2, 4, 16])
        self.assertTrue(monoid_check(clone, up_to_arity=2, seed=1).passed)
        labels, rows = operads.unary_table(clone)
        for i, a in enumerate(labels):
            for j, b in enumerate(labels):
                self.assertEqual(rows[i][j], tuple(a[b[v]] for v in range(2)))

    def test_associative_operad(self):
        self.assertTrue(monoid_check(operads.associative_operad('sigma', up_to_arity=3), up_to_arity=3).passed)

    def test_sampling_above_the_limit(self):
        report = monoid_check(operads.end_clone(('0', '1'), up_to_arity=2), up_to_arity=2, limit=50, seed=4)
        self.assertTrue(report.passed)
        self.assertTrue(report.notes)
