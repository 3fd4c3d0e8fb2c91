"""Seeded samples and the acceptance suite."""

import unittest
from unittest.mock import patch

from django.test import SimpleTestCase, override_settings

from opkit import samples
from opkit.errors import MalformedInput
from services.suite import SUITE, SuiteEntry, run_suite


def _contents(functor):
    return functor.sets, {u: dict(m) for u, m in functor.maps.items()}


class TestSamples(SimpleTestCase):
    def test_same_seed_same_samples(self):
        cat = samples.category('arrow')
        first = samples.random_functor(samples.rng(3), cat, name='X')
        second = samples.random_functor(samples.rng(3), cat, name='X')
        self.assertEqual(_contents(first), _contents(second))

    @override_settings(OPKIT_DEFAULT_SEED=7)
    def test_default_seed_from_settings(self):
        self.assertEqual(samples.rng().integers(1000), samples.rng(7).integers(1000))

    def test_sample_functors_are_valid(self):
        gen = samples.rng(1)
        for name in samples.CATEGORY_NAMES:
            cat = samples.category(name)
            with self.subTest(category=name):
                self.assertEqual(samples.random_functor(gen, cat).validate(), [])
                self.assertEqual(samples.random_functor(gen, cat, 'covariant').validate(), [])
                self.assertEqual(samples.random_profunctor(gen, cat, cat).validate(cat, cat), [])

    def test_unknown_category(self):
        with self.assertRaises(MalformedInput):
            samples.category('triangle')

    def test_arity_samples(self):
        for variant in ('empty', 'sigma', 'sigma,delta'):
            with self.subTest(variant=variant):
                for x in samples.arity_samples(variant, seed=4, count=3):
                    self.assertTrue(x.finite)
                    self.assertEqual(x.validate(), [])
        for x in samples.arity_samples('sigma,epsilon', seed=4, count=2, max_arity=3):
            self.assertFalse(x.finite)
            self.assertEqual(x.truncation, 3)

    def test_sample_families_are_seeded(self):
        names = [s.name for s in samples.kleisli_samples(seed=9)]
        self.assertEqual(names, [s.name for s in samples.kleisli_samples(seed=9)])
        self.assertEqual(len(samples.dist_samples(seed=0)), len(samples.CATEGORY_NAMES))


class TestSuite(SimpleTestCase):
    def test_entries_are_numbered_in_order(self):
        self.assertEqual([e.number for e in SUITE], list(range(1, len(SUITE) + 1)))

    def test_selected_entries_pass(self):
        rows = run_suite(seed=0, only=[1, 2, 3, 9])
        self.assertEqual([row['number'] for row in rows], [1, 2, 3, 9])
        for row in rows:
            with self.subTest(entry=row['title']):
                self.assertTrue(row['report'].passed, row['report'].witnesses)
                self.assertGreater(row['report'].instances, 0)
                self.assertGreaterEqual(row['seconds'], 0)

    def test_crashing_entry_is_recorded(self):
        def crash(seed):
            raise ValueError('not enough values to unpack')

        entries = (SUITE[0], SuiteEntry(2, 'crashing entry', crash), SUITE[2])
        with patch('services.suite.SUITE', entries):
            rows = run_suite(seed=0)
        self.assertEqual([row['outcome'] for row in rows], ['pass', 'error', 'pass'])
        witness = rows[1]['report'].witnesses[0]
        self.assertEqual(witness['kind'], 'error')
        self.assertEqual(witness['error'], 'ValueError')
        self.assertIn('not enough values', witness['message'])


if __name__ == '__main__':
    unittest.main()
