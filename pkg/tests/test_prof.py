"""Profunctors: composition, identities and the Kleisli structure of presheaves."""

import unittest

from opkit import samples
from opkit.errors import BoundaryMismatch, MalformedInput
from opkit.fincat import FinCategory, FinFunctor, SetFunctor
from opkit.prof import (
    CompositionSample, FiniteProfunctor, KleisliSample, check_composition_laws, kleisli_laws_check, prof_compose,
    prof_identity, prof_of_functor, psh_map, sharp, yoneda_presheaf,
)

ARROW = FinCategory.arrow()
ONE = FinCategory.terminal()


def phi(image='p1'):
    return FiniteProfunctor(ARROW, ONE, {('A', '*'): ['p0'], ('B', '*'): ['p1', 'p2']},
                            {('f', '*'): {'p0': image}}, {}, name='Phi')


def psi():
    return FiniteProfunctor(ONE, ARROW, {('*', 'A'): ['q0', 'q1'], ('*', 'B'): ['q2']},
                            {}, {('*', 'f'): {'q2': 'q0'}}, name='Psi')


class TestFiniteProfunctor(unittest.TestCase):
    def test_validate(self):
        self.assertEqual(phi().validate(), [])
        self.assertEqual(psi().validate(), [])
        self.assertTrue(phi(image='zz').validate())

    def test_identity_is_the_hom_profunctor(self):
        ident = prof_identity(ARROW)
        self.assertEqual(ident.at('B', 'A'), ('f',))
        self.assertEqual(ident.at('A', 'B'), ())
        self.assertEqual(ident.validate(ARROW, ARROW), [])

    def test_dual_swaps_arguments(self):
        dual = phi().dual()
        self.assertEqual(dual.at('*', 'B'), ('p1', 'p2'))
        self.assertEqual(dual.act_right('*', 'f', 'p0'), 'p1')
        self.assertEqual(dual.validate(), [])
        self.assertIs(dual.dual(), dual.inner)


class TestComposition(unittest.TestCase):
    def test_sizes_through_a_one_object_middle(self):
        composite = prof_compose(psi(), phi())
        sizes = {(c, e): len(composite.quotient(c, e)) for c in ARROW.objects for e in ARROW.objects}
        self.assertEqual(sizes, {('A', 'A'): 2, ('A', 'B'): 1, ('B', 'A'): 4, ('B', 'B'): 2})

    def test_actions_on_classes(self):
        composite = prof_compose(psi(), phi())
        x = composite.quotient('A', 'B').classes[0]
        moved = composite.act_left('f', 'B', x)
        self.assertIn(moved, composite.at('B', 'B'))

    def test_boundary_mismatch(self):
        with self.assertRaises(BoundaryMismatch):
            prof_compose(phi(), phi())

    def test_laws_on_fixed_profunctors(self):
        theta = prof_identity(ARROW)
        report = check_composition_laws(CompositionSample('fixed', (ARROW, ONE, ARROW, ARROW), phi(), psi(), theta))
        self.assertTrue(report.passed, report.witnesses)

    def test_laws_on_random_profunctors(self):
        gen = samples.rng(11)
        cats = (samples.category('parallel'), ONE, ARROW, samples.category('discrete2'))
        sample = CompositionSample(
            'random', cats,
            samples.random_profunctor(gen, cats[0], cats[1], name='Phi'),
            samples.random_profunctor(gen, cats[1], cats[2], name='Psi'),
            samples.random_profunctor(gen, cats[2], cats[3], name='Theta'),
        )
        self.assertTrue(check_composition_laws(sample).passed)


class TestKleisli(unittest.TestCase):
    def test_sharp_of_a_presheaf(self):
        x = SetFunctor(ARROW, 'contravariant', {'A': ['a0', 'a1'], 'B': ['b0']}, {'f': {'b0': 'a1'}}, name='X')
        extended = sharp(phi(), x)
        # a0 and a1 pair with p0; b0 pairs with p1, p2, and (b0, p1) meets (a1, p0)
        self.assertEqual(len(extended.at('*')), 3)

    def test_laws_on_samples(self):
        for sample in samples.kleisli_samples(seed=5, count=3):
            report = kleisli_laws_check(sample)
            self.assertTrue(report.passed, (sample.name, report.witnesses))

    def test_invalid_input_is_a_witness(self):
        x = SetFunctor(ARROW, 'contravariant', {'A': ['a0'], 'B': ['b0']}, {'f': {'b0': 'a0'}}, name='X')
        report = kleisli_laws_check(KleisliSample('bad', ARROW, ONE, ARROW, phi(image='zz'), psi(), x))
        self.assertFalse(report.passed)
        self.assertEqual(report.witnesses[0]['kind'], 'invalid-input')

    def test_functors_as_profunctors(self):
        k = FinFunctor(ONE, ARROW, {'*': 'A'}, {'id*': 'idA'}, name='K')
        yk = prof_of_functor(k)
        self.assertEqual(yk.at('*', 'A'), ('idA',))
        self.assertEqual(yk.at('*', 'B'), ())
        self.assertEqual(yk.validate(), [])
        self.assertEqual(yoneda_presheaf(ARROW, 'B').at('A'), ('f',))

    def test_psh_map_along_a_point(self):
        k = FinFunctor(ONE, ARROW, {'*': 'A'}, {'id*': 'idA'}, name='K')
        x = SetFunctor(ONE, 'contravariant', {'*': ['x0', 'x1']}, {}, name='X')
        pushed = psh_map(k, x)
        self.assertEqual(len(pushed.at('A')), 2)
        self.assertEqual(pushed.at('B'), ())
        with self.assertRaises(MalformedInput):
            psh_map(k, SetFunctor(ONE, 'covariant', {'*': ['x0']}, {}))
