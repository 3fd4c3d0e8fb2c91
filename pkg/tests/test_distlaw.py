import unittest

from opkit import samples
from opkit.bang import BangCategory
from opkit.diagrams import FiniteFunction
from opkit.distlaw import (
    DistSample, check_all, check_eta_psh, check_kleisli_variant, check_naturality, lambda_obj, lambda_on_bang,
    lambda_on_nat,
)
from opkit.errors import MalformedInput, VariantError
from opkit.fincat import FinCategory, NatTrans, SetFunctor
from opkit.prof import prof_identity

ONE = FinCategory.terminal()


def drop_last(variant, fs, base):
    return lambda_obj(variant, fs[:-1], base)


class TestLambda(unittest.TestCase):
    def setUp(self):
        self.f1 = SetFunctor(ONE, 'contravariant', {'*': ['a', 'b']}, {}, name='F1')
        self.f2 = SetFunctor(ONE, 'contravariant', {'*': ['c']}, {}, name='F2')

    def test_sizes_over_the_terminal_category(self):
        lam = lambda_obj('sigma', [self.f1, self.f2], ONE)
        # one summand per bijection of the two slots
        self.assertEqual(len(lam.at(('*', '*'))), 4)
        self.assertEqual(lam.at(('*',)), ())
        self.assertEqual(len(lambda_obj('sigma', [], ONE).at(())), 1)

    def test_single_presheaf(self):
        lam = lambda_obj('sigma', [self.f1], ONE)
        self.assertEqual(len(lam.at(('*',))), 2)

    def test_refusals(self):
        with self.assertRaises(VariantError):
            lambda_obj('delta', [self.f1], ONE)
        covariant = SetFunctor(ONE, 'covariant', {'*': ['a']}, {})
        with self.assertRaises(MalformedInput):
            lambda_obj('sigma', [covariant], ONE)

    def test_transformation_in_one_slot(self):
        f3 = SetFunctor(ONE, 'contravariant', {'*': ['z']}, {}, name='F3')
        source = lambda_obj('sigma', [self.f1, self.f2], ONE)
        target, nat = lambda_on_nat(source, NatTrans(self.f1, f3, lambda o, x: 'z'), 0)
        self.assertEqual(len(target.at(('*', '*'))), 2)
        images = {nat(('*', '*'), cls) for cls in source.at(('*', '*'))}
        self.assertEqual(len(images), 2)
        self.assertEqual(nat.validate(BangCategory('sigma', ONE).restrict(2)), [])
        with self.assertRaises(MalformedInput):
            lambda_on_nat(source, NatTrans(self.f1, f3, lambda o, x: 'z'), 2)

    def test_swapping_slots_is_a_bijection(self):
        source = lambda_obj('sigma', [self.f1, self.f2], ONE)
        target = lambda_obj('sigma', [self.f2, self.f1], ONE)
        swap = FiniteFunction(2, 2, (1, 0))
        nat = lambda_on_bang(source, target, swap, [lambda d, x: x, lambda d, x: x])
        images = {nat(('*', '*'), cls) for cls in source.at(('*', '*'))}
        self.assertEqual(len(images), 4)
        with self.assertRaises(MalformedInput):
            lambda_on_bang(source, target, FiniteFunction.identity(1), [lambda d, x: x])


class TestEquations(unittest.TestCase):
    def test_all_equations_on_samples(self):
        family = samples.dist_samples(seed=2, max_value=2, max_len=2)
        for variant in ('empty', 'sigma', 'sigma,delta,epsilon'):
            for sample in family:
                for report in check_all(variant, sample):
                    self.assertTrue(report.passed, (variant, sample.name, report.name, report.witnesses))

    def test_kleisli_equation_for_every_monad_variant(self):
        family = samples.dist_samples(seed=0)
        for variant in ('empty', 'sigma', 'epsilon', 'sigma,delta', 'sigma,epsilon', 'sigma,delta,epsilon'):
            for sample in family:
                with self.subTest(variant=variant, sample=sample.name):
                    report = check_kleisli_variant(variant, sample)
                    self.assertTrue(report.passed, report.witnesses)
                    self.assertGreater(report.instances, 0)

    def test_naturality(self):
        for sample in samples.dist_samples(seed=4)[1:3]:
            self.assertTrue(check_naturality('sigma', sample).passed)

    def test_corrupted_law_is_caught(self):
        arrow = FinCategory.arrow()
        x = SetFunctor(arrow, 'contravariant', {'A': ['a0', 'a1'], 'B': ['b0']}, {'f': {'b0': 'a1'}}, name='X')
        sample = DistSample('arrow', arrow, (x,), 2, arrow, prof_identity(arrow))
        self.assertTrue(check_eta_psh('sigma', sample).passed)
        report = check_eta_psh('sigma', sample, lam=drop_last)
        self.assertFalse(report.passed)
