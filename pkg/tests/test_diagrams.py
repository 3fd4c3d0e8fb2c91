"""String diagram syntax, semantics, classification and normal forms."""

import unittest

from hypothesis import assume, given, strategies as st

from opkit import diagrams
from opkit.diagrams import FiniteFunction, Variant
from opkit.errors import DiagramSyntaxError, DiagramTypeError, MalformedInput, VariantError
from opkit.fincat import FinCategory

FIGURE = '(sigma * id[1]) ; (delta * id[1] * eps)'


class TestFiniteFunction(unittest.TestCase):
    def test_descriptor(self):
        f = FiniteFunction.from_descriptor('3>2:1,0,1')
        self.assertEqual(f.table, (1, 0, 1))
        self.assertEqual(f.descriptor(), '3>2:1,0,1')
        with self.assertRaises(MalformedInput):
            FiniteFunction.from_descriptor('2>2:0')

    def test_compose_and_inverse(self):
        swap = FiniteFunction(2, 2, (1, 0))
        self.assertTrue(swap.compose(swap).is_identity())
        cycle = FiniteFunction(3, 3, (1, 2, 0))
        self.assertTrue(cycle.compose(cycle.inverse()).is_identity())

    def test_out_of_range(self):
        with self.assertRaises(MalformedInput):
            FiniteFunction(1, 1, (1,))


class TestVariant(unittest.TestCase):
    def test_parse_spellings(self):
        self.assertEqual(Variant.parse('{σ,δ}'), Variant.parse('sigma,delta'))
        self.assertTrue(Variant.parse('f').is_cartesian)
        self.assertEqual(Variant.parse('empty').name, 'empty')
        with self.assertRaises(MalformedInput):
            Variant.parse('sigma,omega')

    def test_class_sizes(self):
        counts = {
            'empty': 1,
            'sigma': 6,
            'sigma,delta,epsilon': 27,
            'delta,epsilon': 10,
            'sigma,delta': 6,
            'sigma,epsilon': 6,
        }
        for name, expected in counts.items():
            self.assertEqual(len(Variant.parse(name).functions(3, 3)), expected, name)

    def test_monad_and_classification_flags(self):
        self.assertFalse(Variant.parse('delta').monad_enabled)
        self.assertFalse(Variant.parse('delta,epsilon').monad_enabled)
        self.assertTrue(Variant.parse('epsilon').monad_enabled)
        self.assertFalse(Variant.parse('epsilon').classification_enabled)
        self.assertEqual(len(Variant.all()), 8)


class TestSyntax(unittest.TestCase):
    def test_render_parse_round_trip(self):
        d = diagrams.parse(FIGURE)
        text = diagrams.render(d)
        self.assertEqual(diagrams.parse(text), d)

    def test_syntax_errors_carry_position(self):
        with self.assertRaises(DiagramSyntaxError) as ctx:
            diagrams.parse('sigma * ')
        self.assertEqual(ctx.exception.position, 8)
        with self.assertRaises(DiagramSyntaxError):
            diagrams.parse('sigma ; ; delta')
        with self.assertRaises(DiagramSyntaxError):
            diagrams.parse('swap')

    def test_ill_typed_composite(self):
        with self.assertRaises(DiagramTypeError):
            diagrams.typecheck(diagrams.parse('id[3] ; sigma'))


class TestSemantics(unittest.TestCase):
    def test_figure(self):
        f = diagrams.to_function(diagrams.parse(FIGURE))
        self.assertEqual(f, FiniteFunction(3, 3, (1, 1, 0)))
        self.assertEqual(str(f), '0↦1 1↦1 2↦0')

    def test_typecheck_against_variant(self):
        d = diagrams.parse(FIGURE)
        self.assertEqual(diagrams.typecheck(d, 'f'), (3, 3))
        with self.assertRaises(VariantError):
            diagrams.typecheck(d, 'sigma')

    def test_equations_hold(self):
        for eq in diagrams.EQUATIONS:
            lhs, rhs = diagrams.parse(eq.lhs), diagrams.parse(eq.rhs)
            self.assertTrue(diagrams.diagrams_equal(lhs, rhs, 'f'), eq.name)

    def test_classify_refuses_excluded_rows(self):
        with self.assertRaises(VariantError):
            diagrams.classify(FiniteFunction.identity(1), 'delta')
        self.assertTrue(diagrams.classify(FiniteFunction(2, 1, (0, 0)), 'delta,epsilon'))
        self.assertFalse(diagrams.classify(FiniteFunction(2, 2, (1, 0)), 'delta,epsilon'))

    def test_check_classification(self):
        for name in ('sigma', 'sigma,delta,epsilon', 'delta,epsilon'):
            report = diagrams.check_classification(name, max_arity=3, samples=60, seed=3)
            self.assertTrue(report.passed, report.witnesses)


class TestNormalForms(unittest.TestCase):
    def test_shape_is_the_function(self):
        d = diagrams.parse(FIGURE)
        nf = diagrams.normalize(d, 'f')
        self.assertEqual(nf.shape, diagrams.to_function(d))
        self.assertEqual(nf.base_family, ())
        again = diagrams.normalize(diagrams.to_diagram(nf), 'f')
        self.assertEqual(again, nf)

    def test_sigma_is_an_involution(self):
        self.assertTrue(diagrams.diagrams_equal(diagrams.parse('sigma ; sigma'), diagrams.parse('id[2]'), 'sigma'))

    def test_words_over_no_base(self):
        nf = diagrams.normalize(diagrams.parse('(gen(f) * id[1]) ; sigma'), 'sigma')
        self.assertEqual(nf.shape, FiniteFunction(2, 2, (1, 0)))
        self.assertEqual(nf.base_family, ((), ('f',)))

    def test_over_a_base_category(self):
        arrow = FinCategory.arrow()
        nf = diagrams.normalize(diagrams.parse('gen(f) * id[1]'), 'sigma', base=arrow, sources=['A', 'B'])
        self.assertEqual(nf.base_family, ('f', 'idB'))
        self.assertEqual(nf.targets, ('B', 'B'))
        with self.assertRaises(DiagramTypeError):
            diagrams.normalize(diagrams.parse('gen(f) * id[1]'), 'sigma', base=arrow)

    def test_equality_with_fixed_sources(self):
        arrow = FinCategory.arrow()
        drop_both = diagrams.parse('eps * eps')
        swapped = diagrams.parse('sigma ; (eps * eps)')
        self.assertTrue(diagrams.diagrams_equal(drop_both, swapped, 'sigma,epsilon', base=arrow, sources=['A', 'B']))
        keep_second = diagrams.parse('eps * id[1]')
        keep_first = diagrams.parse('id[1] * eps')
        self.assertFalse(diagrams.diagrams_equal(keep_second, keep_first, 'sigma,epsilon', base=arrow,
                                                 sources=['A', 'B']))
        with self.assertRaises(DiagramTypeError):
            diagrams.diagrams_equal(drop_both, swapped, 'sigma,epsilon', base=arrow)

    def test_refused_variant(self):
        with self.assertRaises(VariantError):
            diagrams.normalize(diagrams.parse('id[1]'), 'delta')


class TestFactorization(unittest.TestCase):
    @given(st.integers(0, 4), st.integers(1, 4), st.data())
    def test_realize_round_trip(self, m, n, data):
        variant = Variant.parse('f')
        functions = variant.functions(m, n)
        assume(functions)
        f = data.draw(st.sampled_from(functions))
        d = diagrams.realize(f, variant)
        self.assertEqual(diagrams.to_function(d), f)
        self.assertEqual(diagrams.compose_layers(diagrams.elementary_factors(f), n), f)

    @given(st.permutations(range(4)))
    def test_permutations_use_sigma_only(self, table):
        f = FiniteFunction(4, 4, tuple(table))
        d = diagrams.realize(f, 'sigma')
        self.assertLessEqual(diagrams.combinators_of(d), frozenset({'sigma'}))
