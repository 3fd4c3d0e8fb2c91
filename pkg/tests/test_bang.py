import unittest

from django.test import override_settings

from opkit.bang import (
    ArityCategory, BangCategory, BangMorphism, bang_functor, bang_hom, block_sum, compose_nf, expand_mor, flatten_obj,
    hom_size, identity_nf, question_of, reindex, unit_functor, unit_mor,
)
from opkit.diagrams import FiniteFunction, Variant
from opkit.errors import CapExceeded, MalformedInput, VariantError
from opkit.fincat import FinCategory, FinFunctor, validate_category


class TestBangHom(unittest.TestCase):
    def setUp(self):
        self.arrow = FinCategory.arrow()
        self.one = FinCategory.terminal()

    def test_sizes_over_the_terminal_category(self):
        self.assertEqual(len(bang_hom('sigma', self.one, ('*', '*'), ('*', '*'))), 2)
        self.assertEqual(len(bang_hom('f', self.one, ('*', '*'), ('*', '*'))), 4)
        self.assertEqual(len(bang_hom('f', self.one, ('*', '*'), ())), 1)
        self.assertEqual(len(bang_hom('sigma', self.one, ('*',), ())), 0)

    def test_families_follow_the_base(self):
        self.assertEqual(len(bang_hom('sigma', self.arrow, ('A',), ('B',))), 1)
        self.assertEqual(bang_hom('sigma', self.arrow, ('B',), ('A',)), ())
        self.assertEqual(hom_size(Variant.parse('sigma'), self.arrow, ('A', 'B'), ('B', 'B')), 2)

    def test_refuses_excluded_variant_and_foreign_objects(self):
        with self.assertRaises(VariantError):
            bang_hom('delta', self.one, ('*',), ('*',))
        with self.assertRaises(MalformedInput):
            bang_hom('sigma', self.one, ('x',), ('*',))

    @override_settings(OPKIT_CAP=10)
    def test_cap(self):
        with self.assertRaises(CapExceeded):
            bang_hom('f', self.one, ('*',) * 3, ('*',) * 3)

    def test_identity_and_composition(self):
        [m] = bang_hom('sigma', self.arrow, ('A',), ('B',))
        self.assertEqual(compose_nf(identity_nf('sigma', self.arrow, ('B',)), m, self.arrow), m)
        self.assertEqual(compose_nf(m, identity_nf('sigma', self.arrow, ('A',)), self.arrow), m)

    def test_block_sum(self):
        [m] = bang_hom('sigma', self.arrow, ('A',), ('B',))
        both = block_sum([m, identity_nf('sigma', self.arrow, ('A',))])
        self.assertEqual(both.src, ('A', 'A'))
        self.assertEqual(both.tgt, ('B', 'A'))
        self.assertEqual(both.shape, FiniteFunction.identity(2))


class TestRestrictions(unittest.TestCase):
    def test_restricted_bang_is_a_category(self):
        for variant in ('sigma', 'f', 'epsilon', 'sigma,delta'):
            restricted = BangCategory(variant, FinCategory.arrow()).restrict(2)
            self.assertEqual(validate_category(restricted), [], variant)
            self.assertEqual(len(restricted.objects), 7)

    def test_question_reverses_homs(self):
        arrow = FinCategory.arrow()
        q = question_of('sigma', arrow)
        self.assertEqual(len(q.hom(('A',), ('B',))), 1)
        self.assertEqual(q.hom(('B',), ('A',)), ())
        self.assertEqual(len(q.hom(('A', 'A'), ('A',))), 0)
        self.assertEqual(validate_category(q.restrict(2)), [])

    def test_arity_category(self):
        cat = ArityCategory('sigma,delta').restrict(3)
        self.assertEqual(validate_category(cat), [])
        self.assertEqual(len(cat.hom(3, 2)), 6)

    def test_unit_functor(self):
        eta = unit_functor('sigma', FinCategory.arrow(), max_len=2)
        self.assertEqual(eta.validate(), [])
        self.assertEqual(eta.obj('A'), ('A',))


class TestFlattening(unittest.TestCase):
    def setUp(self):
        self.one = FinCategory.terminal()
        self.sigma = Variant.parse('sigma')
        self.swap = FiniteFunction(2, 2, (1, 0))

    def test_flatten_obj(self):
        self.assertEqual(flatten_obj([('A',), (), ('B', 'A')]), ('A', 'B', 'A'))
        self.assertEqual(flatten_obj([]), ())

    def test_unit_mor_and_reindex(self):
        arrow = FinCategory.arrow()
        m = unit_mor('sigma', arrow, 'f')
        self.assertEqual((m.src, m.tgt, m.family), (('A',), ('B',), ('f',)))
        copy = reindex('sigma,delta', arrow, ('A', 'B'), FiniteFunction(3, 2, (0, 0, 1)))
        self.assertEqual(copy.tgt, ('A', 'A', 'B'))
        self.assertEqual(copy.family, ('idA', 'idA', 'idB'))

    def test_expand_mor_composes_block_shapes(self):
        inner_swap = reindex(self.sigma, self.one, ('*', '*'), self.swap)
        inner_id = identity_nf(self.sigma, self.one, ('*',))
        outer = BangMorphism(self.sigma, (('*',), ('*', '*')), (('*', '*'), ('*',)), self.swap,
                             (inner_swap, inner_id))
        flat = expand_mor(outer)
        self.assertEqual(flat.shape.table, (2, 1, 0))
        self.assertEqual(flat.src, ('*', '*', '*'))
        self.assertEqual(flat.family, ('id*', 'id*', 'id*'))

    def test_bang_functor(self):
        point = FinFunctor(self.one, FinCategory.arrow(), {'*': 'B'}, {'id*': 'idB'}, name='B')
        lifted = bang_functor('sigma', point)
        self.assertEqual(lifted.obj(('*', '*')), ('B', 'B'))
        image = lifted.mor(reindex(self.sigma, self.one, ('*', '*'), self.swap))
        self.assertEqual(image.family, ('idB', 'idB'))
        self.assertEqual(image.shape, self.swap)
