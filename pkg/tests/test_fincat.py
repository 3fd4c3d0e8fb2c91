"""Finite categories, quotients, presheaves and coends."""

import unittest

from django.test import override_settings

from opkit.errors import BoundaryMismatch, CapExceeded, MalformedInput
from opkit.fincat import (
    BiFunctor, CheckReport, FinCategory, FinFunctor, NatTrans, QuotientSet, SetFunctor, UnionFind, coend, colimit,
    compare_quotients, compose_functors, identity_functor, lan_along, quotient, representable, tensor,
    validate_category,
)

ARROW_TABLE = {
    'objects': ['A', 'B'],
    'morphisms': [
        {'id': 'idA', 'src': 'A', 'tgt': 'A'},
        {'id': 'idB', 'src': 'B', 'tgt': 'B'},
        {'id': 'f', 'src': 'A', 'tgt': 'B'},
    ],
    'identity': {'A': 'idA', 'B': 'idB'},
}


def presheaf_on_arrow(image='a1'):
    cat = FinCategory.arrow()
    return SetFunctor(cat, 'contravariant', {'A': ['a0', 'a1'], 'B': ['b0']}, {'f': {'b0': image}}, name='X')


class TestUnionFind(unittest.TestCase):
    def test_root_is_least_index(self):
        uf = UnionFind(4)
        uf.union(3, 1)
        uf.union(2, 3)
        self.assertEqual(uf.find(2), 1)
        self.assertEqual(uf.find(0), 0)


class TestQuotient(unittest.TestCase):
    def test_classes_and_canonical_members(self):
        q = quotient([4, 3, 2, 1], [(1, 2), (3, 4), (2, 99)])
        self.assertEqual(q.classes, (1, 3))
        self.assertEqual(q.canonical(2), 1)
        self.assertEqual(q.members(3), (3, 4))

    def test_discrete(self):
        q = QuotientSet.discrete(['b', 'a', 'b'])
        self.assertEqual(len(q), 2)
        self.assertIn('a', q)

    @override_settings(OPKIT_CAP=3)
    def test_cap(self):
        with self.assertRaises(CapExceeded):
            quotient(range(10), [])

    def test_compare_quotients_reports_non_bijection(self):
        report = CheckReport('cmp')
        compare_quotients(QuotientSet.discrete([1, 2]), QuotientSet.discrete(['x']), lambda r: 'x', report)
        self.assertFalse(report.passed)


class TestCategories(unittest.TestCase):
    def test_samples_are_categories(self):
        for cat in (FinCategory.terminal(), FinCategory.discrete(['A', 'B']), FinCategory.arrow(),
                    FinCategory.parallel_pair()):
            self.assertEqual(validate_category(cat), [], cat.name)

    def test_from_table_fills_identity_composites(self):
        cat = FinCategory.from_table(ARROW_TABLE, name='arrow')
        self.assertEqual(validate_category(cat), [])
        self.assertEqual(cat.compose('f', 'idA'), 'f')
        self.assertEqual(cat, FinCategory.arrow())

    def test_wrongly_typed_composite_is_reported(self):
        data = dict(ARROW_TABLE, compose=[['f', 'idA', 'idB']])
        problems = validate_category(FinCategory.from_table(data))
        self.assertTrue(problems)

    def test_opposite_swaps_endpoints(self):
        op = FinCategory.arrow().opposite()
        self.assertEqual((op.src('f'), op.tgt('f')), ('B', 'A'))
        self.assertEqual(validate_category(op), [])


class TestFunctors(unittest.TestCase):
    def test_valid_presheaf(self):
        x = presheaf_on_arrow()
        self.assertEqual(x.validate(), [])
        self.assertEqual(x.act('f', 'b0'), 'a1')
        self.assertEqual(x.act('idB', 'b0'), 'b0')

    def test_action_outside_the_target_set(self):
        self.assertTrue(presheaf_on_arrow(image='zz').validate())

    def test_representable_values(self):
        cat = FinCategory.arrow()
        self.assertEqual(representable(cat, 'B').at('A'), ('f',))
        self.assertEqual(representable(cat, 'A', 'covariant').at('B'), ('f',))
        self.assertEqual(representable(cat, 'B').validate(), [])


class TestCoend(unittest.TestCase):
    def test_co_yoneda(self):
        cat = FinCategory.arrow()
        x = presheaf_on_arrow()
        for a in cat.objects:
            q = tensor(x, representable(cat, a, 'covariant'), cat)
            self.assertEqual(len(q), len(x.at(a)), a)

    def test_raw_elements_identified_along_generators(self):
        cat = FinCategory.arrow()
        q = tensor(presheaf_on_arrow(), representable(cat, 'A', 'covariant'), cat)
        self.assertEqual(q.canonical(('B', ('b0', 'f'))), q.canonical(('A', ('a1', 'idA'))))


class TestColimitsAndKanExtensions(unittest.TestCase):
    def test_colimit_glues_along_the_arrow(self):
        cat = FinCategory.arrow()
        x = SetFunctor(cat, 'covariant', {'A': ['a0', 'a1'], 'B': ['b0', 'b1']},
                       {'f': {'a0': 'b0', 'a1': 'b0'}})
        q = colimit(x)
        self.assertEqual(len(q), 2)
        self.assertEqual(q.canonical(('A', 'a1')), q.canonical(('B', 'b0')))
        with self.assertRaises(MalformedInput):
            colimit(presheaf_on_arrow())

    def test_coend_of_the_hom_bifunctor(self):
        cat = FinCategory.arrow()
        hom = BiFunctor(cat, cat.hom, lambda u, c2, x: cat.compose(x, u), lambda c1, u, x: cat.compose(u, x))
        self.assertEqual(hom.validate(), [])
        self.assertEqual(len(coend(hom)), 2)

    def test_lan_along_a_point(self):
        one, cat = FinCategory.terminal(), FinCategory.arrow()
        k = FinFunctor(one, cat, {'*': 'A'}, {'id*': 'idA'}, name='K')
        t = SetFunctor(one, 'covariant', {'*': ['t0', 't1']}, {})
        lan = lan_along(k, t)
        self.assertEqual(len(lan.at('A')), 2)
        self.assertEqual(len(lan.at('B')), 2)
        start = lan.quotient('A').canonical(('*', ('idA', 't0')))
        self.assertEqual(lan.act('f', start), lan.quotient('B').canonical(('*', ('f', 't0'))))


class TestFunctorsBetweenCategories(unittest.TestCase):
    def setUp(self):
        self.point = FinFunctor(FinCategory.terminal(), FinCategory.arrow(), {'*': 'B'}, {'id*': 'idB'},
                                name='B')

    def test_validate(self):
        self.assertEqual(self.point.validate(), [])
        self.assertEqual(identity_functor(FinCategory.arrow()).validate(), [])
        collapse = FinFunctor(FinCategory.arrow(), FinCategory.arrow(), {'A': 'A', 'B': 'B'},
                              {'idA': 'idA', 'idB': 'idB', 'f': 'idA'})
        self.assertTrue(collapse.validate())

    def test_compose(self):
        composite = compose_functors(identity_functor(FinCategory.arrow()), self.point)
        self.assertEqual(composite.obj('*'), 'B')
        self.assertEqual(composite.validate(), [])
        with self.assertRaises(BoundaryMismatch):
            compose_functors(self.point, self.point)

    def test_natural_transformations(self):
        x = presheaf_on_arrow()
        point = SetFunctor(FinCategory.arrow(), 'contravariant', {'A': ['*'], 'B': ['*']}, {'f': {'*': '*'}})
        self.assertEqual(NatTrans(x, point, lambda o, v: '*').validate(), [])
        swap = {'A': {'a0': 'a1', 'a1': 'a0'}, 'B': {'b0': 'b0'}}
        self.assertTrue(NatTrans(x, x, swap).validate())


class TestCheckReport(unittest.TestCase):
    def test_absorb_prefixes_witnesses(self):
        inner = CheckReport('inner', instances=2)
        inner.witness('bad', value=(1, 2))
        outer = CheckReport('outer', instances=1).absorb(inner)
        self.assertEqual(outer.instances, 3)
        self.assertFalse(outer.passed)
        self.assertEqual(outer.witnesses[0], {'kind': 'bad', 'value': '(1, 2)', 'check': 'inner'})
        self.assertEqual(outer.to_dict()['passed'], False)
