"""Connected wirings and vertical composition of bioperations."""

import unittest

from hypothesis import given, settings, strategies as st

from opkit import properads
from opkit.diagrams import FiniteFunction
from opkit.errors import CapExceeded, MalformedInput, VariantError
from opkit.properads import (
    BioperationCollection, check_unit_laws, compose_collections, connected_perms, identity_bioperation, profile,
    properad_vcompose,
)

SWAP = FiniteFunction(2, 2, (1, 0))


def merging(swapped=True):
    """Two binary merges m and n; swapping the inputs exchanges them."""
    inputs = {'2>2:1,0': {'m': 'n', 'n': 'm'}} if swapped else None
    return BioperationCollection.from_data({'2,1': ['m', 'n']}, inputs=inputs, name='M')


class TestProfiles(unittest.TestCase):
    def test_parse(self):
        self.assertEqual(profile('2, 1'), (2, 1))
        self.assertEqual(profile(''), ())
        self.assertEqual(profile([3]), (3,))

    def test_rejects(self):
        with self.assertRaises(MalformedInput):
            profile('2,x')
        with self.assertRaises(MalformedInput):
            profile([1, -1])


class TestConnectedPerms(unittest.TestCase):
    def test_counts(self):
        cases = [
            ((1,), (1,), 1),
            ((1, 1), (1, 1), 0),
            ((2,), (1, 1), 2),
            ((1, 1), (2,), 2),
            ((2, 1), (1, 2), 4),
            ((3,), (3,), 6),
        ]
        for ms, ns, expected in cases:
            with self.subTest(ms=ms, ns=ns):
                self.assertEqual(len(connected_perms(ms, ns)), expected)

    def test_empty_and_degenerate_profiles(self):
        self.assertEqual(len(connected_perms((), ())), 1)
        self.assertEqual(len(connected_perms((0,), ())), 1)
        self.assertEqual(connected_perms((0,), (0,)), ())
        self.assertEqual(connected_perms((1, 0), (1,)), ())
        self.assertEqual(connected_perms((2,), (1,)), ())

    def test_wirings_avoid_isolated_blocks(self):
        # the single-wire top block may not feed the single-wire bottom block
        for c in connected_perms((2, 1), (1, 2)):
            self.assertNotEqual(c.perm(2), 0)

    def test_too_many_wires(self):
        with self.assertRaises(CapExceeded):
            connected_perms((13,), (13,))

    def test_oracle_agrees(self):
        report = properads.check_oracle(max_total=4)
        self.assertTrue(report.passed, report.witnesses)
        self.assertGreater(report.instances, 0)
        self.assertTrue(properads.check_oracle_pair('2,1', '1,2').passed)

    def test_inverse_symmetry(self):
        report = properads.check_inverse_symmetry(max_total=4)
        self.assertTrue(report.passed, report.witnesses)

    @settings(max_examples=25)
    @given(st.lists(st.integers(1, 3), max_size=2), st.data())
    def test_flipping_profiles_preserves_counts(self, ms, data):
        ns = data.draw(st.sampled_from(properads.compositions(sum(ms))))
        self.assertEqual(len(connected_perms(ms, ns)), len(connected_perms(ns, ms)))


class TestBioperations(unittest.TestCase):
    def test_from_data(self):
        coll = merging()
        self.assertEqual(coll.at(2, 1), ('m', 'n'))
        self.assertEqual(coll.at(1, 2), ())
        self.assertEqual(coll.act_in(SWAP, 'm'), 'n')
        self.assertEqual(coll.act_out(FiniteFunction.identity(1), 'm'), 'm')
        self.assertEqual(coll.with_inputs(2), [(1, 'm'), (1, 'n')])

    def test_identity_is_symmetric_only(self):
        self.assertEqual(identity_bioperation().at(1, 1), ('id',))
        with self.assertRaises(VariantError):
            identity_bioperation('sigma,delta')

    def test_vcompose_identifies_relabelled_wirings(self):
        unit = identity_bioperation()
        q = properad_vcompose(merging(), unit, (1, 1), (2,))
        # two wirings times two merges, glued in pairs by the swap
        self.assertEqual(len(q), 2)
        q = properad_vcompose(merging(swapped=False), unit, (1, 1), (2,))
        self.assertEqual(len(q), 2)

    def test_vcompose_needs_matching_wires(self):
        with self.assertRaises(MalformedInput):
            properad_vcompose(merging(), merging(), (1,), (2,))

    def test_compose_collections_of_the_unit(self):
        unit = identity_bioperation()
        composites = compose_collections(unit, unit, max_arity=2)
        self.assertEqual(list(composites), [(1, 1)])
        self.assertEqual(len(composites[(1, 1)]), 1)

    def test_unit_laws(self):
        for coll in (merging(), merging(swapped=False), identity_bioperation()):
            with self.subTest(coll=coll.name):
                report = check_unit_laws(coll, max_arity=2)
                self.assertTrue(report.passed, report.witnesses)


if __name__ == '__main__':
    unittest.main()
