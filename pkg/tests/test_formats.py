"""Loading and validating the JSON and diagram input files."""

import json
import tempfile
import unittest
from pathlib import Path

from django.test import SimpleTestCase

from opkit import diagrams
from opkit.diagrams import FiniteFunction
from opkit.errors import DiagramSyntaxError, MalformedInput, ValidationFailed
from opkit.operads import monoid_check
from services import formats

DATA = Path(__file__).resolve().parent.parent / 'data'


class TestDataFiles(SimpleTestCase):
    def test_category(self):
        cat = formats.load_category(DATA / 'arrow.json')
        self.assertEqual(cat.name, 'arrow')
        self.assertEqual(set(cat.objects), {'A', 'B'})
        self.assertEqual(cat.hom('A', 'B'), ('f',))

    def test_presheaf_resolves_relative_category(self):
        x = formats.load_functor(DATA / 'presheaf_arrow.json')
        self.assertEqual(len(x.at('A')), 2)
        self.assertEqual(x.act('f', 'b0'), 'a1')

    def test_profunctors(self):
        phi = formats.load_profunctor(DATA / 'phi.json')
        psi = formats.load_profunctor(DATA / 'psi.json')
        self.assertEqual(len(phi.at('B', '*')), 2)
        self.assertEqual(len(psi.at('*', 'A')), 2)
        self.assertEqual(phi.tgt, psi.src)

    def test_arity_presheaf(self):
        x = formats.load_arity_presheaf(DATA / 'binary.json')
        self.assertEqual(x.at(2), ('a',))
        self.assertTrue(x.finite)

    def test_operad_candidates(self):
        good = formats.load_operad_candidate(DATA / 'z2_operad.json')
        self.assertTrue(monoid_check(good, up_to_arity=1).passed)
        corrupt = formats.load_operad_candidate(DATA / 'corrupt_operad.json')
        self.assertFalse(monoid_check(corrupt, up_to_arity=1).passed)

    def test_diagram(self):
        d, text = formats.load_diagram(DATA / 'figure.sd')
        self.assertIn('sigma', text)
        self.assertEqual(diagrams.to_function(d), FiniteFunction(3, 3, (1, 1, 0)))

    def test_digest_is_stable(self):
        digest = formats.file_digest(DATA / 'arrow.json')
        self.assertEqual(len(digest), 64)
        self.assertEqual(digest, formats.file_digest(DATA / 'arrow.json'))


class TestRejectedInput(SimpleTestCase):
    def setUp(self):
        self._tmp = tempfile.TemporaryDirectory()
        self.dir = Path(self._tmp.name)

    def tearDown(self):
        self._tmp.cleanup()

    def write(self, name, payload):
        path = self.dir / name
        path.write_text(payload if isinstance(payload, str) else json.dumps(payload), encoding='utf-8')
        return path

    def test_missing_file(self):
        with self.assertRaises(MalformedInput):
            formats.read_json(self.dir / 'absent.json')
        with self.assertRaises(MalformedInput):
            formats.load_diagram(self.dir / 'absent.sd')

    def test_invalid_json(self):
        path = self.write('broken.json', '{"objects": [')
        with self.assertRaisesRegex(MalformedInput, 'invalid JSON'):
            formats.read_json(path)

    def test_unknown_endpoint(self):
        path = self.write('cat.json', {
            'objects': ['A'],
            'morphisms': [{'id': 'idA', 'src': 'A', 'tgt': 'A'}, {'id': 'f', 'src': 'A', 'tgt': 'B'}],
            'identity': {'A': 'idA'},
        })
        with self.assertRaises(ValidationFailed) as ctx:
            formats.load_category(path)
        self.assertTrue(any('unknown endpoint' in v for v in ctx.exception.violations))

    def test_missing_fields_are_all_reported(self):
        with self.assertRaises(ValidationFailed) as ctx:
            formats.build_category({'objects': ['A']})
        self.assertGreaterEqual(len(ctx.exception.violations), 2)

    def test_map_leaving_the_presheaf(self):
        path = self.write('x.json', {
            'category': str(DATA / 'arrow.json'),
            'sets': {'A': ['a0'], 'B': ['b0']},
            'maps': {'f': {'b0': 'zz'}},
        })
        with self.assertRaisesRegex(ValidationFailed, 'not well defined'):
            formats.load_functor(path)

    def test_operad_unit_must_be_unary(self):
        path = self.write('op.json', {
            'variant': 'sigma', 'truncation': 1, 'finite': True,
            'sets': {'1': ['e']}, 'unit': 'u',
            'compose': [{'outer': 'e', 'inner': ['e'], 'result': 'e'}],
        })
        with self.assertRaisesRegex(ValidationFailed, 'arity 1'):
            formats.load_operad_candidate(path)

    def test_bad_arity_keys_and_variants(self):
        with self.assertRaises(ValidationFailed):
            formats.build_arity_presheaf({'variant': 'sigma', 'sets': {'two': ['a']}})
        with self.assertRaises(ValidationFailed):
            formats.build_arity_presheaf({'variant': 'delta', 'sets': {}})

    def test_diagram_syntax(self):
        path = self.write('bad.sd', 'sigma ; ; delta')
        with self.assertRaises(DiagramSyntaxError):
            formats.load_diagram(path)


if __name__ == '__main__':
    unittest.main()
