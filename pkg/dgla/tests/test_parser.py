import os
import shutil
import tempfile
import unittest

from dgla import cdga, lie, parser
from dgla.errors import InputError
from dgla.linalg import ONE, q

FIXTURES = os.path.join(os.path.dirname(__file__), "fixtures")


def fixture(name):
    return os.path.join(FIXTURES, name)


class TestParser(unittest.TestCase):

    def setUp(self):
        self.tmp = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.tmp)

    def write(self, name, text):
        path = os.path.join(self.tmp, name)
        with open(path, "w") as f:
            f.write(text)
        return path

    def test_sl2(self):
        L = parser.parse_input(fixture("sl2.json"))
        self.assertEqual(L.name, "sl2")
        self.assertEqual(L.bracket_basis("f", "h"), {"f": q(2)})
        self.assertIsNone(L.weights)

    def test_fixture_kinds(self):
        F = parser.parse_input(fixture("free_odd.json"))
        self.assertIsInstance(F, lie.FreeLiePresentation)
        self.assertEqual(F.lie.name, "free(x)")
        self.assertEqual(F.max_weight, 4)
        D = parser.parse_input(fixture("dual_numbers.json"))
        self.assertIsInstance(D, cdga.FiniteCdga)
        self.assertEqual(D.labels(), ["ε", "1"])
        S = parser.parse_input(fixture("polynomial.json"))
        self.assertIsInstance(S, cdga.SemiFreeCdga)
        B = parser.parse_input(fixture("truncated_poly.json"))
        self.assertEqual(B.labels(), ["1", "x"])

    def test_serialize_is_canonical(self):
        for name in ["sl2.json", "abelian2.json", "free_odd.json", "dual_numbers.json", "polynomial.json"]:
            doc = parser.serialize(parser.parse_input(fixture(name)))
            again = parser.serialize(parser.parse_document(doc))
            self.assertEqual(doc, again, name)

    def test_serialize_semi_free_differential(self):
        S = cdga.polynomial_ring([("x", 0), ("u", -1)], {"u": {"x^2": 1}}, name="S")
        doc = parser.serialize(S)
        self.assertEqual(doc["differential"], [{"args": ["u"], "value": [{"label": "x^2", "coeff": "1"}]}])
        self.assertEqual(parser.serialize(parser.parse_document(doc)), doc)

    def test_representation_needs_lie(self):
        doc = {
            "kind": "rep",
            "generators": [{"label": "k", "degree": 0}],
        }
        with self.assertRaises(InputError) as ctx:
            parser.parse_document(doc)
        self.assertIn("--in", str(ctx.exception))
        M = parser.parse_document(doc, lie_algebra=lie.sl2())
        self.assertTrue(lie.validate_rep(M).ok)
        self.assertEqual(parser.serialize(M)["action"], [])

    def test_path_diagnostics(self):
        doc = {
            "kind": "lie",
            "generators": [{"label": "a", "degree": 0}],
            "brackets": [{"args": ["a", "a"], "value": [{"label": "a", "coeff": 1.5}]}],
        }
        with self.assertRaises(InputError) as ctx:
            parser.parse_document(doc, "in.json")
        self.assertIn("in.json: brackets[0].value[0].coeff", str(ctx.exception))

        doc = {"kind": "lie", "generators": [{"label": "a"}]}
        with self.assertRaises(InputError) as ctx:
            parser.parse_document(doc)
        self.assertIn("generators[0].degree: missing field", str(ctx.exception))

        doc = {"kind": "lie", "generators": [], "colour": "red"}
        with self.assertRaises(InputError) as ctx:
            parser.parse_document(doc)
        self.assertIn("colour: unsupported field", str(ctx.exception))

        with self.assertRaises(InputError) as ctx:
            parser.parse_document({"kind": "group", "generators": []})
        self.assertIn("unknown kind 'group'", str(ctx.exception))

    def test_generator_checks(self):
        doc = {"kind": "lie", "generators": [{"label": "a", "degree": 0}, {"label": "a", "degree": 1}]}
        with self.assertRaises(InputError) as ctx:
            parser.parse_document(doc)
        self.assertIn("duplicate labels ['a']", str(ctx.exception))
        doc = {
            "kind": "lie",
            "generators": [{"label": "a", "degree": 1, "weight": 1}, {"label": "b", "degree": 1}],
        }
        with self.assertRaises(InputError):
            parser.parse_document(doc)
        doc = {"kind": "lie", "generators": [{"label": "a", "degree": True}]}
        with self.assertRaises(InputError):
            parser.parse_document(doc)

    def test_free_needs_max_weight(self):
        doc = {"kind": "free", "generators": [{"label": "x", "degree": 1}]}
        with self.assertRaises(InputError) as ctx:
            parser.parse_document(doc)
        self.assertIn("max_weight", str(ctx.exception))
        F = parser.parse_document(doc, max_weight=2)
        self.assertEqual(F.lie.labels(), ["x", "[x,x]"])

    def test_quotient_rejects_differential(self):
        doc = {
            "kind": "cdga",
            "generators": [{"label": "x", "degree": 0}],
            "relations": ["x^2"],
            "differential": [{"args": ["x"], "value": [{"label": "x", "coeff": 1}]}],
        }
        with self.assertRaises(InputError):
            parser.parse_document(doc)

    def test_bad_algebra_reports_witness(self):
        doc = {
            "kind": "artinian",
            "generators": [{"label": "x", "degree": 0}],
            "products": [{"args": ["x", "x"], "value": [{"label": "1", "coeff": "1"}]}],
        }
        with self.assertRaises(InputError) as ctx:
            parser.parse_document(doc, "b.json")
        self.assertIn("b.json: augmentation violated", str(ctx.exception))

    def test_json_errors(self):
        path = self.write("broken.json", '{\n  "kind": ,\n}\n')
        with self.assertRaises(InputError) as ctx:
            parser.load_json(path)
        self.assertIn(f"{path}:2:", str(ctx.exception))
        with self.assertRaises(InputError) as ctx:
            parser.load_json(os.path.join(self.tmp, "missing.json"))
        self.assertIn("Cannot read", str(ctx.exception))
        with self.assertRaises(InputError):
            parser.parse_document([1, 2])

    def test_epsilon_map(self):
        doc, _ = parser.load_json(fixture("dual_numbers.json"))
        B = parser.parse_document(doc)
        D = cdga.dual_numbers(1).algebra
        p = parser.parse_epsilon_map(doc, B, D)
        self.assertEqual(p.image("ε"), {"ε": ONE})
        self.assertTrue(p.check().ok)
        self.assertIsNone(parser.parse_epsilon_map({"kind": "artinian"}, B, D))


if __name__ == "__main__":
    unittest.main()
