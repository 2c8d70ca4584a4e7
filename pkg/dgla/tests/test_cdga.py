import unittest

from dgla import cdga, graded, lie
from dgla.errors import InputError, TruncationError, VerdictError
from dgla.graded import Complex, GradedSpace
from dgla.linalg import ONE, ZERO, q


class TestCdga(unittest.TestCase):

    def test_dual_numbers(self):
        D = cdga.dual_numbers(1).algebra
        self.assertEqual(D.name, "Q[ε_1]")
        self.assertEqual(D.space.dims(), {-1: 1, 0: 1})
        self.assertEqual(D.mul_basis("ε", "ε"), {})
        self.assertTrue(cdga.validate_cdga(D).ok)
        cert = cdga.is_artinian(D)
        self.assertEqual((cert.artinian, cert.order, cert.dimension), (True, 2, 2))
        with self.assertRaises(InputError):
            cdga.dual_numbers(-1)

    def test_base_is_artinian(self):
        cert = cdga.require_artinian(cdga.base())
        self.assertEqual((cert.order, cert.dimension), (1, 1))

    def test_positive_degrees_rejected(self):
        with self.assertRaises(InputError):
            cdga.FiniteCdga.build([("a", 1)])
        with self.assertRaises(InputError):
            cdga.FiniteCdga.build([("a", -1)], products={("a", "b"): {"a": 1}})
        with self.assertRaises(InputError):
            cdga.FiniteCdga.build([("u", -1)], unit="u")

    def test_validation_witnesses(self):
        B = cdga.FiniteCdga.build([("x", 0)], {("x", "x"): {"1": 1}})
        kinds = {v.axiom for v in cdga.validate_cdga(B).violations}
        self.assertIn("augmentation", kinds)
        B = cdga.FiniteCdga.build([("a", -1), ("b", -1)], {("a", "b"): {"a": 1}})
        kinds = {v.axiom for v in cdga.validate_cdga(B).violations}
        self.assertIn("degree", kinds)

    def test_not_nilpotent(self):
        B = cdga.FiniteCdga.build([("x", 0)], {("x", "x"): {"x": 1}})
        cert = cdga.is_artinian(B)
        self.assertFalse(cert.artinian)
        with self.assertRaises(InputError):
            cdga.require_artinian(B)

    def test_monomial_quotient(self):
        B = cdga.monomial_quotient([("x", 0)], ["x^3"], name="Q[x]/x^3")
        self.assertEqual(B.labels(), ["1", "x", "x^2"])
        self.assertEqual(B.mul_basis("x", "x"), {"x^2": ONE})
        self.assertEqual(B.mul_basis("x", "x^2"), {})
        self.assertEqual(cdga.is_artinian(B).order, 3)
        with self.assertRaises(InputError):
            cdga.monomial_quotient([("x", 0)], [])

    def test_square_zero(self):
        V = Complex(GradedSpace({-1: ("ε", "δ")}))
        ext = cdga.square_zero(cdga.base(), V)
        self.assertEqual(ext.algebra.space.dims(), {-1: 2, 0: 1})
        self.assertTrue(ext.projection.check().ok)
        self.assertTrue(ext.section.check().ok)
        with self.assertRaises(InputError):
            cdga.square_zero(cdga.base(), Complex(GradedSpace({1: ("v",)})))

    def test_morphism_check(self):
        D = cdga.dual_numbers(1).algebra
        self.assertTrue(cdga.unit_map(D).check().ok)
        bad = cdga.CdgaMorphism(D, D, {"1": {"1": ONE}, "ε": {"1": ONE}})
        axioms = {v.axiom for v in bad.check().violations}
        self.assertIn("degree", axioms)

    def test_fiber_product(self):
        V = Complex(GradedSpace({-1: ("ε", "δ")}))
        B = cdga.square_zero(cdga.base(), V).algebra
        D = cdga.dual_numbers(1).algebra
        p = cdga.CdgaMorphism(B, D, {"1": {"1": ONE}, "ε": {"ε": ONE}})
        fp = cdga.fiber_product(p, cdga.unit_map(D))
        self.assertEqual(fp.algebra.labels(), ["δ", "1"])
        self.assertTrue(cdga.validate_cdga(fp.algebra).ok)
        self.assertTrue(fp.to_left.check().ok)
        self.assertTrue(fp.to_right.check().ok)

    def test_fiber_product_of_dual_numbers_over_point(self):
        D = cdga.dual_numbers(0).algebra
        aug = cdga.CdgaMorphism(D, cdga.base(), {"1": {"1": ONE}})
        fp = cdga.fiber_product(aug, aug)
        self.assertEqual(fp.algebra.space.dims(), {0: 3})
        self.assertEqual(fp.algebra.labels(), ["1", "ε", "ε′"])
        self.assertTrue(cdga.validate_cdga(fp.algebra).ok)

    def test_fiber_product_mismatch(self):
        D = cdga.dual_numbers(1).algebra
        bad = cdga.CdgaMorphism(D, D, {"1": {"1": ONE}, "ε": {"1": ONE}})
        with self.assertRaises(VerdictError):
            cdga.fiber_product(bad, cdga.unit_map(D))

    def test_semi_free(self):
        S = cdga.polynomial_ring([("x", 0), ("u", -1)], {"u": {"x^2": 1}}, name="S")
        self.assertTrue(S.validate().ok)
        self.assertEqual(S.parse_monomial("u·x"), (ONE, (0, 1)))
        self.assertEqual(S.parse_monomial("u*u"), (ZERO, None))
        self.assertEqual(S.poly_label(S.d(S.poly_from_labels({"x·u": 1}))), {"x^3": ONE})
        self.assertEqual(S.length_increase, 1)
        with self.assertRaises(InputError):
            S.parse_monomial("y")
        bad = cdga.polynomial_ring([("u", -1), ("x", 0)], {"u": {"x": 1, "1": 1}})
        axioms = [v.axiom for v in bad.validate().violations]
        self.assertIn("augmentation", axioms)

    def test_semi_free_on_even_generator_is_not_artinian(self):
        S = cdga.polynomial_ring([("x", 0)])
        with self.assertRaises(InputError) as ctx:
            cdga.is_artinian(S)
        self.assertIn("infinite-dimensional", str(ctx.exception))
        with self.assertRaises(InputError):
            cdga.cellular_resolve(S, 2)

    def test_exterior_truncation(self):
        S = cdga.polynomial_ring([("u", -1), ("v", -1)])
        B = S.truncate(2)
        self.assertEqual(B.space.dims(), {-2: 1, -1: 2, 0: 1})
        self.assertEqual(B.mul_basis("v", "u"), {"u·v": -ONE})
        self.assertEqual(cdga.is_artinian(S).order, 3)

    def test_bounded_homology(self):
        S = cdga.polynomial_ring([("x", 0), ("u", -1)], {"u": {"x^2": 1}})
        h0 = cdga.bounded_homology(S, 0, 4)
        self.assertEqual(h0.dim, 2)
        self.assertEqual(h0.classify({(0, 0): ONE}), [ZERO, ZERO])
        h1 = cdga.bounded_homology(S, -1, 4)
        self.assertEqual(h1.dim, 0)

    def test_resolve_truncated_polynomials(self):
        for rel in ["x^2", "x^3"]:
            B = cdga.monomial_quotient([("x", 0)], [rel], name=f"Q[x]/{rel}")
            tower = cdga.cellular_resolve(B, 3)
            self.assertEqual([c.label for c in tower.cells()], ["X0_0", "U1_0"])
            self.assertEqual(tower.stabilized_at, 1)
            self.assertEqual(tower.cell_counts(), {0: 1, -1: 1})
            u = tower.cells()[1]
            self.assertEqual(u.relation, "R0_0")
            self.assertEqual(u.attaching, {rel.replace("x", "X0_0"): ONE})

    def test_resolve_square_of_maximal_ideal(self):
        B = cdga.monomial_quotient([("x", 0), ("y", 0)], ["x^2", "x·y", "y^2"])
        tower = cdga.cellular_resolve(B, 1)
        kinds = [c.kind for c in tower.cells()]
        self.assertEqual(kinds.count("X"), 2)
        self.assertEqual(kinds.count("U"), 3)
        self.assertEqual(tower.window(), (0, 0))

    def test_resolve_square_of_maximal_ideal_depth_three(self):
        # cell counts are the dimensions of the free Lie algebra on two odd generators
        B = cdga.monomial_quotient([("x", 0), ("y", 0)], ["x^2", "x·y", "y^2"])
        tower = cdga.cellular_resolve(B, 3)
        self.assertEqual(tower.cell_counts(), {0: 2, -1: 3, -2: 2, -3: 3})

    def test_resolve_point(self):
        tower = cdga.cellular_resolve(cdga.base(), 2)
        self.assertEqual(tower.cells(), [])
        self.assertEqual(tower.stabilized_at, 0)
        with self.assertRaises(InputError):
            cdga.cellular_resolve(cdga.base(), -1)

    def test_cotangent_fiber(self):
        B = cdga.monomial_quotient([("x", 0)], ["x^2"])
        fiber = cdga.cotangent_fiber(cdga.cellular_resolve(B, 2))
        self.assertEqual(fiber.space.dims(), {-1: 1, 0: 1})
        self.assertTrue(fiber.differential.is_zero())
        h = graded.homology(fiber)
        self.assertEqual(h.dims(), {-1: 1, 0: 1})

    def test_window(self):
        tower = cdga.cellular_resolve(cdga.dual_numbers(1).algebra, 2)
        cdga.require_window(tower, -1)
        with self.assertRaises(TruncationError):
            cdga.require_window(tower, -2)

    def test_very_good(self):
        self.assertTrue(cdga.very_good_check(lie.heisenberg()).ok)
        v = cdga.very_good_check(lie.sl2()).first()
        self.assertEqual(str(v), "very-good violated at (h)")

    def test_attach_cells_checks_relations(self):
        S = cdga.polynomial_ring([("x", 0)])
        with self.assertRaises(InputError):
            cdga.attach_cells(S, [{(0,): q(1)}], [], 2)
        T = cdga.attach_cells(S, [{(0, 0): q(1)}], ["X1_0"], 1)
        self.assertEqual(T.generators, (("x", 0), ("U1_0", -1), ("X1_0", -1)))
        self.assertTrue(T.validate().ok)


if __name__ == "__main__":
    unittest.main()
