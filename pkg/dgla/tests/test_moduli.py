import unittest

from dgla import cdga, lie, moduli
from dgla.errors import InputError, TruncationError, VerdictError
from dgla.graded import Complex, GradedSpace
from dgla.linalg import ONE, q


def two_point_extension(n=1):
    V = Complex(GradedSpace({-n: ("ε", "δ")}))
    return cdga.square_zero(cdga.base(), V, name="Q[ε,δ]").algebra


class TestModuli(unittest.TestCase):

    def setUp(self):
        self.abelian = lie.abelian([("x", 2)])
        self.free = lie.free_lie([("x", 1)], 4).lie

    def test_tensor_lie(self):
        N = moduli.tensor_lie(cdga.dual_numbers(1).algebra, self.abelian)
        self.assertEqual(N.labels(), ["ε⊗x"])
        self.assertEqual(N.space.dims(), {1: 1})
        self.assertTrue(lie.validate_lie(N).ok)
        B = cdga.monomial_quotient([("t", 0)], ["t^3"])
        N = moduli.tensor_lie(B, lie.sl2())
        self.assertEqual(N.bracket_basis("t⊗h", "t⊗e"), {"t^2⊗e": q(2)})
        self.assertTrue(lie.validate_lie(N).ok)

    def test_mc_over_dual_numbers(self):
        ev = moduli.mc_set(self.abelian, cdga.dual_numbers(1).algebra)
        self.assertEqual(ev.regime, moduli.AFFINE)
        self.assertEqual(ev.variables, ("ε⊗x",))
        self.assertEqual(ev.equations, [])
        self.assertEqual(ev.pi0.dimension, 1)
        self.assertIsNone(ev.pi0.points)
        self.assertEqual(ev.pi0.classify({"ε⊗x": q(3)}), [q(3)])
        self.assertTrue(moduli.gauge_check(ev, seed=1))
        self.assertEqual(moduli.gauge_orbits(ev.problem.tensor).dimension, 1)

    def test_mc_over_point(self):
        ev = moduli.mc_set(self.abelian, cdga.base())
        self.assertEqual(ev.pi0.dimension, 0)
        self.assertEqual(ev.pi0.points, 1)
        self.assertEqual(ev.variables, ())

    def test_nonlinear_regime(self):
        B = cdga.monomial_quotient([("t", 0)], ["t^3"])
        L = lie.DgLieAlgebra.build([("a", 1), ("b", 2)], {("a", "a"): {"b": 1}}, name="ab")
        ev = moduli.mc_set(L, B)
        self.assertEqual(ev.regime, moduli.NONLINEAR)
        self.assertIsNone(ev.pi0)
        self.assertEqual(len(ev.equations), 1)
        # the single equation is 1/2 (t⊗a)^2 = 0
        self.assertTrue(ev.satisfies({"t^2⊗a": q(5)}))
        self.assertFalse(ev.satisfies({"t⊗a": ONE}))
        with self.assertRaises(VerdictError):
            moduli.gauge_check(ev)

    def test_census_invariance(self):
        report = moduli.census_invariance(lie.heisenberg(), cdga.dual_numbers(1).algebra, seed=3)
        self.assertTrue(report.ok)
        self.assertEqual(report.before["regime"], moduli.AFFINE)

    def test_tangent(self):
        t = moduli.mc_tangent(self.abelian, 1)
        self.assertEqual((t.dimension, t.expected, t.agree), (1, 1, True))
        t = moduli.mc_tangent(self.abelian, 2)
        self.assertEqual((t.dimension, t.expected, t.agree), (0, 0, True))
        t = moduli.mc_tangent(self.free, 1)
        self.assertEqual((t.dimension, t.expected), (1, 1))
        with self.assertRaises(InputError):
            moduli.mc_tangent(self.abelian, 0)

    def test_tangent_suite(self):
        # dimensions of H^2, H^3, H^4
        cases = [
            (lie.abelian([("x", 1), ("y", 2), ("z", 2)]), [2, 0, 0]),
            (lie.free_lie([("x", 1), ("y", 1)], 4).lie, [3, 2, 3]),
            (lie.heisenberg(), [1, 0, 0]),
            (lie.sl2(), [0, 0, 0]),
            (lie.DgLieAlgebra.build([("a", 1), ("b", 2)], differential={"a": {"b": 1}}, name="cone"), [0, 0, 0]),
        ]
        for L, dims in cases:
            for n, want in zip((1, 2, 3), dims):
                t = moduli.mc_tangent(L, n)
                self.assertEqual(t.regime, moduli.AFFINE)
                self.assertEqual((t.dimension, t.expected), (want, want), (L.name, n))
                self.assertTrue(t.agree)

    def test_schlessinger(self):
        B = two_point_extension()
        eps = {"1": {"1": ONE}, "ε": {"ε": ONE}}
        r = moduli.schlessinger_check(self.abelian, B, 1, eps)
        self.assertEqual(r.flag, moduli.AFFINE)
        self.assertEqual((r.lhs, r.rhs), (1, 1))
        self.assertTrue(r.agree)
        self.assertEqual(r.fiber_product.labels(), ["δ", "1"])
        self.assertEqual(r.sides, {"B": 2, "eps": 1})

    def test_schlessinger_instances(self):
        eps = {"1": {"1": ONE}, "ε": {"ε": ONE}}
        cases = [
            (lie.heisenberg(), 1, 1),
            (lie.sl2(), 1, 0),
            (self.free, 1, 1),
            (lie.abelian([("x", 3)]), 2, 1),
        ]
        for L, n, want in cases:
            r = moduli.schlessinger_check(L, two_point_extension(n), n, eps)
            self.assertEqual(r.flag, moduli.AFFINE)
            self.assertEqual((r.lhs, r.rhs), (want, want), L.name)
            self.assertTrue(r.agree)

    def test_schlessinger_identity(self):
        r = moduli.schlessinger_check(self.abelian, cdga.dual_numbers(1).algebra, 1)
        self.assertEqual((r.lhs, r.rhs, r.agree), (0, 0, True))

    def test_schlessinger_refusals(self):
        B = two_point_extension()
        zero = {"1": {"1": ONE}}
        r = moduli.schlessinger_check(self.abelian, B, 1, zero)
        self.assertEqual(r.flag, "non-surjective")
        self.assertIsNone(r.agree)
        with self.assertRaises(InputError):
            moduli.schlessinger_check(self.abelian, cdga.monomial_quotient([("t", 0)], ["t^2"]), 1)

    def test_unit_check_free_odd(self):
        with self.assertRaises(TruncationError):
            moduli.unit_check(self.free, 4, 3)
        u = moduli.unit_check(self.free, 4, 3, accept_truncated=True)
        self.assertTrue(u.ok)
        self.assertEqual(u.flag, "weight-truncated(4)")
        # (eta.x)^5 is cut in degree 0, so only degree 1 is certified
        self.assertEqual(u.window, (1, 1))
        self.assertEqual(u.degrees, {1: (1, 1)})
        self.assertEqual(u.cells, {0: 1, -1: 1})

    def test_unit_check_abelian_odd_generator(self):
        L = lie.abelian([("x", 1)])
        with self.assertRaises(TruncationError):
            moduli.unit_check(L, 4, 3)
        u = moduli.unit_check(L, 4, 3, accept_truncated=True)
        self.assertEqual(u.flag, "weight-truncated(4)")
        self.assertEqual(u.window, (1, 1))
        self.assertEqual(u.degrees, {1: (1, 1)})
        self.assertTrue(u.ok)

    def test_unit_check_free_even(self):
        L = lie.free_lie([("x", 2)], 4).lie
        u = moduli.unit_check(L, 4, 3)
        self.assertTrue(u.ok)
        self.assertEqual(u.degrees, {1: (0, 0), 2: (1, 1), 3: (0, 0)})
        self.assertEqual(u.cells, {-1: 1})

    def test_unit_check_rejects(self):
        with self.assertRaises(InputError):
            moduli.unit_check(lie.sl2(), 4, 3)
        self.assertTrue(moduli.unit_check(lie.abelian([]), 4, 2).ok)


if __name__ == "__main__":
    unittest.main()
