import os
import unittest

from dgla import lie, parser
from dgla.errors import InputError
from dgla.graded import Complex, GradedSpace
from dgla.linalg import ONE, q

FIXTURES = os.path.join(os.path.dirname(__file__), "fixtures")


class TestLie(unittest.TestCase):

    def test_builtins_are_lie(self):
        for L in [lie.sl2(), lie.heisenberg(), lie.abelian([("x", 2)])]:
            self.assertTrue(lie.validate_lie(L).ok, L.name)
        H = lie.heisenberg()
        self.assertEqual(H.bracket_basis("y", "x"), {"z": ONE})
        self.assertTrue(lie.validate_lie(lie.direct_sum(lie.sl2(), H)).ok)
        self.assertEqual(lie.sl2().bracket_map().apply_label(0, "h⊗e"), {"e": q(2)})

    def test_jacobi_witness(self):
        # [h,e] = 3e against [h,f] = -2f and [e,f] = h breaks Jacobi on (h,e,f)
        with self.assertRaises(InputError) as ctx:
            parser.parse_input(os.path.join(FIXTURES, "sl2_bad.json"))
        self.assertEqual(str(ctx.exception), "[lie] jacobi violated at (h,e,f)")

    def test_antisymmetry_and_degree(self):
        L = lie.DgLieAlgebra.build([("a", 1), ("b", 1)], {("a", "b"): {"a": 1}}, complete=False)
        v = lie.validate_lie(L, stop_at_first=True).first()
        self.assertEqual((v.axiom, v.witness), ("degree", ("a", "b")))
        L = lie.DgLieAlgebra.build([("a", 0), ("b", 0)], {("a", "b"): {"a": 1}}, complete=False)
        v = lie.validate_lie(L, stop_at_first=True).first()
        self.assertEqual((v.axiom, v.witness), ("antisymmetry", ("a", "b")))

    def test_unknown_labels_and_weights(self):
        with self.assertRaises(InputError):
            lie.DgLieAlgebra.build([("a", 0)], {("a", "b"): {"a": 1}})
        with self.assertRaises(InputError):
            lie.DgLieAlgebra.build([("a", 0), ("b", 1)], weights={"a": 1})
        with self.assertRaises(InputError):
            lie.DgLieAlgebra.build([("a", 0), ("a", 1)])

    def test_transport_keeps_structure(self):
        L = lie.sl2()
        T = lie.transport(L, seed=7)
        self.assertEqual(T.space.dims(), L.space.dims())
        self.assertTrue(lie.validate_lie(T).ok)

    def test_morphisms(self):
        L = lie.sl2()
        self.assertTrue(lie.lie_morphism_check(lie.LieMorphism.identity(L)).ok)
        only_h = lie.LieMorphism(L, L, {"h": {"h": ONE}})
        report = lie.lie_morphism_check(only_h)
        self.assertEqual([v.witness for v in report.violations], [("e", "f"), ("f", "e")])

    def test_free_lie_odd_generator(self):
        F = lie.free_lie([("x", 1)], 4)
        self.assertEqual(F.lie.labels(), ["x", "[x,x]"])
        self.assertEqual(F.dims(), {(1, 1): 1, (2, 2): 1})
        self.assertEqual(F.lie.bracket_basis("x", "x"), {"[x,x]": ONE})
        self.assertTrue(lie.validate_lie(F.lie).ok)

    def test_free_lie_two_even_generators(self):
        F = lie.free_lie([("x", 2), ("y", 2)], 3)
        self.assertEqual(F.dims(), {(2, 1): 2, (4, 2): 1, (6, 3): 2})
        self.assertEqual(F.hall_basis[2], ["[x,y]"])
        self.assertTrue(lie.validate_lie(F.lie).ok)

    def test_free_on_space(self):
        F = lie.free_on(GradedSpace({1: ("x",)}), 2)
        self.assertEqual(F.lie.labels(), ["x", "[x,x]"])

    def test_free_lie_rejects(self):
        with self.assertRaises(InputError):
            lie.free_lie([("x", 0)], 2)
        with self.assertRaises(InputError):
            lie.free_lie([("x", 1)], 0)
        with self.assertRaises(InputError):
            lie.free_lie([("x", 1), ("x", 3)], 2)

    def test_enveloping_rewrites(self):
        U = lie.enveloping(lie.sl2(), 3)
        self.assertEqual(U.multiply("e", "h"), {"h·e": ONE, "e": q(-2)})
        self.assertEqual(U.check_associativity([("f", "e", "h")]), [])

    def test_enveloping_differential(self):
        L = lie.DgLieAlgebra.build([("a", 0), ("b", 1)], differential={"a": {"b": ONE}})
        U = lie.enveloping(L, 2)
        self.assertEqual(U.check_derivation([("a", "a"), ("a", "b"), ("b", "a")]), [])

    def test_pbw(self):
        check = lie.pbw_map(lie.free_lie([("x", 1)], 4).lie, 4)
        self.assertTrue(check.bijective)
        self.assertEqual(check.failures(), [])
        self.assertTrue(lie.pbw_map(lie.sl2(), 2).bijective)

    def test_pbw_weight_four(self):
        algebras = [
            lie.abelian([("x", 1)]),
            lie.abelian([("x", 1), ("y", 2)]),
            lie.abelian([("x", 0), ("y", 1), ("z", 2)]),
            lie.free_lie([("x", 1), ("y", 1)], 4).lie,
            lie.heisenberg(),
        ]
        for L in algebras:
            check = lie.pbw_map(L, 4)
            self.assertTrue(check.bijective, L.name)
            self.assertEqual(check.failures(), [])

    def test_representations(self):
        L = lie.sl2()
        adj = lie.adjoint_rep(L)
        triv = lie.trivial_rep(L)
        for M in [adj, triv, lie.dual_rep(adj), lie.rep_tensor(adj, triv)]:
            self.assertTrue(lie.validate_rep(M).ok)
        self.assertTrue(lie.validate_lie(lie.semidirect(triv)).ok)

    def test_invariants(self):
        L = lie.sl2()
        self.assertEqual(len(lie.trivial_rep(L).invariants(0)), 1)
        self.assertEqual(lie.adjoint_rep(L).invariants(0), [])
        # the Killing form
        adj = lie.adjoint_rep(L)
        self.assertEqual(len(lie.rep_tensor(adj, adj).invariants(0)), 1)

    def test_bad_representation(self):
        L = lie.sl2()
        module = Complex(GradedSpace({0: ("k",)}))
        M = lie.Representation(L, module, {("h", "k"): {"k": 1}})
        v = lie.validate_rep(M).first()
        self.assertEqual(str(v), "module violated at (e,f,k)")


if __name__ == "__main__":
    unittest.main()
