import unittest

from dgla import cdga, chevalley, graded, lie
from dgla.errors import InputError
from dgla.linalg import ONE


def suite():
    return [
        lie.abelian([("x", 1)]),
        lie.abelian([("x", 1), ("y", 2)]),
        lie.abelian([("x", 1), ("y", 2), ("z", 2)]),
        lie.free_lie([("x", 1), ("y", 1)], 4).lie,
        lie.heisenberg(),
        lie.sl2(),
    ]


class TestChevalley(unittest.TestCase):

    def setUp(self):
        self.sl2 = lie.sl2()

    def test_sl2_homology(self):
        chains = chevalley.ce_homological(self.sl2, 3)
        self.assertEqual(chains.flag, "exact")
        self.assertEqual(chains.complex.space.dims(), {-3: 1, -2: 3, -1: 3, 0: 1})
        self.assertEqual(graded.homology(chains.complex).dims(), {-3: 1, 0: 1})

    def test_truncation_flags(self):
        self.assertEqual(chevalley.ce_homological(self.sl2, 2).flag, "weight-truncated(2)")
        ab = lie.abelian([("x", 2)])
        self.assertEqual(chevalley.ce_homological(ab, 4).flag, "exact")
        even = lie.abelian([("x", 1)])
        chains = chevalley.ce_homological(even, 4)
        self.assertEqual(chains.flag, "weight-truncated(4)")
        self.assertFalse(chains.exact)
        self.assertEqual(chains.cut_degree, 0)
        self.assertEqual(chains.weight_dims(), {(0, k): 1 for k in range(5)})
        self.assertIsNone(chevalley.ce_homological(ab, 4).cut_degree)
        self.assertEqual(chevalley.ce_homological(lie.heisenberg(), 3).flag, "weight-truncated(3)")
        high = chevalley.ce_homological(lie.abelian([("x", 2), ("y", 3)]), 4)
        self.assertEqual(high.flag, "exact")
        # eta.x (eta.y)^4 is the first monomial left out
        self.assertEqual(high.cut_degree, 9)
        with self.assertRaises(InputError):
            chevalley.ce_homological(ab, -1)

    def test_coalgebra(self):
        chains = chevalley.ce_homological(self.sl2, 3)
        self.assertEqual(chains.coassociativity_failures(), [])
        self.assertEqual(chains.primitive_failures(), [])
        self.assertTrue(chains.coproduct_is_chain_map())

    def test_cochain_algebra(self):
        C = chevalley.ce_cohomological(self.sl2, 3)
        self.assertEqual(C.derivation_failures(), [])
        ring = chevalley.ce_cohomology_ring(C)
        self.assertEqual(ring.homology.dims(), {0: 1, 3: 1})
        unit = chevalley.unit_class(C, ring)
        self.assertEqual(unit, "[1∨]")
        self.assertTrue(ring.is_square_zero(unit))

    def test_to_cdga(self):
        B = chevalley.ce_cohomological(lie.abelian([("x", 2)]), 4).to_cdga()
        self.assertEqual(B.space.dims(), {-1: 1, 0: 1})
        cert = cdga.require_artinian(B)
        self.assertEqual(cert.order, 2)
        with self.assertRaises(InputError):
            chevalley.ce_cohomological(self.sl2, 3).to_cdga()

    def test_coefficients(self):
        triv = chevalley.ce_with_coefficients(self.sl2, lie.trivial_rep(self.sl2), 3)
        self.assertEqual(graded.homology(triv.complex).dims(), {0: 1, 3: 1})
        adj = chevalley.ce_with_coefficients(self.sl2, lie.adjoint_rep(self.sl2), 3)
        self.assertEqual(adj.complex.space.euler_characteristic(), 0)
        self.assertTrue(graded.homology(adj.complex).space.is_zero())
        other = lie.adjoint_rep(lie.heisenberg())
        with self.assertRaises(InputError):
            chevalley.ce_with_coefficients(self.sl2, other, 3)

    def test_free_module_is_a_representation(self):
        ab = lie.abelian([("x", 1)])
        F = chevalley.free_ce_module(ab, graded.GradedSpace({0: ("w",)}), 2)
        self.assertTrue(lie.validate_rep(F.representation).ok)
        self.assertEqual(graded.homology(F.complex).dims(), {0: 1})

    def test_free_module_resolves_generators(self):
        W = graded.GradedSpace({0: ("w",)})
        algebras = [self.sl2, lie.free_lie([("x", 1)], 4).lie, lie.heisenberg()]
        for L in algebras:
            for weight in (2, 3):
                F = chevalley.free_ce_module(L, W, weight)
                self.assertTrue(lie.validate_rep(F.representation).ok, (L.name, weight))
                self.assertEqual(graded.homology(F.complex).dims(), {0: 1}, (L.name, weight))

    def test_trivial_coefficients_match_cochains(self):
        algebras = [
            lie.heisenberg(),
            self.sl2,
            lie.abelian([("x", 1)]),
            lie.free_lie([("x", 1)], 4).lie,
        ]
        for L in algebras:
            C = chevalley.ce_cohomological(L, 3)
            triv = chevalley.ce_with_coefficients(L, lie.trivial_rep(L), 3)
            self.assertEqual(triv.flag, C.chains.flag, L.name)
            self.assertEqual(triv.complex.space.dims(), C.complex.space.dims(), L.name)
            self.assertEqual(
                graded.homology(triv.complex).dims(), graded.homology(C.complex).dims(), L.name
            )

    def test_differentials_square_to_zero(self):
        W = graded.GradedSpace({0: ("w",)})
        for L in suite():
            complexes = [
                chevalley.ce_homological(L, 4).complex,
                chevalley.ce_homological(L, 3, lie_weight_cut=False).complex,
                chevalley.ce_cohomological(L, 4).complex,
                chevalley.ce_with_coefficients(L, lie.adjoint_rep(L), 3).complex,
                chevalley.free_ce_module(L, W, 3).complex,
            ]
            for cx in complexes:
                self.assertTrue(cx.differential.compose(cx.differential).is_zero(), L.name)

    def test_homology_of_free_lie_algebras(self):
        # H(Free V) = k + V[1], one weight at a time
        cases = [
            ([("x", 1)], {0: 2}),
            ([("x", 2)], {0: 1, 1: 1}),
            ([("x", 1), ("y", 1)], {0: 3}),
            ([("x", 1), ("y", 2)], {0: 2, 1: 1}),
        ]
        for gens, dims in cases:
            L = lie.free_lie(gens, 4).lie
            chains = chevalley.ce_homological(L, 4)
            self.assertEqual(graded.homology(chains.complex).dims(), dims, gens)

    def test_adjoint_derivation(self):
        ab = lie.abelian([("x", 2)])
        ad = chevalley.adjoint_derivation(lie.LieMorphism.identity(ab), 1)
        self.assertTrue(ad.is_chain_map)
        self.assertEqual(chevalley.derivation_failures(ad), [])
        free = lie.free_lie([("x", 1)], 4).lie
        self.assertTrue(chevalley.adjoint_derivation(lie.LieMorphism.identity(free), 1).is_chain_map)

    def test_adjoint_derivation_weight_three(self):
        algebras = [
            lie.abelian([("x", 2)]),
            lie.free_lie([("x", 1)], 4).lie,
            lie.heisenberg(),
            self.sl2,
        ]
        for L in algebras:
            ad = chevalley.adjoint_derivation(lie.LieMorphism.identity(L), 3)
            self.assertTrue(ad.is_chain_map, L.name)
            self.assertEqual(chevalley.derivation_failures(ad, max_pairs=200), [], L.name)

    def test_cohomology_ring(self):
        C = chevalley.ce_cohomological(lie.abelian([("x", 2), ("y", 2)]), 2)
        self.assertEqual(C.chains.flag, "exact")
        self.assertEqual(C.derivation_failures(), [])
        ring = chevalley.ce_cohomology_ring(C)
        self.assertEqual(ring.homology.dims(), {0: 1, -1: 2, -2: 1})
        unit = chevalley.unit_class(C, ring)
        self.assertEqual(ring.table[(unit, "[ηx∨]")], {"[ηx∨]": ONE})
        self.assertEqual(ring.table[("[ηy∨]", unit)], {"[ηy∨]": ONE})
        # odd classes anticommute
        self.assertEqual(ring.table[("[ηx∨]", "[ηy∨]")], {"[ηx·ηy∨]": -ONE})
        self.assertEqual(ring.table[("[ηy∨]", "[ηx∨]")], {"[ηx·ηy∨]": ONE})
        self.assertNotIn(("[ηx∨]", "[ηx∨]"), ring.table)
        self.assertFalse(ring.is_square_zero(unit))
        H = chevalley.ce_cohomological(lie.heisenberg(), 3)
        self.assertEqual(H.derivation_failures(), [])

    def test_cone_algebra_is_acyclic(self):
        self.assertTrue(chevalley.cone_algebra().is_acyclic())
        self.assertTrue(chevalley.cone_algebra(cdga.dual_numbers(0).algebra).is_acyclic())


if __name__ == "__main__":
    unittest.main()
