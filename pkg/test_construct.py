"""
Unit tests for the cofactor construction, residues and action searches.

Run with: python -m pytest test_construct.py -v
Or: python test_construct.py
"""

import unittest
from itertools import product

from action import ActionSpec, kappa_sigma, reduce_action, singular_locus
from construct import (EPSILONS, FROZEN, alpha_table, alpha_value, build_action, calibrate_conventions,
                       companions, minimal_3lens_action, one_point_decision, predicted_orders, search_minimal,
                       solve_cofactors, theorem_b_predicate, window_actions, window_one_point_search)
from enumeration import stripe_classes
from space import (PERM_BY_NAME, PERMUTATIONS, NotAManifoldError, NotAnOrbifoldError, WeightPair, normalize,
                   representative)


def coho_one(d):
    return WeightPair((1, 1, d), (0, 0, d + 2))


IDENTITY = PERM_BY_NAME['id']
CYCLE = PERM_BY_NAME['(123)']


class TestSolveCofactors(unittest.TestCase):
    """Test the reduced Bezout solutions."""

    def test_cycle_plus_plus(self):
        """Test (123), eps=(1,1) on E_d gives (x,y,z,w) = (0,-1,0,1)."""
        for d in range(3, 9):
            sol = solve_cofactors(coho_one(d), CYCLE, 1, 1)
            self.assertEqual((sol.x, sol.y, sol.z, sol.w), (0, -1, 0, 1))

    def test_identity(self):
        """Test the identity vertex for both sign choices."""
        for d in range(3, 9):
            sol = solve_cofactors(coho_one(d), IDENTITY, 1, -1)
            self.assertEqual((sol.x, sol.y, sol.z, sol.w), (1, 0, 1, 0))
            sol = solve_cofactors(coho_one(d), IDENTITY, 1, 1)
            self.assertEqual((sol.x, sol.y, sol.z, sol.w), (1, 0, -1, 0))

    def test_shifted_solution_still_solves(self):
        """Test the shift generators keep both equations satisfied."""
        wp = coho_one(5)
        for sigma in PERMUTATIONS:
            sol = solve_cofactors(wp, sigma, 1, -1)
            moved = sol.shifted(2, -3)
            p12, p23 = sol.shift_xy[1], sol.shift_xy[0]
            p21, p13 = sol.shift_wz[0], sol.shift_wz[1]
            self.assertEqual(moved.x * p12 - moved.y * p23, 1)
            self.assertEqual(moved.w * p13 - moved.z * p21, -1)

    def test_invalid_signs(self):
        """Test signs other than +-1 raise ValueError."""
        with self.assertRaises(ValueError):
            solve_cofactors(coho_one(5), CYCLE, 0, 1)

    def test_requires_manifold(self):
        """Test an orbifold that is not a manifold is rejected."""
        with self.assertRaises(NotAManifoldError):
            solve_cofactors(WeightPair((3, 2, 1), (4, 2, 0)), IDENTITY, 1, 1)


class TestBuildAction(unittest.TestCase):
    """Test the one-parameter family of actions."""

    def test_cycle_family_member(self):
        """Test (123), eps=(1,1), s=1 on E_d."""
        for d in range(3, 9):
            act = build_action(coho_one(d), CYCLE, 1, 1, 1)
            self.assertEqual(act, ActionSpec((0, -1, -(d + 1)), (0, 0, -(d + 2))))

    def test_companions_are_regular(self):
        """Test the two same-parity companions have order 1 for every s."""
        wp = coho_one(6)
        for sigma in PERMUTATIONS:
            for e1, e2 in EPSILONS:
                for s in range(-2, 3):
                    act = build_action(wp, sigma, e1, e2, s)
                    for companion in companions(sigma):
                        self.assertEqual(kappa_sigma(wp, act, companion), 1)

    def test_companions_of_cycle(self):
        """Test the companions of (123) are (132) and Id."""
        self.assertEqual(companions(CYCLE), (PERM_BY_NAME['(132)'], IDENTITY))
        for sigma in PERMUTATIONS:
            self.assertTrue(all(c.parity == sigma.parity for c in companions(sigma)))


class TestPredictedOrders(unittest.TestCase):
    """Test closed-form orders against direct vertex orders."""

    def test_cycle_first_slot(self):
        """Test the (123) slot equals |(2d+1)s - d|."""
        for d in (3, 5, 8):
            for s in range(-3, 4):
                predicted = dict(predicted_orders(coho_one(d), CYCLE, 1, 1, s))
                self.assertEqual(predicted[CYCLE], abs((2 * d + 1) * s - d))

    def test_identity_transposition_slot(self):
        """Test the (12) slot of Id, eps=(1,1) equals |s|."""
        for s in range(-3, 4):
            predicted = dict(predicted_orders(coho_one(5), IDENTITY, 1, 1, s))
            self.assertEqual(predicted[PERM_BY_NAME['(12)']], abs(s))

    def test_predicted_equals_direct(self):
        """Test every slot against kappa_sigma on E_3 and E_5."""
        for d in (3, 5):
            wp = coho_one(d)
            for sigma in PERMUTATIONS:
                for e1, e2 in EPSILONS:
                    sol = solve_cofactors(wp, sigma, e1, e2)
                    for s in range(-2, 3):
                        act = build_action(wp, sigma, e1, e2, s, sol)
                        for vertex, value in predicted_orders(wp, sigma, e1, e2, s, sol):
                            self.assertEqual(kappa_sigma(wp, act, vertex), value)

    def test_calibration_keeps_frozen_conventions(self):
        """Test the frozen conventions survive calibration."""
        survivors = calibrate_conventions([coho_one(3), coho_one(4)], s_values=range(-1, 2))
        self.assertIn(FROZEN, survivors)


class TestAlpha(unittest.TestCase):
    """Test the residue table."""

    def test_cycle_value(self):
        """Test alpha((123), 1, 1) on E_5 is 6."""
        table = alpha_table(coho_one(5))
        self.assertEqual(table.h, 11)
        self.assertEqual(table.values[(CYCLE, 1, 1)], 6)

    def test_shift_invariance(self):
        """Test alpha does not depend on the Bezout solution over the shift window [-4,4]^2."""
        spaces = [coho_one(3), coho_one(5), coho_one(7), WeightPair((0, 0, 0), (1, 1, -2)),
                  WeightPair((1, 2, 3), (0, 0, 6))]
        for wp in spaces:
            for sigma in PERMUTATIONS:
                for e1, e2 in EPSILONS:
                    sol = solve_cofactors(wp, sigma, e1, e2)
                    base = alpha_value(wp, sol)
                    for k1, k2 in product(range(-4, 5), repeat=2):
                        self.assertEqual(alpha_value(wp, sol.shifted(k1, k2)), base)

    def test_predicate_invariant_under_symmetries(self):
        """Test the residue predicate is the same for every presentation of a class."""
        spaces = [coho_one(1), coho_one(2), coho_one(3), coho_one(5), WeightPair((0, 0, 0), (1, 1, -2)),
                  WeightPair((1, 2, 3), (0, 0, 6))]
        spaces += [pres for _, _, pres in stripe_classes(13, True).values()]
        for wp in spaces:
            expected = theorem_b_predicate(wp)
            variants = [wp.translated(3), wp.negated(), wp.swapped(), representative(normalize(wp))]
            variants += [wp.relabeled(tau, rho) for tau in PERMUTATIONS for rho in (IDENTITY, CYCLE)]
            for other in variants:
                self.assertEqual(theorem_b_predicate(other), expected, f"{wp} vs {other}")

    def test_coho_one_predicate(self):
        """Test no residue vanishes on E_d for d >= 3, and one does for d <= 2."""
        for d in range(3, 12):
            self.assertFalse(theorem_b_predicate(coho_one(d)))
        for d in (1, 2):
            self.assertTrue(theorem_b_predicate(coho_one(d)))

    def test_to_json(self):
        """Test the JSON table lists all 24 choices."""
        data = alpha_table(coho_one(5)).to_json()
        self.assertEqual(len(data['values']), 24)
        self.assertFalse(data['predicate'])


class TestOnePoint(unittest.TestCase):
    """Test the one-point decision procedure."""

    def test_coho_one_zero(self):
        """Test E_0 has a one-point action."""
        result = one_point_decision(coho_one(0))
        self.assertIsNotNone(result)
        self.assertEqual(len(result.locus.singular_vertices), 1)
        self.assertEqual(result.locus.singular_faces, [])
        self.assertIsNotNone(result.provenance)

    def test_known_witness(self):
        """Test a=(0,3,3), b=(2,4,0) on E_0 has one singular point of order 5 at C_(12)."""
        locus = singular_locus(coho_one(0), ActionSpec((0, 3, 3), (2, 4, 0)))
        self.assertEqual([(v.sigma.name, v.order) for v in locus.singular_vertices], [('(12)', 5)])
        self.assertEqual(locus.singular_faces, [])

    def test_coho_one_none(self):
        """Test E_5 has no one-point action."""
        self.assertIsNone(one_point_decision(coho_one(5)))

    def test_window_fallback(self):
        """Test the window search also finds a one-point action on E_0."""
        result = window_one_point_search(coho_one(0), window=2)
        self.assertIsNotNone(result)
        self.assertEqual(len(result.locus.singular_vertices), 1)
        self.assertIsNone(result.provenance)

    def test_requires_manifold(self):
        """Test NotAManifoldError on an orbifold."""
        with self.assertRaises(NotAManifoldError):
            one_point_decision(WeightPair((3, 2, 1), (4, 2, 0)))


class TestMinimalSearch(unittest.TestCase):
    """Test three-lens constructions and ranked searches."""

    def test_three_lens_faces_meet_at_sigma(self):
        """Test every singular face of the construction contains the chosen vertex."""
        for d in (3, 5):
            result = minimal_3lens_action(coho_one(d))
            sigma = result.provenance.sigma
            for face in result.locus.singular_faces:
                self.assertIn(sigma, face.vertices)

    def test_window_actions_are_reduced(self):
        """Test window representatives are fixed by reduction and distinct."""
        wp = coho_one(5)
        actions = window_actions(wp, 1)
        self.assertEqual(len(actions), len(set(actions)))
        for act in actions:
            self.assertEqual(reduce_action(wp, act), act)

    def test_search_finds_free_action(self):
        """Test E_2 ranks a free action first."""
        ranked = search_minimal(coho_one(2), s_range=range(-1, 2), window=1)
        self.assertTrue(ranked[0].locus.is_free)
        summaries = [c.locus.summary for c in ranked]
        self.assertEqual(summaries, sorted(summaries))

    def test_not_orbifold(self):
        """Test NotAnOrbifoldError for p = q."""
        with self.assertRaises(NotAnOrbifoldError):
            search_minimal(WeightPair((1, 2, 3), (1, 2, 3)))

    def test_orbifold_uses_torus_view(self):
        """Test an orbifold that is not a manifold is ranked in the torus view."""
        ranked = search_minimal(WeightPair((5, 3, -5), (2, 1, 0)), window=1)
        self.assertTrue(ranked)
        self.assertTrue(all(c.locus.view == 'torus' for c in ranked))
        self.assertTrue(all(c.provenance is None for c in ranked))


if __name__ == '__main__':
    unittest.main()
